//! Floating-point cross-checks that share no code path with the exact
//! layer: a finite-difference eigensolver for the radial problem, pointwise
//! Schrödinger residuals from analytic log-derivatives, Sturm zero-count
//! scans, and L^2 normalization checks.

use crate::error::{HeunError, Result};
use crate::heun::{construct, kappa_c};
use crate::poly::sturm_count;
use crate::rational::ExactRational;
use crate::spectral::AEHForm;
use serde::Serialize;

/// Uniform grid on [r_min, r_max] with Dirichlet ends.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RadialGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub n: usize,
}

impl RadialGrid {
    /// r_min = 0 is allowed: the boundary is a Dirichlet node and never
    /// evaluated, so a singular centrifugal term is harmless.
    pub fn new(r_min: f64, r_max: f64, n: usize) -> Result<Self> {
        if !(r_min >= 0.0) || r_max <= r_min || n < 3 {
            return Err(HeunError::Domain(format!(
                "bad grid: r_min={r_min}, r_max={r_max}, n={n}"
            )));
        }
        Ok(RadialGrid { r_min, r_max, n })
    }

    /// Default sized so that the exact eigenfunctions are < 1e-10 of their
    /// peak at both ends for every bound level with s >= 1.
    pub fn default_radial() -> Self {
        RadialGrid { r_min: 1e-2, r_max: 14.0, n: 8000 }
    }

    pub fn h(&self) -> f64 {
        (self.r_max - self.r_min) / (self.n - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.r_min + self.h() * i as f64
    }

    /// Same interval at half the spacing (for Richardson extrapolation).
    pub fn refined(&self) -> Self {
        RadialGrid { r_min: self.r_min, r_max: self.r_max, n: 2 * self.n - 1 }
    }
}

/// Eigenvalues of -d^2/dr^2 + V with Dirichlet boundaries, by 3-point
/// finite differences and Sturm-sequence bisection on the tridiagonal
/// matrix.  Returns the k lowest eigenvalues in ascending order.
pub fn fd_eigenvalues<F: Fn(f64) -> f64>(potential: F, grid: RadialGrid, k: usize) -> Vec<f64> {
    let h = grid.h();
    let inv_h2 = 1.0 / (h * h);
    // Interior points only.
    let m = grid.n - 2;
    let diag: Vec<f64> = (0..m)
        .map(|i| 2.0 * inv_h2 + potential(grid.point(i + 1)))
        .collect();
    let e2 = inv_h2 * inv_h2;

    // Count of eigenvalues strictly below x (Sturm sequence of the
    // tridiagonal matrix in LDL^T form).
    let negcount = |x: f64| -> usize {
        let mut count = 0;
        let mut q = 0.0f64;
        for (i, d) in diag.iter().enumerate() {
            q = if i == 0 {
                d - x
            } else {
                d - x - e2 / if q == 0.0 { f64::MIN_POSITIVE } else { q }
            };
            if q < 0.0 {
                count += 1;
            }
        }
        count
    };

    let radius = diag
        .iter()
        .map(|d| d.abs() + 2.0 * inv_h2)
        .fold(0.0f64, f64::max);
    let mut out = Vec::with_capacity(k);
    for j in 0..k.min(m) {
        let (mut lo, mut hi) = (-radius, radius);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if negcount(mid) >= j + 1 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        out.push(0.5 * (lo + hi));
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    /// Raw eigenvalues on the coarse grid, ascending.
    pub eigenvalues: Vec<f64>,
    /// Two-grid Richardson extrapolation (4 l(h/2) - l(h)) / 3.
    pub richardson: Vec<f64>,
    pub reference: Vec<f64>,
    /// |richardson - reference| per level, where a reference exists.
    pub errors: Vec<f64>,
    /// Set when fewer negative eigenvalues were found than references given.
    pub truncated: bool,
    pub grid: RadialGrid,
}

/// k lowest levels of the potential, Richardson-extrapolated, matched
/// against reference energies.
pub fn fd_spectrum<F: Fn(f64) -> f64>(
    potential: F,
    grid: RadialGrid,
    k: usize,
    reference: &[f64],
) -> SpectrumReport {
    let coarse = fd_eigenvalues(&potential, grid, k);
    let fine = fd_eigenvalues(&potential, grid.refined(), k);
    let richardson: Vec<f64> = coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| (4.0 * f - c) / 3.0)
        .collect();
    let errors: Vec<f64> = reference
        .iter()
        .zip(&richardson)
        .map(|(r, e)| (e - r).abs())
        .collect();
    let negatives = richardson.iter().filter(|e| **e < 0.0).count();
    SpectrumReport {
        truncated: negatives < reference.len(),
        eigenvalues: coarse,
        richardson,
        reference: reference.to_vec(),
        errors,
        grid,
    }
}

/// Max relative Schrödinger residual |-psi'' + (V - energy) psi| over the
/// sample points, scaled by max(|energy psi|, floor).  The second
/// derivative comes from the analytic log-derivative of the AEH form, so
/// this shares nothing with the construction being checked.
pub fn schrodinger_residual<F: Fn(f64) -> f64>(
    psi: &AEHForm,
    potential: F,
    energy: f64,
    rs: &[f64],
) -> f64 {
    let floor = 1e-30f64;
    let mut worst = 0.0f64;
    let mut scale = floor;
    let mut residuals = Vec::with_capacity(rs.len());
    for &r in rs {
        let y = r.tanh();
        let w = 1.0 - y * y;
        let g = psi.log_derivative_y(y);
        let gp = psi.log_derivative_prime_y(y);
        let l1 = w * g;
        let l2 = w * (-2.0 * y * g + w * gp);
        let value = psi.eval_y(y);
        residuals.push((-(l2 + l1 * l1) + potential(r) - energy) * value);
        scale = scale.max((energy * value).abs());
    }
    for res in residuals {
        worst = worst.max(res.abs());
    }
    worst / scale
}

/// Zero counts of Hp_n[y; kappa; s] in (0, 1) across a kappa grid, checked
/// against the window rule: zero count v+1 for kappa between consecutive
/// bound-level kappas, zero for kappa above the top level.
pub fn zero_energy_window_scan(
    s: u32,
    t: u32,
    kappas: &[ExactRational],
) -> Result<Vec<(ExactRational, usize)>> {
    let mut out = Vec::with_capacity(kappas.len());
    for kappa in kappas {
        if !kappa.is_positive() {
            return Err(HeunError::Domain(format!("kappa={kappa} must be positive")));
        }
        let hp = construct(s, t, kappa)?;
        let count = sturm_count(&hp.poly, &ExactRational::zero(), &ExactRational::one())?;
        let expected = if kappa > &kappa_c(t, 0) {
            Some(0)
        } else {
            let mut found = None;
            let mut v = 0u32;
            loop {
                let upper = kappa_c(t, v);
                let lower = kappa_c(t, v + 1);
                if kappa == &upper || kappa == &lower {
                    return Err(HeunError::Domain(format!(
                        "kappa={kappa} sits on a window boundary"
                    )));
                }
                if kappa < &upper && kappa > &lower {
                    found = Some(v as usize + 1);
                    break;
                }
                if !lower.is_positive() {
                    break;
                }
                v += 1;
            }
            found
        };
        if let Some(e) = expected {
            if e != count {
                return Err(HeunError::IdentityViolation(format!(
                    "kappa={kappa}: {count} zeros, window rule expects {e}"
                )));
            }
        }
        out.push((kappa.clone(), count));
    }
    Ok(out)
}

fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
}

fn adaptive_quad<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let whole = simpson(f, a, b);
    let mid = 0.5 * (a + b);
    let left = simpson(f, a, mid);
    let right = simpson(f, mid, b);
    if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
        left + right + (left + right - whole) / 15.0
    } else {
        adaptive_quad(f, a, mid, 0.5 * tol, depth - 1)
            + adaptive_quad(f, mid, b, 0.5 * tol, depth - 1)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalizationReport {
    pub finite: bool,
    pub norm_squared: f64,
}

/// Decides L^2(0, infinity) integrability of a Schrödinger-picture AEH
/// wavefunction from its exponents (psi ~ r^a at the origin, e^{(c-b)r} at
/// infinity) and, when finite, confirms with adaptive quadrature.
pub fn normalization_check(psi: &AEHForm) -> NormalizationReport {
    let two = ExactRational::from_int(2);
    // psi ~ r^a at the origin and (1-y)^b ~ e^{-2br} at infinity.
    let finite_origin = &two * &psi.a > ExactRational::from_int(-1);
    let finite_tail = psi.b.is_positive();
    if !(finite_origin && finite_tail) {
        return NormalizationReport {
            finite: false,
            norm_squared: f64::INFINITY,
        };
    }
    let decay = 2.0 * psi.b.to_f64();
    let r_hi = (40.0 / decay).min(200.0).max(20.0);
    let f = |r: f64| {
        let v = psi.eval_r(r);
        v * v
    };
    let norm = adaptive_quad(&f, 1e-9, r_hi, 1e-12, 40);
    NormalizationReport {
        finite: true,
        norm_squared: norm,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heun::factor_at_c;
    use crate::poly::ExactPoly;
    use crate::spectral::{bound_states, potential_value_r, schrodinger_wavefunction};

    fn chebyshev_points(n: usize, lo: f64, hi: f64) -> Vec<f64> {
        (0..n)
            .map(|i| {
                let theta = (2.0 * i as f64 + 1.0) / (2.0 * n as f64) * std::f64::consts::PI;
                lo + (hi - lo) * 0.5 * (1.0 - theta.cos())
            })
            .collect()
    }

    /// Schrödinger-picture bound eigenfunction y^s (1-y^2)^{kappa_v/2} Pi_v[y^2].
    fn eigenfunction(s: u32, t: u32, v: u32) -> AEHForm {
        let kc = kappa_c(t, v);
        let half = ExactRational::ratio(1, 2);
        let exp = &kc * &half;
        AEHForm {
            a: ExactRational::from_int(s as i64),
            b: exp.clone(),
            c: exp,
            poly: factor_at_c(s, t, v).unwrap().compose_square(),
            denom: None,
        }
    }

    #[test]
    fn particle_in_a_box() {
        let grid = RadialGrid::new(0.0, std::f64::consts::PI, 3001).unwrap();
        let report = fd_spectrum(|_| 0.0, grid, 3, &[1.0, 4.0, 9.0]);
        for (i, err) in report.errors.iter().enumerate() {
            assert!(*err < 1e-3, "level {i}: error {err}");
        }
    }

    #[test]
    fn hpt_spectrum_s2_t3() {
        let refs: Vec<f64> = bound_states(2, 3)
            .unwrap()
            .iter()
            .map(|b| b.energy.to_f64())
            .collect();
        assert_eq!(refs, vec![-4.0]);
        let report = fd_spectrum(
            |r| potential_value_r(2, 3, r).unwrap(),
            RadialGrid::default_radial(),
            1,
            &refs,
        );
        assert!(report.errors[0] < 1e-3, "error {}", report.errors[0]);
        assert!(!report.truncated);
    }

    #[test]
    fn hpt_spectrum_s1_t4() {
        let refs: Vec<f64> = bound_states(1, 4)
            .unwrap()
            .iter()
            .map(|b| b.energy.to_f64())
            .collect();
        assert_eq!(refs, vec![-9.0, -1.0]);
        // For s = 1 the eigenfunctions vanish only linearly at the origin,
        // so the boundary must sit at the exact node.
        let report = fd_spectrum(
            |r| potential_value_r(1, 4, r).unwrap(),
            RadialGrid::new(0.0, 14.0, 8000).unwrap(),
            2,
            &refs,
        );
        for (i, err) in report.errors.iter().enumerate() {
            assert!(*err < 1e-3, "level {i}: error {err}");
        }
    }

    #[test]
    fn fd_converges_at_second_order() {
        let grid = RadialGrid::new(0.0, 14.0, 2000).unwrap();
        let coarse = fd_eigenvalues(|r| potential_value_r(2, 3, r).unwrap(), grid, 1)[0];
        let fine = fd_eigenvalues(|r| potential_value_r(2, 3, r).unwrap(), grid.refined(), 1)[0];
        let ratio = (coarse + 4.0).abs() / (fine + 4.0).abs();
        assert!((3.2..=4.8).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn wavefunction_residuals_are_tiny() {
        let rs = chebyshev_points(50, 0.1, 8.0);
        let k = ExactRational::ratio(7, 3);
        let psi = schrodinger_wavefunction(2, 3, &k).unwrap();
        let res = schrodinger_residual(
            &psi,
            |r| potential_value_r(2, 3, r).unwrap(),
            -(7.0f64 / 3.0).powi(2),
            &rs,
        );
        assert!(res < 1e-9, "residual {res}");

        let phi = eigenfunction(2, 3, 0);
        let res = schrodinger_residual(
            &phi,
            |r| potential_value_r(2, 3, r).unwrap(),
            -4.0,
            &rs,
        );
        assert!(res < 1e-9, "residual {res}");

        // Detector sensitivity: a wrong energy must light up.
        let res = schrodinger_residual(
            &phi,
            |r| potential_value_r(2, 3, r).unwrap(),
            -3.0,
            &rs,
        );
        assert!(res > 1e-2, "residual {res} too small for wrong energy");
    }

    #[test]
    fn residuals_across_levels() {
        let rs = chebyshev_points(50, 0.1, 8.0);
        for (s, t) in [(1u32, 4u32), (2, 3), (2, 5), (3, 4)] {
            for b in bound_states(s, t).unwrap() {
                let phi = eigenfunction(s, t, b.v);
                let res = schrodinger_residual(
                    &phi,
                    |r| potential_value_r(s, t, r).unwrap(),
                    b.energy.to_f64(),
                    &rs,
                );
                assert!(res < 1e-9, "s={s} t={t} v={}: residual {res}", b.v);
            }
        }
    }

    #[test]
    fn window_scan_examples() {
        let table = zero_energy_window_scan(
            2,
            5,
            &[
                ExactRational::ratio(9, 2),
                ExactRational::ratio(7, 2),
                ExactRational::ratio(3, 2),
            ],
        )
        .unwrap();
        assert_eq!(table[0].1, 0);
        assert_eq!(table[1].1, 1);
        assert_eq!(table[2].1, 2);
        assert!(zero_energy_window_scan(2, 5, &[ExactRational::from_int(4)]).is_err());
    }

    #[test]
    fn normalization_decisions() {
        // Bound eigenfunction: finite, and the quadrature agrees with a
        // plain fixed-step integral.
        let phi = eigenfunction(2, 3, 0);
        let rep = normalization_check(&phi);
        assert!(rep.finite);
        let mut riemann = 0.0;
        let n = 400_000;
        let h = 30.0 / n as f64;
        for i in 0..n {
            let r = (i as f64 + 0.5) * h;
            riemann += phi.eval_r(r).powi(2) * h;
        }
        assert!((rep.norm_squared - riemann).abs() < 1e-6 * riemann);

        // y^{1-s} behavior at the origin is not square integrable for s=2.
        let k = ExactRational::ratio(7, 3);
        let psi = schrodinger_wavefunction(2, 3, &k).unwrap();
        assert!(!normalization_check(&psi).finite);

        // An FF growing like e^{kappa r} is not normalizable either.
        let spec = crate::susy::PartnerSpec::t_plus(2, 3, crate::spectral::Family::A, 0).unwrap();
        assert!(!normalization_check(&spec.schrodinger_ff()).finite);
    }

    #[test]
    fn grid_validation() {
        assert!(RadialGrid::new(-0.1, 1.0, 10).is_err());
        assert!(RadialGrid::new(0.1, 0.1, 10).is_err());
        assert!(RadialGrid::new(0.1, 1.0, 2).is_err());
        let g = RadialGrid::new(1.0, 2.0, 11).unwrap();
        assert!((g.h() - 0.1).abs() < 1e-15);
        assert_eq!(g.refined().n, 21);
    }
}
