//! The Lambe–Ward tridiagonal system behind polynomial solutions of the
//! Heun equation: exact matrix entries, the characteristic polynomial in
//! the accessory parameter q, a Durand–Kerner numeric spectrum, and the
//! backward three-term recurrence that rebuilds Hp_n coefficient by
//! coefficient as an independent cross-check of the ladder construction.

use crate::error::{HeunError, Result};
use crate::heun::HPTIndex;
use crate::poly::ExactPoly;
use crate::rational::ExactRational;
use num_complex::Complex64;

/// General Lambe–Ward data: exponent parameters rho_1..rho_3 at the three
/// finite singular points and the location z_out of the movable singularity.
/// The associated (n+1) x (n+1) tridiagonal matrix acts on the coefficient
/// vector (G_0, ..., G_n) of a degree-n polynomial solution.
#[derive(Clone, Debug)]
pub struct LWSystem {
    pub n: u32,
    pub rho1: ExactRational,
    pub rho2: ExactRational,
    pub rho3: ExactRational,
    pub z_out: ExactRational,
}

impl LWSystem {
    /// beta_n = 2(rho_1 + rho_2 + rho_3) + n - 1.
    pub fn beta_n(&self) -> ExactRational {
        (&self.rho1 + &self.rho2 + &self.rho3) * ExactRational::from_int(2)
            + ExactRational::from_int(self.n as i64 - 1)
    }

    /// Superdiagonal h_{j, j+1} = (j+1)(2 rho_1 + j) z_out.
    pub fn sup(&self, j: u32) -> ExactRational {
        let j = j as i64;
        ExactRational::from_int(j + 1)
            * (&self.rho1 * &ExactRational::from_int(2) + ExactRational::from_int(j))
            * &self.z_out
    }

    /// Diagonal h_{j,j} = -j^2 (z_out + 1)
    ///     - j [ z_out (2 rho_1 + 2 rho_2 - 1) + 2 rho_1 + 2 rho_3 - 1 ].
    pub fn diag(&self, j: u32) -> ExactRational {
        let j = ExactRational::from_int(j as i64);
        let two = ExactRational::from_int(2);
        let quad = -(&j * &j) * (&self.z_out + &ExactRational::one());
        let lin = &self.z_out * &(&(&self.rho1 + &self.rho2) * &two - ExactRational::one())
            + (&(&self.rho1 + &self.rho3) * &two - ExactRational::one());
        quad - &j * &lin
    }

    /// Subdiagonal h_{j, j-1} = (j - n - 1)(beta_n + j - 1).
    pub fn sub(&self, j: u32) -> ExactRational {
        ExactRational::from_int(j as i64 - self.n as i64 - 1)
            * (self.beta_n() + ExactRational::from_int(j as i64 - 1))
    }

    /// Row residuals of (H - q) G for a candidate accessory value and
    /// coefficient vector; all zero iff G solves the system.
    pub fn residual_rows(&self, q: &ExactRational, g: &[ExactRational]) -> Vec<ExactRational> {
        let n = self.n as usize;
        assert_eq!(g.len(), n + 1);
        (0..=n)
            .map(|j| {
                let mut acc = (self.diag(j as u32) - q) * &g[j];
                if j > 0 {
                    acc = acc + self.sub(j as u32) * &g[j - 1];
                }
                if j < n {
                    acc = acc + self.sup(j as u32) * &g[j + 1];
                }
                acc
            })
            .collect()
    }

    /// Monic characteristic polynomial det(q I - H) in q, by the standard
    /// three-term determinant recurrence for tridiagonal matrices.
    pub fn char_poly(&self) -> ExactPoly {
        let mut d_prev = ExactPoly::one(); // D_{-1}
        let mut d = ExactPoly::from_coeffs(vec![-self.diag(0), ExactRational::one()]); // D_0
        for j in 1..=self.n {
            let lin = ExactPoly::from_coeffs(vec![-self.diag(j), ExactRational::one()]);
            let cross = self.sub(j) * self.sup(j - 1);
            let next = &(&lin * &d) - &d_prev.scale(&cross);
            d_prev = d;
            d = next;
        }
        d
    }

    /// All n+1 accessory eigenvalues as complex floats, from Durand–Kerner
    /// iteration on the exact characteristic polynomial.
    pub fn accessory_spectrum(&self) -> Result<Vec<Complex64>> {
        durand_kerner(&self.char_poly())
    }
}

/// Simultaneous-iteration root finder for a monic exact polynomial.
pub fn durand_kerner(p: &ExactPoly) -> Result<Vec<Complex64>> {
    let deg = p.degree();
    if deg < 1 {
        return Ok(Vec::new());
    }
    let coeffs: Vec<f64> = p.monic().coeffs().iter().map(|c| c.to_f64()).collect();
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    // radius bound keeps the initial ring outside no roots pathologically
    let radius = 1.0
        + coeffs[..deg as usize]
            .iter()
            .fold(0.0f64, |m, c| m.max(c.abs()));
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..deg)
        .map(|k| seed.powu(k as u32 + 1) * radius / seed.norm())
        .collect();
    for _ in 0..1000 {
        let mut max_step = 0.0f64;
        for i in 0..roots.len() {
            let mut denom = Complex64::new(1.0, 0.0);
            for (j, r) in roots.iter().enumerate() {
                if j != i {
                    denom *= roots[i] - r;
                }
            }
            if denom.norm() == 0.0 {
                // collided iterates: nudge and continue
                roots[i] += Complex64::new(1e-6, 1e-6);
                max_step = f64::MAX;
                continue;
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-13 * radius.max(1.0) {
            roots.sort_by(|a, b| {
                a.re.partial_cmp(&b.re)
                    .unwrap()
                    .then(a.im.partial_cmp(&b.im).unwrap())
            });
            return Ok(roots);
        }
    }
    Err(HeunError::InternalInconsistency(
        "Durand-Kerner failed to converge".into(),
    ))
}

/// The hyperbolic Pöschl–Teller specialization: z_out = -1, rho_1 = 1 - s,
/// rho_2 = (1 + kappa)/2, rho_3 = (1 - kappa)/2. With these values the
/// entries collapse to h_{j,j+1} = (j+1)(2s-2-j), h_{j,j} = 2 j kappa,
/// h_{j,j-1} = (j-n-1)(t+j).
pub fn hpt_system(index: HPTIndex, kappa: &ExactRational) -> LWSystem {
    let half = ExactRational::ratio(1, 2);
    LWSystem {
        n: index.n(),
        rho1: ExactRational::from_int(1 - index.s as i64),
        rho2: &(ExactRational::one() + kappa) * &half,
        rho3: &(ExactRational::one() - kappa) * &half,
        z_out: -ExactRational::one(),
    }
}

/// The physical accessory value q = 2 kappa (s - 1).
pub fn hpt_accessory(s: u32, kappa: &ExactRational) -> ExactRational {
    kappa * &ExactRational::from_int(2 * (s as i64 - 1))
}

/// Rebuilds Hp_n[y; kappa; s] by running the Lambe–Ward three-term
/// recurrence backwards from the normalization G_n = 1 (which forces
/// G_{n-1} = kappa), then verifying the leftover j = 0 row closes. This path
/// never touches the ladder operators, so it is an independent oracle for
/// the construction.
pub fn hpt_lw_construct(index: HPTIndex, kappa: &ExactRational) -> Result<ExactPoly> {
    let sys = hpt_system(index, kappa);
    let q = hpt_accessory(index.s, kappa);
    let n = sys.n as usize;
    let mut g = vec![ExactRational::zero(); n + 1];
    g[n] = ExactRational::one();
    if n >= 1 {
        g[n - 1] = kappa.clone();
    }
    for j in (1..n).rev() {
        // row j: sup(j) G_{j+1} + (diag(j) - q) G_j + sub(j) G_{j-1} = 0
        let num = &(&q - &sys.diag(j as u32)) * &g[j] - sys.sup(j as u32) * &g[j + 1];
        let den = sys.sub(j as u32);
        if den.is_zero() {
            return Err(HeunError::InternalInconsistency(format!(
                "vanishing subdiagonal at row {j}"
            )));
        }
        g[j - 1] = num / den;
    }
    for (j, r) in sys.residual_rows(&q, &g).into_iter().enumerate() {
        if !r.is_zero() {
            return Err(HeunError::IdentityViolation(format!(
                "Lambe-Ward row {j} does not close: residual {r}"
            )));
        }
    }
    Ok(ExactPoly::from_coeffs(g))
}

/// Even polynomial solutions in the degenerate case z_out = -1 with
/// rho_2 = rho_3 and n = 2m. The diagonal vanishes identically, q = 0, and
/// the odd-numbered rows become a two-term chain linking even coefficients,
/// solved downward from G_{2m} = 1. All odd coefficients vanish.
pub fn type3_even_solution(m: u32, rho1: &ExactRational, rho2: &ExactRational) -> Result<ExactPoly> {
    let sys = LWSystem {
        n: 2 * m,
        rho1: rho1.clone(),
        rho2: rho2.clone(),
        rho3: rho2.clone(),
        z_out: -ExactRational::one(),
    };
    let n = sys.n as usize;
    let mut g = vec![ExactRational::zero(); n + 1];
    g[n] = ExactRational::one();
    // odd row j: sup(j) G_{j+1} + sub(j) G_{j-1} = 0
    for j in (1..n).rev().filter(|j| j % 2 == 1) {
        let den = sys.sub(j as u32);
        if den.is_zero() {
            return Err(HeunError::DegenerateScale(format!(
                "vanishing subdiagonal at row {j}"
            )));
        }
        g[j - 1] = -(sys.sup(j as u32) * &g[j + 1]) / den;
    }
    let q = ExactRational::zero();
    for (j, r) in sys.residual_rows(&q, &g).into_iter().enumerate() {
        if !r.is_zero() {
            return Err(HeunError::IdentityViolation(format!(
                "type-3 row {j} does not close: residual {r}"
            )));
        }
    }
    Ok(ExactPoly::from_coeffs(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heun::construct;

    fn r(p: i64, q: i64) -> ExactRational {
        ExactRational::ratio(p, q)
    }

    #[test]
    fn specialized_entries_match_closed_forms() {
        for s in 1..=4u32 {
            for t in 0..=4u32 {
                let idx = HPTIndex::new(s, t).unwrap();
                let k = r(5, 3);
                let sys = hpt_system(idx, &k);
                let n = idx.n() as i64;
                for j in 0..=idx.n() {
                    let ji = j as i64;
                    assert_eq!(
                        sys.sup(j),
                        ExactRational::from_int((ji + 1) * (2 * s as i64 - 2 - ji))
                    );
                    assert_eq!(sys.diag(j), &ExactRational::from_int(2 * ji) * &k);
                    assert_eq!(
                        sys.sub(j),
                        ExactRational::from_int((ji - n - 1) * (t as i64 + ji))
                    );
                }
            }
        }
    }

    #[test]
    fn recurrence_rebuilds_ladder_construction() {
        for s in 1..=4u32 {
            for t in 0..=4u32 {
                for k in [r(3, 1), r(7, 2), r(-2, 5), r(11, 4)] {
                    let idx = HPTIndex::new(s, t).unwrap();
                    let lw = hpt_lw_construct(idx, &k).unwrap();
                    let ladder = construct(s, t, &k).unwrap();
                    assert_eq!(lw, ladder.poly, "s={s}, t={t}, kappa={k}");
                }
            }
        }
    }

    #[test]
    fn physical_accessory_is_char_poly_root() {
        for s in 1..=3u32 {
            for t in 1..=3u32 {
                let idx = HPTIndex::new(s, t).unwrap();
                let k = r(7, 2);
                let sys = hpt_system(idx, &k);
                let q = hpt_accessory(s, &k);
                let cp = sys.char_poly();
                assert_eq!(cp.degree(), idx.n() as i64 + 1);
                assert!(cp.eval(&q).is_zero(), "s={s}, t={t}");
            }
        }
    }

    #[test]
    fn durand_kerner_matches_exact_roots() {
        // (q-1)(q-2)(q-3)(q+5)
        let p = &(&ExactPoly::from_ints(&[-1, 1]) * &ExactPoly::from_ints(&[-2, 1]))
            * &(&ExactPoly::from_ints(&[-3, 1]) * &ExactPoly::from_ints(&[5, 1]));
        let roots = durand_kerner(&p).unwrap();
        let mut re: Vec<f64> = roots.iter().map(|z| z.re).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let expect = [-5.0, 1.0, 2.0, 3.0];
        for (got, want) in re.iter().zip(expect) {
            assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        }
        for z in &roots {
            assert!(z.im.abs() < 1e-9);
        }
    }

    #[test]
    fn spectrum_contains_physical_accessory() {
        let idx = HPTIndex::new(2, 3).unwrap();
        let k = r(5, 2);
        let sys = hpt_system(idx, &k);
        let q = hpt_accessory(2, &k).to_f64();
        let spectrum = sys.accessory_spectrum().unwrap();
        assert!(
            spectrum
                .iter()
                .any(|z| (z - Complex64::new(q, 0.0)).norm() < 1e-8),
            "physical q={q} missing from {spectrum:?}"
        );
    }

    #[test]
    fn type3_example() {
        // m = 1, rho1 = rho2 = 1/2 -> y^2 - 1/2
        let p = type3_even_solution(1, &r(1, 2), &r(1, 2)).unwrap();
        let expect = ExactPoly::from_coeffs(vec![
            r(-1, 2),
            ExactRational::zero(),
            ExactRational::one(),
        ]);
        assert_eq!(p, expect);
        // larger case stays even and closes all rows
        let p2 = type3_even_solution(3, &r(1, 3), &r(3, 4)).unwrap();
        assert_eq!(p2.degree(), 6);
        for (i, c) in p2.coeffs().iter().enumerate() {
            if i % 2 == 1 {
                assert!(c.is_zero());
            }
        }
    }
}
