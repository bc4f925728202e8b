//! Heun polynomials Hp_n[y; kappa; s] for the hyperbolic Pöschl–Teller
//! problem, with the four first-order ladder operators connecting adjacent
//! parameter sets, the defining ODE residual, the boundary closed form at
//! y = 1, and the two exact factorization families.
//!
//! Every polynomial here is monic of degree n = t + 2s - 2 and is built by
//! exact rational arithmetic: the seed row s = 1 comes from a Jacobi
//! polynomial with parameters (kappa, -kappa) and the rest of the family is
//! reached by ladder steps.

use crate::error::{HeunError, Result};
use crate::poly::{jacobi_polynomial, jacobi_seed_scale, sturm_count, ExactPoly};
use crate::rational::{double_factorial, shifted_pochhammer, ExactRational};

/// Parameter pair (s, t) with the derived degree n = t + 2s - 2.
///
/// `s` is the angular-type parameter (s >= 1) and `t` the seed degree at
/// s = 1. The spectral labels lambda_0 = s - 1/2 and mu_0 = t + s - 1/2
/// hang off the same pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct HPTIndex {
    pub s: u32,
    pub t: u32,
}

impl HPTIndex {
    pub fn new(s: u32, t: u32) -> Result<Self> {
        if s < 1 {
            return Err(HeunError::Domain("require s >= 1".into()));
        }
        Ok(HPTIndex { s, t })
    }

    /// Degree n = t + 2s - 2.
    pub fn n(&self) -> u32 {
        self.t + 2 * self.s - 2
    }

    /// lambda_0 = s - 1/2.
    pub fn lambda0(&self) -> ExactRational {
        ExactRational::from_int(self.s as i64) - ExactRational::ratio(1, 2)
    }

    /// mu_0 = t + s - 1/2.
    pub fn mu0(&self) -> ExactRational {
        ExactRational::from_int((self.t + self.s) as i64) - ExactRational::ratio(1, 2)
    }
}

/// A concrete member Hp_n[y; kappa; s] of the family, carrying its indices.
#[derive(Clone, Debug, PartialEq)]
pub struct HeunPoly {
    pub index: HPTIndex,
    pub kappa: ExactRational,
    pub poly: ExactPoly,
}

/// Seed row: Hp_t[y; kappa; 1] = (t! / (2t-1)!!) P_t^{(kappa, -kappa)}(y).
pub fn jacobi_seed(t: u32, kappa: &ExactRational) -> Result<HeunPoly> {
    // the monic rescale blows up when the Jacobi leading coefficient
    // degenerates, which happens at negative integer kappa of small modulus
    let poly = jacobi_polynomial(t, kappa, &(-kappa)).scale(&jacobi_seed_scale(t));
    if poly.degree() != t as i64 || !poly.is_monic() {
        return Err(HeunError::DegenerateScale(format!(
            "Jacobi seed degenerates at t={t}, kappa={kappa}"
        )));
    }
    Ok(HeunPoly {
        index: HPTIndex::new(1, t)?,
        kappa: kappa.clone(),
        poly,
    })
}

/// Applies `A(y) p' + B(y) p`.
fn first_order(a: &ExactPoly, b: &ExactPoly, p: &ExactPoly) -> ExactPoly {
    &(a * &p.derivative()) + &(b * p)
}

fn one_minus_y2() -> ExactPoly {
    ExactPoly::from_ints(&[1, 0, -1])
}

fn y_one_minus_y2() -> ExactPoly {
    ExactPoly::from_ints(&[0, 1, 0, -1])
}

/// Ladder a: raises s by one (t fixed, n -> n + 2).
///
/// Hp_{n+2}[kappa; s+1] = -(2n-2s+3)^{-1}
///     [ y(1-y^2) d/dy - (n-2s+3) y^2 - kappa y + 1 - 2s ] Hp_n[kappa; s]
pub fn ladder_a(hp: &HeunPoly) -> Result<HeunPoly> {
    let (s, n) = (hp.index.s as i64, hp.index.n() as i64);
    let b = ExactPoly::from_coeffs(vec![
        ExactRational::from_int(1 - 2 * s),
        -&hp.kappa,
        ExactRational::from_int(-(n - 2 * s + 3)),
    ]);
    let raw = first_order(&y_one_minus_y2(), &b, &hp.poly);
    let scale = -ExactRational::from_int(2 * n - 2 * s + 3).recip();
    let out = HeunPoly {
        index: HPTIndex::new(hp.index.s + 1, hp.index.t)?,
        kappa: hp.kappa.clone(),
        poly: raw.scale(&scale),
    };
    check_shape(&out, "ladder_a")?;
    Ok(out)
}

/// Ladder b: lowers s by one (t fixed, n -> n - 2). The intertwining
/// relation is
///
/// [ (1-y^2) d/dy + n y - kappa ] Hp_n[kappa; s]
///     = ((n^2 - kappa^2) / (2n-2s+1)) * y * Hp_{n-2}[kappa; s-1]
///
/// so the step needs s >= 2 and kappa^2 != n^2, and the right-hand side must
/// divide out `y` exactly.
pub fn ladder_b(hp: &HeunPoly) -> Result<HeunPoly> {
    let (s, n) = (hp.index.s as i64, hp.index.n() as i64);
    if s < 2 {
        return Err(HeunError::Domain("ladder b needs s >= 2".into()));
    }
    let n2 = ExactRational::from_int(n * n);
    let k2 = &hp.kappa * &hp.kappa;
    if k2 == n2 {
        return Err(HeunError::DegenerateScale(format!(
            "ladder b degenerates at kappa = +-{n}"
        )));
    }
    let b = ExactPoly::from_coeffs(vec![-&hp.kappa, ExactRational::from_int(n)]);
    let raw = first_order(&one_minus_y2(), &b, &hp.poly);
    let scale = ExactRational::from_int(2 * n - 2 * s + 1) / (n2 - k2);
    let poly = raw.scale(&scale).div_exact_y_power(1, "ladder b")?;
    let out = HeunPoly {
        index: HPTIndex::new(hp.index.s - 1, hp.index.t)?,
        kappa: hp.kappa.clone(),
        poly,
    };
    check_shape(&out, "ladder_b")?;
    Ok(out)
}

/// Ladder c: raises s, lowers t by two (n fixed).
///
/// [ y(1-y^2) d/dy + n y^2 - kappa y - 2s + 1 ] Hp_n[kappa; s]
///     = (((n-2s+1)^2 - kappa^2) / (2n-2s+1)) Hp_n[kappa; s+1]
///
/// Needs t >= 2 and kappa != +-(t-1) (note n - 2s + 1 = t - 1).
pub fn ladder_c(hp: &HeunPoly) -> Result<HeunPoly> {
    let (s, t, n) = (hp.index.s as i64, hp.index.t as i64, hp.index.n() as i64);
    if t < 2 {
        return Err(HeunError::Domain("ladder c needs t >= 2".into()));
    }
    let tm1 = ExactRational::from_int(t - 1);
    let k2 = &hp.kappa * &hp.kappa;
    if &tm1 * &tm1 == k2 {
        return Err(HeunError::DegenerateScale(format!(
            "ladder c degenerates at kappa = +-{}",
            t - 1
        )));
    }
    let b = ExactPoly::from_coeffs(vec![
        ExactRational::from_int(1 - 2 * s),
        -&hp.kappa,
        ExactRational::from_int(n),
    ]);
    let raw = first_order(&y_one_minus_y2(), &b, &hp.poly);
    let scale = ExactRational::from_int(2 * n - 2 * s + 1) / (&tm1 * &tm1 - k2);
    let out = HeunPoly {
        index: HPTIndex::new(hp.index.s + 1, hp.index.t - 2)?,
        kappa: hp.kappa.clone(),
        poly: raw.scale(&scale),
    };
    check_shape(&out, "ladder_c")?;
    Ok(out)
}

/// Ladder d: lowers s, raises t by two (n fixed).
///
/// [ (1-y^2) d/dy - (t+1) y - kappa ] Hp_n[kappa; s]
///     = -(n + t + 1) * y * Hp_n[kappa; s-1]
pub fn ladder_d(hp: &HeunPoly) -> Result<HeunPoly> {
    let (s, t, n) = (hp.index.s as i64, hp.index.t as i64, hp.index.n() as i64);
    if s < 2 {
        return Err(HeunError::Domain("ladder d needs s >= 2".into()));
    }
    let b = ExactPoly::from_coeffs(vec![-&hp.kappa, ExactRational::from_int(-(t + 1))]);
    let raw = first_order(&one_minus_y2(), &b, &hp.poly);
    let scale = -ExactRational::from_int(n + t + 1).recip();
    let poly = raw.scale(&scale).div_exact_y_power(1, "ladder d")?;
    let out = HeunPoly {
        index: HPTIndex::new(hp.index.s - 1, hp.index.t + 2)?,
        kappa: hp.kappa.clone(),
        poly,
    };
    check_shape(&out, "ladder_d")?;
    Ok(out)
}

fn check_shape(hp: &HeunPoly, context: &str) -> Result<()> {
    if hp.poly.degree() != hp.index.n() as i64 || !hp.poly.is_monic() {
        return Err(HeunError::InternalInconsistency(format!(
            "{context}: expected monic degree {} output, got degree {}",
            hp.index.n(),
            hp.poly.degree()
        )));
    }
    Ok(())
}

/// Builds Hp_n[y; kappa; s] from the s = 1 Jacobi seed by s - 1 applications
/// of ladder a. The result is always monic of degree n = t + 2s - 2.
pub fn construct(s: u32, t: u32, kappa: &ExactRational) -> Result<HeunPoly> {
    HPTIndex::new(s, t)?;
    let mut hp = jacobi_seed(t, kappa)?;
    for _ in 1..s {
        hp = ladder_a(&hp)?;
    }
    Ok(hp)
}

/// Residual of the defining second-order equation; identically zero for a
/// genuine family member:
///
/// y(y^2-1) Hp'' + 2 [ (2-s) y^2 + kappa y + s - 1 ] Hp'
///     + [ -n(t+1) y - 2 kappa (s-1) ] Hp
pub fn heun_residual(hp: &HeunPoly) -> ExactPoly {
    let (s, t, n) = (hp.index.s as i64, hp.index.t as i64, hp.index.n() as i64);
    let lead = ExactPoly::from_ints(&[0, -1, 0, 1]); // y(y^2 - 1)
    let b2 = ExactPoly::from_coeffs(vec![
        ExactRational::from_int(s - 1),
        hp.kappa.clone(),
        ExactRational::from_int(2 - s),
    ]);
    let c1 = ExactPoly::from_coeffs(vec![
        &ExactRational::from_int(-2 * (s - 1)) * &hp.kappa,
        ExactRational::from_int(-n * (t + 1)),
    ]);
    let two = ExactRational::from_int(2);
    &(&(&lead * &hp.poly.derivative().derivative()) + &(&b2 * &hp.poly.derivative()).scale(&two))
        + &(&c1 * &hp.poly)
}

/// Closed form for the boundary value Hp_n[1; kappa; s]:
///
/// prod_{j=1}^{s-1} (kappa + n - 2j + 2) * prod_{i=1}^{t} (kappa + i) / (2n-2s+1)!!
pub fn boundary_closed_form(index: HPTIndex, kappa: &ExactRational) -> ExactRational {
    let (s, n) = (index.s as i64, index.n() as i64);
    let mut acc = ExactRational::one();
    for j in 1..s {
        acc = acc * (kappa + &ExactRational::from_int(n - 2 * j + 2));
    }
    acc = acc * shifted_pochhammer(kappa, index.t);
    acc / ExactRational::from_bigint(double_factorial(2 * n - 2 * s + 1))
}

/// kappa_{c,v} = t - 2v - 1, the c-family factorization points.
pub fn kappa_c(t: u32, v: u32) -> ExactRational {
    ExactRational::from_int(t as i64 - 2 * v as i64 - 1)
}

/// kappa_{b,m} = t + 2(s - m - 1), the b-family factorization points.
pub fn kappa_b(s: u32, t: u32, m: u32) -> ExactRational {
    ExactRational::from_int(t as i64 + 2 * (s as i64 - m as i64 - 1))
}

/// At kappa = kappa_{c,v} (with 0 <= v <= (t-1)/2) the polynomial factors as
///
/// Hp_n[y; kappa_{c,v}; s] = y^{2s-1} (y+1)^{kappa_{c,v}} Pi_v[y^2]
///
/// Returns the monic even-part cofactor Pi_v as a degree-v polynomial in
/// z = y^2.
pub fn factor_at_c(s: u32, t: u32, v: u32) -> Result<ExactPoly> {
    if 2 * v + 1 > t {
        return Err(HeunError::Domain(format!(
            "factor_at_c needs 2v + 1 <= t (got v={v}, t={t})"
        )));
    }
    let kc = kappa_c(t, v);
    let hp = construct(s, t, &kc)?;
    let stripped = hp.poly.div_exact_y_power(2 * s as usize - 1, "factor_at_c y-power")?;
    let mut rest = stripped;
    let y_plus_1 = ExactPoly::from_ints(&[1, 1]);
    for _ in 0..(t - 2 * v - 1) {
        rest = rest.div_exact(&y_plus_1, "factor_at_c (y+1) power")?;
    }
    let pi = rest.as_poly_in_y_squared()?;
    if pi.degree() != v as i64 {
        return Err(HeunError::IdentityViolation(format!(
            "factor_at_c cofactor has degree {} instead of {v}",
            pi.degree()
        )));
    }
    Ok(pi)
}

/// At kappa = kappa_{b,m} with m < s - 1/2 the polynomial factors as
///
/// Hp_n[y; kappa_{b,m}; s] = (y+1)^{n-2m} Pi_m[y^2]
///
/// Returns the monic cofactor Pi_m as a degree-m polynomial in z = y^2.
pub fn factor_at_b(s: u32, t: u32, m: u32) -> Result<ExactPoly> {
    if 2 * m + 1 >= 2 * s {
        return Err(HeunError::Domain(format!(
            "factor_at_b needs m < s - 1/2 (got m={m}, s={s})"
        )));
    }
    let kb = kappa_b(s, t, m);
    let hp = construct(s, t, &kb)?;
    let n = hp.index.n();
    let mut rest = hp.poly;
    let y_plus_1 = ExactPoly::from_ints(&[1, 1]);
    for _ in 0..(n - 2 * m) {
        rest = rest.div_exact(&y_plus_1, "factor_at_b (y+1) power")?;
    }
    let pi = rest.as_poly_in_y_squared()?;
    if pi.degree() != m as i64 {
        return Err(HeunError::IdentityViolation(format!(
            "factor_at_b cofactor has degree {} instead of {m}",
            pi.degree()
        )));
    }
    Ok(pi)
}

/// Number of zeros of Hp_n[y; kappa; s] in the open interval (0, 1),
/// counted exactly by Sturm sequences. For kappa strictly between adjacent
/// c-family points kappa_{c,v+1} and kappa_{c,v} there are exactly v + 1
/// such zeros; for kappa > t - 1 there are none.
pub fn zeros_in_unit_interval(hp: &HeunPoly) -> Result<usize> {
    sturm_count(&hp.poly, &ExactRational::zero(), &ExactRational::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ExactPoly;

    fn r(p: i64, q: i64) -> ExactRational {
        ExactRational::ratio(p, q)
    }

    fn kappa_sweep() -> Vec<ExactRational> {
        vec![r(3, 1), r(7, 2), r(9, 2), r(1, 3), r(-5, 7), r(11, 4)]
    }

    #[test]
    fn seed_degree_two_and_three() {
        // Hp_2[y; kappa; 1] = y^2 + kappa y + (kappa^2 - 1)/3
        let k = r(5, 2);
        let hp = jacobi_seed(2, &k).unwrap();
        let expect = ExactPoly::from_coeffs(vec![
            (&k * &k - ExactRational::one()) / ExactRational::from_int(3),
            k.clone(),
            ExactRational::one(),
        ]);
        assert_eq!(hp.poly, expect);

        // Hp_3[y; kappa; 1] = y^3 + kappa y^2 + (2 kappa^2 - 3)/5 y + kappa(kappa^2 - 4)/15
        let hp3 = jacobi_seed(3, &k).unwrap();
        let expect3 = ExactPoly::from_coeffs(vec![
            &k * &(&(&k * &k) - &ExactRational::from_int(4)) / ExactRational::from_int(15),
            (&(&k * &k) * &ExactRational::from_int(2) - ExactRational::from_int(3))
                / ExactRational::from_int(5),
            k.clone(),
            ExactRational::one(),
        ]);
        assert_eq!(hp3.poly, expect3);
    }

    #[test]
    fn construct_known_cases() {
        // Hp_3[y; kappa; 2] = y^3 + kappa y^2 + kappa^2/3 y + kappa/3
        let k = r(7, 3);
        let hp = construct(2, 1, &k).unwrap();
        let expect = ExactPoly::from_coeffs(vec![
            &k / &ExactRational::from_int(3),
            &(&k * &k) / &ExactRational::from_int(3),
            k.clone(),
            ExactRational::one(),
        ]);
        assert_eq!(hp.poly, expect);

        // s=1, t=3, kappa=2: y (y+1)^2
        let hp2 = construct(1, 3, &ExactRational::from_int(2)).unwrap();
        assert_eq!(hp2.poly, ExactPoly::from_ints(&[0, 1, 2, 1]));

        // s=2, t=1, kappa=3: (y+1)^3
        let hp3 = construct(2, 1, &ExactRational::from_int(3)).unwrap();
        assert_eq!(hp3.poly, ExactPoly::from_ints(&[1, 3, 3, 1]));
    }

    #[test]
    fn residual_vanishes_across_sweep() {
        for s in 1..=4u32 {
            for t in 0..=5u32 {
                for k in kappa_sweep() {
                    let hp = construct(s, t, &k).unwrap();
                    assert!(
                        heun_residual(&hp).is_zero(),
                        "residual nonzero at s={s}, t={t}, kappa={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn ladder_b_inverts_a() {
        for s in 2..=4u32 {
            for t in 1..=4u32 {
                for k in kappa_sweep() {
                    let hp = construct(s, t, &k).unwrap();
                    let n = hp.index.n() as i64;
                    if &k * &k == ExactRational::from_int(n * n) {
                        continue;
                    }
                    let down = ladder_b(&hp).unwrap();
                    let reference = construct(s - 1, t, &k).unwrap();
                    assert_eq!(down.poly, reference.poly, "s={s}, t={t}, kappa={k}");
                }
            }
        }
    }

    #[test]
    fn ladder_c_and_d_connect_constant_n() {
        for s in 1..=3u32 {
            for t in 2..=5u32 {
                for k in kappa_sweep() {
                    if (&k * &k) == ExactRational::from_int(((t - 1) * (t - 1)) as i64) {
                        continue;
                    }
                    let hp = construct(s, t, &k).unwrap();
                    let up = ladder_c(&hp).unwrap();
                    let reference = construct(s + 1, t - 2, &k).unwrap();
                    assert_eq!(up.poly, reference.poly, "c: s={s}, t={t}, kappa={k}");
                    // d undoes c
                    let back = ladder_d(&up).unwrap();
                    assert_eq!(back.poly, hp.poly, "d: s={s}, t={t}, kappa={k}");
                }
            }
        }
    }

    #[test]
    fn ladder_b_degenerate_kappa_rejected() {
        let hp = construct(2, 1, &ExactRational::from_int(3)).unwrap();
        // n = 3, kappa = 3 hits the degeneracy
        assert!(matches!(ladder_b(&hp), Err(HeunError::DegenerateScale(_))));
    }

    #[test]
    fn boundary_value_matches_closed_form() {
        for s in 1..=4u32 {
            for t in 0..=5u32 {
                for k in kappa_sweep() {
                    let hp = construct(s, t, &k).unwrap();
                    let lhs = hp.poly.eval(&ExactRational::one());
                    let rhs = boundary_closed_form(hp.index, &k);
                    assert_eq!(lhs, rhs, "s={s}, t={t}, kappa={k}");
                }
            }
        }
    }

    #[test]
    fn factorization_families() {
        // c family: full (v, s, t) window including the s = 1 row
        for s in 1..=3u32 {
            for t in 1..=6u32 {
                for v in 0..=(t - 1) / 2 {
                    let pi = factor_at_c(s, t, v).unwrap();
                    assert!(pi.is_monic());
                    assert_eq!(pi.degree(), v as i64);
                }
            }
        }
        // b family window m < s - 1/2
        for s in 1..=4u32 {
            for t in 1..=4u32 {
                for m in 0..s {
                    if 2 * m + 1 >= 2 * s {
                        continue;
                    }
                    let pi = factor_at_b(s, t, m).unwrap();
                    assert!(pi.is_monic());
                    assert_eq!(pi.degree(), m as i64);
                }
            }
        }
    }

    #[test]
    fn zero_counts_between_factorization_points() {
        // s = 2, t = 5: kappa = 9/2 -> 0 zeros, 7/2 -> 1, 3/2 -> 2
        for (k, expect) in [(r(9, 2), 0usize), (r(7, 2), 1), (r(3, 2), 2)] {
            let hp = construct(2, 5, &k).unwrap();
            assert_eq!(zeros_in_unit_interval(&hp).unwrap(), expect, "kappa={k}");
        }
        // general rule across a sweep: kappa in (t-2v-3, t-2v-1) gives v+1 zeros
        for s in 1..=3u32 {
            for t in 2..=5u32 {
                for v in 0..t / 2 {
                    let k = kappa_c(t, v) - r(1, 2); // inside the window
                    if !k.is_positive() {
                        continue;
                    }
                    let hp = construct(s, t, &k).unwrap();
                    assert_eq!(
                        zeros_in_unit_interval(&hp).unwrap(),
                        v as usize + 1,
                        "s={s}, t={t}, v={v}"
                    );
                }
                // above all factorization points: no zeros in (0, 1)
                let k = ExactRational::from_int(t as i64);
                let hp = construct(s, t, &k).unwrap();
                assert_eq!(zeros_in_unit_interval(&hp).unwrap(), 0);
            }
        }
    }
}
