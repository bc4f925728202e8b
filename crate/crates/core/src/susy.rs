//! Darboux partners of the hyperbolic Pöschl–Teller potential.
//!
//! A single Liouville–Darboux step with a nodeless factorization function
//! (FF) produces a rational partner potential whose eigenfunctions are
//! quantized by "Heun-seed" Heine polynomials: polynomial Wronskian
//! combinations of a Heun polynomial with either a second Heun polynomial
//! (b-type FFs) or a Jacobi-type cofactor (a/a'-type FFs).  Everything here
//! is exact; the only floats appear in `partner_potential_r` and the
//! residual helper, which exist to cross-check the algebra numerically.

use crate::error::{HeunError, Result};
use crate::heun::{
    construct, factor_at_b, factor_at_c, kappa_b, kappa_c, HPTIndex,
};
use crate::poly::{jacobi_polynomial, sturm_count, wronskian, ExactPoly};
use crate::rational::ExactRational;
use crate::spectral::{potential_value_r, AEHForm, Family};
use serde::Serialize;

/// Which nodeless solution seeds the Darboux step.
#[derive(Clone, Debug, Serialize)]
pub enum FFKind {
    /// R@infinity solution at a rational kappa_1 above the c-window,
    /// polynomial part Hp_n[y; kappa_1; s].
    BType { kappa1: ExactRational },
    /// R@O solution at a factorization energy of family a or a',
    /// polynomial part Pi_{2m}(y).
    TPlus { family: Family, m: u32 },
}

/// A validated Darboux seed: the base problem plus the FF in AEH form.
#[derive(Clone, Debug, Serialize)]
pub struct PartnerSpec {
    pub index: HPTIndex,
    pub kind: FFKind,
    pub ff: AEHForm,
}

/// A Heine polynomial together with the scale relating it back to the
/// Wronskian-built polynomial it came from.
#[derive(Clone, Debug, Serialize)]
pub struct HeinePoly {
    pub poly: ExactPoly,
    pub scale: ExactRational,
    pub provenance: String,
}

/// lambda_1 for the a / a' factorization families.
pub fn tplus_lambda1(s: u32, t: u32, family: Family, m: u32) -> Result<ExactRational> {
    let (si, ti, mi) = (s as i64, t as i64, m as i64);
    match family {
        Family::A => Ok(ExactRational::from_int(-(ti + 2 * si + 2 * mi))),
        Family::APrime => {
            if mi <= ti - 1 {
                return Err(HeunError::Domain(format!(
                    "a'-family needs m > t-1; got m={m}, t={t}"
                )));
            }
            Ok(ExactRational::from_int(ti - 2 * mi - 1))
        }
        _ => Err(HeunError::Unsupported(
            "only families a and a' seed t_+ partners".into(),
        )),
    }
}

/// Monic Jacobi polynomial P_m^{(alpha,beta)} mapped to z = (y+1)/2.
fn shifted_monic_jacobi(m: u32, alpha: &ExactRational, beta: &ExactRational) -> Result<ExactPoly> {
    let p = jacobi_polynomial(m, alpha, beta);
    let sub = ExactPoly::from_coeffs(vec![ExactRational::from_int(-1), ExactRational::from_int(2)]);
    let mut acc = ExactPoly::zero();
    let mut pw = ExactPoly::one();
    for c in p.coeffs() {
        acc = &acc + &pw.scale(c);
        pw = &pw * &sub;
    }
    if acc.degree() != m as i64 {
        return Err(HeunError::DegenerateScale(format!(
            "Jacobi cofactor degenerates at m={m}, alpha={alpha}, beta={beta}"
        )));
    }
    Ok(acc.monic())
}

/// Monic degree-m cofactor Pi_m[z] for an a / a' factorization level,
/// the analytic continuation of the b/c-family Jacobi cofactors to
/// negative lambda_1.
pub fn tplus_cofactor(s: u32, t: u32, family: Family, m: u32) -> Result<ExactPoly> {
    let lambda1 = tplus_lambda1(s, t, family, m)?;
    let l0 = HPTIndex::new(s, t)?.lambda0();
    shifted_monic_jacobi(m, &lambda1, &l0)
}

impl PartnerSpec {
    /// b-type seed: the R@infinity AEH solution at kappa_1 > t-1.
    pub fn b_type(s: u32, t: u32, kappa1: &ExactRational) -> Result<Self> {
        if s < 2 {
            return Err(HeunError::Unsupported(
                "b-type partner construction needs s >= 2".into(),
            ));
        }
        let lower = ExactRational::from_int(t as i64 - 1);
        if kappa1 <= &lower {
            return Err(HeunError::Domain(format!(
                "b-type FF needs kappa_1 > t-1 = {lower}; got {kappa1}"
            )));
        }
        let hp = construct(s, t, kappa1)?;
        // Repeated roots of the FF polynomial would raise the pole order of
        // the partner potential.  The only benign repetition is the
        // (y+1)-power that appears when kappa_1 sits at a b-family level.
        let mut rep = hp.poly.repeated_root_part();
        let y_plus_1 = ExactPoly::from_ints(&[1, 1]);
        loop {
            let (q, r) = rep.div_rem(&y_plus_1);
            if !r.is_zero() {
                break;
            }
            rep = q;
        }
        if rep.degree() > 0 {
            return Err(HeunError::InternalInconsistency(format!(
                "FF polynomial at kappa_1={kappa1} has a repeated root away from y = -1"
            )));
        }
        let nodes = sturm_count(&hp.poly, &ExactRational::zero(), &ExactRational::one())?;
        if nodes != 0 {
            return Err(HeunError::Domain(format!(
                "FF at kappa_1={kappa1} has {nodes} nodes in (0,1)"
            )));
        }
        let half = ExactRational::ratio(1, 2);
        Ok(PartnerSpec {
            index: hp.index,
            kind: FFKind::BType { kappa1: kappa1.clone() },
            ff: AEHForm {
                a: ExactRational::from_int(1 - s as i64),
                b: &(ExactRational::one() + kappa1) * &half,
                c: &(ExactRational::one() - kappa1) * &half,
                poly: hp.poly,
                denom: None,
            },
        })
    }

    /// a / a'-type seed: y^s (1-y^2)^{(1+lambda_1)/2} Pi_{2m}(y).
    pub fn t_plus(s: u32, t: u32, family: Family, m: u32) -> Result<Self> {
        let lambda1 = tplus_lambda1(s, t, family, m)?;
        let pi_z = tplus_cofactor(s, t, family, m)?;
        let nodes = sturm_count(&pi_z, &ExactRational::zero(), &ExactRational::one())?;
        if nodes != 0 {
            return Err(HeunError::InternalInconsistency(format!(
                "t_+ cofactor (family {family:?}, m={m}) has {nodes} nodes in (0,1)"
            )));
        }
        let half = ExactRational::ratio(1, 2);
        let exp = &(ExactRational::one() + &lambda1) * &half;
        Ok(PartnerSpec {
            index: HPTIndex::new(s, t)?,
            kind: FFKind::TPlus { family, m },
            ff: AEHForm {
                a: ExactRational::from_int(s as i64),
                b: exp.clone(),
                c: exp,
                poly: pi_z.compose_square(),
                denom: None,
            },
        })
    }

    /// The FF in the Schrödinger picture: psi_FF = (1-y^2)^{-1/2} ff(y).
    pub fn schrodinger_ff(&self) -> AEHForm {
        let half = ExactRational::ratio(1, 2);
        AEHForm {
            a: self.ff.a.clone(),
            b: &self.ff.b - &half,
            c: &self.ff.c - &half,
            poly: self.ff.poly.clone(),
            denom: self.ff.denom.clone(),
        }
    }

    /// Partner potential  ^1V(r) = V(r) - 2 (ln psi_FF)'' evaluated at r > 0.
    pub fn partner_potential_r(&self, r: f64) -> Result<f64> {
        let base = potential_value_r(self.index.s, self.index.t, r)?;
        let psi = self.schrodinger_ff();
        let y = r.tanh();
        let w = 1.0 - y * y;
        let g = psi.log_derivative_y(y);
        let gp = psi.log_derivative_prime_y(y);
        // d^2/dr^2 ln psi = (1-y^2) [ -2y g + (1-y^2) g' ]
        Ok(base - 2.0 * w * (-2.0 * y * g + w * gp))
    }
}

/// Pointwise Schrödinger residual psi''/psi - V + energy for an AEH
/// wavefunction given in the equation picture (the (1-y^2)^{-1/2} weight is
/// applied internally).
pub fn partner_residual(spec: &PartnerSpec, phi: &AEHForm, energy: f64, r: f64) -> Result<f64> {
    let half = ExactRational::ratio(1, 2);
    let psi = AEHForm {
        a: phi.a.clone(),
        b: &phi.b - &half,
        c: &phi.c - &half,
        poly: phi.poly.clone(),
        denom: phi.denom.clone(),
    };
    let y = r.tanh();
    let w = 1.0 - y * y;
    let g = psi.log_derivative_y(y);
    let gp = psi.log_derivative_prime_y(y);
    let l1 = w * g;
    let l2 = w * (-2.0 * y * g + w * gp);
    Ok(l2 + l1 * l1 - spec.partner_potential_r(r)? + energy)
}

/// The degree-(2n+1) Wronskian polynomial pairing two Heun polynomials of
/// the same shape at distinct kappa:
///
///   ^1P = (1-y^2) W{Hp(kappa_1), Hp(kappa)} + (kappa_1-kappa) Hp(kappa_1) Hp(kappa).
pub fn first_polynomial(
    s: u32,
    t: u32,
    kappa: &ExactRational,
    kappa1: &ExactRational,
) -> Result<ExactPoly> {
    let hp1 = construct(s, t, kappa1)?;
    let hp = construct(s, t, kappa)?;
    let one_minus_y2 = ExactPoly::from_ints(&[1, 0, -1]);
    Ok(&(&one_minus_y2 * &wronskian(&hp1.poly, &hp.poly))
        + &(&hp1.poly * &hp.poly).scale(&(kappa1 - kappa)))
}

/// Heine polynomial of the b-type partner: Hi = ^1P / ((kappa_1-kappa) y).
///
/// The determinant's two leading orders cancel (the y^{n-1} coefficient of
/// every Hp_n is kappa), so ^1P has degree 2n-1 and Hi degree 2n-2.
pub fn heine_from_kappa1(
    s: u32,
    t: u32,
    kappa: &ExactRational,
    kappa1: &ExactRational,
) -> Result<HeinePoly> {
    if s < 2 {
        return Err(HeunError::Unsupported(
            "the y-divisibility of ^1P fails at s = 1".into(),
        ));
    }
    if kappa == kappa1 {
        return Err(HeunError::DegenerateScale(
            "kappa = kappa_1 collapses the Wronskian pairing".into(),
        ));
    }
    let n = HPTIndex::new(s, t)?.n() as i64;
    // ^1P(0) = 0 rests on Hp'(0) = kappa Hp(0), which the ODE forces at s >= 2.
    for k in [kappa, kappa1] {
        let hp = construct(s, t, k)?;
        if hp.poly.coeff(1) != k * &hp.poly.coeff(0) {
            return Err(HeunError::IdentityViolation(format!(
                "Hp'(0) != kappa Hp(0) at kappa={k}"
            )));
        }
    }
    let p = first_polynomial(s, t, kappa, kappa1)?;
    if !p.eval(&ExactRational::zero()).is_zero() {
        return Err(HeunError::IdentityViolation("^1P(0) != 0".into()));
    }
    let hi = p
        .div_exact_y_power(1, "heine_from_kappa1")?
        .scale(&(kappa1 - kappa).recip());
    if hi.degree() != 2 * n - 2 {
        return Err(HeunError::IdentityViolation(format!(
            "Heine degree {} != 2n-2 = {}",
            hi.degree(),
            2 * n - 2
        )));
    }
    Ok(HeinePoly {
        scale: hi.leading(),
        poly: hi,
        provenance: format!("two-kappa Wronskian, kappa={kappa}, kappa_1={kappa1}"),
    })
}

/// The one-level Wronskian polynomial of the b-type partner:
///
///   ^1P_{n+2v} = y(1-y^2) W{Hp(kappa_1), Pi_{2v}}
///              + [(2s-1) + kappa_1 y - (n-2v) y^2] Hp(kappa_1) Pi_{2v},
///
/// whose formal degree n+2v+2 drops by two exactly.
fn level_polynomial(
    s: u32,
    t: u32,
    kappa1: &ExactRational,
    v: u32,
) -> Result<(ExactPoly, ExactPoly, ExactPoly)> {
    let idx = HPTIndex::new(s, t)?;
    let n = idx.n() as i64;
    let hp1 = construct(s, t, kappa1)?;
    let pi_2v = factor_at_c(s, t, v)?.compose_square();
    let y_one_minus_y2 = ExactPoly::from_ints(&[0, 1, 0, -1]);
    let bracket = ExactPoly::from_coeffs(vec![
        ExactRational::from_int(2 * s as i64 - 1),
        kappa1.clone(),
        ExactRational::from_int(-(n - 2 * v as i64)),
    ]);
    let p = &(&y_one_minus_y2 * &wronskian(&hp1.poly, &pi_2v))
        + &(&bracket * &(&hp1.poly * &pi_2v));
    Ok((p, hp1.poly, pi_2v))
}

/// The v-th eigenfunction of the b-type partner problem, returned as the
/// monic Heine polynomial plus the AEH wavefunction
///
///   phi_{c,v} = y^{s-1} (1-y^2)^{(1+kappa_{c,v})/2} ^1P_{n+2v} / Hp_n(kappa_1).
pub fn partner_eigenfunction(
    s: u32,
    t: u32,
    kappa1: &ExactRational,
    v: u32,
) -> Result<(HeinePoly, AEHForm)> {
    let spec = PartnerSpec::b_type(s, t, kappa1)?;
    let n = spec.index.n() as i64;
    let kc = kappa_c(t, v);
    if !kc.is_positive() {
        return Err(HeunError::Domain(format!(
            "level v={v} is not bound for t={t}"
        )));
    }
    let (p, hp1, _) = level_polynomial(s, t, kappa1, v)?;
    if p.degree() != n + 2 * v as i64 {
        return Err(HeunError::IdentityViolation(format!(
            "^1P degree {} != n+2v = {}",
            p.degree(),
            n + 2 * v as i64
        )));
    }
    let nu = p.leading();
    let half = ExactRational::ratio(1, 2);
    let exp = &(ExactRational::one() + &kc) * &half;
    let phi = AEHForm {
        a: ExactRational::from_int(s as i64 - 1),
        b: exp.clone(),
        c: exp,
        poly: p.clone(),
        denom: Some(hp1),
    };
    Ok((
        HeinePoly {
            poly: p.monic(),
            scale: nu,
            provenance: format!("level v={v} at kappa_1={kappa1}"),
        },
        phi,
    ))
}

/// Exact bookkeeping of the level-v generator identity.
#[derive(Clone, Debug, Serialize)]
pub struct GeneratorReport {
    /// Leading coefficient of ^1P_{n+2v}; the scale turning the monic Heine
    /// polynomial back into the Wronskian build.
    pub nu: ExactRational,
    /// Leading coefficient of the degree-n operator polynomial p_n.
    pub p_nn: ExactRational,
    pub degree: i64,
}

/// Verifies, exactly, that the two operator representations of the level
/// generator agree with the Wronskian build and that the closed-form scale
/// matches the observed leading coefficient.
pub fn qhip_generator_identity(
    s: u32,
    t: u32,
    kappa1: &ExactRational,
    v: u32,
) -> Result<GeneratorReport> {
    let idx = HPTIndex::new(s, t)?;
    let n = idx.n() as i64;
    let vi = v as i64;
    let (p, hp1, pi_2v) = level_polynomial(s, t, kappa1, v)?;

    // Direct operator form: Hp_n inside, acting on Pi_{2v}.
    let y_one_minus_y2 = ExactPoly::from_ints(&[0, 1, 0, -1]);
    let bracket = ExactPoly::from_coeffs(vec![
        ExactRational::from_int(2 * s as i64 - 1),
        kappa1.clone(),
        ExactRational::from_int(-(n - 2 * vi)),
    ]);
    let g_direct = &(&hp1 * &(&(&y_one_minus_y2 * &pi_2v.derivative()) + &(&bracket * &pi_2v)))
        - &(&(&y_one_minus_y2 * &hp1.derivative()) * &pi_2v);
    if g_direct != p {
        return Err(HeunError::IdentityViolation(
            "generator (direct form) disagrees with the Wronskian build".into(),
        ));
    }

    // Alternative form through the degree-n polynomial p_n.
    let bracket_n = ExactPoly::from_coeffs(vec![
        ExactRational::from_int(2 * s as i64 - 1),
        kappa1.clone(),
        ExactRational::from_int(-n),
    ]);
    let p_n = &(&bracket_n * &hp1) - &(&y_one_minus_y2 * &hp1.derivative());
    let two_v_y2 = ExactPoly::from_coeffs(vec![
        ExactRational::zero(),
        ExactRational::zero(),
        ExactRational::from_int(2 * vi),
    ]);
    let g_star = &(&hp1 * &(&(&y_one_minus_y2 * &pi_2v.derivative()) + &(&two_v_y2 * &pi_2v)))
        + &(&p_n * &pi_2v);
    if g_star != p {
        return Err(HeunError::IdentityViolation(
            "generator (p_n form) disagrees with the Wronskian build".into(),
        ));
    }

    let denom = ExactRational::from_int(2 * n - 2 * s as i64 + 1);
    let p_nn = &(kappa1 * kappa1 - ExactRational::from_int((n - 2 * s as i64 + 1).pow(2)))
        / &denom;
    if p_n.degree() != n || p_n.leading() != p_nn {
        return Err(HeunError::IdentityViolation(
            "p_n leading coefficient mismatch".into(),
        ));
    }

    // Two closed forms of the scale; both must equal the observed leading.
    let nu_prime = ExactRational::from_int(2 * vi)
        + &(kappa1 * kappa1
            - ExactRational::from_int(
                (n - 2 * s as i64 + 1).pow(2) + 2 * vi * (2 * s as i64 + 2 * vi - 1),
            ))
            / &denom;
    let mu0 = idx.mu0();
    let l0 = idx.lambda0();
    let nu_mu = &(&ExactRational::from_int(2 * vi)
        * &(&(&mu0 - &l0) - &ExactRational::from_int(vi + 1)))
        / &(&mu0 - &ExactRational::one())
        + &p_nn;
    if nu_prime != nu_mu {
        return Err(HeunError::InternalInconsistency(
            "the two scale closed forms disagree".into(),
        ));
    }
    if p.degree() != n + 2 * vi || p.leading() != nu_prime {
        return Err(HeunError::IdentityViolation(format!(
            "scale mismatch: leading {} vs closed form {}",
            p.leading(),
            nu_prime
        )));
    }
    Ok(GeneratorReport {
        nu: nu_prime,
        p_nn,
        degree: p.degree(),
    })
}

/// The pairing scale coupling a b-level-m seed with a c-level-v target:
///
///   cup = [ v (mu_0-lambda_0-v-1) + (lambda_0-m)(mu_0-m-1) ] / (mu_0 - 1).
pub fn cup(s: u32, t: u32, m: u32, v: u32) -> Result<ExactRational> {
    let idx = HPTIndex::new(s, t)?;
    let mu0 = idx.mu0();
    let l0 = idx.lambda0();
    let (mi, vi) = (m as i64, v as i64);
    let num = &(&ExactRational::from_int(vi)
        * &(&(&mu0 - &l0) - &ExactRational::from_int(vi + 1)))
        + &(&(&l0 - &ExactRational::from_int(mi))
            * &(&mu0 - &ExactRational::from_int(mi + 1)));
    Ok(&num / &(&mu0 - &ExactRational::one()))
}

/// Ground-seed Heine polynomial in z = y^2, built from the two Jacobi
/// cofactors alone:
///
///   cup * Hi_{m+v}[z] = z(1-z) W{Pi_m(b), Pi_v(c)} + [lambda_0-(m-v)z] Pi_m Pi_v,
///
/// and certified against the continuous-kappa_1 machinery specialized at
/// kappa_1 = kappa_{b,m} through the exact identity
///
///   Hi_{n+2v}(kappa_{b,m}) = (y+1)^{n-2m} Hi_{m+v}[y^2].
pub fn gs_qhip(s: u32, t: u32, m: u32, v: u32) -> Result<HeinePoly> {
    let idx = HPTIndex::new(s, t)?;
    let n = idx.n() as i64;
    if 2 * m as i64 + 1 >= 2 * s as i64 {
        return Err(HeunError::Domain(format!(
            "m={m} outside the b-family window m < s - 1/2 for s={s}"
        )));
    }
    let pi_b = factor_at_b(s, t, m)?;
    let pi_c = factor_at_c(s, t, v)?;
    let z_one_minus_z = ExactPoly::from_ints(&[0, 1, -1]);
    let lin = ExactPoly::from_coeffs(vec![
        idx.lambda0(),
        ExactRational::from_int(-(m as i64 - v as i64)),
    ]);
    let raw = &(&z_one_minus_z * &wronskian(&pi_b, &pi_c)) + &(&lin * &(&pi_b * &pi_c));
    let u = cup(s, t, m, v)?;
    if u.is_zero() {
        return Err(HeunError::DegenerateScale(format!(
            "cup(s={s}, t={t}, m={m}, v={v}) = 0"
        )));
    }
    let hi = raw.scale(&u.recip());
    if hi.degree() != (m + v) as i64 {
        return Err(HeunError::IdentityViolation(format!(
            "ground-seed Heine degree {} != m+v = {}",
            hi.degree(),
            m + v
        )));
    }
    // Cross-check against the Wronskian build at kappa_1 = kappa_{b,m}.
    let kb = kappa_b(s, t, m);
    let (heine_bv, _) = partner_eigenfunction(s, t, &kb, v)?;
    let mut lifted = hi.compose_square();
    let y_plus_1 = ExactPoly::from_ints(&[1, 1]);
    for _ in 0..(n - 2 * m as i64) {
        lifted = &lifted * &y_plus_1;
    }
    if lifted != heine_bv.poly {
        return Err(HeunError::IdentityViolation(
            "ground-seed Heine disagrees with the continuous-kappa_1 build".into(),
        ));
    }
    // The scale of the Wronskian build must be exactly twice cup.
    if heine_bv.scale != &ExactRational::from_int(2) * &u {
        return Err(HeunError::IdentityViolation(
            "nu(kappa_{b,m}) != 2 cup".into(),
        ));
    }
    Ok(HeinePoly {
        poly: hi,
        scale: u,
        provenance: format!("ground-seed pairing m={m}, v={v}"),
    })
}

/// G_{m+1}[z; rho_0, rho_1] = z(1-z) Pi' + (rho_0(1-z) - rho_1 z)/2 * Pi.
fn g_poly(rho0: &ExactRational, rho1: &ExactRational, pi: &ExactPoly) -> ExactPoly {
    let z_one_minus_z = ExactPoly::from_ints(&[0, 1, -1]);
    let half = ExactRational::ratio(1, 2);
    let lin = ExactPoly::from_coeffs(vec![rho0 * &half, &(-(rho0 + rho1)) * &half]);
    &(&z_one_minus_z * &pi.derivative()) + &(&lin * pi)
}

/// The polynomial determinant pairing an a / a' seed with Hp_n(kappa):
///
///   PD = Pi_{2m}(y) H_{n+2} - 2 G_{m+1}[y^2] Hp_n(kappa),
///   H_{n+2} = y [(1-y^2) Hp' - kappa Hp] + (1-s)(1-y^2) Hp.
pub fn tplus_pd(
    s: u32,
    t: u32,
    family: Family,
    m: u32,
    kappa: &ExactRational,
) -> Result<ExactPoly> {
    let lambda1 = tplus_lambda1(s, t, family, m)?;
    let pi_z = tplus_cofactor(s, t, family, m)?;
    let idx = HPTIndex::new(s, t)?;
    let n = idx.n() as i64;
    let hp = construct(s, t, kappa)?;
    let one_minus_y2 = ExactPoly::from_ints(&[1, 0, -1]);
    let p_next = &(&one_minus_y2 * &hp.poly.derivative()) - &hp.poly.scale(kappa);
    let h_next = &(&ExactPoly::y() * &p_next)
        + &(&one_minus_y2 * &hp.poly).scale(&ExactRational::from_int(1 - s as i64));
    if h_next.leading() != ExactRational::from_int(s as i64 - 1 - n) {
        return Err(HeunError::IdentityViolation(
            "H_{n+2} leading coefficient mismatch".into(),
        ));
    }
    let g = g_poly(&ExactRational::from_int(s as i64), &lambda1, &pi_z);
    let half = ExactRational::ratio(1, 2);
    let g_lead = &(-(&ExactRational::from_int(s as i64) + &lambda1)) * &half
        - ExactRational::from_int(m as i64);
    if g.leading() != g_lead {
        return Err(HeunError::IdentityViolation(
            "G_{m+1} leading coefficient mismatch".into(),
        ));
    }
    Ok(&(&pi_z.compose_square() * &h_next) - &(&g.compose_square() * &hp.poly).scale(&ExactRational::from_int(2)))
}

/// One a / a'-type partner level: the Heine polynomial dividing the PD and
/// the R@infinity AEH solution
///
///   phi = y^{-s} (1-y)^{(1+kappa)/2} (1+y)^{(1-kappa)/2} ^1P / Pi_{2m}.
///
/// For family a the PD has degree n+2m+2 with leading coefficient
/// 1-2t-2s, equal to the closed-form scale, so the Heine polynomial is
/// monic of that degree.  For family a' both the closed-form leading and
/// the scale vanish; the PD then drops two orders (degree n+2m) and the
/// Heine polynomial is its monic normalization.
pub fn aprime_partner(
    s: u32,
    t: u32,
    family: Family,
    m: u32,
    kappa: &ExactRational,
) -> Result<(HeinePoly, AEHForm)> {
    if !kappa.is_positive() {
        return Err(HeunError::Domain(format!("kappa={kappa} must be positive")));
    }
    let idx = HPTIndex::new(s, t)?;
    let n = idx.n() as i64;
    let pd = tplus_pd(s, t, family, m, kappa)?;
    let (expected_degree, scale) = match family {
        Family::A => {
            // -(kappa_{c,0} + kappa_{a,0}) = 1 - 2t - 2s, independent of m.
            let lead = ExactRational::from_int(1 - 2 * t as i64 - 2 * s as i64);
            (n + 2 * m as i64 + 2, lead)
        }
        Family::APrime => (n + 2 * m as i64, pd.leading()),
        _ => unreachable!("tplus_pd rejects other families"),
    };
    if pd.degree() != expected_degree {
        return Err(HeunError::IdentityViolation(format!(
            "PD degree {} != {}",
            pd.degree(),
            expected_degree
        )));
    }
    if matches!(family, Family::A) && pd.leading() != scale {
        return Err(HeunError::IdentityViolation(format!(
            "PD leading {} != closed form {}",
            pd.leading(),
            scale
        )));
    }
    let hi = pd.scale(&scale.recip());
    let pi_2m = tplus_cofactor(s, t, family, m)?.compose_square();
    let half = ExactRational::ratio(1, 2);
    let phi = AEHForm {
        a: ExactRational::from_int(-(s as i64)),
        b: &(ExactRational::one() + kappa) * &half,
        c: &(ExactRational::one() - kappa) * &half,
        poly: hi.clone(),
        denom: Some(pi_2m),
    };
    Ok((
        HeinePoly {
            poly: hi,
            scale,
            provenance: format!("t_+ determinant, family {family:?}, m={m}, kappa={kappa}"),
        },
        phi,
    ))
}

/// The z-domain cofactor that the a-family Heine polynomial reduces to at
/// kappa = kappa_{c,v}:
///
///   Hi(kappa_{c,v}) = y^{2s-1} (y+1)^{t-2v-1} C[y^2],
///   C[z] = G_{m+1}[z; s, -kappa_{a,m}] Pi_v(c) - G_{v+1}[z; s, kappa_{c,v}] Pi_m(a),
///
/// of degree m+v+1: the two products share that degree and their leadings
/// cannot cancel, since the full Heine polynomial keeps its kappa-independent
/// leading coefficient.
pub fn tplus_level_cofactor(
    s: u32,
    t: u32,
    family: Family,
    m: u32,
    v: u32,
) -> Result<ExactPoly> {
    let lambda1 = tplus_lambda1(s, t, family, m)?;
    let pi_m = tplus_cofactor(s, t, family, m)?;
    let pi_v = factor_at_c(s, t, v)?;
    let kc = kappa_c(t, v);
    let g_m = g_poly(&ExactRational::from_int(s as i64), &lambda1, &pi_m);
    let g_v = g_poly(&ExactRational::from_int(s as i64), &kc, &pi_v);
    Ok(&(&g_m * &pi_v) - &(&g_v * &pi_m))
}

#[derive(Clone, Debug, Serialize)]
pub struct ShapeInvarianceReport {
    /// The c-ladder keeps the Heun polynomial order fixed, so the b-type
    /// partner retains its analytic form level to level.
    pub c_ladder_preserves_order: bool,
    /// deg Hi_{n+2v} - deg Hi_{n+2(v-1)} across consecutive bound levels.
    pub heine_degree_step: i64,
    /// Degree of the base-case a-family cofactor Hi_{m+1} at v=0 — one more
    /// than the seed cofactor, so the a / a' partner chain is NOT
    /// shape-invariant.
    pub tplus_base_degree: i64,
    pub tplus_order_preserved: bool,
}

pub fn shape_invariance_report(s: u32, t: u32) -> Result<ShapeInvarianceReport> {
    if s < 2 {
        return Err(HeunError::Unsupported("needs s >= 2".into()));
    }
    // c-ladder order preservation on a sample Heun polynomial.
    let kappa = ExactRational::ratio(7, 3);
    let hp = construct(s, t.max(2), &kappa)?;
    let stepped = crate::heun::ladder_c(&hp)?;
    let c_ok = stepped.poly.degree() == hp.poly.degree();

    // Heine degree arithmetic across bound levels at a generic kappa_1.
    let kappa1 = ExactRational::from_int(t as i64 + 2);
    let mut step = 2;
    let mut prev: Option<i64> = None;
    let mut v = 0;
    while kappa_c(t, v).is_positive() {
        let (hi, _) = partner_eigenfunction(s, t, &kappa1, v)?;
        if let Some(d) = prev {
            step = hi.poly.degree() - d;
            if step != 2 {
                break;
            }
        }
        prev = Some(hi.poly.degree());
        v += 1;
    }

    // a-family base case: the v=0 cofactor has degree m+1, not m.
    let m = 1u32;
    let base = tplus_level_cofactor(s, t, Family::A, m, 0)?;
    Ok(ShapeInvarianceReport {
        c_ladder_preserves_order: c_ok,
        heine_degree_step: step,
        tplus_base_degree: base.degree(),
        tplus_order_preserved: base.degree() == m as i64,
    })
}
