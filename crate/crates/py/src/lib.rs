//! Python bindings for the exact Heun-polynomial ladder library.
//!
//! Exact rationals cross the boundary as "p/q" strings; floating-point
//! diagnostics come back as plain floats.

use heun_core::error::HeunError;
use heun_core::heun::{
    boundary_closed_form, construct, factor_at_b, factor_at_c, heun_residual, kappa_b, kappa_c,
    zeros_in_unit_interval, HPTIndex,
};
use heun_core::numeric::{fd_spectrum, RadialGrid};
use heun_core::rational::ExactRational;
use heun_core::spectral::{bound_states, potential_value_r, Family};
use heun_core::susy::{
    aprime_partner, heine_from_kappa1, partner_eigenfunction, partner_residual, PartnerSpec,
};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: HeunError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_rational(text: &str) -> PyResult<ExactRational> {
    let int = |p: &str| {
        p.trim()
            .parse::<i64>()
            .map_err(|_| PyValueError::new_err(format!("invalid rational {text:?}")))
    };
    match text.split_once('/') {
        None => Ok(ExactRational::from_int(int(text)?)),
        Some((p, q)) => {
            let q = int(q)?;
            if q == 0 {
                return Err(PyValueError::new_err("zero denominator"));
            }
            Ok(ExactRational::ratio(int(p)?, q))
        }
    }
}

fn coeff_strings(p: &heun_core::poly::ExactPoly) -> Vec<String> {
    p.coeffs().iter().map(|c| c.to_string()).collect()
}

fn parse_family(name: &str) -> PyResult<Family> {
    match name {
        "a" => Ok(Family::A),
        "aprime" | "a'" => Ok(Family::APrime),
        other => Err(PyValueError::new_err(format!(
            "family must be 'a' or 'aprime', got {other:?}"
        ))),
    }
}

/// Exact coefficients of the degree-n polynomial, low order first,
/// as "p/q" strings.
#[pyfunction]
fn hp_coefficients(s: u32, t: u32, kappa: &str) -> PyResult<Vec<String>> {
    let k = parse_rational(kappa)?;
    let hp = construct(s, t, &k).map_err(err)?;
    if !heun_residual(&hp).is_zero() {
        return Err(PyValueError::new_err("defining-equation residual is nonzero"));
    }
    Ok(coeff_strings(&hp.poly))
}

/// Exact value of the polynomial at y = 1 from the closed form.
#[pyfunction]
fn hp_boundary_value(s: u32, t: u32, kappa: &str) -> PyResult<String> {
    let idx = HPTIndex::new(s, t).map_err(err)?;
    Ok(boundary_closed_form(idx, &parse_rational(kappa)?).to_string())
}

/// Number of zeros in the open interval (0, 1), counted by Sturm sequences.
#[pyfunction]
fn hp_zero_count(s: u32, t: u32, kappa: &str) -> PyResult<usize> {
    let hp = construct(s, t, &parse_rational(kappa)?).map_err(err)?;
    zeros_in_unit_interval(&hp).map_err(err)
}

/// Factorization-point energy parameters: c family t - 2v - 1,
/// b family t + 2(s - m - 1).
#[pyfunction]
fn kappa_c_point(t: u32, v: u32) -> String {
    kappa_c(t, v).to_string()
}

#[pyfunction]
fn kappa_b_point(s: u32, t: u32, m: u32) -> String {
    kappa_b(s, t, m).to_string()
}

/// Even cofactor at the c-family point, coefficients in z = y^2.
#[pyfunction]
fn cofactor_c(s: u32, t: u32, v: u32) -> PyResult<Vec<String>> {
    Ok(coeff_strings(&factor_at_c(s, t, v).map_err(err)?))
}

/// Even cofactor at the b-family point, coefficients in z = y^2.
#[pyfunction]
fn cofactor_b(s: u32, t: u32, m: u32) -> PyResult<Vec<String>> {
    Ok(coeff_strings(&factor_at_b(s, t, m).map_err(err)?))
}

/// Bound-state table [(v, kappa_v, energy)] with exact strings.
#[pyfunction]
fn bound_state_table(s: u32, t: u32) -> PyResult<Vec<(u32, String, String)>> {
    Ok(bound_states(s, t)
        .map_err(err)?
        .into_iter()
        .map(|b| (b.v, b.kappa_v.to_string(), b.energy.to_string()))
        .collect())
}

/// V_{s,t}(r) as a float.
#[pyfunction]
fn potential(s: u32, t: u32, r: f64) -> PyResult<f64> {
    potential_value_r(s, t, r).map_err(err)
}

/// Partner potential of the b-type seed at kappa1, as a float.
#[pyfunction]
fn partner_potential(s: u32, t: u32, kappa1: &str, r: f64) -> PyResult<f64> {
    let spec = PartnerSpec::b_type(s, t, &parse_rational(kappa1)?).map_err(err)?;
    spec.partner_potential_r(r).map_err(err)
}

/// Coefficients of the partner-quantizing polynomial built from the
/// Wronskian of seeds at kappa and kappa1.
#[pyfunction]
fn heine_coefficients(s: u32, t: u32, kappa: &str, kappa1: &str) -> PyResult<Vec<String>> {
    let h = heine_from_kappa1(s, t, &parse_rational(kappa)?, &parse_rational(kappa1)?)
        .map_err(err)?;
    Ok(coeff_strings(&h.poly))
}

/// Numerator coefficients and worst relative residual of the level-v
/// partner eigenfunction for the b-type seed at kappa1.
#[pyfunction]
fn partner_level(s: u32, t: u32, kappa1: &str, v: u32) -> PyResult<(Vec<String>, f64)> {
    let k1 = parse_rational(kappa1)?;
    let spec = PartnerSpec::b_type(s, t, &k1).map_err(err)?;
    let (hi, phi) = partner_eigenfunction(s, t, &k1, v).map_err(err)?;
    let kc = kappa_c(t, v);
    if !kc.is_positive() {
        return Err(PyValueError::new_err(format!("level v={v} is not bound")));
    }
    let energy = -(&kc * &kc).to_f64();
    let mut worst = 0.0f64;
    for i in 0..50 {
        let r = 0.1 + 7.9 * (i as f64 + 0.5) / 50.0;
        let res = partner_residual(&spec, &phi, energy, r).map_err(err)?;
        let scale = spec.partner_potential_r(r).map_err(err)?.abs().max(1.0);
        worst = worst.max((res / scale).abs());
    }
    Ok((coeff_strings(&hi.poly), worst))
}

/// Quantizing polynomial of the t-plus partner (family "a" or "aprime")
/// at the given kappa: (coefficients, scale).
#[pyfunction]
fn tplus_quantizer(s: u32, t: u32, family: &str, m: u32, kappa: &str) -> PyResult<(Vec<String>, String)> {
    let f = parse_family(family)?;
    let (hi, _) = aprime_partner(s, t, f, m, &parse_rational(kappa)?).map_err(err)?;
    Ok((coeff_strings(&hi.poly), hi.scale.to_string()))
}

/// Finite-difference spectrum with Richardson extrapolation:
/// (extrapolated eigenvalues, exact references, absolute errors).
#[pyfunction]
#[pyo3(signature = (s, t, r_max=14.0, points=8000))]
fn spectrum(s: u32, t: u32, r_max: f64, points: usize) -> PyResult<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let refs: Vec<f64> = bound_states(s, t)
        .map_err(err)?
        .iter()
        .map(|b| b.energy.to_f64())
        .collect();
    if refs.is_empty() {
        return Err(PyValueError::new_err("no bound states"));
    }
    let grid = RadialGrid::new(0.0, r_max, points).map_err(err)?;
    let report = fd_spectrum(|r| potential_value_r(s, t, r).unwrap(), grid, refs.len(), &refs);
    Ok((report.richardson, report.reference, report.errors))
}

#[pymodule]
fn heun_ladder(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(hp_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(hp_boundary_value, m)?)?;
    m.add_function(wrap_pyfunction!(hp_zero_count, m)?)?;
    m.add_function(wrap_pyfunction!(kappa_c_point, m)?)?;
    m.add_function(wrap_pyfunction!(kappa_b_point, m)?)?;
    m.add_function(wrap_pyfunction!(cofactor_c, m)?)?;
    m.add_function(wrap_pyfunction!(cofactor_b, m)?)?;
    m.add_function(wrap_pyfunction!(bound_state_table, m)?)?;
    m.add_function(wrap_pyfunction!(potential, m)?)?;
    m.add_function(wrap_pyfunction!(partner_potential, m)?)?;
    m.add_function(wrap_pyfunction!(heine_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(partner_level, m)?)?;
    m.add_function(wrap_pyfunction!(tplus_quantizer, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum, m)?)?;
    Ok(())
}
