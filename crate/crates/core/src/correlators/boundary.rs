//! Twist operators with boundary curves: SLE, double SLE and the percolation
//! six-point function.

use num_complex::Complex64;

use super::check_kappa;
use crate::error::{Error, Result};

fn check_off_cut(x: Complex64, what: &'static str) -> Result<()> {
    if !(x.re.is_finite() && x.im.is_finite()) {
        return Err(Error::domain(what, format!("non-finite argument {x}")));
    }
    if x.im == 0.0 && x.re >= 1.0 {
        return Err(Error::domain(what, format!("x = {x} lies on the cut [1, ∞)")));
    }
    Ok(())
}

fn check_angle(v: f64, what: &'static str) -> Result<()> {
    if (0.0..=std::f64::consts::PI).contains(&v) {
        Ok(())
    } else {
        Err(Error::domain(what, format!("v = {v} is outside [0, π]")))
    }
}

/// F(x) = (2-x)/(2√(1-x)) for one twist and an SLE, principal branch.
pub fn boundary_single_twist(x: Complex64) -> Result<Complex64> {
    check_off_cut(x, "boundary_single_twist")?;
    Ok((2.0 - x) / (2.0 * (1.0 - x).sqrt()))
}

/// The single-twist correlator in the strip, normalized: cos v.
pub fn single_twist_strip(v: f64) -> Result<f64> {
    check_angle(v, "single_twist_strip")?;
    Ok(v.cos())
}

fn double_ratio(kappa: f64) -> Result<f64> {
    check_kappa(kappa, "boundary_double_twist")?;
    if kappa == 6.0 {
        return Err(Error::domain("boundary_double_twist", "(8-κ)/(6-κ) has a pole at κ = 6"));
    }
    Ok((8.0 - kappa) / (6.0 - kappa))
}

/// F(x) = 1 + ((8-κ)/(6-κ))·x²/(4(1-x)) for one twist and a double SLE.
pub fn boundary_double_twist(x: Complex64, kappa: f64) -> Result<Complex64> {
    let r = double_ratio(kappa)?;
    check_off_cut(x, "boundary_double_twist")?;
    Ok(1.0 + r * x * x / (4.0 * (1.0 - x)))
}

/// The double-twist correlator in the strip: 1 - ((8-κ)/(6-κ))·sin²v.
pub fn double_twist_strip(v: f64, kappa: f64) -> Result<f64> {
    let r = double_ratio(kappa)?;
    check_angle(v, "double_twist_strip")?;
    Ok(1.0 - r * v.sin().powi(2))
}

/// Probability at κ = 8/3 that the point lies between the two curves of a
/// double SLE: (4/5)sin²v.
pub fn double_sle_between_prob(v: f64) -> Result<f64> {
    Ok(0.5 * (1.0 - double_twist_strip(v, 8.0 / 3.0)?))
}

/// Schramm's left-passage probability at κ = 8/3: cos²(v/2).
pub fn schramm_left_passage(v: f64) -> Result<f64> {
    check_angle(v, "schramm_left_passage")?;
    Ok((0.5 * v).cos().powi(2))
}

/// Percolation six-point function with a bulk point z and boundary points
/// x1 < x2 < x3 < x4.
pub fn percolation_6pt(z: Complex64, x: [f64; 4]) -> Result<f64> {
    if !(z.im > 0.0) || !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::domain("percolation_6pt", format!("{z} is not in the open upper half-plane")));
    }
    if !x.iter().all(|v| v.is_finite()) || !x.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::domain("percolation_6pt", format!("need x1 < x2 < x3 < x4, got {x:?}")));
    }
    let mut num = z.im.powf(0.75);
    for j in 0..4 {
        for i in 0..j {
            num *= (x[j] - x[i]).cbrt();
        }
    }
    let den: f64 = x.iter().map(|&xi| (z - xi).norm()).product();
    Ok(num / den)
}
