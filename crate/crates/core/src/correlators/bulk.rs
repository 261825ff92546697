//! Bulk four-point function of two twists and two 2-leg operators, and the
//! self-avoiding loop probabilities at κ = 8/3.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{check_kappa, cpow};
use crate::error::{Error, Result};
use crate::geometry::{cross_ratio, Point};
use crate::special::{gamma_real, hyp2f1, Hyp2F1Params};

/// Offset used to evaluate at real x > 1: x is replaced by x + iε.
pub const CUT_EPSILON: f64 = 1e-8;

/// 4Γ(2/3)⁶ / (Γ(4/3)²Γ(1/3)⁴), the weight of the second block at κ = 8/3.
pub const SAL_K: f64 = 0.600_433_555_490_935_6;

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn diff(a: Complex64, b: Complex64) -> Result<Complex64> {
    let d = a - b;
    if d.norm() == 0.0 {
        Err(Error::domain("bulk correlator", "coincident points: the correlator diverges"))
    } else {
        Ok(d)
    }
}

/// Holomorphic half of the bracket in the four-point function, at x.
fn bracket_terms(x: Complex64, kappa: f64) -> Result<(Complex64, Complex64)> {
    let k = kappa;
    let p1 = Hyp2F1Params::new(-k / 4.0, (4.0 - k) / 4.0, (4.0 - k) / 2.0)?;
    let p2 = Hyp2F1Params::new((k - 4.0) / 4.0, k / 4.0, k / 2.0)?;
    let first = hyp2f1(&p1, x)?;
    let second = cpow(x, k / 2.0 - 1.0)? * hyp2f1(&p2, x)?;
    Ok((first, second))
}

/// Sewn holomorphic × antiholomorphic value of the twist / 2-leg four-point
/// function. The imaginary part is rounding noise; see [`bulk_twist_4pt`].
pub fn bulk_twist_4pt_sewn(z: [Complex64; 4], kappa: f64) -> Result<Complex64> {
    check_kappa(kappa, "bulk_twist_4pt")?;
    if !(kappa > 2.0 && kappa < 4.0) {
        return Err(Error::domain("bulk_twist_4pt", format!("κ = {kappa} is outside (2, 4)")));
    }
    let k = kappa;
    let [z1, z2, z3, z4] = z;
    let z21 = diff(z2, z1)?;
    let z43 = diff(z4, z3)?;
    let z31 = diff(z3, z1)?;
    let z42 = diff(z4, z2)?;
    let z32 = diff(z3, z2)?;
    let z41 = diff(z4, z1)?;
    let x = z21 * z43 / (z31 * z42);
    if x.im == 0.0 && x.re >= 1.0 {
        return Err(Error::domain("bulk_twist_4pt", format!("cross-ratio {x} is on the cut")));
    }
    let pref = (z21 / z43).norm_sqr()
        * (z43 * z31 * z42 / (z21 * z21 * z21 * z32 * z41)).norm().powf(k / 4.0);
    let coef = k * k * gamma_real(k / 4.0)?.powi(4) * gamma_real((4.0 - k) / 2.0)?.powi(2)
        / ((4.0 - k).powi(2) * gamma_real(k / 2.0)?.powi(2) * gamma_real((4.0 - k) / 4.0)?.powi(4));
    let (h1, h2) = bracket_terms(x, k)?;
    let (a1, a2) = bracket_terms(x.conj(), k)?;
    Ok((h1 * a1 - h2 * a2 * coef) * pref)
}

/// The twist / 2-leg four-point function for bulk points z1..z4, κ ∈ (2, 4).
pub fn bulk_twist_4pt(z: [Complex64; 4], kappa: f64) -> Result<f64> {
    Ok(bulk_twist_4pt_sewn(z, kappa)?.re)
}

fn regularize(x: Complex64) -> Result<Complex64> {
    if !(x.re.is_finite() && x.im.is_finite()) {
        return Err(Error::domain("cross-ratio", format!("non-finite value {x}")));
    }
    if x == one() {
        return Err(Error::domain("cross-ratio", "x = 1: a twist meets a 2-leg operator"));
    }
    if x.im == 0.0 && x.re > 1.0 {
        Ok(Complex64::new(x.re, CUT_EPSILON))
    } else {
        Ok(x)
    }
}

fn sal_blocks(x: Complex64) -> Result<(f64, f64)> {
    let p1 = Hyp2F1Params::new(-2.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0)?;
    let p2 = Hyp2F1Params::new(-1.0 / 3.0, 2.0 / 3.0, 4.0 / 3.0)?;
    let f1 = hyp2f1(&p1, x)?.norm_sqr();
    let f2 = hyp2f1(&p2, x)?.norm_sqr();
    Ok((f1, f2))
}

/// Separation probability P_n as a function of the cross-ratio.
pub fn sal_prob_x(x: Complex64) -> Result<f64> {
    let x = regularize(x)?;
    let (f1, f2) = sal_blocks(x)?;
    let r = (one() - x).norm();
    let t1 = r.powf(-2.0 / 3.0) * f1;
    let t2 = SAL_K * (x.norm() / r).powf(2.0 / 3.0) * f2;
    Ok(0.5 * (1.0 - t1 + t2))
}

/// Probability that the self-avoiding loop through z3, z4 separates z1 from
/// z2. One point may be at ∞.
pub fn sal_separation_prob(z1: Point, z2: Point, z3: Point, z4: Point) -> Result<f64> {
    sal_prob_x(cross_ratio(z1, z2, z3, z4)?)
}

/// P_n in the configuration z1 = 0, z2 = ∞, z3 = -1, z4 = 1 (cross-ratio 2),
/// where it is maximal.
pub fn sal_prob_max() -> Result<f64> {
    sal_separation_prob(
        Complex64::new(0.0, 0.0).into(),
        Point::Infinity,
        Complex64::new(-1.0, 0.0).into(),
        Complex64::new(1.0, 0.0).into(),
    )
}

/// 1/2 + 9Γ(5/6)⁶/(4π³).
pub fn p_max_closed_form() -> f64 {
    let g = gamma_real(5.0 / 6.0).expect("5/6 is not a pole");
    0.5 + 9.0 * g.powi(6) / (4.0 * PI.powi(3))
}

/// Z = |z34|^{-4/3}, the weight of all loops through z3 and z4.
pub fn sal_two_point(z3: Complex64, z4: Complex64) -> Result<f64> {
    Ok(diff(z3, z4)?.norm().powf(-4.0 / 3.0))
}

/// Twist partition function at κ = 8/3 for finite points.
pub fn z_twist(z: [Complex64; 4]) -> Result<f64> {
    let [z1, z2, z3, z4] = z;
    let z21 = diff(z2, z1)?;
    let z43 = diff(z4, z3)?;
    let z31 = diff(z3, z1)?;
    let z42 = diff(z4, z2)?;
    let z32 = diff(z3, z2)?;
    let z41 = diff(z4, z1)?;
    let x = regularize(z21 * z43 / (z31 * z42))?;
    let (f1, f2) = sal_blocks(x)?;
    let pref = (z31 * z42 / (z43 * z43 * z32 * z41)).norm().powf(2.0 / 3.0);
    Ok(pref * (f1 - SAL_K * x.norm().powf(2.0 / 3.0) * f2))
}

/// Magnetization / 2-leg correlator at n = 0 as a function of the cross-ratio.
pub fn mag_4pt_x(x: Complex64) -> Result<f64> {
    let x = regularize(x)?;
    let (f1, f2) = sal_blocks(x)?;
    let r = (one() - x).norm();
    Ok(0.5 + 0.5 * r.powf(-2.0 / 3.0) * f1 - 0.5 * SAL_K * (x.norm() / r).powf(2.0 / 3.0) * f2)
}

pub fn mag_4pt(z1: Point, z2: Point, z3: Point, z4: Point) -> Result<f64> {
    mag_4pt_x(cross_ratio(z1, z2, z3, z4)?)
}
