//! Half-plane and strip coordinates, cross-ratios, and the winding variables
//! (λ, μ, ν) and (ρ, σ, τ) built from two bulk points and two anchors.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Boundary anchoring points of the curve. With `at_infinity` set, `x2` is
/// ignored and the second anchor sits at ∞.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Anchors {
    pub x1: f64,
    pub x2: f64,
    pub at_infinity: bool,
}

impl Anchors {
    /// Anchors at finite points; the curve runs from `x1` to `x2 > x1`.
    pub fn new(x1: f64, x2: f64) -> Result<Self> {
        if !(x1.is_finite() && x2.is_finite()) {
            return Err(Error::domain("anchors", "anchors must be finite; use Anchors::to_infinity"));
        }
        if !(x1 < x2) {
            return Err(Error::domain("anchors", format!("need x1 < x2, got x1 = {x1}, x2 = {x2}")));
        }
        Ok(Anchors { x1, x2, at_infinity: false })
    }

    pub fn to_infinity(x1: f64) -> Result<Self> {
        if !x1.is_finite() {
            return Err(Error::domain("anchors", "x1 must be finite"));
        }
        Ok(Anchors { x1, x2: f64::INFINITY, at_infinity: true })
    }

    /// The standard chordal setup, 0 to ∞.
    pub fn standard() -> Self {
        Anchors { x1: 0.0, x2: f64::INFINITY, at_infinity: true }
    }

    // (z - x1)/(x2 - z) up to a positive real factor; has argument in (0, π).
    fn ratio(&self, z: Complex64) -> Complex64 {
        let a = z - self.x1;
        if self.at_infinity {
            a
        } else {
            a / (self.x2 - z)
        }
    }
}

fn check_upper(z: Complex64, what: &'static str) -> Result<()> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain(what, format!("non-finite point {z}")));
    }
    if !(z.im > 0.0) {
        return Err(Error::domain(what, format!("{z} is not in the open upper half-plane")));
    }
    Ok(())
}

/// Map to the strip of width π: s = log((z - x1)/(x2 - z)), or
/// s = log(z - x1) when x2 = ∞. The imaginary part v lies in (0, π) and
/// v → 0 along the boundary segment between the anchors.
pub fn strip_from_halfplane(z: Complex64, anchors: Anchors) -> Result<Complex64> {
    check_upper(z, "strip_from_halfplane")?;
    Ok(anchors.ratio(z).ln())
}

/// Inverse of [`strip_from_halfplane`].
pub fn halfplane_from_strip(s: Complex64, anchors: Anchors) -> Result<Complex64> {
    if !(s.im > 0.0 && s.im < std::f64::consts::PI) {
        return Err(Error::domain("halfplane_from_strip", format!("Im s = {} is outside (0, π)", s.im)));
    }
    let e = s.exp();
    Ok(if anchors.at_infinity {
        e + anchors.x1
    } else {
        (anchors.x1 + e * anchors.x2) / (e + 1.0)
    })
}

/// Winding variables for a pair of bulk points.
///
/// `rho_tau` is the product ρτ = sin v_A sin v_B, kept separately because
/// τ alone is 0/0 whenever one of the points has v = π/2. `tau` is `None`
/// there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindingCoords {
    pub lambda: f64,
    pub mu: f64,
    pub nu: f64,
    pub rho: f64,
    pub sigma: f64,
    pub tau: Option<f64>,
    pub rho_tau: f64,
    pub v_a: f64,
    pub v_b: f64,
}

/// Below this |ρ| the ratio τ = ρτ/ρ is not reported.
pub const TAU_RHO_FLOOR: f64 = 1e-300;

/// λ, μ, ν from the cross-ratio expressions, then ρ, σ, τ.
///
/// σ is computed as |z_B - z_A|²/|z_B - z̄_A|², which does not depend on the
/// anchors and is exactly zero for coincident points.
pub fn winding_coords(za: Complex64, zb: Complex64, anchors: Anchors) -> Result<WindingCoords> {
    check_upper(za, "winding_coords")?;
    check_upper(zb, "winding_coords")?;
    let wa = anchors.ratio(za);
    let wb = anchors.ratio(zb);
    let lambda = (wa.re / wa.norm()).clamp(-1.0, 1.0);
    let mu = (wb.re / wb.norm()).clamp(-1.0, 1.0);
    let sa = wa.im / wa.norm();
    let sb = wb.im / wb.norm();
    // ν = cosh(u_B - u_A) = (r + 1/r)/2 with r = |w_B|/|w_A|
    let r = wb.norm() / wa.norm();
    let nu = 0.5 * (r + 1.0 / r);
    let sigma = sigma_halfplane(za, zb);
    let rho = lambda * mu;
    let rho_tau = sa * sb;
    let tau = if rho.abs() > TAU_RHO_FLOOR { Some(rho_tau / rho) } else { None };
    Ok(WindingCoords {
        lambda,
        mu,
        nu,
        rho,
        sigma,
        tau,
        rho_tau,
        v_a: wa.arg(),
        v_b: wb.arg(),
    })
}

/// σ = (z_B - z_A)(z̄_B - z̄_A) / ((z_B - z̄_A)(z̄_B - z_A)).
pub fn sigma_halfplane(za: Complex64, zb: Complex64) -> f64 {
    let num = (zb - za).norm_sqr();
    let den = (zb - za.conj()).norm_sqr();
    (num / den).clamp(0.0, 1.0)
}

/// σ from strip coordinates: (cosh Δu - cos(v_B - v_A))/(cosh Δu - cos(v_B + v_A)).
pub fn sigma_strip(sa: Complex64, sb: Complex64) -> f64 {
    let du = sb.re - sa.re;
    // cosh Δu - cos θ = 2 sinh²(Δu/2) + 2 sin²(θ/2), free of cancellation
    let num = (0.5 * du).sinh().powi(2) + (0.5 * (sb.im - sa.im)).sin().powi(2);
    let den = (0.5 * du).sinh().powi(2) + (0.5 * (sb.im + sa.im)).sin().powi(2);
    num / den
}

/// A point of the Riemann sphere, for cross-ratios with operators at ∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    Finite(Complex64),
    Infinity,
}

impl From<Complex64> for Point {
    fn from(z: Complex64) -> Self {
        Point::Finite(z)
    }
}

/// Cross-ratio x = z21 z43 / (z31 z42), with z_ij = z_i - z_j.
///
/// At most one point may be at ∞; the limit is taken algebraically.
pub fn cross_ratio(z1: Point, z2: Point, z3: Point, z4: Point) -> Result<Complex64> {
    use Point::*;
    let x = match (z1, z2, z3, z4) {
        (Finite(a), Finite(b), Finite(c), Finite(d)) => {
            let den = (c - a) * (d - b);
            check_nonzero(den)?;
            (b - a) * (d - c) / den
        }
        (Infinity, Finite(b), Finite(c), Finite(d)) => {
            check_nonzero(d - b)?;
            (d - c) / (d - b)
        }
        (Finite(a), Infinity, Finite(c), Finite(d)) => {
            check_nonzero(c - a)?;
            -(d - c) / (c - a)
        }
        (Finite(a), Finite(b), Infinity, Finite(d)) => {
            check_nonzero(d - b)?;
            -(b - a) / (d - b)
        }
        (Finite(a), Finite(b), Finite(c), Infinity) => {
            check_nonzero(c - a)?;
            (b - a) / (c - a)
        }
        _ => return Err(Error::domain("cross_ratio", "at most one point may be at infinity")),
    };
    Ok(x)
}

fn check_nonzero(d: Complex64) -> Result<()> {
    if d.norm() == 0.0 {
        Err(Error::domain("cross_ratio", "coincident points make the cross-ratio singular"))
    } else {
        Ok(())
    }
}
