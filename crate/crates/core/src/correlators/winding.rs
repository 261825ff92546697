//! Winding of an SLE₈/₃ around two bulk points.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{sigma_halfplane, winding_coords, Anchors};
use crate::special::{hyp2f1, Hyp2F1Params};

/// Γ(5/3)Γ(2/3)/Γ(4/3).
pub const XING_C: f64 = 1.368_926_811_959_451_5;

/// Probabilities of the four winding states. `p_ab`: the curve passes left
/// of both points; `p_a`: left of A only; `p_b`: left of B only; `p_o`:
/// left of neither.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindingDistribution {
    pub p_ab: f64,
    pub p_a: f64,
    pub p_b: f64,
    pub p_o: f64,
}

impl WindingDistribution {
    /// In the order AB, A, B, O.
    pub fn as_array(&self) -> [f64; 4] {
        [self.p_ab, self.p_a, self.p_b, self.p_o]
    }

    pub fn total(&self) -> f64 {
        self.p_ab + self.p_a + self.p_b + self.p_o
    }
}

fn check_sigma(sigma: f64, what: &'static str) -> Result<()> {
    if (0.0..=1.0).contains(&sigma) {
        Ok(())
    } else {
        Err(Error::domain(what, format!("σ = {sigma} is outside [0, 1]")))
    }
}

fn check_angle(v: f64, what: &'static str) -> Result<()> {
    if (0.0..=std::f64::consts::PI).contains(&v) {
        Ok(())
    } else {
        Err(Error::domain(what, format!("v = {v} is outside [0, π]")))
    }
}

fn f_params() -> Hyp2F1Params {
    Hyp2F1Params::new(1.0, 4.0 / 3.0, 5.0 / 3.0).expect("c = 5/3 is regular")
}

/// K(σ) = 1 - σ·₂F₁(1, 4/3; 5/3; 1-σ), with K(0) = 1.
pub fn winding_k(sigma: f64) -> Result<f64> {
    check_sigma(sigma, "winding_k")?;
    if sigma == 0.0 {
        return Ok(1.0);
    }
    let f = hyp2f1(&f_params(), Complex64::new(1.0 - sigma, 0.0))?;
    Ok(1.0 - sigma * f.re)
}

/// Right-hand side of the crossing relation for ρ + ρτ·K(σ), written with
/// the σ = 0 blocks: ρ + ρτ(1 + σ·₂F₁(1, 4/3; 5/3; σ)) - C·ρτ·σ^{1/3}(1-σ)^{-2/3}.
pub fn xing_sym_rhs(sigma: f64, rho: f64, rho_tau: f64) -> Result<f64> {
    check_sigma(sigma, "xing_sym_rhs")?;
    if sigma == 1.0 {
        return Err(Error::domain("xing_sym_rhs", "the σ = 0 blocks diverge at σ = 1"));
    }
    let f = hyp2f1(&f_params(), Complex64::new(sigma, 0.0))?.re;
    Ok(rho + rho_tau * (1.0 + sigma * f) - XING_C * rho_tau * sigma.cbrt() / (1.0 - sigma).powf(2.0 / 3.0))
}

fn second_solution(sigma: f64) -> Result<f64> {
    if sigma == 1.0 {
        return Err(Error::domain("h_general", "the c2 solution diverges at σ = 1"));
    }
    Ok((sigma / ((1.0 - sigma) * (1.0 - sigma))).cbrt())
}

/// ρ·H for the general solution of the reduced equations, given ρ and the
/// product ρτ. Always finite for σ < 1.
pub fn h_general_product(sigma: f64, rho: f64, rho_tau: f64, c1: f64, c2: f64) -> Result<f64> {
    check_sigma(sigma, "h_general")?;
    let mut value = c1 * (rho + rho_tau * winding_k(sigma)?);
    if c2 != 0.0 {
        value += c2 * rho_tau * second_solution(sigma)?;
    }
    Ok(value)
}

/// H(σ, τ) = c1·(1 + τ·K(σ)) + c2·τ·(σ/(1-σ)²)^{1/3}.
pub fn h_general(sigma: f64, tau: f64, c1: f64, c2: f64) -> Result<f64> {
    h_general_product(sigma, 1.0, tau, c1, c2)
}

/// The four winding probabilities in strip variables.
pub fn winding_probs(va: f64, vb: f64, sigma: f64) -> Result<WindingDistribution> {
    check_angle(va, "winding_probs")?;
    check_angle(vb, "winding_probs")?;
    check_sigma(sigma, "winding_probs")?;
    let (ca, cb) = (va.cos(), vb.cos());
    let cross = va.sin() * vb.sin() * winding_k(sigma)?;
    Ok(WindingDistribution {
        p_ab: 0.25 * ((1.0 + ca) * (1.0 + cb) + cross),
        p_a: 0.25 * ((1.0 + ca) * (1.0 - cb) - cross),
        p_b: 0.25 * ((1.0 - ca) * (1.0 + cb) - cross),
        p_o: 0.25 * ((1.0 - ca) * (1.0 - cb) + cross),
    })
}

/// Winding probabilities for bulk points in the half-plane with the given
/// anchors.
pub fn winding_probs_halfplane(za: Complex64, zb: Complex64, anchors: Anchors) -> Result<WindingDistribution> {
    let w = winding_coords(za, zb, anchors)?;
    winding_probs(w.v_a, w.v_b, w.sigma)
}

/// Probability of a double left passage for SLE₈/₃ from 0 to ∞.
pub fn pll_halfplane(za: Complex64, zb: Complex64) -> Result<f64> {
    for z in [za, zb] {
        if !(z.im > 0.0) {
            return Err(Error::domain("pll_halfplane", format!("{z} is not in the open upper half-plane")));
        }
    }
    Ok(winding_probs(za.arg(), zb.arg(), sigma_halfplane(za, zb))?.p_ab)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma_real;
    use std::f64::consts::PI;

    #[test]
    fn crossing_constant() {
        let g = |x: f64| gamma_real(x).unwrap();
        assert!((g(5.0 / 3.0) * g(2.0 / 3.0) / g(4.0 / 3.0) - XING_C).abs() < 1e-14);
    }

    #[test]
    fn k_endpoints() {
        assert_eq!(winding_k(1.0).unwrap(), 0.0);
        assert_eq!(winding_k(0.0).unwrap(), 1.0);
        assert!((winding_k(1e-12).unwrap() - 1.0).abs() < 1e-3);
        assert!(winding_k(1.5).is_err());
    }

    #[test]
    fn uniform_at_right_angles() {
        let w = winding_probs(PI / 2.0, PI / 2.0, 1.0).unwrap();
        for p in w.as_array() {
            assert!((p - 0.25).abs() < 1e-16);
        }
    }

    #[test]
    fn h_limits() {
        assert!((h_general(1.0, 0.7, 1.0, 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(h_general(1.0, 0.7, 1.0, 1.0).unwrap_err().is_domain());
        assert!(h_general(1.0 - 1e-12, 0.7, 0.0, 1.0).unwrap() > 1e6);
        assert!(h_general(0.0, 0.7, 0.0, 1.0).is_ok());
    }
}
