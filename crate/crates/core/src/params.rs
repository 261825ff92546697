//! Model constants: the κ ↔ n correspondence, central charge and Kac weights.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

/// SLE/CLE parameter together with the O(n) constants derived from it.
///
/// κ is the only stored input; `n` and `c` are always recomputed from it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    pub kappa: f64,
    pub n: f64,
    pub c: f64,
    pub dilute: bool,
}

impl ModelParams {
    pub fn new(kappa: f64) -> Result<Self> {
        check_kappa(kappa)?;
        Ok(ModelParams {
            kappa,
            n: n_of(kappa),
            c: c_of(kappa),
            dilute: kappa > 2.0 && kappa < 4.0,
        })
    }

    /// The self-avoiding loop point, κ = 8/3 (n = 0, c = 0).
    pub fn self_avoiding() -> Self {
        Self::new(8.0 / 3.0).expect("8/3 is in range")
    }

    pub fn kac_weight(&self, r: f64, s: f64) -> f64 {
        kac_weight(self.kappa, r, s)
    }
}

fn check_kappa(kappa: f64) -> Result<()> {
    if kappa > 0.0 && kappa < 8.0 {
        Ok(())
    } else {
        Err(Error::domain("kappa", format!("κ = {kappa} is outside (0, 8)")))
    }
}

fn n_of(kappa: f64) -> f64 {
    2.0 * ((kappa - 4.0) * PI / kappa).cos()
}

fn c_of(kappa: f64) -> f64 {
    (6.0 - kappa) * (3.0 * kappa - 8.0) / (2.0 * kappa)
}

/// Kac weight h_{r,s} = ((κr - 4s)² - (κ - 4)²) / (16κ). Indices need not
/// be integers.
pub fn kac_weight(kappa: f64, r: f64, s: f64) -> f64 {
    let a = kappa * r - 4.0 * s;
    let b = kappa - 4.0;
    (a * a - b * b) / (16.0 * kappa)
}

/// Loop fugacity n(κ) = 2cos((κ-4)π/κ).
pub fn n_from_kappa(kappa: f64) -> Result<f64> {
    check_kappa(kappa)?;
    Ok(n_of(kappa))
}

/// Central charge c(κ) = (6-κ)(3κ-8)/(2κ).
pub fn c_from_kappa(kappa: f64) -> Result<f64> {
    check_kappa(kappa)?;
    Ok(c_of(kappa))
}

/// Bulk twist operator weight h_{2,1} = (3κ-8)/16.
pub fn twist_weight(kappa: f64) -> Result<f64> {
    check_kappa(kappa)?;
    Ok((3.0 * kappa - 8.0) / 16.0)
}

/// Bulk 2-leg operator weight h_{0,1} = (8-κ)/16.
pub fn two_leg_weight(kappa: f64) -> Result<f64> {
    check_kappa(kappa)?;
    Ok((8.0 - kappa) / 16.0)
}

/// Boundary N-leg operator weight h_{1,N+1} = N(4+2N-κ)/(2κ).
pub fn boundary_nleg_weight(kappa: f64, legs: u32) -> Result<f64> {
    check_kappa(kappa)?;
    if legs == 0 {
        return Err(Error::domain("boundary_nleg_weight", "need at least one leg"));
    }
    let n = legs as f64;
    Ok(n * (4.0 + 2.0 * n - kappa) / (2.0 * kappa))
}
