//! Goodness of fit and interval estimates for Monte Carlo counts.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::gamma_q;

/// Smallest expected count per bin accepted by the chi-square test.
pub const MIN_EXPECTED_COUNT: f64 = 5.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GofReport {
    pub chi2: f64,
    pub dof: usize,
    pub p_value: f64,
    /// (O - nE)/√(nE(1-E)) per bin; `None` for dropped bins.
    pub z_scores: Vec<Option<f64>>,
}

impl GofReport {
    pub fn max_abs_z(&self) -> f64 {
        self.z_scores.iter().flatten().fold(0.0f64, |m, z| m.max(z.abs()))
    }
}

/// Upper tail of the chi-square distribution.
pub fn chi_square_sf(chi2: f64, dof: usize) -> Result<f64> {
    if dof == 0 {
        return Err(Error::domain("chi_square_sf", "zero degrees of freedom"));
    }
    gamma_q(dof as f64 / 2.0, chi2.max(0.0) / 2.0)
}

/// Pearson test of `observed` against `expected_probs`. Bins with zero
/// probability and zero count are dropped.
pub fn chi_square_multinomial(observed: &[u64], expected_probs: &[f64], n: u64) -> Result<GofReport> {
    if observed.len() != expected_probs.len() {
        return Err(Error::contract("chi_square_multinomial", "observed and expected differ in length"));
    }
    if observed.iter().sum::<u64>() != n {
        return Err(Error::contract("chi_square_multinomial", "counts do not sum to n"));
    }
    let total: f64 = expected_probs.iter().sum();
    if (total - 1.0).abs() > 1e-9 || expected_probs.iter().any(|p| !(*p >= 0.0)) {
        return Err(Error::contract(
            "chi_square_multinomial",
            format!("expected probabilities must be non-negative and sum to 1, sum = {total}"),
        ));
    }
    let nf = n as f64;
    let mut chi2 = 0.0;
    let mut kept = 0usize;
    let mut z_scores = Vec::with_capacity(observed.len());
    for (i, (&o, &p)) in observed.iter().zip(expected_probs).enumerate() {
        if p == 0.0 && o == 0 {
            z_scores.push(None);
            continue;
        }
        let e = nf * p;
        if e < MIN_EXPECTED_COUNT {
            return Err(Error::domain(
                "chi_square_multinomial",
                format!("bin {i} expects {e:.2} counts (< {MIN_EXPECTED_COUNT}); merge it with a neighbour"),
            ));
        }
        let d = o as f64 - e;
        chi2 += d * d / e;
        z_scores.push(Some(d / (e * (1.0 - p)).sqrt()));
        kept += 1;
    }
    let dof = kept.saturating_sub(1);
    let p_value = if dof == 0 { 1.0 } else { chi_square_sf(chi2, dof)? };
    Ok(GofReport {
        chi2,
        dof,
        p_value,
        z_scores,
    })
}

/// Wilson score interval for k successes in n trials; z = 1.96 gives 95%.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> Result<(f64, f64)> {
    if n == 0 || k > n {
        return Err(Error::domain("wilson_interval", format!("need 0 ≤ k ≤ n and n > 0, got k = {k}, n = {n}")));
    }
    let nf = n as f64;
    let p = k as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let centre = (p + z2 / (2.0 * nf)) / denom;
    let half = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    Ok(((centre - half).max(0.0), (centre + half).min(1.0)))
}

pub const WILSON_Z95: f64 = 1.959_963_984_540_054;

/// Standard error √(p(1-p)/n) of a binomial proportion.
pub fn binomial_stderr(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Kolmogorov–Smirnov distance between the sample and U(0, 1).
pub fn ks_uniform(samples: &[f64]) -> f64 {
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    s.iter().enumerate().fold(0.0f64, |d, (i, &x)| {
        let x = x.clamp(0.0, 1.0);
        d.max((i as f64 + 1.0) / n - x).max(x - i as f64 / n)
    })
}
