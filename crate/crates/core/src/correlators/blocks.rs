//! Blocks of the twist / 2-leg four-point function about x = 0 and x = 1.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_kappa, cpow, gamma_factor};
use crate::error::{Error, Result};
use crate::special::{hyp2f1, hyp2f1_log_connection, Hyp2F1Params};

/// Blocks about x = 0, labelled by the fusion channel of the two twists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FBlock {
    F11,
    F31,
}

/// Blocks about x = 1. `Gm11` is G₋₁,₁.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GBlock {
    G11,
    Gm11,
}

/// κ together with the mixing parameter A of the logarithmic G₁₁ block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlockFamily {
    pub kappa: f64,
    pub a: f64,
}

impl BlockFamily {
    pub fn new(kappa: f64, a: f64) -> Result<Self> {
        check_kappa(kappa, "BlockFamily")?;
        if !a.is_finite() {
            return Err(Error::domain("BlockFamily", "A must be finite"));
        }
        Ok(BlockFamily { kappa, a })
    }

    pub fn f(&self, kind: FBlock, x: Complex64) -> Result<Complex64> {
        block_f_norm(kind, x, self.kappa)
    }

    pub fn g(&self, kind: GBlock, one_minus_x: Complex64) -> Result<Complex64> {
        block_g_norm(kind, one_minus_x, self.kappa, self.a)
    }
}

fn on_cut(x: Complex64) -> bool {
    x.im == 0.0 && x.re >= 1.0
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Unnormalized F₁₁ or F₃₁ at x, principal branch. Real x ≥ 1 is rejected.
///
/// F₁₁ = (1-x)^{-κ/8} ₂F₁(-κ/4, 1-κ/4; 2-κ/2; x),
/// F₃₁ = x^{κ/2-1}(1-x)^{-κ/8} ₂F₁(κ/4-1, κ/4; κ/2; x).
pub fn block_f(kind: FBlock, x: Complex64, kappa: f64) -> Result<Complex64> {
    check_kappa(kappa, "block_f")?;
    if on_cut(x) {
        return Err(Error::domain("block_f", format!("x = {x} lies on the cut [1, ∞)")));
    }
    let k = kappa;
    let outer = cpow(one() - x, -k / 8.0)?;
    match kind {
        FBlock::F11 => {
            let p = Hyp2F1Params::new(-k / 4.0, 1.0 - k / 4.0, 2.0 - k / 2.0).map_err(|_| {
                Error::domain("block_f", format!("F11 hypergeometric c = 2-κ/2 is a pole at κ = {k}"))
            })?;
            Ok(outer * hyp2f1(&p, x)?)
        }
        FBlock::F31 => {
            let p = Hyp2F1Params::new(k / 4.0 - 1.0, k / 4.0, k / 2.0)?;
            Ok(cpow(x, k / 2.0 - 1.0)? * outer * hyp2f1(&p, x)?)
        }
    }
}

/// Normalization N of 𝓕₃₁ = N·F₃₁:
/// Γ((4+κ)/4)Γ(κ/4)Γ((4-κ)/2) / (Γ(κ/2)Γ((4-κ)/4)Γ((8-κ)/4)).
pub fn f31_normalization(kappa: f64) -> Result<f64> {
    check_kappa(kappa, "f31_normalization")?;
    let k = kappa;
    let num = gamma_factor((4.0 + k) / 4.0, "Γ((4+κ)/4)", k)?
        * gamma_factor(k / 4.0, "Γ(κ/4)", k)?
        * gamma_factor((4.0 - k) / 2.0, "Γ((4-κ)/2)", k)?;
    let den = gamma_factor(k / 2.0, "Γ(κ/2)", k)?
        * gamma_factor((4.0 - k) / 4.0, "Γ((4-κ)/4)", k)?
        * gamma_factor((8.0 - k) / 4.0, "Γ((8-κ)/4)", k)?;
    Ok(num / den)
}

/// Prefactor of 𝓖₁₁: Γ((4-κ)/2) / (Γ((4-κ)/4)Γ((8-κ)/4)).
pub fn g11_normalization(kappa: f64) -> Result<f64> {
    check_kappa(kappa, "g11_normalization")?;
    let k = kappa;
    Ok(gamma_factor((4.0 - k) / 2.0, "Γ((4-κ)/2)", k)?
        / (gamma_factor((4.0 - k) / 4.0, "Γ((4-κ)/4)", k)?
            * gamma_factor((8.0 - k) / 4.0, "Γ((8-κ)/4)", k)?))
}

/// Prefactor of 𝓖₋₁,₁: Γ((4+κ)/4)Γ(κ/4) / Γ((κ-2)/2).
pub fn gm11_normalization(kappa: f64) -> Result<f64> {
    check_kappa(kappa, "gm11_normalization")?;
    let k = kappa;
    Ok(gamma_factor((4.0 + k) / 4.0, "Γ((4+κ)/4)", k)? * gamma_factor(k / 4.0, "Γ(κ/4)", k)?
        / gamma_factor((k - 2.0) / 2.0, "Γ((κ-2)/2)", k)?)
}

/// 𝓕₁₁ = F₁₁ and 𝓕₃₁ = N·F₃₁.
pub fn block_f_norm(kind: FBlock, x: Complex64, kappa: f64) -> Result<Complex64> {
    match kind {
        FBlock::F11 => block_f(FBlock::F11, x, kappa),
        FBlock::F31 => Ok(block_f(FBlock::F31, x, kappa)? * f31_normalization(kappa)?),
    }
}

fn gm11_raw(w: Complex64, kappa: f64) -> Result<Complex64> {
    let k = kappa;
    let p = Hyp2F1Params::new(2.0 - k / 4.0, 1.0 - k / 4.0, 2.0)?;
    Ok(cpow(w, 1.0 - k / 8.0)? * hyp2f1(&p, w)?)
}

/// Unnormalized blocks about x = 1, as functions of w = 1 - x.
///
/// G₁₁ = A·Γ(1-κ/4)Γ(2-κ/4)/Γ(2-κ/2)·F₁₁ + (1-A)·Γ(1+κ/4)Γ(κ/4)/Γ(κ/2)·F₃₁ and
/// G₋₁,₁ = w^{1-κ/8} ₂F₁(2-κ/4, 1-κ/4; 2; w).
pub fn block_g(kind: GBlock, one_minus_x: Complex64, kappa: f64, a: f64) -> Result<Complex64> {
    check_kappa(kappa, "block_g")?;
    let k = kappa;
    let w = one_minus_x;
    if w.im == 0.0 && w.re <= 0.0 {
        return Err(Error::domain("block_g", format!("1 - x = {w} lies on the cut (-∞, 0]")));
    }
    match kind {
        GBlock::Gm11 => gm11_raw(w, k),
        GBlock::G11 => {
            let x = one() - w;
            let r1 = gamma_factor(1.0 - k / 4.0, "Γ(1-κ/4)", k)?
                * gamma_factor(2.0 - k / 4.0, "Γ(2-κ/4)", k)?
                / gamma_factor(2.0 - k / 2.0, "Γ(2-κ/2)", k)?;
            let r3 = gamma_factor(1.0 + k / 4.0, "Γ(1+κ/4)", k)? * gamma_factor(k / 4.0, "Γ(κ/4)", k)?
                / gamma_factor(k / 2.0, "Γ(κ/2)", k)?;
            Ok(block_f(FBlock::F11, x, k)? * (a * r1) + block_f(FBlock::F31, x, k)? * ((1.0 - a) * r3))
        }
    }
}

/// 𝓖₁₁ and 𝓖₋₁,₁ as functions of w = 1 - x.
pub fn block_g_norm(kind: GBlock, one_minus_x: Complex64, kappa: f64, a: f64) -> Result<Complex64> {
    let norm = match kind {
        GBlock::G11 => g11_normalization(kappa)?,
        GBlock::Gm11 => gm11_normalization(kappa)?,
    };
    Ok(block_g(kind, one_minus_x, kappa, a)? * norm)
}

/// 𝓖₁₁(w) = w^{-κ/8}·regular + log_coefficient·log(w), built from the
/// logarithmic expansions of the two x = 0 blocks about x = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct G11LogSplit {
    /// S(w), regular at w = 0.
    pub regular: Complex64,
    /// Full coefficient of log(w), including the w^{-κ/8} factor.
    pub log_coefficient: Complex64,
}

impl G11LogSplit {
    pub fn recombine(&self, w: Complex64, kappa: f64) -> Result<Complex64> {
        Ok(cpow(w, -kappa / 8.0)? * self.regular + self.log_coefficient * w.ln())
    }
}

/// Logarithmic decomposition of 𝓖₁₁ for |w| < 1.
pub fn g11_log_split(one_minus_x: Complex64, kappa: f64, a: f64) -> Result<G11LogSplit> {
    check_kappa(kappa, "g11_log_split")?;
    let k = kappa;
    let w = one_minus_x;
    let n31 = f31_normalization(k)?;
    let p11 = Hyp2F1Params::new(-k / 4.0, 1.0 - k / 4.0, 2.0 - k / 2.0)?;
    let p31 = Hyp2F1Params::new(k / 4.0 - 1.0, k / 4.0, k / 2.0)?;
    let s11 = hyp2f1_log_connection(&p11, w)?;
    let s31 = hyp2f1_log_connection(&p31, w)?;
    let x_pow = cpow(one() - w, k / 2.0 - 1.0)?;
    let weight31 = x_pow * ((1.0 - a) * n31);
    let regular = s11.regular * a + s31.regular * weight31;
    let log_coefficient = cpow(w, -k / 8.0)? * (s11.log_coefficient * a + s31.log_coefficient * weight31);
    Ok(G11LogSplit {
        regular,
        log_coefficient,
    })
}

/// The single-valued bulk combination |𝓕₁₁(x)|² - |𝓕₃₁(x)|².
pub fn physical_bulk(x: Complex64, kappa: f64) -> Result<f64> {
    let f11 = block_f_norm(FBlock::F11, x, kappa)?;
    let f31 = block_f_norm(FBlock::F31, x, kappa)?;
    Ok(f11.norm_sqr() - f31.norm_sqr())
}

/// The same combination assembled from the x = 1 blocks:
/// 𝓖₁₁(w)𝓖₋₁,₁(w̄) + 𝓖₋₁,₁(w)𝓖₁₁(w̄) + (1-2A)|𝓖₋₁,₁(w)|².
pub fn physical_bulk_from_g(x: Complex64, kappa: f64, a: f64) -> Result<f64> {
    let w = one() - x;
    let g11 = block_g_norm(GBlock::G11, w, kappa, a)?;
    let gm = block_g_norm(GBlock::Gm11, w, kappa, a)?;
    let g11_bar = block_g_norm(GBlock::G11, w.conj(), kappa, a)?;
    let gm_bar = block_g_norm(GBlock::Gm11, w.conj(), kappa, a)?;
    let total = g11 * gm_bar + gm * g11_bar + gm * gm_bar * (1.0 - 2.0 * a);
    Ok(total.re)
}

/// Coefficient of log(1-x)·𝓖₋₁,₁ in 𝓖₁₁: tan(πκ/4)/(2π).
pub fn log_coefficient_ratio(kappa: f64) -> f64 {
    (PI * kappa / 4.0).tan() / (2.0 * PI)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn f11_is_one_at_origin() {
        for &k in &[2.2, 8.0 / 3.0, 3.1, 3.9] {
            let v = block_f_norm(FBlock::F11, c(0.0, 0.0), k).unwrap();
            assert_eq!(v, c(1.0, 0.0));
        }
    }

    #[test]
    fn pole_in_normalization_is_named() {
        match f31_normalization(4.0).unwrap_err() {
            Error::Domain { detail, .. } => assert!(detail.contains("Γ((4-κ)/2)"), "{detail}"),
            e => panic!("unexpected {e:?}"),
        }
        assert!(block_f(FBlock::F11, c(0.2, 0.0), 4.0).unwrap_err().is_domain());
    }

    #[test]
    fn cut_is_rejected() {
        assert!(block_f(FBlock::F31, c(1.5, 0.0), 3.0).is_err());
        assert!(block_g(GBlock::Gm11, c(-0.5, 0.0), 3.0, 0.0).is_err());
    }

    #[test]
    fn crossing_at_reference_point() {
        let (x, k) = (c(0.37, 0.0), 3.1);
        let lhs = block_f_norm(FBlock::F11, x, k).unwrap() - block_f_norm(FBlock::F31, x, k).unwrap();
        let rhs = block_g_norm(GBlock::Gm11, 1.0 - x, k, 0.3).unwrap();
        assert!((lhs - rhs).norm() < 1e-10, "{lhs} vs {rhs}");
    }

    #[test]
    fn log_split_matches_tangent_coefficient() {
        for &k in &[2.5, 3.0, 3.7] {
            for &w in &[c(0.3, 0.1), c(0.5, -0.2), c(0.1, 0.0)] {
                for &a in &[0.0, 0.5, 1.7] {
                    let split = g11_log_split(w, k, a).unwrap();
                    let gm = block_g_norm(GBlock::Gm11, w, k, a).unwrap();
                    let expected = gm * log_coefficient_ratio(k);
                    assert!((split.log_coefficient - expected).norm() < 1e-10 * expected.norm().max(1.0));
                    let whole = block_g_norm(GBlock::G11, w, k, a).unwrap();
                    assert!((split.recombine(w, k).unwrap() - whole).norm() < 1e-10 * whole.norm());
                }
            }
        }
    }

    #[test]
    fn regular_part_of_unnormalized_g11_starts_at_one() {
        for &k in &[2.5, 3.0, 3.7] {
            for &a in &[0.0, 0.4, 1.0] {
                let s = g11_log_split(c(1e-12, 0.0), k, a).unwrap().regular / g11_normalization(k).unwrap();
                assert!((s - 1.0).norm() < 1e-9, "κ = {k}, A = {a}: {s}");
            }
        }
    }
}
