//! Closed-form conformal blocks, correlators and probabilities.

mod blocks;
mod boundary;
mod bulk;
mod winding;

pub use blocks::{
    block_f, block_f_norm, block_g, block_g_norm, f31_normalization, g11_log_split,
    g11_normalization, gm11_normalization, log_coefficient_ratio, physical_bulk, physical_bulk_from_g, BlockFamily,
    FBlock, G11LogSplit, GBlock,
};
pub use boundary::{
    boundary_double_twist, boundary_single_twist, double_sle_between_prob, double_twist_strip,
    percolation_6pt, schramm_left_passage, single_twist_strip,
};
pub use bulk::{
    bulk_twist_4pt, bulk_twist_4pt_sewn, mag_4pt, mag_4pt_x, p_max_closed_form, sal_prob_max,
    sal_prob_x, sal_separation_prob, sal_two_point, z_twist, CUT_EPSILON, SAL_K,
};
pub use winding::{
    h_general, h_general_product, pll_halfplane, winding_k, winding_probs,
    winding_probs_halfplane, xing_sym_rhs, WindingDistribution, XING_C,
};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::gamma_real;

/// z^p on the principal branch, with 0^p handled for p ≥ 0.
pub(crate) fn cpow(z: Complex64, p: f64) -> Result<Complex64> {
    if z == Complex64::new(0.0, 0.0) {
        return if p > 0.0 {
            Ok(Complex64::new(0.0, 0.0))
        } else if p == 0.0 {
            Ok(Complex64::new(1.0, 0.0))
        } else {
            Err(Error::domain("power", format!("0 raised to negative power {p}")))
        };
    }
    Ok((z.ln() * p).exp())
}

/// Γ(x) for a printed prefactor; a pole is reported with the factor's label.
pub(crate) fn gamma_factor(x: f64, label: &'static str, kappa: f64) -> Result<f64> {
    gamma_real(x).map_err(|_| {
        Error::domain("gamma prefactor", format!("{label} has a pole at κ = {kappa}"))
    })
}

pub(crate) fn check_kappa(kappa: f64, what: &'static str) -> Result<()> {
    if kappa > 0.0 && kappa < 8.0 {
        Ok(())
    } else {
        Err(Error::domain(what, format!("κ = {kappa} is outside (0, 8)")))
    }
}
