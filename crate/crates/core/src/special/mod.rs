//! Special functions: real gamma family and the complex-argument Gauss
//! hypergeometric function.

mod gamma;
mod hyp2f1;

pub use gamma::{digamma, gamma_p, gamma_q, gamma_real, ln_gamma, rgamma, sin_pi};
pub use hyp2f1::{
    gauss_value, hyp2f1, hyp2f1_log_connection, hyp2f1_one_minus_z, hyp2f1_series, hyp2f1_side,
    CutSide, Hyp2F1Params, LogSplit, CONSECUTIVE_SMALL, INTEGER_TOLERANCE, MAX_TERMS,
    TERM_TOLERANCE,
};
