//! Quadrature, special functions and monotone-CDF utilities.

mod cdf;
mod quadrature;
mod special;

pub use cdf::{invert_cdf, CdfTable};
pub use quadrature::{integrate, QuadratureSpec};
pub use special::{erf, erfc, erfcx, std_normal_cdf, std_normal_pdf, upper_gamma_neg_half, FRAC_1_SQRT_PI};
