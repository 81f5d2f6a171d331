//! Explicit laws, exact and grid samplers, and validation experiments for a
//! Brownian motion conditioned to spend at most one time unit below zero.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`]: adaptive Gauss-Kronrod quadrature, normal CDF and related
//!   special functions, monotone CDF tables and bisection inversion.
//! * [`bridge_laws`]: first-hit density and occupation-time law `q^y(t, u)`
//!   of a Brownian bridge ending in zero.
//! * [`limit_laws`]: distribution functions of the last zero `g^y`, the
//!   occupation time `Γ^y` of the limit process and their `|y| → ∞` limits.
//! * [`samplers`]: seeded path samplers, path statistics, rejection samplers
//!   for the pre-limit process and an exact sampler for the limit process.
//! * [`validation`]: KS machinery and the experiment runners.
//! * [`cli`]: the `barrier-occ` command-line surface.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bridge_laws;
pub mod cli;
pub mod error;
pub mod limit_laws;
pub mod numerics;
pub mod samplers;
pub mod validation;

pub use error::{Error, Result};
