//! Special functions: Gamma and Bessel functions for complex arguments.

mod bessel;
mod gamma;

pub use bessel::{
    bessel_i, bessel_j, bessel_j_in, bessel_j_scaled, bessel_j_deriv, envelope, envelope_constant, EvalResult, Order, Regime,
    ENVELOPE_CONSTANT, HANKEL_TERMS, SERIES_SWITCH,
};
pub(crate) use bessel::{asymptotic_pair_scaled, bessel_k_scaled, series_0f1};
pub use gamma::{gamma, recip_gamma};
