//! Dispersive analysis of the radial operator `-d^2/dx^2 + l(l+1)/x^2` on the
//! half-line with `|l| < 1/2`, under the boundary conditions
//! `cos(alpha) Gamma_0 f + sin(alpha) Gamma_1 f = 0`.
//!
//! The core is generic over the scalar ([`Real`], implemented for `f32` and
//! `f64`); the `f64` aliases below are what the CLI uses.

mod dd;
mod error;
mod quad;
mod scalar;
pub mod decay;
pub mod evolution;
pub mod spectral;
pub mod specfun;
pub mod validate;

pub use error::{Error, Result};
pub use quad::{linspace, logspace};
pub use scalar::{Cplx, Real};

pub type Params = spectral::ProblemParams<f64>;
pub type Spec = evolution::QuadratureSpec<f64>;
pub type Kernel = evolution::KernelValue<f64>;
pub type Split = evolution::IntegralSplit<f64>;
