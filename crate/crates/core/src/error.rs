use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of the routine.
    #[error("domain error: {0}")]
    Domain(String),
    /// Model parameters violate their invariants.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// Spectral parameter sits on the cut `[0, inf)` without a side qualifier.
    #[error("spectral parameter {0} lies on the branch cut [0, inf); use the boundary-value form")]
    BranchCut(String),
    /// Spectral parameter coincides with the eigenvalue of the operator.
    #[error("spectral parameter {z} is within {tol:e} of the eigenvalue {energy}")]
    Pole { z: String, energy: f64, tol: f64 },
    /// A special-function evaluation could not reach its tolerance.
    #[error("accuracy target missed: {0}")]
    Accuracy(String),
    /// An iterative procedure (root finder, extrapolation, adaptive quadrature) failed.
    #[error("no convergence in {0}")]
    NonConvergence(String),
    /// Regression data cannot determine the requested fit.
    #[error("ill-conditioned fit: {0}")]
    IllConditioned(String),
}

pub type Result<T> = std::result::Result<T, Error>;
