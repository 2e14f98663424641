//! Evolution kernels of `e^{-itH_alpha}`: closed forms for `alpha = pi/2` and
//! `alpha = 0`, oscillatory quadrature of the spectral representation for
//! general `alpha`, and the bound-state contribution.

mod closed;
mod contour;
mod diagnostics;
mod integrand;
mod kernel;
mod ladder;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};

pub use closed::{damped_pi2_closed, fresnel_gaussian, kernel_friedrichs_closed, kernel_pi2_closed, FourierMeasure};
pub(crate) use closed::kernel_pi2_closed_with_phase;
pub use diagnostics::{van_der_corput, VanDerCorputReport};
pub use kernel::{bound_state_term, damped_kernel_quadrature, full_kernel, kernel_quadrature, split_integrals};
pub(crate) use kernel::split_and_direct;

/// How a kernel value was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Quadrature,
    Oracle,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::Quadrature => "quadrature",
            Method::Oracle => "oracle",
        }
    }
}

/// A kernel amplitude with its provenance and error estimate.
#[derive(Clone, Copy, Debug)]
pub struct KernelValue<T> {
    pub value: Cplx<T>,
    pub method: Method,
    pub est_error: T,
}

/// Realization of the improper spectral integral.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    /// Real segment `[0, K]` continued along the ray `K + s e^{-i pi/4}`,
    /// with resonance residues added where the ray sweeps over them.
    Contour,
    /// Gaussian damping `e^{-eps k^2}` on the real axis for a ladder of `eps`,
    /// extrapolated polynomially to `eps = 0`.
    DampedLadder,
}

/// Configuration of the oscillatory integrator.
#[derive(Clone, Debug, Serialize)]
pub struct QuadratureSpec<T> {
    /// First damping parameter of the ladder; `None` means `1/(4t)`.
    pub eps0: Option<T>,
    /// Number of ladder rungs `eps_m = eps0 2^{-m}`; at least 2.
    pub extrapolation_order: usize,
    /// Real-axis cutoff of the damped ladder; `None` picks `sqrt(40/eps_min)`.
    pub k_max: Option<T>,
    /// Panels per local oscillation period of the integrand.
    pub panels_per_period: usize,
    /// Relative tolerance per panel, measured against the panel's `L^1` mass.
    pub tolerance: T,
    pub engine: Engine,
}

impl<T: Real> Default for QuadratureSpec<T> {
    fn default() -> Self {
        QuadratureSpec {
            eps0: None,
            extrapolation_order: 6,
            k_max: None,
            panels_per_period: 8,
            tolerance: T::lit(1e-11),
            engine: Engine::Contour,
        }
    }
}

impl<T: Real> QuadratureSpec<T> {
    pub fn damped_ladder() -> Self {
        QuadratureSpec { engine: Engine::DampedLadder, ..Self::default() }
    }

    /// Strictly decreasing damping ladder for time `t`.
    pub fn eps_ladder(&self, t: T) -> Vec<T> {
        let eps0 = self.eps0.unwrap_or(T::one() / (T::lit(4.0) * t.abs()));
        (0..self.extrapolation_order).map(|m| eps0 * T::lit(0.5).powi(m as i32)).collect()
    }

    /// Real-axis cutoff used by the damped ladder at time `t`.
    pub fn ladder_cutoff(&self, t: T) -> T {
        let ladder = self.eps_ladder(t);
        let eps_min = ladder[ladder.len() - 1];
        self.k_max.unwrap_or((T::lit(40.0) / eps_min).sqrt())
    }

    pub fn validate(&self, t: T) -> Result<()> {
        if self.panels_per_period < 4 {
            return Err(Error::InvalidParameter(format!(
                "panels_per_period must be at least 4, got {}",
                self.panels_per_period
            )));
        }
        if self.extrapolation_order < 2 {
            return Err(Error::InvalidParameter(format!(
                "extrapolation_order must be at least 2, got {}",
                self.extrapolation_order
            )));
        }
        if let Some(e) = self.eps0 {
            if !(e > T::zero() && e.is_finite()) {
                return Err(Error::InvalidParameter(format!("eps0 must be positive, got {e}")));
            }
        }
        if !(self.tolerance > T::zero() && self.tolerance < T::one()) {
            return Err(Error::InvalidParameter(format!("tolerance must lie in (0, 1), got {}", self.tolerance)));
        }
        if let Some(k) = self.k_max {
            // At least ten oscillations of e^{-itk^2} below the cutoff.
            if !(k > T::zero()) || k * k * t.abs() < T::lit(20.0) * T::PI() {
                return Err(Error::InvalidParameter(format!(
                    "k_max = {k} resolves fewer than 10 oscillations of exp(-i t k^2) at t = {t}"
                )));
            }
        }
        Ok(())
    }
}

/// The integrals `I_1, I_2, I_2 (x <-> y), I_3` and the weights recombining them
/// into the continuous-part kernel `w1 I_1 + w2 (I_2 + I_2sym) + w3 I_3`.
#[derive(Clone, Copy, Debug)]
pub struct IntegralSplit<T> {
    pub i1: Cplx<T>,
    pub i2: Cplx<T>,
    pub i2_sym: Cplx<T>,
    pub i3: Cplx<T>,
    /// `(cos^2 a / C_l^2, sin 2a / (2 cos pi l), C_l^2 sin^2 a / cos^2 pi l)`.
    pub weights: [T; 3],
    pub est_error: T,
}

impl<T: Real> IntegralSplit<T> {
    pub fn recombine(&self) -> Cplx<T> {
        let [w1, w2, w3] = self.weights;
        self.i1.scale(w1) + (self.i2 + self.i2_sym).scale(w2) + self.i3.scale(w3)
    }

    pub fn components(&self) -> [Cplx<T>; 4] {
        [self.i1, self.i2, self.i2_sym, self.i3]
    }
}

pub(crate) fn check_time<T: Real>(t: T) -> Result<()> {
    if t == T::zero() || !t.is_finite() {
        return Err(Error::Domain(format!("the kernel is not a function at t = {t}; need finite t != 0")));
    }
    Ok(())
}

pub(crate) fn check_position<T: Real>(x: T, y: T) -> Result<()> {
    if !(x > T::zero() && y > T::zero() && x.is_finite() && y.is_finite()) {
        return Err(Error::Domain(format!("positions must be positive and finite, got ({x}, {y})")));
    }
    Ok(())
}
