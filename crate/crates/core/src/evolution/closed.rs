use crate::error::{Error, Result};
use crate::scalar::{cis, cplx, real, Cplx, Real};
use crate::spectral::ProblemParams;
use crate::specfun::{bessel_i, bessel_j, Order};

use super::{check_position, check_time, KernelValue, Method};

fn closed_kernel<T: Real>(order: &Order<T>, phase: T, t: T, x: T, y: T) -> Result<KernelValue<T>> {
    check_time(t)?;
    check_position(x, y)?;
    let ta = t.abs();
    let arg = x * y / (T::lit(2.0) * ta);
    let j = bessel_j(order, real(arg))?;
    let amp = (x * y).sqrt() / (T::lit(2.0) * ta);
    let chirp = cis((x * x + y * y) / (T::lit(4.0) * ta) + phase);
    let value = chirp * j.value.scale(amp);
    let est_error = amp * j.est_error + T::lit(4.0) * T::epsilon() * value.norm();
    // The operator is real, so the kernel at -t is the conjugate.
    let value = if t < T::zero() { value.conj() } else { value };
    Ok(KernelValue { value, method: Method::ClosedForm, est_error })
}

/// Closed-form kernel of `e^{-itH_{pi/2}}`:
/// `i^{l-1/2}/(2t) e^{i(x^2+y^2)/(4t)} sqrt(xy) J_{-l-1/2}(xy/(2t))`,
/// with `i^{l-1/2} = e^{i pi (l-1/2)/2}`. `params.alpha()` is ignored.
pub fn kernel_pi2_closed<T: Real>(p: &ProblemParams<T>, t: T, x: T, y: T) -> Result<KernelValue<T>> {
    kernel_pi2_closed_with_phase(p, t, x, y, T::zero())
}

/// [`kernel_pi2_closed`] with an extra constant phase, for fault injection.
pub(crate) fn kernel_pi2_closed_with_phase<T: Real>(p: &ProblemParams<T>, t: T, x: T, y: T, extra: T) -> Result<KernelValue<T>> {
    let phase = T::FRAC_PI_2() * (p.l() - T::lit(0.5)) + extra;
    closed_kernel(p.order_neg(), phase, t, x, y)
}

/// Closed-form kernel of `e^{-itH_0}` (Friedrichs extension):
/// `i^{-l-3/2}/(2t) e^{i(x^2+y^2)/(4t)} sqrt(xy) J_{l+1/2}(xy/(2t))`.
/// `params.alpha()` is ignored.
pub fn kernel_friedrichs_closed<T: Real>(p: &ProblemParams<T>, t: T, x: T, y: T) -> Result<KernelValue<T>> {
    let phase = -T::FRAC_PI_2() * (p.l() + T::lit(1.5));
    closed_kernel(p.order_pos(), phase, t, x, y)
}

/// Kernel of `e^{-(eps + it) H_{pi/2}}` for `eps >= 0`, `t > 0`:
/// `(eps+it)^{-1} e^{-(x^2+y^2)/(4(eps+it))} (sqrt(xy)/2) I_{-l-1/2}(xy/(2(eps+it)))`.
pub fn damped_pi2_closed<T: Real>(p: &ProblemParams<T>, t: T, eps: T, x: T, y: T) -> Result<Cplx<T>> {
    check_position(x, y)?;
    if !(t > T::zero()) || !(eps >= T::zero()) {
        return Err(Error::Domain(format!("damped kernel needs t > 0 and eps >= 0, got t = {t}, eps = {eps}")));
    }
    let a = cplx(eps, t);
    let z = real(x * y * T::lit(0.5)) / a;
    let i = bessel_i(p.order_neg(), z)?;
    let gauss = (real(-(x * x + y * y) * T::lit(0.25)) / a).exp();
    Ok(gauss * i.value * a.inv().scale((x * y).sqrt() * T::lit(0.5)))
}

/// A finite measure on the line: point masses plus an optional sampled density.
///
/// Its Fourier transform is `f(k) = sum_j w_j e^{i k p_j} + int g(p) e^{i k p} dp`.
#[derive(Clone, Debug, Default)]
pub struct FourierMeasure<T> {
    /// `(weight, point)` pairs.
    pub atoms: Vec<(T, T)>,
    /// `(point, density)` samples in increasing order, integrated by the trapezoid rule.
    pub density: Vec<(T, T)>,
}

/// `F(eps) = int_R e^{-(eps + it) k^2} f(k) dk` through the Gaussian image
/// `int_R e^{-a k^2 + i k p} dk = sqrt(pi/a) e^{-p^2/(4a)}`, `a = eps + it`.
pub fn fresnel_gaussian<T: Real>(t: T, eps: T, measure: &FourierMeasure<T>) -> Result<Cplx<T>> {
    check_time(t)?;
    if !(eps >= T::zero()) {
        return Err(Error::Domain(format!("damping must be non-negative, got eps = {eps}")));
    }
    let a = cplx(eps, t);
    let root = (real(T::PI()) / a).sqrt();
    let image = |p: T| root * (real(-p * p * T::lit(0.25)) / a).exp();
    let mut total = real(T::zero());
    for &(w, p) in &measure.atoms {
        total = total + image(p).scale(w);
    }
    for pair in measure.density.windows(2) {
        let (p0, g0) = pair[0];
        let (p1, g1) = pair[1];
        if !(p1 > p0) {
            return Err(Error::InvalidParameter("density samples must be strictly increasing".into()));
        }
        total = total + (image(p0).scale(g0) + image(p1).scale(g1)).scale(T::lit(0.5) * (p1 - p0));
    }
    Ok(total)
}
