use crate::error::{Error, Result};
use crate::quad::{CVec, ComplexQuadValue};
use crate::scalar::{cis, real, Cplx, Real};
use crate::spectral::{bound_state_function, eigenvalue, ProblemParams};

use super::closed::{kernel_friedrichs_closed, kernel_pi2_closed};
use super::contour::Contour;
use super::integrand::SpectralIntegrand;
use super::ladder::{extrapolate, real_axis};
use super::{check_position, check_time, Engine, IntegralSplit, KernelValue, Method, QuadratureSpec};

fn weights<T: Real>(p: &ProblemParams<T>) -> [T; 3] {
    let (c, s) = (p.cos_alpha(), p.sin_alpha());
    let c2 = p.c_l() * p.c_l();
    let cpl = p.cos_pi_l();
    [c * c / c2, T::lit(2.0) * s * c / (T::lit(2.0) * cpl), c2 * s * s / (cpl * cpl)]
}

/// Integrates an integrand built from [`SpectralIntegrand`] for `t > 0`,
/// `eps >= 0` with the configured engine.
fn integrate<T, V, G>(p: &ProblemParams<T>, spec: &QuadratureSpec<T>, t: T, eps: T, x: T, y: T, build: G) -> Result<(V, T)>
where
    T: Real,
    V: ComplexQuadValue<T>,
    G: Fn(&SpectralIntegrand<'_, T>, Cplx<T>) -> Result<V>,
{
    let w = x + y;
    match spec.engine {
        Engine::Contour => {
            let integrand = SpectralIntegrand::new(p, t, eps, x, y);
            let contour = Contour::new(p, t, x, y)?;
            let mut f = |k: Cplx<T>| build(&integrand, k);
            contour.integrate(&mut f, w, spec.panels_per_period, spec.tolerance)
        }
        Engine::DampedLadder => {
            let rung = |e: T, k_cut: T| -> Result<(V, T)> {
                let integrand = SpectralIntegrand::new(p, t, e, x, y);
                let mut g = |k: T| build(&integrand, real(k));
                let (v, err) = real_axis(&mut g, t, w, p.l(), k_cut, spec.panels_per_period, spec.tolerance)?;
                // Gaussian tail beyond the cutoff.
                let edge = build(&integrand, real(k_cut))?.magnitude();
                Ok((v, err + edge / (T::lit(2.0) * e * k_cut)))
            };
            if eps > T::zero() {
                return rung(eps, (T::lit(40.0) / eps).sqrt());
            }
            let k_cut = spec.ladder_cutoff(t);
            let (v, err, _) = extrapolate(&spec.eps_ladder(t), |e| rung(e, k_cut))?;
            Ok((v, err))
        }
    }
}

fn conj_components<T: Real, const N: usize>(v: CVec<T, N>) -> CVec<T, N> {
    CVec(v.0.map(|z| z.conj()))
}

/// `I_1, I_2, I_2 (x <-> y), I_3` at time `t` (negative `t` by conjugation).
pub fn split_integrals<T: Real>(p: &ProblemParams<T>, spec: &QuadratureSpec<T>, t: T, x: T, y: T) -> Result<IntegralSplit<T>> {
    check_time(t)?;
    check_position(x, y)?;
    spec.validate(t)?;
    let (v, err) = integrate(p, spec, t.abs(), T::zero(), x, y, |f, k| f.split(k))?;
    let v = if t < T::zero() { conj_components(v) } else { v };
    let [i1, i2, i2_sym, i3] = v.0;
    Ok(IntegralSplit { i1, i2, i2_sym, i3, weights: weights(p), est_error: err })
}

/// The split components and the unsplit representation integrand, integrated
/// on the same discretization.
pub(crate) fn split_and_direct<T: Real>(p: &ProblemParams<T>, spec: &QuadratureSpec<T>, t: T, x: T, y: T) -> Result<(IntegralSplit<T>, Cplx<T>)> {
    check_time(t)?;
    check_position(x, y)?;
    spec.validate(t)?;
    let (v, err) = integrate(p, spec, t.abs(), T::zero(), x, y, |f, k| f.split_and_direct(k))?;
    let v = if t < T::zero() { conj_components(v) } else { v };
    let [i1, i2, i2_sym, i3, direct] = v.0;
    Ok((IntegralSplit { i1, i2, i2_sym, i3, weights: weights(p), est_error: err }, direct))
}

fn weighted_error<T: Real>(w: [T; 3], err: T) -> T {
    (w[0].abs() + T::lit(2.0) * w[1].abs() + w[2].abs()) * err
}

/// Continuous-spectrum kernel `[e^{-itH_alpha} P_c](x, y)` from the spectral
/// representation `(2/pi) int e^{-itk^2} phi_alpha phi_alpha Im m_alpha k dk`.
pub fn kernel_quadrature<T: Real>(p: &ProblemParams<T>, spec: &QuadratureSpec<T>, t: T, x: T, y: T) -> Result<KernelValue<T>> {
    let split = split_integrals(p, spec, t, x, y)?;
    Ok(KernelValue {
        value: split.recombine(),
        method: Method::Quadrature,
        est_error: weighted_error(split.weights, split.est_error),
    })
}

/// Continuous-spectrum kernel of `e^{-(eps + it) H_alpha}` for `t > 0`, `eps >= 0`.
pub fn damped_kernel_quadrature<T: Real>(p: &ProblemParams<T>, spec: &QuadratureSpec<T>, t: T, eps: T, x: T, y: T) -> Result<KernelValue<T>> {
    check_position(x, y)?;
    if !(t > T::zero()) || !(eps >= T::zero()) {
        return Err(Error::Domain(format!("damped kernel needs t > 0 and eps >= 0, got t = {t}, eps = {eps}")));
    }
    spec.validate(t)?;
    let (v, err) = integrate(p, spec, t, eps, x, y, |f, k| f.split(k))?;
    let w = weights(p);
    let [i1, i2, i2s, i3] = v.0;
    Ok(KernelValue {
        value: i1.scale(w[0]) + (i2 + i2s).scale(w[1]) + i3.scale(w[2]),
        method: Method::Quadrature,
        est_error: weighted_error(w, err),
    })
}

/// Point-spectrum part `e^{-itE} phi_alpha(E,x) phi_alpha(E,y) / ||phi_alpha(E,.)||^2`;
/// zero when `H_alpha` has no eigenvalue.
pub fn bound_state_term<T: Real>(p: &ProblemParams<T>, t: T, x: T, y: T) -> Result<Cplx<T>> {
    check_position(x, y)?;
    let info = eigenvalue(p)?;
    let (Some(e), Some(norm_sq)) = (info.energy, info.norm_sq) else {
        return Ok(real(T::zero()));
    };
    let fx = bound_state_function(p, x)?.unwrap_or_else(T::zero);
    let fy = bound_state_function(p, y)?.unwrap_or_else(T::zero);
    Ok(cis(-t * e).scale(fx * fy / norm_sq))
}

/// Full kernel `[e^{-itH_alpha}](x, y)`: closed form for `alpha` in `{0, pi/2}`,
/// otherwise the continuous part by quadrature plus the bound-state term.
pub fn full_kernel<T: Real>(p: &ProblemParams<T>, spec: &QuadratureSpec<T>, t: T, x: T, y: T) -> Result<KernelValue<T>> {
    if p.is_pi_half() {
        return kernel_pi2_closed(p, t, x, y);
    }
    if p.is_friedrichs() {
        return kernel_friedrichs_closed(p, t, x, y);
    }
    let mut k = kernel_quadrature(p, spec, t, x, y)?;
    if p.has_bound_state() {
        let b = bound_state_term(p, t, x, y)?;
        k.value = k.value + b;
        k.est_error = k.est_error + T::lit(1e-12) * b.norm();
    }
    Ok(k)
}

