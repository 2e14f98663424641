//! Gaussian-damped real-axis quadrature and its extrapolation to zero damping.

use crate::error::{Error, Result};
use crate::quad::{adaptive, neville_to_zero, QuadValue};
use crate::scalar::Real;

/// `int_0^{k_cut} g(k) dk` for an integrand already carrying `e^{-eps k^2}`.
///
/// Panels follow the local period `2 pi / (2 t k + w)` of the composite phase;
/// the first panel uses `k = k1 u^q` to absorb the `k^{-2l}` endpoint behaviour.
pub(crate) fn real_axis<T, V, F>(g: &mut F, t: T, w: T, l: T, k_cut: T, ppp: usize, tol: T) -> Result<(V, T)>
where
    T: Real,
    V: QuadValue<T>,
    F: FnMut(T) -> Result<V>,
{
    let two_pi = T::lit(2.0) * T::PI();
    let ppp = T::from_usize_lossy(ppp);
    let k1 = k_cut.min(T::lit(0.5) / t.abs().sqrt()).min(T::one() / w);
    let q = T::one() / (T::one() - T::lit(2.0) * l);
    let mut head = |u: T| -> Result<V> {
        let k = k1 * u.powf(q);
        Ok(g(k)?.scale(k1 * q * u.powf(q - T::one())))
    };
    let (mut total, mut err) = adaptive(&mut head, T::zero(), T::one(), T::zero(), tol, 200)?;
    let mut a = k1;
    let mut panels = 0usize;
    while a < k_cut {
        let width = two_pi / (ppp * (T::lit(2.0) * t.abs() * a + w));
        let b = (a + width).min(k_cut);
        let (v, e) = adaptive(g, a, b, T::zero(), tol, 64)?;
        total = total + v;
        err = err + e;
        a = b;
        panels += 1;
        if panels > 5_000_000 {
            return Err(Error::NonConvergence("damped quadrature: panel budget exhausted".into()));
        }
    }
    Ok((total, err))
}

/// Runs `rung(eps)` over the ladder and extrapolates to `eps = 0`.
/// Returns the extrapolated value, its error estimate and the per-rung values.
pub(crate) fn extrapolate<T, V, F>(ladder: &[T], mut rung: F) -> Result<(V, T, Vec<(T, V)>)>
where
    T: Real,
    V: QuadValue<T>,
    F: FnMut(T) -> Result<(V, T)>,
{
    let mut samples = Vec::with_capacity(ladder.len());
    let mut quad_err = T::zero();
    for &eps in ladder {
        let (v, e) = rung(eps)?;
        quad_err = quad_err.max(e);
        samples.push((eps, v));
    }
    let (v, extrap_err) = neville_to_zero(&samples)?;
    Ok((v, extrap_err + quad_err, samples))
}
