//! Weighted sup-norm scans of the evolution kernel, power-law fits of their
//! time decay, and the bound/sharpness checks for `alpha = pi/2`.
//!
//! The `L^1(w_s) -> L^inf(1/w_t)` norm of an integral operator is the sup of
//! `w_t(x) |K(x, y)| / w_s(y)`; sampled on a finite grid it approximates the
//! norm from below.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::evolution::{full_kernel, kernel_pi2_closed, kernel_quadrature, kernel_friedrichs_closed, QuadratureSpec};
use crate::quad::logspace;
use crate::scalar::Real;
use crate::specfun::envelope_constant;
use crate::spectral::ProblemParams;

pub const DEFAULT_XY_RANGE: (f64, f64, usize) = (0.05, 200.0, 25);
pub const DEFAULT_T_RANGE: (f64, f64, usize) = (10.0, 1000.0, 12);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightKind {
    Unweighted,
    /// Source weight `max(x^{-l}, 1)`, target weight `min(x^l, 1)`.
    FriedrichsWeight,
}

impl WeightKind {
    pub fn as_str(self) -> &'static str {
        match self {
            WeightKind::Unweighted => "unweighted",
            WeightKind::FriedrichsWeight => "friedrichs_weight",
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct WeightSpec<T> {
    pub kind: WeightKind,
    pub l: T,
}

impl<T: Real> WeightSpec<T> {
    pub fn unweighted(l: T) -> Self {
        WeightSpec { kind: WeightKind::Unweighted, l }
    }

    pub fn friedrichs(l: T) -> Self {
        WeightSpec { kind: WeightKind::FriedrichsWeight, l }
    }

    /// `w_t(x)`; the reciprocal source weight `1/max(x^{-l},1)` coincides with it.
    pub fn target(&self, x: T) -> T {
        match self.kind {
            WeightKind::Unweighted => T::one(),
            WeightKind::FriedrichsWeight => x.powf(self.l).min(T::one()),
        }
    }
}

/// A set of `(x, y)` sample points. Tensor grids keep only `x <= y`, the
/// kernel being symmetric.
#[derive(Clone, Debug, Serialize)]
pub struct XyGrid<T> {
    pub points: Vec<(T, T)>,
    pub description: String,
}

impl<T: Real> XyGrid<T> {
    pub fn tensor(xs: &[T]) -> Self {
        let mut points = Vec::with_capacity(xs.len() * (xs.len() + 1) / 2);
        for (i, &x) in xs.iter().enumerate() {
            for &y in &xs[i..] {
                points.push((x, y));
            }
        }
        let description = match (xs.first(), xs.last()) {
            (Some(a), Some(b)) => format!("{n}x{n} tensor on [{a}, {b}]", n = xs.len()),
            _ => "empty".to_string(),
        };
        XyGrid { points, description }
    }

    /// Log-spaced tensor grid with `n` points per axis.
    pub fn log_tensor(min: T, max: T, n: usize) -> Self {
        let xs: Vec<T> = logspace(min.as_f64(), max.as_f64(), n).into_iter().map(T::lit).collect();
        let mut g = Self::tensor(&xs);
        g.description = format!("{n}x{n} log-spaced on [{min}, {max}]");
        g
    }

    pub fn single(x: T, y: T) -> Self {
        XyGrid { points: vec![(x, y)], description: format!("single point ({x}, {y})") }
    }

    pub fn default_grid() -> Self {
        let (a, b, n) = DEFAULT_XY_RANGE;
        Self::log_tensor(T::lit(a), T::lit(b), n)
    }

    fn validate(&self) -> Result<()> {
        if self.points.is_empty() {
            return Err(Error::InvalidParameter("empty (x, y) grid".into()));
        }
        if let Some(&(x, y)) = self.points.iter().find(|(x, y)| !(*x > T::zero() && *y > T::zero() && x.is_finite() && y.is_finite())) {
            return Err(Error::Domain(format!("grid points must be positive and finite, got ({x}, {y})")));
        }
        Ok(())
    }
}

/// Default log-spaced time grid.
pub fn default_times<T: Real>() -> Vec<T> {
    let (a, b, n) = DEFAULT_T_RANGE;
    logspace(a, b, n).into_iter().map(T::lit).collect()
}

/// Which part of the propagator a scan measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelPart {
    /// `e^{-itH_alpha} P_c`.
    Continuous,
    /// `e^{-itH_alpha}` including the bound state.
    Full,
}

fn kernel_abs<T: Real>(p: &ProblemParams<T>, spec: &QuadratureSpec<T>, part: KernelPart, t: T, x: T, y: T) -> Result<T> {
    let k = match part {
        KernelPart::Full => full_kernel(p, spec, t, x, y)?,
        KernelPart::Continuous if p.is_pi_half() => kernel_pi2_closed(p, t, x, y)?,
        KernelPart::Continuous if p.is_friedrichs() => kernel_friedrichs_closed(p, t, x, y)?,
        KernelPart::Continuous => kernel_quadrature(p, spec, t, x, y)?,
    };
    Ok(k.value.norm())
}

/// `max_grid w_t(x) |K(t, x, y)| w_t(y)` for the `P_c` kernel.
pub fn weighted_sup<T: Real>(p: &ProblemParams<T>, spec: &QuadratureSpec<T>, t: T, grid: &XyGrid<T>, w: &WeightSpec<T>) -> Result<T> {
    weighted_sup_part(p, spec, KernelPart::Continuous, t, grid, w)
}

pub fn weighted_sup_part<T: Real>(
    p: &ProblemParams<T>,
    spec: &QuadratureSpec<T>,
    part: KernelPart,
    t: T,
    grid: &XyGrid<T>,
    w: &WeightSpec<T>,
) -> Result<T> {
    grid.validate()?;
    let values: Vec<Result<T>> = grid
        .points
        .par_iter()
        .map(|&(x, y)| Ok(w.target(x) * kernel_abs(p, spec, part, t, x, y)? * w.target(y)))
        .collect();
    let mut best = T::zero();
    for v in values {
        best = best.max(v?);
    }
    Ok(best)
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayScan<T> {
    pub l: T,
    pub alpha: T,
    pub weight: WeightKind,
    pub part: KernelPart,
    pub times: Vec<T>,
    pub norms: Vec<T>,
    pub fitted_exponent: T,
    /// RMS of the log-log residuals.
    pub fit_residual: T,
    pub grid: String,
}

/// Weighted sups over `times` and their fitted decay exponent.
pub fn scan<T: Real>(
    p: &ProblemParams<T>,
    spec: &QuadratureSpec<T>,
    part: KernelPart,
    times: &[T],
    grid: &XyGrid<T>,
    w: &WeightSpec<T>,
) -> Result<DecayScan<T>> {
    grid.validate()?;
    if times.windows(2).any(|s| !(s[0] < s[1])) || times.iter().any(|t| !(*t > T::zero())) {
        return Err(Error::InvalidParameter("scan times must be positive and strictly increasing".into()));
    }
    let tasks: Vec<(usize, T, T)> = (0..times.len())
        .flat_map(|i| grid.points.iter().map(move |&(x, y)| (i, x, y)))
        .collect();
    let values: Vec<Result<T>> = tasks
        .par_iter()
        .map(|&(i, x, y)| Ok(w.target(x) * kernel_abs(p, spec, part, times[i], x, y)? * w.target(y)))
        .collect();
    let mut norms = vec![T::zero(); times.len()];
    for (&(i, _, _), v) in tasks.iter().zip(values) {
        norms[i] = norms[i].max(v?);
    }
    let (fitted_exponent, fit_residual) = fit_decay_exponent(times, &norms)?;
    Ok(DecayScan {
        l: p.l(),
        alpha: p.alpha(),
        weight: w.kind,
        part,
        times: times.to_vec(),
        norms,
        fitted_exponent,
        fit_residual,
        grid: grid.description.clone(),
    })
}

/// Least-squares slope of `ln norm` against `ln t` and the RMS residual.
/// Needs at least 4 points spanning 1.5 decades.
pub fn fit_decay_exponent<T: Real>(times: &[T], norms: &[T]) -> Result<(T, T)> {
    if times.len() != norms.len() {
        return Err(Error::InvalidParameter(format!("{} times but {} norms", times.len(), norms.len())));
    }
    if times.len() < 4 {
        return Err(Error::IllConditioned(format!("power-law fit needs at least 4 points, got {}", times.len())));
    }
    if let Some(v) = times.iter().chain(norms).find(|v| !(**v > T::zero() && v.is_finite())) {
        return Err(Error::Domain(format!("power-law fit needs positive finite data, got {v}")));
    }
    let lt: Vec<T> = times.iter().map(|t| t.ln()).collect();
    let ln: Vec<T> = norms.iter().map(|v| v.ln()).collect();
    let (lo, hi) = lt.iter().fold((T::infinity(), T::neg_infinity()), |(a, b), &v| (a.min(v), b.max(v)));
    if (hi - lo) / T::LN_10() < T::lit(1.5) {
        return Err(Error::IllConditioned(format!(
            "power-law fit needs 1.5 decades in t, got {:.3}",
            ((hi - lo) / T::LN_10()).as_f64()
        )));
    }
    let n = T::from_usize_lossy(lt.len());
    let mx = lt.iter().fold(T::zero(), |a, &v| a + v) / n;
    let my = ln.iter().fold(T::zero(), |a, &v| a + v) / n;
    let (mut sxy, mut sxx) = (T::zero(), T::zero());
    for (&x, &y) in lt.iter().zip(&ln) {
        sxy = sxy + (x - mx) * (y - my);
        sxx = sxx + (x - mx) * (x - mx);
    }
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let ss = lt.iter().zip(&ln).fold(T::zero(), |a, (&x, &y)| {
        let r = y - (icpt + slope * x);
        a + r * r
    });
    Ok((slope, (ss / n).sqrt()))
}

/// Per-time-slice constants of the `alpha = pi/2` upper bound
/// `|K| <= C (2t)^{-1/2} ((2t+xy)/xy)^l`.
#[derive(Clone, Debug, Serialize)]
pub struct UpperBoundReport<T> {
    pub l: T,
    pub times: Vec<T>,
    /// `max_grid |K| sqrt(2t) (xy/(2t+xy))^l` per time.
    pub constants: Vec<T>,
    /// Largest slice constant: the single constant fitted to the whole grid.
    pub fitted_constant: T,
    /// `max/min` of the slice constants.
    pub slice_ratio: T,
    /// `sup_r sqrt(r) |J_{-l-1/2}(r)| (r/(1+r))^l`, the constant the bound is derived with.
    pub analytic_constant: T,
    pub passes: bool,
}

/// Largest allowed `max/min` ratio of the slice constants.
pub const UPPER_BOUND_SLICE_RATIO: f64 = 1.2;

pub fn check_upper_bound<T: Real>(p: &ProblemParams<T>, times: &[T], grid: &XyGrid<T>) -> Result<UpperBoundReport<T>> {
    grid.validate()?;
    if times.is_empty() || times.iter().any(|t| !(*t > T::zero())) {
        return Err(Error::InvalidParameter("upper-bound check needs positive times".into()));
    }
    let l = p.l();
    let two = T::lit(2.0);
    let mut constants = Vec::with_capacity(times.len());
    for &t in times {
        let values: Vec<Result<T>> = grid
            .points
            .par_iter()
            .map(|&(x, y)| {
                let k = kernel_pi2_closed(p, t, x, y)?.value.norm();
                Ok(k * (two * t).sqrt() * (x * y / (two * t + x * y)).powf(l))
            })
            .collect();
        let mut c = T::zero();
        for v in values {
            c = c.max(v?);
        }
        constants.push(c);
    }
    let fitted = constants.iter().fold(T::zero(), |a, &c| a.max(c));
    let low = constants.iter().fold(T::infinity(), |a, &c| a.min(c));
    let analytic = envelope_constant(l)?;
    let slice_ratio = fitted / low;
    let passes = slice_ratio <= T::lit(UPPER_BOUND_SLICE_RATIO) && fitted <= analytic * (T::one() + T::lit(1e-9));
    Ok(UpperBoundReport { l, times: times.to_vec(), constants, fitted_constant: fitted, slice_ratio, analytic_constant: analytic, passes })
}

/// Per-time-slice lower constants `min |K| t^{1/2-l} (xy/2)^l` over grid points
/// with `xy < t`, for `alpha = pi/2`, `0 < l < 1/2`.
#[derive(Clone, Debug, Serialize)]
pub struct SharpnessReport<T> {
    pub l: T,
    pub times: Vec<T>,
    pub constants: Vec<T>,
    /// Smallest slice constant.
    pub fitted_constant: T,
    /// Largest relative change of the slice constant per decade of `t`.
    pub drift_per_decade: T,
    pub passes: bool,
}

/// Largest allowed drift of the lower constant per decade.
pub const SHARPNESS_DRIFT: f64 = 0.1;

pub fn check_sharpness<T: Real>(p: &ProblemParams<T>, times: &[T], grid: &XyGrid<T>) -> Result<SharpnessReport<T>> {
    grid.validate()?;
    let l = p.l();
    if !(l > T::zero()) {
        return Err(Error::InvalidParameter(format!("sharpness check needs 0 < l < 1/2, got {l}")));
    }
    if times.len() < 2 || times.windows(2).any(|s| !(s[0] < s[1] && s[0] > T::zero())) {
        return Err(Error::InvalidParameter("sharpness check needs at least two increasing positive times".into()));
    }
    let two = T::lit(2.0);
    let mut constants = Vec::with_capacity(times.len());
    for &t in times {
        let mut c = T::infinity();
        for &(x, y) in grid.points.iter().filter(|(x, y)| *x * *y < t) {
            let k = kernel_pi2_closed(p, t, x, y)?.value.norm();
            c = c.min(k * t.powf(T::lit(0.5) - l) * (x * y / two).powf(l));
        }
        if !c.is_finite() {
            return Err(Error::InvalidParameter(format!("no grid point with xy < t at t = {t}")));
        }
        constants.push(c);
    }
    let mut drift = T::zero();
    for (w, c) in times.windows(2).zip(constants.windows(2)) {
        let decades = (w[1] / w[0]).log10();
        drift = drift.max((c[1] / c[0] - T::one()).abs() / decades);
    }
    let fitted = constants.iter().fold(T::infinity(), |a, &c| a.min(c));
    Ok(SharpnessReport {
        l,
        times: times.to_vec(),
        constants,
        fitted_constant: fitted,
        drift_per_decade: drift,
        passes: fitted > T::zero() && drift < T::lit(SHARPNESS_DRIFT),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law_fit() {
        let times = logspace(1.0, 1e3, 7);
        let norms: Vec<f64> = times.iter().map(|t| 3.0 * t.powf(-0.5)).collect();
        let (s, r) = fit_decay_exponent(&times, &norms).unwrap();
        assert!((s + 0.5).abs() < 1e-12 && r < 1e-12, "{s} {r}");
    }

    #[test]
    fn fit_rejects_short_spans() {
        let times = [10.0, 12.0, 15.0, 20.0];
        assert!(matches!(fit_decay_exponent(&times, &[1.0; 4]), Err(Error::IllConditioned(_))));
        assert!(matches!(fit_decay_exponent(&times[..3], &[1.0; 3]), Err(Error::IllConditioned(_))));
    }

    #[test]
    fn single_point_grid_is_kernel_modulus() {
        let p = ProblemParams::new(0.25, std::f64::consts::FRAC_PI_2).unwrap();
        let spec = QuadratureSpec::default();
        let s = weighted_sup(&p, &spec, 3.0, &XyGrid::single(1.0, 1.0), &WeightSpec::friedrichs(0.25)).unwrap();
        assert_eq!(s, kernel_pi2_closed(&p, 3.0, 1.0, 1.0).unwrap().value.norm());
    }

    #[test]
    fn tensor_grid_keeps_upper_triangle() {
        let g = XyGrid::tensor(&[1.0, 2.0, 3.0]);
        assert_eq!(g.points.len(), 6);
        assert!(g.points.iter().all(|(x, y)| x <= y));
    }
}
