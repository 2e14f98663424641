//! Adaptive Gauss-Kronrod quadrature and Neville extrapolation.

use std::ops::{Add, Sub};

use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};

/// Values an integrand may return: scalars, complex numbers or small arrays of them.
pub(crate) trait QuadValue<T: Real>: Copy + Add<Output = Self> + Sub<Output = Self> {
    fn zero() -> Self;
    fn scale(self, s: T) -> Self;
    fn magnitude(self) -> T;
}

impl<T: Real> QuadValue<T> for T {
    fn zero() -> Self {
        T::zero()
    }
    fn scale(self, s: T) -> Self {
        self * s
    }
    fn magnitude(self) -> T {
        self.abs()
    }
}

impl<T: Real> QuadValue<T> for Cplx<T> {
    fn zero() -> Self {
        Cplx::new(T::zero(), T::zero())
    }
    fn scale(self, s: T) -> Self {
        Cplx::new(self.re * s, self.im * s)
    }
    fn magnitude(self) -> T {
        self.norm()
    }
}

/// Integrand values that can be multiplied by a complex number (contour integrals).
pub(crate) trait ComplexQuadValue<T: Real>: QuadValue<T> {
    fn mul_c(self, c: Cplx<T>) -> Self;
}

impl<T: Real> ComplexQuadValue<T> for Cplx<T> {
    fn mul_c(self, c: Cplx<T>) -> Self {
        self * c
    }
}

/// Fixed-size vector of complex values, summed component-wise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct CVec<T, const N: usize>(pub [Cplx<T>; N]);

impl<T: Real, const N: usize> Add for CVec<T, N> {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        for (a, b) in self.0.iter_mut().zip(o.0) {
            *a = *a + b;
        }
        self
    }
}

impl<T: Real, const N: usize> Sub for CVec<T, N> {
    type Output = Self;
    fn sub(mut self, o: Self) -> Self {
        for (a, b) in self.0.iter_mut().zip(o.0) {
            *a = *a - b;
        }
        self
    }
}

impl<T: Real, const N: usize> QuadValue<T> for CVec<T, N> {
    fn zero() -> Self {
        CVec([Cplx::new(T::zero(), T::zero()); N])
    }
    fn scale(mut self, s: T) -> Self {
        for a in self.0.iter_mut() {
            *a = a.scale(s);
        }
        self
    }
    fn magnitude(self) -> T {
        self.0.iter().fold(T::zero(), |m, a| m.max(a.norm()))
    }
}

impl<T: Real, const N: usize> ComplexQuadValue<T> for CVec<T, N> {
    fn mul_c(mut self, c: Cplx<T>) -> Self {
        for a in self.0.iter_mut() {
            *a = *a * c;
        }
        self
    }
}

// 15-point Kronrod nodes (non-negative half) and weights, with the embedded
// 7-point Gauss weights for the odd-indexed nodes.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One Gauss-Kronrod 15 panel: value, error estimate and `int |f|`.
pub(crate) fn gk15<T, V, F>(f: &mut F, a: T, b: T) -> Result<(V, T, T)>
where
    T: Real,
    V: QuadValue<T>,
    F: FnMut(T) -> Result<V>,
{
    let center = T::lit(0.5) * (a + b);
    let half = T::lit(0.5) * (b - a);
    let fc = f(center)?;
    let mut kronrod = fc.scale(T::lit(WGK[7]));
    let mut gauss = fc.scale(T::lit(WG[3]));
    let mut abs_sum = fc.magnitude() * T::lit(WGK[7]);
    let mut samples = [(V::zero(), V::zero()); 7];
    for j in 0..7 {
        let dx = half * T::lit(XGK[j]);
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        samples[j] = (f1, f2);
        let pair = f1 + f2;
        kronrod = kronrod + pair.scale(T::lit(WGK[j]));
        abs_sum = abs_sum + (f1.magnitude() + f2.magnitude()) * T::lit(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + pair.scale(T::lit(WG[j / 2]));
        }
    }
    // Mean deviation of the integrand, as in QUADPACK's `resasc`.
    let mean = kronrod.scale(T::lit(0.5));
    let mut asc = (fc - mean).magnitude() * T::lit(WGK[7]);
    for (j, &(f1, f2)) in samples.iter().enumerate() {
        asc = asc + ((f1 - mean).magnitude() + (f2 - mean).magnitude()) * T::lit(WGK[j]);
    }
    let hl = half.abs();
    let value = kronrod.scale(half);
    let mut err = (kronrod - gauss).scale(half).magnitude();
    let resasc = asc * hl;
    if resasc > T::zero() && err > T::zero() {
        err = resasc * T::one().min((T::lit(200.0) * err / resasc).powf(T::lit(1.5)));
    }
    let resabs = abs_sum * hl;
    let floor = T::lit(50.0) * T::epsilon() * resabs;
    if resabs > T::min_positive_value() / (T::lit(50.0) * T::epsilon()) {
        err = err.max(floor);
    }
    Ok((value, err, resabs))
}

/// Globally adaptive integration on `[a, b]` by bisection of the worst panel.
///
/// Stops when the summed error estimate is below `max(abs_tol, rel_tol int|f|)`
/// or after `max_panels` panels; in the latter case the last estimate is
/// returned and the caller decides whether it is acceptable.
pub(crate) fn adaptive<T, V, F>(f: &mut F, a: T, b: T, abs_tol: T, rel_tol: T, max_panels: usize) -> Result<(V, T)>
where
    T: Real,
    V: QuadValue<T>,
    F: FnMut(T) -> Result<V>,
{
    let (v0, e0, m0) = gk15(f, a, b)?;
    let mut panels = vec![(a, b, v0, e0, m0)];
    let mut total_err = e0;
    let mut mass = m0;
    while panels.len() < max_panels {
        if total_err <= abs_tol.max(rel_tol * mass) {
            break;
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0, -T::one()), |acc, (i, p)| if p.3 > acc.1 { (i, p.3) } else { acc });
        let (pa, pb, pv, pe, pm) = panels.swap_remove(worst);
        let mid = T::lit(0.5) * (pa + pb);
        if !(mid > pa.min(pb) && mid < pa.max(pb)) {
            panels.push((pa, pb, pv, pe, pm));
            break;
        }
        let (lv, le, lm) = gk15(f, pa, mid)?;
        let (rv, re, rm) = gk15(f, mid, pb)?;
        total_err = total_err - pe + le + re;
        mass = mass - pm + lm + rm;
        panels.push((pa, mid, lv, le, lm));
        panels.push((mid, pb, rv, re, rm));
    }
    // Re-sum to shed the drift of the running updates.
    let mut value = V::zero();
    let mut err = T::zero();
    for p in &panels {
        value = value + p.2;
        err = err + p.3;
    }
    if !(err.is_finite() && value.magnitude().is_finite()) {
        return Err(Error::NonConvergence("adaptive quadrature produced a non-finite value".into()));
    }
    Ok((value, err))
}

/// Neville-Aitken extrapolation of samples `(h_i, v_i)` to `h = 0`.
///
/// Returns the value of the full interpolant and the difference to the
/// interpolant that omits the first sample, a standard error indicator.
pub(crate) fn neville_to_zero<T, V>(samples: &[(T, V)]) -> Result<(V, T)>
where
    T: Real,
    V: QuadValue<T>,
{
    let n = samples.len();
    if n == 0 {
        return Err(Error::InvalidParameter("extrapolation needs at least one sample".into()));
    }
    let mut p: Vec<V> = samples.iter().map(|s| s.1).collect();
    let mut prev_top = p[n - 1];
    for m in 1..n {
        prev_top = p[n - m];
        for i in 0..n - m {
            let hi = samples[i].0;
            let hj = samples[i + m].0;
            let denom = hi - hj;
            if denom == T::zero() {
                return Err(Error::InvalidParameter("extrapolation nodes must be distinct".into()));
            }
            // P_{i..i+m}(0) = (h_i P_{i+1..} - h_j P_{i..})/(h_i - h_j)
            p[i] = (p[i + 1].scale(hi) - p[i].scale(hj)).scale(T::one() / denom);
        }
    }
    let err = if n > 1 { (p[0] - prev_top).magnitude() } else { T::zero() };
    Ok((p[0], err))
}

/// `n` points log-spaced between `a` and `b` inclusive.
pub fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => {
            let ratio = b / a;
            let mut v: Vec<f64> = (0..n).map(|i| a * ratio.powf(i as f64 / (n - 1) as f64)).collect();
            v[n - 1] = b;
            v
        }
    }
}

/// `n` points evenly spaced between `a` and `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}
