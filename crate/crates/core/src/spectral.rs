//! Stationary spectral data of `H_alpha = -d^2/dx^2 + l(l+1)/x^2` on the half-line.
//!
//! Branch convention: `(-z)^nu = exp(nu Log(-z))` with the principal `Log`, so
//! the Weyl function has its cut on `[0, inf)`. Boundary values on the
//! spectrum are never taken implicitly; use [`weyl_m_upper`] or pass
//! `lambda + i eps` explicitly.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::adaptive;
use crate::scalar::{cplx, real, Cplx, Real};
use crate::specfun::{asymptotic_pair_scaled, bessel_k_scaled, gamma, series_0f1, Order, SERIES_SWITCH};

/// Angular momentum `l`, boundary parameter `alpha` and the derived constants.
#[derive(Clone, Debug)]
pub struct ProblemParams<T> {
    l: T,
    alpha: T,
    c_l: T,
    nu: T,
    cos_pi_l: T,
    cos_a: T,
    sin_a: T,
    order_pos: Order<T>,
    order_neg: Order<T>,
}

/// `C_l = sqrt(pi) / (Gamma(l + 3/2) 2^{l+1})`.
pub fn c_l<T: Real>(l: T) -> T {
    T::PI().sqrt() / (gamma(l + T::lit(1.5)) * T::lit(2.0).powf(l + T::one()))
}

impl<T: Real> ProblemParams<T> {
    pub fn new(l: T, alpha: T) -> Result<Self> {
        if !(l.abs() < T::lit(0.5)) {
            return Err(Error::InvalidParameter(format!("angular momentum must satisfy |l| < 1/2, got l = {l}")));
        }
        if !(alpha >= T::zero() && alpha < T::PI()) {
            return Err(Error::InvalidParameter(format!("boundary parameter must satisfy 0 <= alpha < pi, got alpha = {alpha}")));
        }
        let nu = l + T::lit(0.5);
        Ok(ProblemParams {
            l,
            alpha,
            c_l: c_l(l),
            nu,
            cos_pi_l: (T::PI() * l).cos(),
            cos_a: alpha.cos(),
            sin_a: alpha.sin(),
            order_pos: Order::new(nu)?,
            order_neg: Order::new(-nu)?,
        })
    }

    /// Same `l`, different boundary parameter.
    pub fn with_alpha(&self, alpha: T) -> Result<Self> {
        Self::new(self.l, alpha)
    }

    /// Copy with `C_l` multiplied by `factor`; a deliberately wrong model used
    /// by the fault-injection checks.
    pub(crate) fn with_scaled_c_l(&self, factor: T) -> Self {
        ProblemParams { c_l: self.c_l * factor, ..self.clone() }
    }

    pub fn l(&self) -> T {
        self.l
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn c_l(&self) -> T {
        self.c_l
    }

    /// `nu = l + 1/2`.
    pub fn nu(&self) -> T {
        self.nu
    }

    /// `cos(pi l) = sin(nu pi)`.
    pub fn cos_pi_l(&self) -> T {
        self.cos_pi_l
    }

    pub(crate) fn cos_alpha(&self) -> T {
        self.cos_a
    }

    pub(crate) fn sin_alpha(&self) -> T {
        self.sin_a
    }

    pub(crate) fn order_pos(&self) -> &Order<T> {
        &self.order_pos
    }

    pub(crate) fn order_neg(&self) -> &Order<T> {
        &self.order_neg
    }

    /// `alpha == 0` (Friedrichs extension), up to rounding.
    pub fn is_friedrichs(&self) -> bool {
        self.alpha.abs() <= T::lit(4.0) * T::epsilon()
    }

    /// `alpha == pi/2`, up to rounding.
    pub fn is_pi_half(&self) -> bool {
        (self.alpha - T::FRAC_PI_2()).abs() <= T::lit(4.0) * T::epsilon()
    }

    /// Whether the operator has an eigenvalue: `pi/2 < alpha < pi`.
    pub fn has_bound_state(&self) -> bool {
        self.alpha > T::FRAC_PI_2() && !self.is_pi_half()
    }
}

/// `phi(k^2, x) e^{-|Im k| x}` and `theta(k^2, x) e^{-|Im k| x}` for `Re k >= 0`.
///
/// Power series (entire in `k^2`) for `|k x| <= SERIES_SWITCH`, scaled Hankel
/// expansion beyond, so the pair never overflows along complex `k`.
pub(crate) fn fundamental_scaled<T: Real>(p: &ProblemParams<T>, k: Cplx<T>, x: T) -> Result<(Cplx<T>, Cplx<T>)> {
    let kx = k.scale(x);
    let root = (T::PI() * x * T::lit(0.5)).sqrt();
    if kx.norm() <= T::lit(SERIES_SWITCH) {
        let s_pos = series_0f1(&p.order_pos, kx, -T::one()).sum;
        let s_neg = series_0f1(&p.order_neg, kx, -T::one()).sum;
        let half = x * T::lit(0.5);
        let damp = (-k.im.abs() * x).exp();
        let phi = root * half.powf(p.nu) * p.order_pos.recip_gamma() / p.c_l;
        let theta = root * half.powf(-p.nu) * p.order_neg.recip_gamma() * p.c_l / p.cos_pi_l;
        return Ok((s_pos.scale(phi * damp), s_neg.scale(theta * damp)));
    }
    if k.re < T::zero() {
        return Err(Error::Domain(format!("fundamental system along k needs Re k >= 0, got k = {k}")));
    }
    let (j_pos, j_neg, _) = asymptotic_pair_scaled(&p.order_pos, kx);
    let k_nu = k.powf(p.nu);
    let phi = j_pos * k_nu.inv().scale(root / p.c_l);
    let theta = j_neg * k_nu.scale(root * p.c_l / p.cos_pi_l);
    Ok((phi, theta))
}

fn check_x<T: Real>(x: T) -> Result<()> {
    if !(x > T::zero() && x.is_finite()) {
        return Err(Error::Domain(format!("position must be positive and finite, got x = {x}")));
    }
    Ok(())
}

fn unscaled<T: Real>(p: &ProblemParams<T>, z: Cplx<T>, x: T) -> Result<(Cplx<T>, Cplx<T>)> {
    check_x(x)?;
    let k = z.sqrt();
    let (phi, theta) = fundamental_scaled(p, k, x)?;
    let grow = (k.im.abs() * x).exp();
    Ok((phi.scale(grow), theta.scale(grow)))
}

/// Regular solution `phi(z, x) ~ x^{l+1}` as `x -> 0`.
pub fn phi<T: Real>(p: &ProblemParams<T>, z: Cplx<T>, x: T) -> Result<Cplx<T>> {
    Ok(unscaled(p, z, x)?.0)
}

/// Singular solution `theta(z, x) ~ x^{-l}/(2l+1)` as `x -> 0`.
pub fn theta<T: Real>(p: &ProblemParams<T>, z: Cplx<T>, x: T) -> Result<Cplx<T>> {
    Ok(unscaled(p, z, x)?.1)
}

/// `(phi_alpha, theta_alpha) = (cos a phi + sin a theta, cos a theta - sin a phi)`.
pub fn rotated_system<T: Real>(p: &ProblemParams<T>, z: Cplx<T>, x: T) -> Result<(Cplx<T>, Cplx<T>)> {
    let (f, g) = unscaled(p, z, x)?;
    Ok((f.scale(p.cos_a) + g.scale(p.sin_a), g.scale(p.cos_a) - f.scale(p.sin_a)))
}

/// Weyl function of `H_0`: `m(z) = -C_l^2 (-z)^nu / sin(nu pi)` off `[0, inf)`.
pub fn weyl_m<T: Real>(p: &ProblemParams<T>, z: Cplx<T>) -> Result<Cplx<T>> {
    if z.im == T::zero() && z.re >= T::zero() {
        return Err(Error::BranchCut(format!("{z}")));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("spectral parameter {z} is not finite")));
    }
    Ok((-z).powf(p.nu).scale(-p.c_l * p.c_l / p.cos_pi_l))
}

/// Boundary value `m(lambda + i0)` for real `lambda`.
pub fn weyl_m_upper<T: Real>(p: &ProblemParams<T>, lambda: T) -> Cplx<T> {
    let c2 = p.c_l * p.c_l;
    if lambda > T::zero() {
        let pow = lambda.powf(p.nu);
        cplx(c2 * pow * (T::PI() * p.l).tan(), c2 * pow)
    } else {
        real(-c2 * (-lambda).powf(p.nu) / p.cos_pi_l)
    }
}

fn rotate_m<T: Real>(p: &ProblemParams<T>, m: Cplx<T>) -> Cplx<T> {
    (m.scale(p.cos_a) + real(p.sin_a)) / (real(p.cos_a) - m.scale(p.sin_a))
}

/// `m_alpha(z) = (m cos a + sin a)/(cos a - m sin a)`.
pub fn weyl_m_alpha<T: Real>(p: &ProblemParams<T>, z: Cplx<T>) -> Result<Cplx<T>> {
    if let Some(e) = eigenvalue_formula(p) {
        let tol = T::lit(1e-12) * T::one().max(e.abs());
        if (z - real(e)).norm() <= tol {
            return Err(Error::Pole { z: format!("{z}"), energy: e.as_f64(), tol: tol.as_f64() });
        }
    }
    Ok(rotate_m(p, weyl_m(p, z)?))
}

/// Boundary value `m_alpha(lambda + i0)` for real `lambda`; infinite at the eigenvalue.
pub fn weyl_m_alpha_upper<T: Real>(p: &ProblemParams<T>, lambda: T) -> Cplx<T> {
    rotate_m(p, weyl_m_upper(p, lambda))
}

/// Density of the absolutely continuous spectral measure of `H_alpha`.
pub fn spectral_density<T: Real>(p: &ProblemParams<T>, lambda: T) -> T {
    if !(lambda > T::zero()) {
        return T::zero();
    }
    let c2 = p.c_l * p.c_l;
    let pow = lambda.powf(p.nu);
    let a = p.cos_a - c2 * p.sin_a * (T::PI() * p.l).tan() * pow;
    let b = c2 * p.sin_a * pow;
    c2 * pow / (T::PI() * (a * a + b * b))
}

/// `Im m_alpha(k^2 + i0)` continued analytically off the positive `k` axis:
/// `C^2 k^{2nu} / ((cos a - M_+ sin a)(cos a - M_- sin a))` with
/// `M_{+-}(k) = -C^2 k^{2nu} e^{-+ i nu pi} / sin(nu pi)`.
pub(crate) fn im_m_alpha_k<T: Real>(p: &ProblemParams<T>, k: Cplx<T>) -> Cplx<T> {
    let c2 = p.c_l * p.c_l;
    let k2nu = k.powf(T::lit(2.0) * p.nu);
    let phase = cplx(T::zero(), p.nu * T::PI()).exp();
    let base = k2nu.scale(-c2 / p.cos_pi_l);
    let m_plus = base / phase;
    let m_minus = base * phase;
    let d_plus = real(p.cos_a) - m_plus.scale(p.sin_a);
    let d_minus = real(p.cos_a) - m_minus.scale(p.sin_a);
    k2nu.scale(c2) / (d_plus * d_minus)
}

/// Poles of [`im_m_alpha_k`] on the principal sheet `-pi < arg k <= pi`.
pub(crate) fn im_m_alpha_poles<T: Real>(p: &ProblemParams<T>) -> Vec<Cplx<T>> {
    if p.sin_a == T::zero() || p.cos_a.abs() <= T::epsilon() {
        return Vec::new();
    }
    let c0 = p.c_l * p.c_l / p.cos_pi_l;
    let q = -(p.cos_a / p.sin_a) / c0;
    let radius = q.abs().powf(T::one() / (T::lit(2.0) * p.nu));
    let pi = T::PI();
    let offset = if q > T::zero() { T::zero() } else { pi / (T::lit(2.0) * p.nu) };
    let step = pi / p.nu;
    let mut poles = Vec::new();
    for sign in [T::one(), -T::one()] {
        for n in -4i32..=4 {
            let arg = sign * T::FRAC_PI_2() + offset + step * T::lit(n as f64);
            if arg > -pi && arg <= pi {
                poles.push(Cplx::from_polar(radius, arg));
            }
        }
    }
    poles
}

/// Bound-state data.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EigenvalueInfo<T> {
    pub exists: bool,
    pub energy: Option<T>,
    /// Squared `L^2` norm of `phi_alpha(E, .)`.
    pub norm_sq: Option<T>,
}

/// `E = -|cot a cos(pi l) / C_l^2|^{1/nu}` when `pi/2 < alpha < pi`.
pub fn eigenvalue_formula<T: Real>(p: &ProblemParams<T>) -> Option<T> {
    if !p.has_bound_state() {
        return None;
    }
    let base = (p.cos_a / p.sin_a * p.cos_pi_l / (p.c_l * p.c_l)).abs();
    Some(-base.powf(T::one() / p.nu))
}

/// Root of `cos a - m(E) sin a` on `(-inf, 0)` by bisection in `ln(-E)/2`.
pub fn eigenvalue_root<T: Real>(p: &ProblemParams<T>) -> Result<Option<T>> {
    if !p.has_bound_state() {
        return Ok(None);
    }
    let secular = |log_kappa: T| -> Result<T> {
        let e = -(T::lit(2.0) * log_kappa).exp();
        let m = weyl_m(p, real(e))?;
        Ok(p.cos_a - m.re * p.sin_a)
    };
    // The secular function increases with kappa and equals cos a < 0 at kappa = 0.
    // Largest ln(kappa) whose square still fits the type.
    let limit = T::max_value().ln() * T::lit(0.5);
    let (mut lo, mut hi) = (-T::one(), T::one());
    while secular(lo)? > T::zero() {
        lo = lo * T::lit(2.0);
        if lo < -limit {
            return Err(Error::NonConvergence("eigenvalue bracket (energy underflows)".into()));
        }
    }
    while secular(hi)? < T::zero() {
        hi = hi * T::lit(2.0);
        if hi > limit {
            return Err(Error::NonConvergence("eigenvalue bracket (energy overflows)".into()));
        }
    }
    for _ in 0..300 {
        let mid = T::lit(0.5) * (lo + hi);
        if !(mid > lo && mid < hi) {
            break;
        }
        if secular(mid)? < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let log_kappa = T::lit(0.5) * (lo + hi);
    Ok(Some(-(T::lit(2.0) * log_kappa).exp()))
}

/// `phi_alpha(E, x)` at the eigenvalue, evaluated as `sin a * psi(E, x)` with
/// `psi(E, x) = C_l kappa^nu sqrt(2x/pi) K_nu(kappa x)`; the rotated-system
/// form cancels catastrophically for large `x`.
pub fn bound_state_function<T: Real>(p: &ProblemParams<T>, x: T) -> Result<Option<T>> {
    check_x(x)?;
    let Some(e) = eigenvalue_formula(p) else { return Ok(None) };
    let kappa = (-e).sqrt();
    let u = kappa * x;
    let k = bessel_k_scaled(p.nu, u)? * (-u).exp();
    Ok(Some(p.sin_a * p.c_l * kappa.powf(p.nu) * (T::lit(2.0) * x / T::PI()).sqrt() * k))
}

/// `int_0^inf u K_nu(u)^2 du` by adaptive quadrature with a power substitution
/// absorbing the `u^{-2l}` endpoint behaviour and an exponential tail bound.
fn bound_state_profile_integral<T: Real>(p: &ProblemParams<T>) -> Result<T> {
    let nu = p.nu;
    let eps = T::epsilon();
    let q = if p.l > T::zero() { T::one() / (T::one() - T::lit(2.0) * p.l) } else { T::one() };
    let mut head = |w: T| -> Result<T> {
        if w == T::zero() {
            return Ok(T::zero());
        }
        let u = w.powf(q);
        let k = bessel_k_scaled(nu, u)? * (-u).exp();
        Ok(q * w.powf(q - T::one()) * u * k * k)
    };
    let (a, _) = adaptive(&mut head, T::zero(), T::one(), T::zero(), T::lit(500.0) * eps, 400)?;
    let u_cut = T::lit(36.0);
    let mut body = |u: T| -> Result<T> {
        let k = bessel_k_scaled(nu, u)?;
        Ok(u * k * k * (-T::lit(2.0) * u).exp())
    };
    let (b, _) = adaptive(&mut body, T::one(), u_cut, T::zero(), T::lit(500.0) * eps, 400)?;
    // u K^2 ~ (pi/2) e^{-2u} beyond the cut.
    let tail = T::PI() * T::lit(0.25) * (-T::lit(2.0) * u_cut).exp();
    Ok(a + b + tail)
}

/// Eigenvalue of `H_alpha` (if any) with the squared norm of its eigenfunction `phi_alpha(E, .)`.
pub fn eigenvalue<T: Real>(p: &ProblemParams<T>) -> Result<EigenvalueInfo<T>> {
    let Some(e) = eigenvalue_formula(p) else {
        return Ok(EigenvalueInfo { exists: false, energy: None, norm_sq: None });
    };
    let root = eigenvalue_root(p)?.ok_or_else(|| Error::NonConvergence("eigenvalue root".into()))?;
    if (root - e).abs() > T::lit(1e-8) * e.abs() {
        return Err(Error::NonConvergence(format!(
            "eigenvalue root {root} disagrees with the closed formula {e}; branch convention broken"
        )));
    }
    let kappa = (-e).sqrt();
    let profile = bound_state_profile_integral(p)?;
    let norm_sq = p.sin_a * p.sin_a * p.c_l * p.c_l * kappa.powf(T::lit(2.0) * p.nu - T::lit(2.0)) * T::lit(2.0) / T::PI() * profile;
    Ok(EigenvalueInfo { exists: true, energy: Some(e), norm_sq: Some(norm_sq) })
}

/// Green's function `phi_alpha(z, min(x,y)) psi_alpha(z, max(x,y))`,
/// `psi_alpha = theta_alpha + m_alpha phi_alpha`.
pub fn green<T: Real>(p: &ProblemParams<T>, z: Cplx<T>, x: T, y: T) -> Result<Cplx<T>> {
    check_x(x)?;
    check_x(y)?;
    let m = weyl_m_alpha(p, z)?;
    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
    let (phi_lo, _) = rotated_system(p, z, lo)?;
    let (phi_hi, theta_hi) = rotated_system(p, z, hi)?;
    Ok(phi_lo * (theta_hi + m * phi_hi))
}

/// Five-point central derivative.
pub(crate) fn derivative<T: Real, F: Fn(T) -> Result<Cplx<T>>>(f: &F, x: T, h: T) -> Result<Cplx<T>> {
    let d1 = f(x + h)? - f(x - h)?;
    let d2 = f(x + h + h)? - f(x - h - h)?;
    Ok((d1.scale(T::lit(8.0)) - d2) / real(T::lit(12.0) * h))
}

/// Richardson elimination of the listed error exponents on a halving ladder.
fn richardson_halving<T: Real>(values: &[Cplx<T>], exponents: &[T]) -> (Cplx<T>, T) {
    let mut row = values.to_vec();
    let mut last_change = T::infinity();
    for &e in exponents {
        if row.len() < 2 {
            break;
        }
        let f = T::lit(2.0).powf(e);
        let next: Vec<Cplx<T>> = row.windows(2).map(|w| (w[1].scale(f) - w[0]).scale(T::one() / (f - T::one()))).collect();
        last_change = (next[next.len() - 1] - row[row.len() - 1]).norm();
        row = next;
    }
    (row[row.len() - 1], last_change)
}

fn sorted_exponents<T: Real>(mut e: Vec<T>) -> Vec<T> {
    e.sort_by(|a, b| a.partial_cmp(b).expect("finite exponents"));
    e.dedup_by(|a, b| (*a - *b).abs() < T::lit(1e-6));
    e
}

/// Numerical boundary functionals `(Gamma_0 f, Gamma_1 f)`:
/// limits of `W_x(f, x^{l+1})` and `-(2l+1)^{-1} W_x(f, x^{-l})` as `x -> 0`,
/// with `W(f, g) = f g' - f' g`.
///
/// `f` must be defined on `(0, delta]`. The Wronskians are sampled on
/// `x_n = 2^{-n} delta` and the power-law corrections of a solution of
/// `tau u = z u` are eliminated by Richardson extrapolation.
pub fn boundary_functionals<T: Real, F: Fn(T) -> Result<Cplx<T>>>(p: &ProblemParams<T>, f: F, delta: T) -> Result<(Cplx<T>, Cplx<T>)> {
    check_x(delta)?;
    let l = p.l;
    let ladder = 7usize;
    let mut w0 = Vec::with_capacity(ladder);
    let mut w1 = Vec::with_capacity(ladder);
    for n in 0..ladder {
        let x = delta * T::lit(0.5).powi(n as i32);
        let h = x * T::lit(1e-3);
        let fx = f(x)?;
        let dfx = derivative(&f, x, h)?;
        let g0 = x.powf(l + T::one());
        let dg0 = (l + T::one()) * x.powf(l);
        let g1 = x.powf(-l);
        let dg1 = -l * x.powf(-l - T::one());
        w0.push(fx.scale(dg0) - dfx.scale(g0));
        w1.push((fx.scale(dg1) - dfx.scale(g1)).scale(-T::one() / (T::lit(2.0) * l + T::one())));
    }
    // Leading corrections are x^2, x^{2l+3} (Gamma_0) and x^{1-2l}, x^2 (Gamma_1).
    let two = T::lit(2.0);
    let e0 = sorted_exponents(vec![two, two * l + T::lit(3.0), T::lit(4.0), two * l + T::lit(5.0)]);
    let e1 = sorted_exponents(vec![T::one() - two * l, two, T::lit(3.0) - two * l, T::lit(4.0)]);
    let (g0, err0) = richardson_halving(&w0, &e0);
    let (g1, err1) = richardson_halving(&w1, &e1);
    let scale = T::one() + g0.norm().max(g1.norm());
    if !(err0.is_finite() && err1.is_finite()) || err0.max(err1) > T::lit(1e-4) * scale {
        return Err(Error::NonConvergence(format!(
            "boundary functional extrapolation (last corrections {err0:e}, {err1:e})"
        )));
    }
    Ok((g0, g1))
}
