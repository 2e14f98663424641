//! Self-check suite: Wronskians, boundary conditions, image-method
//! propagators, Fresnel identities, split recombination and the spectral
//! cross-checks, evaluated at seeded random parameters.
//!
//! A [`Fault`] deliberately corrupts one ingredient so the suite can be shown
//! to notice.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::Result;
use crate::evolution::{
    damped_kernel_quadrature, damped_pi2_closed, fresnel_gaussian, kernel_friedrichs_closed, kernel_pi2_closed_with_phase,
    kernel_quadrature, split_and_direct, FourierMeasure, QuadratureSpec,
};
use crate::quad::{adaptive, neville_to_zero};
use crate::scalar::{cis, cplx, real, Cplx};
use crate::specfun::{bessel_j, Order};
use crate::spectral::{
    boundary_functionals, derivative, eigenvalue_formula, eigenvalue_root, phi, rotated_system, spectral_density, theta,
    weyl_m, weyl_m_alpha, ProblemParams,
};

/// Points per randomized check.
const SAMPLES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Fault {
    /// `C_l` multiplied by `1 + 1e-3`.
    ScaleCl,
    /// `i^{l-1/2}` taken on the next branch of the logarithm.
    BranchPhase,
}

impl Fault {
    pub fn as_str(self) -> &'static str {
        match self {
            Fault::ScaleCl => "scale_cl",
            Fault::BranchPhase => "branch_phase",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub max_error: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub seed: u64,
    pub fault: Option<Fault>,
    pub checks: Vec<CheckResult>,
    pub all_passed: bool,
}

struct Ctx {
    rng: ChaCha8Rng,
    fault: Option<Fault>,
}

impl Ctx {
    fn params(&self, l: f64, alpha: f64) -> Result<ProblemParams<f64>> {
        let p = ProblemParams::new(l, alpha)?;
        Ok(match self.fault {
            Some(Fault::ScaleCl) => p.with_scaled_c_l(1.0 + 1e-3),
            _ => p,
        })
    }

    fn branch_offset(&self, l: f64) -> f64 {
        match self.fault {
            Some(Fault::BranchPhase) => 2.0 * PI * (l - 0.5),
            _ => 0.0,
        }
    }

    fn l(&mut self) -> f64 {
        self.rng.gen_range(-0.45..0.45)
    }
}

fn outcome(name: &'static str, max_error: f64, tolerance: f64, detail: String) -> CheckResult {
    CheckResult { name, passed: max_error.is_finite() && max_error <= tolerance, max_error, tolerance, detail }
}

/// Runs every check; errors inside a check count as a failure of that check.
pub fn run_suite(seed: u64, fault: Option<Fault>) -> ValidationReport {
    let mut ctx = Ctx { rng: ChaCha8Rng::seed_from_u64(seed), fault };
    type Check = (&'static str, f64, fn(&mut Ctx) -> Result<(f64, String)>);
    let checks: [Check; 11] = [
        ("wronskian_fundamental", 1e-8, wronskian_fundamental),
        ("wronskian_weyl", 1e-8, wronskian_weyl),
        ("wronskian_boundary", 1e-6, wronskian_boundary),
        ("image_method", 1e-10, image_method),
        ("fresnel_identity", 1e-10, fresnel_identity),
        ("split_recombination", 1e-9, split_recombination),
        ("damped_identity", 1e-8, damped_identity),
        ("time_reversal", 1e-10, time_reversal),
        ("hermiticity", 1e-10, hermiticity),
        ("spectral_density_limit", 1e-6, spectral_density_limit),
        ("eigenvalue_consistency", 1e-10, eigenvalue_consistency),
    ];
    let results: Vec<CheckResult> = checks
        .iter()
        .map(|&(name, tol, f)| match f(&mut ctx) {
            Ok((err, detail)) => outcome(name, err, tol, detail),
            Err(e) => CheckResult { name, passed: false, max_error: f64::INFINITY, tolerance: tol, detail: format!("error: {e}") },
        })
        .collect();
    let all_passed = results.iter().all(|c| c.passed);
    ValidationReport { seed, fault, checks: results, all_passed }
}

fn wronskian<F, G>(f: &F, g: &G, x: f64) -> Result<(Cplx<f64>, f64)>
where
    F: Fn(f64) -> Result<Cplx<f64>>,
    G: Fn(f64) -> Result<Cplx<f64>>,
{
    let h = 1e-3 * x;
    let (fx, gx) = (f(x)?, g(x)?);
    let (dfx, dgx) = (derivative(f, x, h)?, derivative(g, x, h)?);
    let w = fx * dgx - dfx * gx;
    Ok((w, (fx * dgx).norm() + (dfx * gx).norm()))
}

/// `W(theta, phi) = 1`.
fn wronskian_fundamental(ctx: &mut Ctx) -> Result<(f64, String)> {
    let mut worst: f64 = 0.0;
    for _ in 0..SAMPLES {
        let p = {
            let (l, a) = (ctx.l(), 0.0);
            ctx.params(l, a)?
        };
        let z = cplx(ctx.rng.gen_range(-4.0..4.0), ctx.rng.gen_range(-4.0..4.0));
        let x = ctx.rng.gen_range(0.2..3.0);
        let (w, _) = wronskian(&|s| theta(&p, z, s), &|s| phi(&p, z, s), x)?;
        worst = worst.max((w - real(1.0)).norm());
    }
    Ok((worst, "|W(theta, phi) - 1|".into()))
}

/// `theta + m phi` is proportional to the decaying solution `sqrt(x) H^(1)_nu(kx)`.
fn wronskian_weyl(ctx: &mut Ctx) -> Result<(f64, String)> {
    let mut worst: f64 = 0.0;
    for _ in 0..SAMPLES {
        let p = {
            let (l, a) = (ctx.l(), 0.0);
            ctx.params(l, a)?
        };
        let k = Cplx::from_polar(ctx.rng.gen_range(0.5..2.0), ctx.rng.gen_range(0.2..(PI - 0.2)));
        let z = k * k;
        let m = weyl_m(&p, z)?;
        let nu = p.nu();
        let (jp, jn) = (Order::new(nu)?, Order::new(-nu)?);
        let hankel = |x: f64| -> Result<Cplx<f64>> {
            let a = bessel_j(&jn, k.scale(x))?.value;
            let b = bessel_j(&jp, k.scale(x))?.value;
            Ok((a - cis(-nu * PI) * b) / cplx(0.0, (nu * PI).sin()) * real(x.sqrt()))
        };
        let psi = |x: f64| -> Result<Cplx<f64>> { Ok(theta(&p, z, x)? + m * phi(&p, z, x)?) };
        let x = ctx.rng.gen_range(0.5..2.0);
        let (w, scale) = wronskian(&psi, &hankel, x)?;
        worst = worst.max(w.norm() / scale);
    }
    Ok((worst, "relative W(theta + m phi, sqrt(x) H1(kx))".into()))
}

/// Boundary Wronskians of `phi_alpha` against `x^{l+1}`, `x^{-l}`:
/// `(Gamma_0, Gamma_1) = (sin a, cos a)`. Sensitive to the normalization of
/// `phi`, `theta`, which carries `C_l`.
fn wronskian_boundary(ctx: &mut Ctx) -> Result<(f64, String)> {
    let mut worst: f64 = 0.0;
    for _ in 0..SAMPLES {
        let alpha = ctx.rng.gen_range(0.0..PI);
        let p = {
            let (l, a) = (ctx.l(), alpha);
            ctx.params(l, a)?
        };
        let z = cplx(ctx.rng.gen_range(-2.0..2.0), ctx.rng.gen_range(-2.0..2.0));
        let (g0, g1) = boundary_functionals(&p, |x| Ok(rotated_system(&p, z, x)?.0), 0.3)?;
        worst = worst.max((g0 - real(alpha.sin())).norm()).max((g1 - real(alpha.cos())).norm());
    }
    Ok((worst, "|Gamma(phi_alpha) - (sin a, cos a)|".into()))
}

/// `l = 0` kernels against the even/odd image of the free propagator.
fn image_method(ctx: &mut Ctx) -> Result<(f64, String)> {
    let mut worst: f64 = 0.0;
    let offset = ctx.branch_offset(0.0);
    let p = ctx.params(0.0, FRAC_PI_2)?;
    for _ in 0..SAMPLES {
        let t = ctx.rng.gen_range(0.1..10.0) * if ctx.rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let x = ctx.rng.gen_range(0.05..5.0);
        let y = ctx.rng.gen_range(0.05..5.0);
        let pre = (cplx(0.0, 4.0 * PI * t)).sqrt().inv();
        let a = (cplx(0.0, (x - y) * (x - y) / (4.0 * t))).exp();
        let b = (cplx(0.0, (x + y) * (x + y) / (4.0 * t))).exp();
        let neumann = pre * (a + b);
        let dirichlet = pre * (a - b);
        let kn = kernel_pi2_closed_with_phase(&p, t, x, y, offset)?.value;
        let kd = kernel_friedrichs_closed(&p, t, x, y)?.value;
        worst = worst.max((kn - neumann).norm() / neumann.norm()).max((kd - dirichlet).norm() / dirichlet.norm());
    }
    Ok((worst, "relative error vs Neumann/Dirichlet images".into()))
}

/// Gaussian image of an atom pair against direct quadrature, and the undamped Fresnel integral.
fn fresnel_identity(ctx: &mut Ctx) -> Result<(f64, String)> {
    let mut worst: f64 = 0.0;
    for _ in 0..SAMPLES {
        let t = ctx.rng.gen_range(0.5..3.0);
        let eps: f64 = ctx.rng.gen_range(0.3..1.0);
        let p0 = ctx.rng.gen_range(0.0..2.0);
        let m = FourierMeasure { atoms: vec![(1.0, p0), (1.0, -p0)], density: vec![] };
        let image = fresnel_gaussian(t, eps, &m)?;
        let a = cplx(eps, t);
        let reach = (60.0 / eps).sqrt();
        let mut f = |k: f64| -> Result<Cplx<f64>> { Ok((-a * real(k * k)).exp().scale(2.0 * (p0 * k).cos())) };
        let (direct, _) = adaptive(&mut f, -reach, reach, 0.0, 1e-13, 4000)?;
        worst = worst.max((image - direct).norm() / direct.norm());
        let single = fresnel_gaussian(t, 0.0, &FourierMeasure { atoms: vec![(1.0, 0.0)], density: vec![] })?;
        let exact = cis(-PI / 4.0).scale((PI / t).sqrt());
        worst = worst.max((single - exact).norm() / exact.norm());
    }
    Ok((worst, "relative error of the Gaussian image".into()))
}

/// Weighted `I_1 + I_2 + I_2sym + I_3` against the unsplit integrand on the same path.
fn split_recombination(ctx: &mut Ctx) -> Result<(f64, String)> {
    let mut worst: f64 = 0.0;
    let spec = QuadratureSpec::default();
    for _ in 0..SAMPLES {
        let p = {
            let (l, a) = (ctx.l(), ctx.rng.gen_range(0.0..PI));
            ctx.params(l, a)?
        };
        let t = ctx.rng.gen_range(0.5..20.0);
        let x = ctx.rng.gen_range(0.1..3.0);
        let y = ctx.rng.gen_range(0.1..3.0);
        let (split, direct) = split_and_direct(&p, &spec, t, x, y)?;
        worst = worst.max((split.recombine() - direct).norm() / direct.norm().max(1.0));
    }
    Ok((worst, "|recombined - direct| / max(1, |direct|)".into()))
}

/// Damped `alpha = pi/2` kernel: modified-Bessel closed form against quadrature.
fn damped_identity(ctx: &mut Ctx) -> Result<(f64, String)> {
    let mut worst: f64 = 0.0;
    let spec = QuadratureSpec::default();
    for _ in 0..SAMPLES {
        let p = {
            let (l, a) = (ctx.l(), FRAC_PI_2);
            ctx.params(l, a)?
        };
        let t = ctx.rng.gen_range(0.5..5.0);
        let eps = ctx.rng.gen_range(0.1..1.0);
        let x = ctx.rng.gen_range(0.2..3.0);
        let y = ctx.rng.gen_range(0.2..3.0);
        let closed = damped_pi2_closed(&p, t, eps, x, y)?;
        let quad = damped_kernel_quadrature(&p, &spec, t, eps, x, y)?.value;
        worst = worst.max((closed - quad).norm() / closed.norm().max(1.0));
    }
    Ok((worst, "|closed - quadrature| / max(1, |closed|)".into()))
}

/// `K(-t) = conj K(t)`.
fn time_reversal(ctx: &mut Ctx) -> Result<(f64, String)> {
    let mut worst: f64 = 0.0;
    let spec = QuadratureSpec::default();
    for _ in 0..SAMPLES {
        let p = {
            let (l, a) = (ctx.l(), ctx.rng.gen_range(0.0..PI));
            ctx.params(l, a)?
        };
        let t = ctx.rng.gen_range(0.5..10.0);
        let x = ctx.rng.gen_range(0.1..3.0);
        let y = ctx.rng.gen_range(0.1..3.0);
        let a = kernel_quadrature(&p, &spec, t, x, y)?.value;
        let b = kernel_quadrature(&p, &spec, -t, x, y)?.value;
        worst = worst.max((a.conj() - b).norm() / a.norm().max(1.0));
    }
    Ok((worst, "|K(-t) - conj K(t)|".into()))
}

/// `K(t, x, y) = K(t, y, x)`.
fn hermiticity(ctx: &mut Ctx) -> Result<(f64, String)> {
    let mut worst: f64 = 0.0;
    let spec = QuadratureSpec::default();
    for _ in 0..SAMPLES {
        let p = {
            let (l, a) = (ctx.l(), ctx.rng.gen_range(0.0..PI));
            ctx.params(l, a)?
        };
        let t = ctx.rng.gen_range(0.5..10.0);
        let x = ctx.rng.gen_range(0.1..3.0);
        let y = ctx.rng.gen_range(0.1..3.0);
        let a = kernel_quadrature(&p, &spec, t, x, y)?;
        let b = kernel_quadrature(&p, &spec, t, y, x)?;
        worst = worst.max((a.value - b.value).norm() / a.value.norm().max(1.0));
    }
    Ok((worst, "|K(x, y) - K(y, x)|".into()))
}

/// Closed-form density against `Im m_alpha(lambda + i eps) / pi` extrapolated to `eps = 0`.
fn spectral_density_limit(ctx: &mut Ctx) -> Result<(f64, String)> {
    let mut worst: f64 = 0.0;
    for _ in 0..SAMPLES {
        let p = {
            let (l, a) = (ctx.l(), ctx.rng.gen_range(0.0..PI));
            ctx.params(l, a)?
        };
        let lambda = ctx.rng.gen_range(0.1..10.0);
        let samples: Vec<(f64, f64)> = (0..6)
            .map(|j| {
                let eps = 1e-2 * lambda * 0.5_f64.powi(j);
                Ok((eps, weyl_m_alpha(&p, cplx(lambda, eps))?.im / PI))
            })
            .collect::<Result<_>>()?;
        let (limit, _) = neville_to_zero(&samples)?;
        let rho = spectral_density(&p, lambda);
        worst = worst.max((limit - rho).abs() / rho);
    }
    Ok((worst, "relative error of the density".into()))
}

/// Closed eigenvalue formula against the root of `cos a - m(E) sin a`.
fn eigenvalue_consistency(ctx: &mut Ctx) -> Result<(f64, String)> {
    let mut worst: f64 = 0.0;
    for _ in 0..SAMPLES {
        let p = {
            let (l, a) = (ctx.l(), ctx.rng.gen_range((FRAC_PI_2 + 0.1)..(PI - 0.1)));
            ctx.params(l, a)?
        };
        let formula = eigenvalue_formula(&p).unwrap_or(f64::NAN);
        let root = eigenvalue_root(&p)?.unwrap_or(f64::NAN);
        worst = worst.max((formula - root).abs() / formula.abs());
    }
    Ok((worst, "relative gap between formula and root".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_suite_passes() {
        let r = run_suite(7, None);
        for c in &r.checks {
            assert!(c.passed, "{} failed: {:e} > {:e} ({})", c.name, c.max_error, c.tolerance, c.detail);
        }
    }

    #[test]
    fn scaled_c_l_breaks_the_boundary_wronskian() {
        let r = run_suite(7, Some(Fault::ScaleCl));
        let c = r.checks.iter().find(|c| c.name == "wronskian_boundary").unwrap();
        assert!(!c.passed && !r.all_passed);
    }

    #[test]
    fn wrong_branch_breaks_the_image_check() {
        let r = run_suite(7, Some(Fault::BranchPhase));
        let c = r.checks.iter().find(|c| c.name == "image_method").unwrap();
        assert!(!c.passed && !r.all_passed);
    }
}
