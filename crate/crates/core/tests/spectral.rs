use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use proptest::prelude::*;
use radial_disperse::spectral::{
    boundary_functionals, c_l, eigenvalue, eigenvalue_formula, eigenvalue_root, green, phi, rotated_system,
    spectral_density, theta, weyl_m, weyl_m_alpha, weyl_m_upper, ProblemParams,
};
use radial_disperse::Error;

fn params(l: f64, a: f64) -> ProblemParams<f64> {
    ProblemParams::new(l, a).unwrap()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `0F1(; b; w)` by plain summation; only used where the terms do not cancel.
fn hyp0f1(b: f64, w: Complex64) -> Complex64 {
    let mut term = c(1.0, 0.0);
    let mut sum = term;
    for n in 1..80 {
        let nf = n as f64;
        term = term * w / (nf * (b + nf - 1.0));
        sum += term;
    }
    sum
}

/// Central difference of `f` with step `h`, fourth order.
fn deriv(f: impl Fn(f64) -> Complex64, x: f64, h: f64) -> Complex64 {
    (8.0 * (f(x + h) - f(x - h)) - (f(x + 2.0 * h) - f(x - 2.0 * h))) / (12.0 * h)
}

fn second_deriv(f: impl Fn(f64) -> Complex64, x: f64, h: f64) -> Complex64 {
    (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h)) / (12.0 * h * h)
}

#[test]
fn parameters_are_validated() {
    assert!(matches!(ProblemParams::new(0.5, 0.0), Err(Error::InvalidParameter(_))));
    assert!(matches!(ProblemParams::new(0.0, PI), Err(Error::InvalidParameter(_))));
    assert!(matches!(ProblemParams::new(0.0, -0.1), Err(Error::InvalidParameter(_))));
    assert!((c_l(0.0f64) - 1.0).abs() < 1e-14);
}

#[test]
fn fundamental_system_small_x_laws() {
    for l in [-0.4, -0.1, 0.2, 0.45] {
        let p = params(l, 0.0);
        let z = c(1.3, 0.4);
        // Both ratios are even power series in x; one Richardson step in x^2.
        let rich = |f: &dyn Fn(f64) -> Complex64| {
            let (a, b) = (1e-3, 1e-4);
            (f(b) * (a * a) - f(a) * (b * b)) / (a * a - b * b)
        };
        let r_phi = rich(&|x| phi(&p, z, x).unwrap() / x.powf(l + 1.0));
        let r_theta = rich(&|x| theta(&p, z, x).unwrap() * (2.0 * l + 1.0) / x.powf(-l));
        assert!((r_phi - 1.0).norm() < 1e-10, "l={l}: {r_phi}");
        assert!((r_theta - 1.0).norm() < 1e-10, "l={l}: {r_theta}");
    }
}

#[test]
fn l_zero_is_the_free_pair() {
    let p = params(0.0, 0.0);
    let (k, x) = (2.0, 1.3);
    let z = c(k * k, 0.0);
    assert!((phi(&p, z, x).unwrap() - (k * x).sin() / k).norm() < 1e-14);
    assert!((theta(&p, z, x).unwrap() - (k * x).cos()).norm() < 1e-14);
}

#[test]
fn negative_energy_matches_series() {
    let l = 0.25;
    let p = params(l, 0.0);
    let z = c(-1.0, 0.0);
    let x = 1.0;
    let f = phi(&p, z, x).unwrap();
    let g = theta(&p, z, x).unwrap();
    let nu = l + 0.5;
    let w = -z * (x * x / 4.0);
    let f_ref = x.powf(l + 1.0) * hyp0f1(nu + 1.0, w);
    let g_ref = x.powf(-l) / (2.0 * l + 1.0) * hyp0f1(1.0 - nu, w);
    assert!(f.im.abs() < 1e-12 && g.im.abs() < 1e-12, "{f} {g}");
    assert!((f - f_ref).norm() < 1e-13 * f_ref.norm(), "{f} vs {f_ref}");
    assert!((g - g_ref).norm() < 1e-13 * g_ref.norm(), "{g} vs {g_ref}");
}

#[test]
fn rotated_system_examples() {
    let p = params(0.3, 0.0);
    let z = c(2.0, 1.0);
    let (f, g) = rotated_system(&p, z, 0.7).unwrap();
    assert_eq!((f, g), (phi(&p, z, 0.7).unwrap(), theta(&p, z, 0.7).unwrap()));

    let q = params(0.3, FRAC_PI_2);
    let (f, g) = rotated_system(&q, z, 0.7).unwrap();
    assert!((f - theta(&q, z, 0.7).unwrap()).norm() < 1e-15);
    assert!((g + phi(&q, z, 0.7).unwrap()).norm() < 1e-15);

    let r = params(0.3, 1.0);
    let fa = |x: f64| rotated_system(&r, z, x).unwrap().0;
    let ta = |x: f64| rotated_system(&r, z, x).unwrap().1;
    let x = 0.7;
    let w = ta(x) * deriv(fa, x, 1e-3) - deriv(ta, x, 1e-3) * fa(x);
    assert!((w - 1.0).norm() < 1e-9, "{w}");

    // Exact recombination.
    let (ca, sa) = (1.0f64.cos(), 1.0f64.sin());
    let (f0, g0) = (phi(&r, z, x).unwrap(), theta(&r, z, x).unwrap());
    assert_eq!(fa(x), f0 * ca + g0 * sa);
}

#[test]
fn weyl_function_examples() {
    let p = params(0.0, 0.0);
    assert!((weyl_m(&p, c(-4.0, 0.0)).unwrap() - c(-2.0, 0.0)).norm() < 1e-14);
    assert!(matches!(weyl_m(&p, c(1.0, 0.0)), Err(Error::BranchCut(_))));

    let q = params(0.25, 0.0);
    let cl = c_l(0.25);
    let expected = -cl * cl * Complex64::from_polar(1.0, -PI * 0.75) / (PI * 0.25).cos();
    assert!((weyl_m_upper(&q, 1.0) - expected).norm() < 1e-14);
    assert!((weyl_m(&q, c(1.0, 1e-12)).unwrap() - expected).norm() < 1e-11);
}

#[test]
fn weyl_alpha_examples() {
    let z = c(3.0, 0.5);
    let p0 = params(0.2, 0.0);
    assert!((weyl_m_alpha(&p0, z).unwrap() - weyl_m(&p0, z).unwrap()).norm() < 1e-15);
    let ph = params(0.2, FRAC_PI_2);
    let m = weyl_m(&ph, z).unwrap();
    assert!((weyl_m_alpha(&ph, z).unwrap() + 1.0 / m).norm() < 1e-15);

    let p = params(0.2, 1.2);
    let m = weyl_m(&p, z).unwrap();
    let lhs = weyl_m_alpha(&p, z).unwrap().im;
    let rhs = m.im / (1.2f64.cos() - m * 1.2f64.sin()).norm_sqr();
    assert!((lhs - rhs).abs() < 1e-14 * rhs.abs());

    let pb = params(0.0, 3.0 * FRAC_PI_4);
    assert!(matches!(weyl_m_alpha(&pb, c(-1.0, 0.0)), Err(Error::Pole { .. })));
}

#[test]
fn spectral_density_examples() {
    let p = params(0.0, 0.0);
    assert!((spectral_density(&p, 4.0) - 2.0 / PI).abs() < 1e-15);
    assert_eq!(spectral_density(&p, -1.0), 0.0);

    let q = params(0.0, FRAC_PI_2);
    let lam = 2.3;
    let eps = 1e-8;
    let oracle = (-1.0 / weyl_m(&q, c(lam, eps)).unwrap()).im / PI;
    assert!((spectral_density(&q, lam) - oracle).abs() < 1e-7 * oracle);

    // Im m_alpha(lambda + i eps) is smooth in eps; linear Richardson on a halving ladder.
    let r = params(0.25, 2.0);
    let lam = 1.7;
    let f = |e: f64| weyl_m_alpha(&r, c(lam, e)).unwrap().im / PI;
    let ladder = [1e-4, 1e-5, 1e-6, 1e-7, 1e-8];
    let target = spectral_density(&r, lam);
    for w in ladder.windows(2) {
        let (a, b) = (w[0], w[1]);
        let ext = (a * f(b) - b * f(a)) / (a - b);
        assert!((ext - target).abs() < 1e-6 * target, "{ext} vs {target}");
    }
}

#[test]
fn eigenvalue_examples() {
    let p = params(0.0, 3.0 * FRAC_PI_4);
    let info = eigenvalue(&p).unwrap();
    assert!(info.exists);
    assert!((info.energy.unwrap() + 1.0).abs() < 1e-12);
    // phi_alpha(-1, x) = cos a sinh x + sin a cosh x = e^{-x}/sqrt 2, so the norm is 1/4.
    assert!((info.norm_sq.unwrap() - 0.25).abs() < 1e-12, "{:?}", info.norm_sq);

    let q = params(0.3, FRAC_PI_4);
    let info = eigenvalue(&q).unwrap();
    assert!(!info.exists && info.energy.is_none());

    let r = params(0.25, 2.5);
    let a = eigenvalue_formula(&r).unwrap();
    let b = eigenvalue_root(&r).unwrap().unwrap();
    assert!((a - b).abs() < 1e-10 * a.abs());
}

#[test]
fn eigenvalue_formula_matches_root_on_a_grid() {
    for i in 0..5 {
        let l = -0.4 + 0.2 * i as f64;
        for j in 0..5 {
            let a = FRAC_PI_2 + (j as f64 + 0.5) * FRAC_PI_2 / 5.0;
            let p = params(l, a);
            let e = eigenvalue_formula(&p).unwrap();
            let r = eigenvalue_root(&p).unwrap().unwrap();
            assert!((e - r).abs() < 1e-10 * e.abs(), "l={l} a={a}: {e} vs {r}");
            // The secular function changes sign across the root.
            let sec = |x: f64| a.cos() - weyl_m(&p, c(x, 0.0)).unwrap().re * a.sin();
            assert!(sec(e * 0.99) * sec(e * 1.01) < 0.0);
        }
    }
}

#[test]
fn green_function_properties() {
    let p = params(-0.2, 2.1);
    let z = c(1.5, 0.8);
    for (x, y) in [(0.3, 1.1), (2.0, 0.4), (0.9, 0.91), (5.0, 3.0)] {
        let a = green(&p, z, x, y).unwrap();
        let b = green(&p, z, y, x).unwrap();
        assert!((a - b).norm() < 1e-15 * a.norm());
    }

    let (y, l) = (1.2, -0.2);
    let g = |x: f64| green(&p, z, x, y).unwrap();
    for x in [0.5, 2.5] {
        let h = 1e-3;
        let res = -second_deriv(g, x, h) + (l * (l + 1.0) / (x * x) - z) * g(x);
        assert!(res.norm() < 1e-5, "x={x}: {res}");
    }
    // One-sided fourth-order differences from each side of the diagonal.
    let h = 1e-3;
    let right = (-25.0 * g(y) + 48.0 * g(y + h) - 36.0 * g(y + 2.0 * h) + 16.0 * g(y + 3.0 * h) - 3.0 * g(y + 4.0 * h)) / (12.0 * h);
    let left = (25.0 * g(y) - 48.0 * g(y - h) + 36.0 * g(y - 2.0 * h) - 16.0 * g(y - 3.0 * h) + 3.0 * g(y - 4.0 * h)) / (12.0 * h);
    assert!((right - left + 1.0).norm() < 1e-6, "{}", right - left);
}

#[test]
fn boundary_functional_examples() {
    let (l, z) = (0.3, c(1.5, 0.0));
    let p = params(l, 1.0);
    let (g0, g1) = boundary_functionals(&p, |x| theta(&p, z, x), 0.3).unwrap();
    assert!((g0 - 1.0).norm() < 1e-6 && g1.norm() < 1e-6, "{g0} {g1}");
    let (g0, g1) = boundary_functionals(&p, |x| phi(&p, z, x), 0.3).unwrap();
    assert!(g0.norm() < 1e-6 && (g1 - 1.0).norm() < 1e-6, "{g0} {g1}");

    let (g0, g1) = boundary_functionals(&p, |x| Ok(rotated_system(&p, z, x)?.0), 0.3).unwrap();
    assert!((1.0f64.sin() * g1 - 1.0f64.cos() * g0).norm() < 1e-6);

    let (g0, g1) = boundary_functionals(&p, |x: f64| Ok(c(x.powf(l + 1.0), 0.0)), 0.3).unwrap();
    assert!(g0.norm() < 1e-12 && (g1 - 1.0).norm() < 1e-12);
}

#[test]
fn density_is_positive_on_a_grid() {
    for l in [-0.45, -0.2, 0.0, 0.2, 0.45] {
        for a in [0.0, 0.5, FRAC_PI_2, 2.0, 3.0] {
            let p = params(l, a);
            for lam in [1e-6, 1e-2, 1.0, 1e2, 1e6] {
                assert!(spectral_density(&p, lam) > 0.0, "l={l} a={a} lam={lam}");
            }
        }
    }
}

proptest! {
    #[test]
    fn weyl_functions_are_herglotz(l in -0.49f64..0.49, a in 0.0f64..3.14, re in -50.0f64..50.0, lim in -6.0f64..2.0) {
        let z = c(re, 10f64.powf(lim));
        let p = params(l, a);
        prop_assert!(weyl_m(&p, z).unwrap().im > 0.0);
        prop_assert!(weyl_m_alpha(&p, z).unwrap().im > 0.0);
    }
}
