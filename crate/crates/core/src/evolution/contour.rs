//! Contour realization of `int_0^inf e^{-i tau k^2} A(k) dk`.
//!
//! The path runs along the real axis up to a vertex `K` past the stationary
//! point `(x+y)/(2t)` of the fastest phase, then leaves along the steepest
//! descent direction `e^{-i pi/4}` where the integrand decays like a Gaussian.
//! Poles of `Im m_alpha` swept over by the rotation are added back through
//! their residues. Near `k = 0` the substitution `k = k1 u^q`,
//! `q = 1/(1-2l)`, removes the `k^{-2l}` endpoint behaviour.

use crate::error::{Error, Result};
use crate::quad::{adaptive, ComplexQuadValue};
use crate::scalar::{cis, cplx, real, Cplx, Real};
use crate::spectral::{im_m_alpha_poles, ProblemParams};

/// Where the Gaussian factor along the ray has fallen below `e^{-RAY_DECAY}`.
const RAY_DECAY: f64 = 50.0;

/// Points on the residue circles.
const RESIDUE_NODES: usize = 64;

pub(crate) struct Contour<T> {
    k1: T,
    q: T,
    vertex: T,
    ray_len: T,
    slope_real: T,
    slope_ray: T,
    /// `(pole, radius)` of every enclosed pole.
    residues: Vec<(Cplx<T>, T)>,
}

fn ray_direction<T: Real>() -> Cplx<T> {
    cis(-T::FRAC_PI_4())
}

/// Perpendicular distance from `p` to the ray `K + s e^{-i pi/4}`, `s >= 0`.
fn distance_to_ray<T: Real>(p: Cplx<T>, vertex: T) -> T {
    let d = p - real(vertex);
    let u = ray_direction::<T>();
    let along = d.re * u.re + d.im * u.im;
    if along <= T::zero() {
        d.norm()
    } else {
        (d.re * u.im - d.im * u.re).abs()
    }
}

/// Whether `p` lies strictly between the real half-line `[K, inf)` and the ray.
fn enclosed<T: Real>(p: Cplx<T>, vertex: T) -> bool {
    let d = p - real(vertex);
    d.re > T::zero() && d.im < T::zero() && d.im.atan2(d.re) > -T::FRAC_PI_4()
}

impl<T: Real> Contour<T> {
    pub fn new(p: &ProblemParams<T>, t: T, x: T, y: T) -> Result<Self> {
        if !(t > T::zero()) {
            return Err(Error::Domain(format!("contour plan needs t > 0, got {t}")));
        }
        let w = x + y;
        let two = T::lit(2.0);
        let stationary = w / (two * t);
        let margin = (T::lit(3.0) / t.sqrt()).max(w / (T::lit(4.0) * t));
        let mut vertex = stationary + margin;
        let poles: Vec<Cplx<T>> = im_m_alpha_poles(p)
            .into_iter()
            .filter(|z| z.re > T::zero() && z.im < T::zero())
            .collect();
        // Keep the ray away from resonances so its integrand stays smooth.
        for _ in 0..8 {
            match poles.iter().find(|z| distance_to_ray(**z, vertex) < T::lit(0.15) * z.norm()) {
                Some(z) => vertex = vertex + T::lit(0.3) * z.norm(),
                None => break,
            }
        }
        let mut residues = Vec::new();
        for (i, &z) in poles.iter().enumerate() {
            if !enclosed(z, vertex) {
                continue;
            }
            // The circle stays inside the swept sector and resolves e^{-itk^2}.
            let mut reach = z.im.abs().min(distance_to_ray(z, vertex)).min(z.re - vertex);
            for (j, &o) in poles.iter().enumerate() {
                if i != j {
                    reach = reach.min((z - o).norm());
                }
            }
            let radius = (T::lit(0.5) * reach).min(T::lit(4.0) / (t * z.norm()));
            residues.push((z, radius));
        }
        let k1 = vertex.min(T::lit(0.5) / t.sqrt()).min(T::one() / w);
        let q = T::one() / (T::one() - two * p.l());
        let sqrt2 = two.sqrt();
        let r0 = sqrt2 * vertex * t - w / sqrt2;
        // t s^2 + r0 s = RAY_DECAY
        let decay = T::lit(RAY_DECAY);
        let ray_len = (-r0 + (r0 * r0 + T::lit(4.0) * t * decay).sqrt()) / (two * t);
        Ok(Contour { k1, q, vertex, ray_len, slope_real: t, slope_ray: sqrt2 * vertex * t + w / sqrt2, residues })
    }

    /// Integrates `f` along the contour. `w = x + y` sets the panel widths.
    pub fn integrate<V, F>(&self, f: &mut F, w: T, panels_per_period: usize, tol: T) -> Result<(V, T)>
    where
        V: ComplexQuadValue<T>,
        F: FnMut(Cplx<T>) -> Result<V>,
    {
        let ppp = T::from_usize_lossy(panels_per_period);
        let two_pi = T::lit(2.0) * T::PI();
        let max_sub = 64;

        let (k1, q) = (self.k1, self.q);
        let mut head = |u: T| -> Result<V> {
            let k = k1 * u.powf(q);
            Ok(f(real(k))?.scale(k1 * q * u.powf(q - T::one())))
        };
        let (mut total, mut err) = adaptive(&mut head, T::zero(), T::one(), T::zero(), tol, 200)?;

        let mut a = self.k1;
        while a < self.vertex {
            let width = two_pi / (ppp * (self.slope_real * a + w));
            let b = (a + width).min(self.vertex);
            let mut g = |k: T| f(real(k));
            let (v, e) = adaptive(&mut g, a, b, T::zero(), tol, max_sub)?;
            total = total + v;
            err = err + e;
            a = b;
        }

        let dir = ray_direction::<T>();
        let vertex = self.vertex;
        let mut ray = |s: T| -> Result<V> { Ok(f(real(vertex) + dir.scale(s))?.mul_c(dir)) };
        // t s^2 is pure decay along the ray; only the linear term oscillates.
        let phase_span = self.slope_ray * self.ray_len;
        let n_ray = ((ppp * phase_span / two_pi).ceil().to_usize().unwrap_or(4)).clamp(4, 20_000);
        let step = self.ray_len / T::from_usize_lossy(n_ray);
        for i in 0..n_ray {
            let s0 = step * T::from_usize_lossy(i);
            let (v, e) = adaptive(&mut ray, s0, s0 + step, T::zero(), tol, max_sub)?;
            total = total + v;
            err = err + e;
        }
        let tail = f(real(vertex) + dir.scale(self.ray_len))?.magnitude() * step;
        err = err + tail;

        for &(pole, radius) in &self.residues {
            let (res, res_err) = residue(f, pole, radius)?;
            // int_real = int_ray - 2 pi i Res (the swept region lies below the axis).
            total = total + res.mul_c(cplx(T::zero(), -two_pi));
            err = err + two_pi * res_err;
        }
        Ok((total, err))
    }
}

/// Residue by the trapezoid rule on a circle, with the half-resolution rule
/// as error indicator.
fn residue<T, V, F>(f: &mut F, pole: Cplx<T>, radius: T) -> Result<(V, T)>
where
    T: Real,
    V: ComplexQuadValue<T>,
    F: FnMut(Cplx<T>) -> Result<V>,
{
    let n = RESIDUE_NODES;
    let mut full = V::zero();
    let mut half = V::zero();
    for j in 0..n {
        let theta = T::lit(2.0) * T::PI() * T::from_usize_lossy(j) / T::from_usize_lossy(n);
        let offset = cis(theta).scale(radius);
        let v = f(pole + offset)?.mul_c(offset);
        full = full + v;
        if j % 2 == 0 {
            half = half + v;
        }
    }
    let full = full.scale(T::one() / T::from_usize_lossy(n));
    let half = half.scale(T::lit(2.0) / T::from_usize_lossy(n));
    Ok((full, (full - half).magnitude()))
}
