#![allow(dead_code)]

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;

/// Composite Gauss-Legendre rule with `panels` equal panels on `[a, b]`.
pub struct Composite {
    pairs: Vec<(f64, f64)>,
}

impl Composite {
    pub fn new(a: f64, b: f64, panels: usize, degree: usize) -> Self {
        let rule = GaussLegendre::new(NonZeroUsize::new(degree).unwrap());
        let h = (b - a) / panels as f64;
        let mut pairs = Vec::with_capacity(panels * degree);
        for i in 0..panels {
            let lo = a + h * i as f64;
            for &(x, w) in rule.as_node_weight_pairs() {
                pairs.push((lo + 0.5 * h * (x + 1.0), 0.5 * h * w));
            }
        }
        Composite { pairs }
    }

    pub fn nodes(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    pub fn integrate(&self, f: impl Fn(f64) -> Complex64) -> Complex64 {
        self.pairs.iter().map(|&(x, w)| f(x) * w).sum()
    }
}

/// Neville extrapolation of `(h, value)` samples to `h = 0`.
pub fn neville_to_zero(samples: &[(f64, Complex64)]) -> Complex64 {
    let mut p: Vec<Complex64> = samples.iter().map(|s| s.1).collect();
    let h: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let n = p.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (p[i + 1] * h[i] - p[i] * h[i + m]) / (h[i] - h[i + m]);
        }
    }
    p[0]
}
