//! Real Gamma function by the Lanczos approximation (g = 7, nine terms).

use crate::scalar::Real;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `Gamma(x)` for real `x`; reflection handles `x < 1/2`.
///
/// Returns infinity at the poles `x = 0, -1, -2, ...`.
pub fn gamma<T: Real>(x: T) -> T {
    let half = T::lit(0.5);
    if x < half {
        if x == x.floor() {
            return T::infinity();
        }
        let pi = T::PI();
        return pi / ((pi * x).sin() * gamma(T::one() - x));
    }
    let x = x - T::one();
    let mut acc = T::lit(LANCZOS_COEFFS[0]);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc = acc + T::lit(c) / (x + T::from_usize_lossy(i));
    }
    let t = x + T::lit(LANCZOS_G) + half;
    (T::TAU()).sqrt() * t.powf(x + half) * (-t).exp() * acc
}

/// `1 / Gamma(x)`, finite everywhere (zero at the poles of Gamma).
pub fn recip_gamma<T: Real>(x: T) -> T {
    if x <= T::zero() && x == x.floor() {
        return T::zero();
    }
    T::one() / gamma(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_and_half_integer_values() {
        assert!((gamma(5.0_f64) - 24.0).abs() < 1e-12);
        assert!((gamma(0.5_f64) - std::f64::consts::PI.sqrt()).abs() < 1e-14);
        assert!((gamma(1.5_f64) - 0.5 * std::f64::consts::PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn reflection_branch() {
        // Gamma(-1/2) = -2 sqrt(pi)
        assert!((gamma(-0.5_f64) + 2.0 * std::f64::consts::PI.sqrt()).abs() < 1e-13);
        // Gamma(1/4) Gamma(3/4) = pi sqrt(2)
        let prod = gamma(0.25_f64) * gamma(0.75_f64);
        assert!((prod - std::f64::consts::PI * 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn poles() {
        assert!(gamma(-2.0_f64).is_infinite());
        assert_eq!(recip_gamma(-3.0_f64), 0.0);
    }

    #[test]
    fn single_precision() {
        assert!((gamma(4.0_f32) - 6.0).abs() < 1e-4);
    }
}
