//! Double-word ("double-double") arithmetic used by the Bessel power series.
//!
//! The alternating series for `J_nu(z)` with `|z|` close to the regime switch
//! has partial terms about `e^|z|` times larger than the result. Summing in
//! double-word arithmetic keeps the cancellation error near `eps^2 * max_term`.

use crate::scalar::{Cplx, Real};

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Dd<T> {
    pub hi: T,
    pub lo: T,
}

#[inline]
fn two_sum<T: Real>(a: T, b: T) -> (T, T) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum<T: Real>(a: T, b: T) -> (T, T) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn split<T: Real>(a: T) -> (T, T) {
    let c = T::lit(T::SPLITTER) * a;
    let hi = c - (c - a);
    (hi, a - hi)
}

#[inline]
fn two_prod<T: Real>(a: T, b: T) -> (T, T) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    (p, ((ah * bh - p) + ah * bl + al * bh) + al * bl)
}

impl<T: Real> Dd<T> {
    #[inline]
    pub fn new(x: T) -> Self {
        Dd { hi: x, lo: T::zero() }
    }

    #[inline]
    pub fn prod(a: T, b: T) -> Self {
        let (hi, lo) = two_prod(a, b);
        Dd { hi, lo }
    }

    #[inline]
    pub fn add(self, o: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, o.hi);
        let (t1, t2) = two_sum(self.lo, o.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn neg(self) -> Self {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    #[inline]
    pub fn sub(self, o: Self) -> Self {
        self.add(o.neg())
    }

    #[inline]
    pub fn mul(self, o: Self) -> Self {
        let (p, e) = two_prod(self.hi, o.hi);
        let (hi, lo) = quick_two_sum(p, e + (self.hi * o.lo + self.lo * o.hi));
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_t(self, b: T) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Dd { hi, lo }
    }

    pub fn div(self, o: Self) -> Self {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul_t(q1));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul_t(q2));
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add(Dd::new(q3))
    }

    #[inline]
    pub fn to_t(self) -> T {
        self.hi + self.lo
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct CDd<T> {
    pub re: Dd<T>,
    pub im: Dd<T>,
}

impl<T: Real> CDd<T> {
    pub fn one() -> Self {
        CDd { re: Dd::new(T::one()), im: Dd::new(T::zero()) }
    }

    /// `sign * z^2 / 4`, exact to double-word precision.
    pub fn scaled_square(z: Cplx<T>, sign: T) -> Self {
        let quarter = T::lit(0.25) * sign;
        let re = Dd::prod(z.re, z.re).sub(Dd::prod(z.im, z.im)).mul_t(quarter);
        let im = Dd::prod(z.re, z.im).mul_t(T::lit(2.0) * quarter);
        CDd { re, im }
    }

    #[inline]
    pub fn add(self, o: Self) -> Self {
        CDd { re: self.re.add(o.re), im: self.im.add(o.im) }
    }

    #[inline]
    pub fn mul(self, o: Self) -> Self {
        CDd {
            re: self.re.mul(o.re).sub(self.im.mul(o.im)),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }

    #[inline]
    pub fn div_real(self, d: Dd<T>) -> Self {
        CDd { re: self.re.div(d), im: self.im.div(d) }
    }

    #[inline]
    pub fn approx_abs(self) -> T {
        self.re.hi.hypot(self.im.hi)
    }

    #[inline]
    pub fn to_complex(self) -> Cplx<T> {
        Cplx::new(self.re.to_t(), self.im.to_t())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_is_exact() {
        let a = 1.0 + f64::EPSILON;
        let p = Dd::prod(a, a);
        // (1+e)^2 = 1 + 2e + e^2; the low word must carry e^2.
        assert_eq!(p.hi, 1.0 + 2.0 * f64::EPSILON);
        assert_eq!(p.lo, f64::EPSILON * f64::EPSILON);
    }

    #[test]
    fn cancellation_keeps_low_word() {
        let big = Dd::new(1.0e10_f64).add(Dd::new(1.0e-10));
        let diff = big.sub(Dd::new(1.0e10));
        assert!((diff.to_t() - 1.0e-10).abs() < 1e-25);
    }

    #[test]
    fn division_roundtrip() {
        let a = Dd::new(1.0_f64).div(Dd::new(3.0));
        let back = a.mul_t(3.0).sub(Dd::new(1.0));
        assert!(back.to_t().abs() < 1e-31);
    }
}
