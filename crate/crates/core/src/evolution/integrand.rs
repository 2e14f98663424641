use crate::error::Result;
use crate::quad::CVec;
use crate::scalar::{cplx, Cplx, Real};
use crate::spectral::{fundamental_scaled, im_m_alpha_k, ProblemParams};

/// Integrand of the spectral representation at complex `k` and complex time
/// `tau = t - i eps`:
/// `e^{-i tau k^2} (2/pi) k Im m_alpha(k) * [C^2 phi phi, s phi theta, s theta phi, s^2/C^2 theta theta]`
/// with `s = cos(pi l)`, the four components being the integrands of
/// `I_1, I_2, I_2 (x <-> y), I_3`.
pub(crate) struct SpectralIntegrand<'a, T> {
    p: &'a ProblemParams<T>,
    tau: Cplx<T>,
    x: T,
    y: T,
    factors: [T; 4],
}

impl<'a, T: Real> SpectralIntegrand<'a, T> {
    pub fn new(p: &'a ProblemParams<T>, t: T, eps: T, x: T, y: T) -> Self {
        let c2 = p.c_l() * p.c_l();
        let s = p.cos_pi_l();
        let two_over_pi = T::lit(2.0) / T::PI();
        SpectralIntegrand {
            p,
            tau: cplx(t, -eps),
            x,
            y,
            factors: [c2 * two_over_pi, s * two_over_pi, s * two_over_pi, s * s / c2 * two_over_pi],
        }
    }

    /// Common scalar factor and the four fundamental-solution values, all
    /// with the exponential growth of the Bessel functions folded into one `exp`.
    fn parts(&self, k: Cplx<T>) -> Result<(Cplx<T>, [Cplx<T>; 4])> {
        let (phx, thx) = fundamental_scaled(self.p, k, self.x)?;
        let (phy, thy) = fundamental_scaled(self.p, k, self.y)?;
        let growth = k.im.abs() * (self.x + self.y);
        let expo = (cplx(T::zero(), -T::one()) * self.tau * k * k + Cplx::new(growth, T::zero())).exp();
        let common = expo * k * im_m_alpha_k(self.p, k);
        Ok((common, [phx, thx, phy, thy]))
    }

    pub fn split(&self, k: Cplx<T>) -> Result<CVec<T, 4>> {
        let (common, [phx, thx, phy, thy]) = self.parts(k)?;
        let f = self.factors;
        Ok(CVec([
            common * phx * phy.scale(f[0]),
            common * phx * thy.scale(f[1]),
            common * thx * phy.scale(f[2]),
            common * thx * thy.scale(f[3]),
        ]))
    }

    /// The four split components followed by the unsplit integrand
    /// `(2/pi) e^{-i tau k^2} phi_alpha(x) phi_alpha(y) Im m_alpha k`.
    pub fn split_and_direct(&self, k: Cplx<T>) -> Result<CVec<T, 5>> {
        let (common, [phx, thx, phy, thy]) = self.parts(k)?;
        let f = self.factors;
        let (c, s) = (self.p.cos_alpha(), self.p.sin_alpha());
        let pa_x = phx.scale(c) + thx.scale(s);
        let pa_y = phy.scale(c) + thy.scale(s);
        Ok(CVec([
            common * phx * phy.scale(f[0]),
            common * phx * thy.scale(f[1]),
            common * thx * phy.scale(f[2]),
            common * thx * thy.scale(f[3]),
            common * pa_x * pa_y.scale(T::lit(2.0) / T::PI()),
        ]))
    }
}
