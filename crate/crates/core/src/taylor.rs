//! Scalar abstraction and truncated Taylor arithmetic.
//!
//! The polynomial fields are written once against [`Real`] and evaluated on
//! plain `f64`, on jets in the manifold coordinate, or on power series in the
//! small parameter whose coefficients are themselves jets. The last case is how
//! the parametrisation module reads off ε-coefficients exactly.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Field-like scalar with a square root.
pub trait Real:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn cst(x: f64) -> Self;
    fn sqrt(self) -> Self;
    /// Leading (constant) coefficient as a plain number.
    fn value(&self) -> f64;

    fn powi(self, n: u32) -> Self {
        let mut acc = Self::cst(1.0);
        for _ in 0..n {
            acc = acc * self;
        }
        acc
    }

    fn scale(self, k: f64) -> Self {
        self * Self::cst(k)
    }
}

impl Real for f64 {
    #[inline]
    fn cst(x: f64) -> Self {
        x
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn value(&self) -> f64 {
        *self
    }
    #[inline]
    fn powi(self, n: u32) -> Self {
        f64::powi(self, n as i32)
    }
    #[inline]
    fn scale(self, k: f64) -> Self {
        self * k
    }
}

/// Truncated power series `Σ c[k] t^k`, k < N.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Taylor<T, const N: usize>(pub [T; N]);

impl<T: Real, const N: usize> Taylor<T, N> {
    pub fn constant(x: T) -> Self {
        let mut c = [T::cst(0.0); N];
        c[0] = x;
        Taylor(c)
    }

    /// The independent variable expanded about `x0`.
    pub fn variable(x0: T) -> Self {
        let mut c = [T::cst(0.0); N];
        c[0] = x0;
        if N > 1 {
            c[1] = T::cst(1.0);
        }
        Taylor(c)
    }

    pub fn from_coeffs(coeffs: &[T]) -> Self {
        let mut c = [T::cst(0.0); N];
        for (dst, src) in c.iter_mut().zip(coeffs) {
            *dst = *src;
        }
        Taylor(c)
    }

    pub fn coef(&self, k: usize) -> T {
        self.0[k]
    }

    /// Term-wise derivative; the top coefficient becomes zero.
    pub fn derivative(&self) -> Self {
        let mut c = [T::cst(0.0); N];
        for k in 0..N.saturating_sub(1) {
            c[k] = self.0[k + 1].scale((k + 1) as f64);
        }
        Taylor(c)
    }

    /// Horner evaluation at `t`.
    pub fn eval(&self, t: T) -> T {
        let mut acc = T::cst(0.0);
        for k in (0..N).rev() {
            acc = acc * t + self.0[k];
        }
        acc
    }
}

impl<T: Real, const N: usize> Add for Taylor<T, N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for k in 0..N {
            self.0[k] = self.0[k] + rhs.0[k];
        }
        self
    }
}

impl<T: Real, const N: usize> Sub for Taylor<T, N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for k in 0..N {
            self.0[k] = self.0[k] - rhs.0[k];
        }
        self
    }
}

impl<T: Real, const N: usize> Neg for Taylor<T, N> {
    type Output = Self;
    fn neg(mut self) -> Self {
        for k in 0..N {
            self.0[k] = -self.0[k];
        }
        self
    }
}

impl<T: Real, const N: usize> Mul for Taylor<T, N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut c = [T::cst(0.0); N];
        for i in 0..N {
            for j in 0..N - i {
                c[i + j] = c[i + j] + self.0[i] * rhs.0[j];
            }
        }
        Taylor(c)
    }
}

impl<T: Real, const N: usize> Div for Taylor<T, N> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let mut q = [T::cst(0.0); N];
        let b0 = rhs.0[0];
        for k in 0..N {
            let mut acc = self.0[k];
            for i in 0..k {
                acc = acc - q[i] * rhs.0[k - i];
            }
            q[k] = acc / b0;
        }
        Taylor(q)
    }
}

impl<T: Real, const N: usize> Real for Taylor<T, N> {
    fn cst(x: f64) -> Self {
        Taylor::constant(T::cst(x))
    }

    fn sqrt(self) -> Self {
        let mut s = [T::cst(0.0); N];
        s[0] = self.0[0].sqrt();
        let two_s0 = s[0].scale(2.0);
        for k in 1..N {
            let mut acc = self.0[k];
            for i in 1..k {
                acc = acc - s[i] * s[k - i];
            }
            s[k] = acc / two_s0;
        }
        Taylor(s)
    }

    fn value(&self) -> f64 {
        self.0[0].value()
    }

    fn scale(mut self, k: f64) -> Self {
        for c in self.0.iter_mut() {
            *c = c.scale(k);
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type J = Taylor<f64, 6>;

    #[test]
    fn jet_of_sqrt_matches_derivatives() {
        let x = J::variable(2.0);
        let s = x.sqrt();
        assert!((s.0[0] - 2f64.sqrt()).abs() < 1e-15);
        assert!((s.0[1] - 0.5 / 2f64.sqrt()).abs() < 1e-15);
        assert!((s.0[2] + 0.125 * 2f64.powf(-1.5)).abs() < 1e-15);
    }

    #[test]
    fn division_inverts_multiplication() {
        let a = J::from_coeffs(&[1.0, 2.0, -1.0, 0.5]);
        let b = J::from_coeffs(&[3.0, -0.25, 1.0]);
        let back = (a * b) / b;
        for k in 0..6 {
            assert!((back.0[k] - a.0[k]).abs() < 1e-13, "k={k}");
        }
    }

    #[test]
    fn nested_series_multiply() {
        type S = Taylor<J, 3>;
        let eps = S::variable(J::cst(0.0));
        let x = S::constant(J::variable(1.5));
        let y = (x + eps) * (x + eps);
        assert!((y.0[1].0[0] - 3.0).abs() < 1e-15);
        assert!((y.0[2].0[0] - 1.0).abs() < 1e-15);
        assert!((y.0[0].0[1] - 3.0).abs() < 1e-15);
    }
}
