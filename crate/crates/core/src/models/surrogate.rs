//! Polynomial X–Z surrogate in the rescaled time τ̄ (Y = Z²).

use super::{impl_vector_field_for_decomposed, EpsDecomposed};
use crate::params::EpsilonParams;
use crate::taylor::Real;

#[derive(Clone, Copy, Debug)]
pub struct SurrogateXz {
    pub e: EpsilonParams,
}

impl SurrogateXz {
    pub fn new(e: EpsilonParams) -> Self {
        Self { e }
    }

    /// `dτ/dτ̄ = 2Z(σ₁X²Z² + ε²(σ₂X² + σ₃Z² + σ₄))`.
    pub fn time_factor(&self, x: f64, z: f64) -> f64 {
        let e = &self.e;
        let e2 = e.epsilon * e.epsilon;
        let p = e.sigma2 * x * x + e.sigma3 * z * z + e.sigma4;
        2.0 * z * (e.sigma1 * x * x * z * z + e2 * p)
    }

    fn p<T: Real>(&self, x: T, z: T) -> T {
        let e = &self.e;
        x * x * T::cst(e.sigma2) + z * z * T::cst(e.sigma3) + T::cst(e.sigma4)
    }
}

impl EpsDecomposed for SurrogateXz {
    fn id(&self) -> &'static str {
        "surrogate-xz"
    }
    fn labels(&self) -> [&'static str; 2] {
        ["X", "Z"]
    }
    fn expansion_parameter(&self) -> f64 {
        self.e.epsilon
    }
    fn expansion_name(&self) -> &'static str {
        "epsilon"
    }

    fn n0<T: Real>(&self, _s: [T; 2]) -> [T; 2] {
        [T::cst(0.0), T::cst(1.0)]
    }

    fn f0<T: Real>(&self, s: [T; 2]) -> T {
        let [x, z] = s;
        let gs1 = self.e.gamma * self.e.sigma1;
        (T::cst(1.0) - z.scale(gs1)) * x * x * z * z
    }

    fn df0<T: Real>(&self, s: [T; 2]) -> [T; 2] {
        let [x, z] = s;
        let gs1 = self.e.gamma * self.e.sigma1;
        [
            x.scale(2.0) * z * z * (T::cst(1.0) - z.scale(gs1)),
            x * x * (z.scale(2.0) - z * z.scale(3.0 * gs1)),
        ]
    }

    fn powers(&self) -> &'static [u32] {
        &[1, 2, 3, 4, 5]
    }

    fn term<T: Real>(&self, power: u32, s: [T; 2]) -> [T; 2] {
        let e = &self.e;
        let [x, z] = s;
        let zero = T::cst(0.0);
        match power {
            1 => [(x * x * z * z * z).scale(-2.0 * e.a()), zero],
            2 => [zero, (z * self.p(x, z)).scale(-e.gamma)],
            3 => [(z * self.p(x, z)).scale(2.0 * e.alpha), zero],
            4 => [zero, x * x],
            5 => [(x * x * z).scale(-2.0 * e.nu), zero],
            _ => [zero, zero],
        }
    }

    fn full<T: Real>(&self, s: [T; 2], eps: T) -> [T; 2] {
        let e = &self.e;
        let [x, z] = s;
        let e2 = eps * eps;
        let e4 = e2 * e2;
        let p = self.p(x, z);
        let x2 = x * x;
        let z2 = z * z;
        let b = x2 * z2 * T::cst(e.a()) - e2 * p.scale(e.alpha) + e4 * x2.scale(e.nu);
        [
            -(eps * z * b).scale(2.0),
            (T::cst(1.0) - z.scale(e.gamma * e.sigma1)) * x2 * z2 - e2 * z * p.scale(e.gamma) + e4 * x2,
        ]
    }

    fn jacobian_full(&self, s: [f64; 2], eps: f64) -> [[f64; 2]; 2] {
        let e = &self.e;
        let [x, z] = s;
        let (a, al, g, s1, s2, s3) = (e.a(), e.alpha, e.gamma, e.sigma1, e.sigma2, e.sigma3);
        let e2 = eps * eps;
        let e4 = e2 * e2;
        let p = self.p(x, z);
        let b = a * x * x * z * z - e2 * al * p + e4 * e.nu * x * x;
        let b_x = 2.0 * a * x * z * z - 2.0 * e2 * al * s2 * x + 2.0 * e4 * e.nu * x;
        let b_z = 2.0 * a * x * x * z - 2.0 * e2 * al * s3 * z;
        [
            [-2.0 * eps * z * b_x, -2.0 * eps * (b + z * b_z)],
            [
                2.0 * x * z * z - 2.0 * g * s1 * x * z.powi(3) - 2.0 * e2 * g * s2 * x * z + 2.0 * e4 * x,
                2.0 * x * x * z - 3.0 * g * s1 * x * x * z * z - e2 * g * p - 2.0 * e2 * g * s3 * z * z,
            ],
        ]
    }
}

impl_vector_field_for_decomposed!(SurrogateXz, ["X", "Z"], [false, true]);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{decomposition_residual, jacobian_audit};

    #[test]
    fn z_axis_behaviour() {
        let m = SurrogateXz::new(EpsilonParams::default());
        let eps = m.e.epsilon;
        let v = m.full([0.7, 0.0], eps);
        assert_eq!(v[0], 0.0);
        assert!((v[1] - eps.powi(4) * 0.49).abs() < 1e-16);
    }

    #[test]
    fn top_line_is_critical() {
        let m = SurrogateXz::new(EpsilonParams::default());
        let z = 1.0 / (m.e.gamma * m.e.sigma1);
        let v = m.full([1.0, z], 0.0);
        assert_eq!(v[0], 0.0);
        assert!(v[1].abs() < 1e-15);
    }

    #[test]
    fn decomposition_and_jacobian() {
        let m = SurrogateXz::new(EpsilonParams::default());
        assert!(decomposition_residual(&m, [0.3, 1.1], 0.2241) < 1e-12);
        assert!(jacobian_audit(&m, &[0.3, 1.1]) < 1e-6);
    }
}
