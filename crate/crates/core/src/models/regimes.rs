//! Zoomed systems: U–Z near the Z-axis (X = εU, δ = ε²) and X–V near the
//! X-axis (Z = ε²V, δ = ε). Both run on the fast time `ε⁻²`-rescaled from τ̄.

use super::{impl_vector_field_for_decomposed, EpsDecomposed};
use crate::params::EpsilonParams;
use crate::taylor::Real;

/// U–Z system; expansion parameter `ε̃ = ε²`.
#[derive(Clone, Copy, Debug)]
pub struct Regime2Uz {
    pub e: EpsilonParams,
}

impl Regime2Uz {
    pub fn new(e: EpsilonParams) -> Self {
        Self { e }
    }

    /// Closed-form node `p₀ = (U, Z)` of the layer problem.
    pub fn p0(&self) -> [f64; 2] {
        let e = &self.e;
        let z = e.alpha / (e.gamma * e.nu);
        let u2 = (e.sigma3 * e.alpha * e.alpha + e.sigma4 * e.gamma * e.gamma * e.nu * e.nu) / (e.alpha * e.a());
        [u2.sqrt(), z]
    }

    fn q<T: Real>(&self, z: T) -> T {
        z * z.scale(self.e.sigma3) + T::cst(self.e.sigma4)
    }
}

impl EpsDecomposed for Regime2Uz {
    fn id(&self) -> &'static str {
        "regime2-uz"
    }
    fn labels(&self) -> [&'static str; 2] {
        ["U", "Z"]
    }
    fn expansion_parameter(&self) -> f64 {
        self.e.epsilon * self.e.epsilon
    }
    fn expansion_name(&self) -> &'static str {
        "epsilon^2"
    }

    fn n0<T: Real>(&self, s: [T; 2]) -> [T; 2] {
        let e = &self.e;
        let [u, z] = s;
        let q = self.q(z);
        [
            (u * u * z * z.scale(e.a()) - q.scale(e.alpha)).scale(-2.0),
            (T::cst(1.0) - z.scale(e.gamma * e.sigma1)) * u * u * z - q.scale(e.gamma),
        ]
    }

    fn f0<T: Real>(&self, s: [T; 2]) -> T {
        s[1]
    }

    fn df0<T: Real>(&self, _s: [T; 2]) -> [T; 2] {
        [T::cst(0.0), T::cst(1.0)]
    }

    fn powers(&self) -> &'static [u32] {
        &[1, 2]
    }

    fn term<T: Real>(&self, power: u32, s: [T; 2]) -> [T; 2] {
        let e = &self.e;
        let [u, z] = s;
        let u2z = u * u * z;
        match power {
            1 => [u2z.scale(2.0 * e.alpha * e.sigma2), u2z.scale(-e.gamma * e.sigma2)],
            2 => [u2z.scale(-2.0 * e.nu), u * u],
            _ => [T::cst(0.0), T::cst(0.0)],
        }
    }

    fn full<T: Real>(&self, s: [T; 2], et: T) -> [T; 2] {
        let e = &self.e;
        let [u, z] = s;
        let u2 = u * u;
        let z2 = z * z;
        let c = u2 * z2.scale(e.a()) - self.q(z).scale(e.alpha) - et * u2.scale(e.alpha * e.sigma2)
            + et * et * u2.scale(e.nu);
        [
            -(z * c).scale(2.0),
            (T::cst(1.0) - z.scale(e.gamma * e.sigma1)) * u2 * z2 - (z * self.q(z)).scale(e.gamma)
                - et * u2 * z.scale(e.gamma * e.sigma2)
                + et * et * u2,
        ]
    }

    fn jacobian_full(&self, s: [f64; 2], et: f64) -> [[f64; 2]; 2] {
        let e = &self.e;
        let [u, z] = s;
        let (a, al, g, s1, s2, s3, s4) = (e.a(), e.alpha, e.gamma, e.sigma1, e.sigma2, e.sigma3, e.sigma4);
        let c = a * u * u * z * z - al * (s3 * z * z + s4) - et * al * s2 * u * u + et * et * e.nu * u * u;
        let c_u = 2.0 * a * u * z * z - 2.0 * et * al * s2 * u + 2.0 * et * et * e.nu * u;
        let c_z = 2.0 * a * u * u * z - 2.0 * al * s3 * z;
        [
            [-2.0 * z * c_u, -2.0 * (c + z * c_z)],
            [
                2.0 * u * z * z - 2.0 * g * s1 * u * z.powi(3) - 2.0 * et * g * s2 * u * z + 2.0 * et * et * u,
                2.0 * u * u * z - 3.0 * g * s1 * u * u * z * z - 3.0 * g * s3 * z * z - g * s4 - et * g * s2 * u * u,
            ],
        ]
    }
}

impl_vector_field_for_decomposed!(Regime2Uz, ["U", "Z"], [false, true]);

/// X–V system; expansion parameter ε.
#[derive(Clone, Copy, Debug)]
pub struct Regime3Xv {
    pub e: EpsilonParams,
}

impl Regime3Xv {
    pub fn new(e: EpsilonParams) -> Self {
        Self { e }
    }

    /// `V² − γσ₂V + 1`.
    pub fn q(&self, v: f64) -> f64 {
        v * v - self.e.gamma * self.e.sigma2 * v + 1.0
    }

    /// Graph of the folded critical manifold: `X(V) = √(γσ₄V / Q(V))`.
    pub fn gamma4_x<T: Real>(&self, v: T) -> T {
        let e = &self.e;
        let q = v * v - v.scale(e.gamma * e.sigma2) + T::cst(1.0);
        (v.scale(e.gamma * e.sigma4) / q).sqrt()
    }

    /// Fold point `p₄` in (X, V).
    pub fn p4(&self) -> [f64; 2] {
        let e = &self.e;
        [(e.gamma * e.sigma4 / (2.0 - e.gamma * e.sigma2)).sqrt(), 1.0]
    }
}

impl EpsDecomposed for Regime3Xv {
    fn id(&self) -> &'static str {
        "regime3-xv"
    }
    fn labels(&self) -> [&'static str; 2] {
        ["X", "V"]
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
        let e = &self.e;
        let [x, v] = s;
        let x2 = x * x;
        x2 * v * v - v * (x2.scale(e.sigma2) + T::cst(e.sigma4)).scale(e.gamma) + x2
    }

    fn df0<T: Real>(&self, s: [T; 2]) -> [T; 2] {
        let e = &self.e;
        let [x, v] = s;
        [
            x.scale(2.0) * (v * v - v.scale(e.gamma * e.sigma2) + T::cst(1.0)),
            (x * x * v).scale(2.0) - (x * x).scale(e.gamma * e.sigma2) - T::cst(e.gamma * e.sigma4),
        ]
    }

    fn powers(&self) -> &'static [u32] {
        &[2, 3, 4, 5, 7]
    }

    fn term<T: Real>(&self, power: u32, s: [T; 2]) -> [T; 2] {
        let e = &self.e;
        let [x, v] = s;
        let zero = T::cst(0.0);
        let x2 = x * x;
        let v3 = v * v * v;
        match power {
            2 => [zero, (x2 * v3).scale(-e.gamma * e.sigma1)],
            3 => [(v * (x2.scale(e.sigma2) + T::cst(e.sigma4))).scale(2.0 * e.alpha), zero],
            4 => [zero, v3.scale(-e.gamma * e.sigma3)],
            5 => [(v * x2 * (v * v.scale(e.a()) + T::cst(e.nu))).scale(-2.0), zero],
            7 => [v3.scale(2.0 * e.alpha * e.sigma3), zero],
            _ => [zero, zero],
        }
    }

    fn full<T: Real>(&self, s: [T; 2], eps: T) -> [T; 2] {
        let e = &self.e;
        let [x, v] = s;
        let e2 = eps * eps;
        let x2 = x * x;
        let v2 = v * v;
        let w = (x2.scale(e.sigma2) + T::cst(e.sigma4)).scale(e.alpha) - e2 * x2 * (v2.scale(e.a()) + T::cst(e.nu))
            + e2 * e2 * v2.scale(e.alpha * e.sigma3);
        [
            (e2 * eps * v * w).scale(2.0),
            (T::cst(1.0) - e2 * v.scale(e.gamma * e.sigma1)) * x2 * v2
                - v * (x2.scale(e.sigma2) + T::cst(e.sigma4)).scale(e.gamma)
                + x2
                - e2 * e2 * v2 * v.scale(e.gamma * e.sigma3),
        ]
    }

    fn jacobian_full(&self, s: [f64; 2], eps: f64) -> [[f64; 2]; 2] {
        let e = &self.e;
        let [x, v] = s;
        let (a, al, g, s1, s2, s3, s4) = (e.a(), e.alpha, e.gamma, e.sigma1, e.sigma2, e.sigma3, e.sigma4);
        let e2 = eps * eps;
        let e3 = e2 * eps;
        let e4 = e2 * e2;
        let w = al * (s2 * x * x + s4) - e2 * x * x * (a * v * v + e.nu) + e4 * al * s3 * v * v;
        let w_x = 2.0 * al * s2 * x - 2.0 * e2 * x * (a * v * v + e.nu);
        let w_v = -2.0 * e2 * a * x * x * v + 2.0 * e4 * al * s3 * v;
        [
            [2.0 * e3 * v * w_x, 2.0 * e3 * (w + v * w_v)],
            [
                2.0 * x * v * v - 2.0 * e2 * g * s1 * x * v.powi(3) - 2.0 * g * s2 * x * v + 2.0 * x,
                2.0 * x * x * v - 3.0 * e2 * g * s1 * x * x * v * v - g * s2 * x * x - g * s4 - 3.0 * e4 * g * s3 * v * v,
            ],
        ]
    }
}

impl_vector_field_for_decomposed!(Regime3Xv, ["X", "V"], [false, true]);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{decomposition_residual, jacobian_audit};

    #[test]
    fn p0_is_a_layer_equilibrium() {
        let m = Regime2Uz::new(EpsilonParams::default());
        let p0 = m.p0();
        let v = m.full(p0, 0.0);
        assert!(v[0].abs() < 1e-10 && v[1].abs() < 1e-10, "{v:?}");
        assert!((p0[0] - 1.30).abs() < 0.01);
    }

    #[test]
    fn z_axis_of_uz() {
        let m = Regime2Uz::new(EpsilonParams::default());
        let et: f64 = 0.05;
        let v = m.full([0.8, 0.0], et);
        assert_eq!(v[0], 0.0);
        assert!((v[1] - et * et * 0.64).abs() < 1e-16);
    }

    #[test]
    fn gamma4_is_critical_and_f0_at_unit_x() {
        let m = Regime3Xv::new(EpsilonParams::default());
        for v in [0.1, 0.5, 1.0, 3.0] {
            let x = m.gamma4_x(v);
            let f = m.full([x, v], 0.0);
            assert!(f[0].abs() < 1e-15 && f[1].abs() < 1e-14, "{f:?}");
        }
        assert_eq!(m.full([1.0, 0.0], 0.0)[1], 1.0);
    }

    #[test]
    fn decompositions_and_jacobians() {
        let e = EpsilonParams::default();
        let r2 = Regime2Uz::new(e);
        let r3 = Regime3Xv::new(e);
        assert!(decomposition_residual(&r2, [1.3, 0.4], 0.05) < 1e-12);
        assert!(decomposition_residual(&r3, [0.4, 0.7], 0.2241) < 1e-12);
        assert!(jacobian_audit(&r2, &[1.3, 0.4]) < 1e-6);
        assert!(jacobian_audit(&r3, &[0.4, 0.7]) < 1e-6);
    }
}
