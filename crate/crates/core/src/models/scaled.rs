//! Dimensionless X–Y system and its ε-hierarchy form.

use nalgebra::DMatrix;

use super::VectorField;
use crate::error::{Error, Result};
use crate::params::{DimensionlessParams, EpsilonParams};

/// Dimensionless rate `r̂(X, Y)` with partials.
pub fn rate_hat(x: f64, y: f64, d: &DimensionlessParams) -> (f64, f64, f64) {
    let x2 = x * x;
    let num = x2 * (y + d.hat_sigma6);
    let den = d.hat_sigma1 * x2 * y + d.hat_sigma2 * x2 + d.hat_sigma3 * y + d.hat_sigma4;
    let num_x = 2.0 * x * (y + d.hat_sigma6);
    let den_x = 2.0 * x * (d.hat_sigma1 * y + d.hat_sigma2);
    let num_y = x2;
    let den_y = d.hat_sigma1 * x2 + d.hat_sigma3;
    (
        num / den,
        (num_x * den - num * den_x) / (den * den),
        (num_y * den - num * den_y) / (den * den),
    )
}

pub fn eval_dimensionless_xy(s: [f64; 2], d: &DimensionlessParams) -> Result<[f64; 2]> {
    if s[1] < 0.0 {
        return Err(Error::domain("Y", s[1], "must be non-negative"));
    }
    let (r, _, _) = rate_hat(s[0], s[1], d);
    Ok([
        d.hat_alpha - d.hat_nu1 * r,
        d.hat_nu2 * r - d.hat_gamma * s[1].sqrt(),
    ])
}

/// Perturbed rate `r(X, Y; ε)` written with explicit ε powers.
pub fn rate_eps(x: f64, y: f64, e: &EpsilonParams) -> f64 {
    let e2 = e.epsilon * e.epsilon;
    let x2 = x * x;
    (x2 * y + e2 * e2 * x2) / (e.sigma1 * x2 * y + e2 * (e.sigma2 * x2 + e.sigma3 * y + e.sigma4))
}

pub fn eval_perturbed_xy(s: [f64; 2], e: &EpsilonParams) -> Result<[f64; 2]> {
    if s[1] < 0.0 {
        return Err(Error::domain("Y", s[1], "must be non-negative"));
    }
    let r = rate_eps(s[0], s[1], e);
    Ok([e.epsilon * (e.alpha - e.nu * r), r - e.gamma * s[1].sqrt()])
}

#[derive(Clone, Debug)]
pub struct DimensionlessXy {
    pub d: DimensionlessParams,
}

impl VectorField for DimensionlessXy {
    fn id(&self) -> &'static str {
        "dimensionless-xy"
    }
    fn labels(&self) -> &'static [&'static str] {
        &["X", "Y"]
    }
    fn nonnegative(&self) -> &'static [bool] {
        &[true, true]
    }
    fn rhs(&self, s: &[f64], out: &mut [f64]) {
        let v = eval_dimensionless_xy([s[0], s[1].max(0.0)], &self.d).expect("clamped");
        out[0] = v[0];
        out[1] = v[1];
    }
    fn jacobian(&self, s: &[f64]) -> DMatrix<f64> {
        dimensionless_jacobian([s[0], s[1]], &self.d)
    }
}

/// Analytic Jacobian of the dimensionless system.
pub fn dimensionless_jacobian(s: [f64; 2], d: &DimensionlessParams) -> DMatrix<f64> {
    let (_, rx, ry) = rate_hat(s[0], s[1], d);
    DMatrix::from_row_slice(
        2,
        2,
        &[
            -d.hat_nu1 * rx,
            -d.hat_nu1 * ry,
            d.hat_nu2 * rx,
            d.hat_nu2 * ry - d.hat_gamma / (2.0 * s[1].sqrt()),
        ],
    )
}

#[derive(Clone, Debug)]
pub struct PerturbedXy {
    pub e: EpsilonParams,
}

impl VectorField for PerturbedXy {
    fn id(&self) -> &'static str {
        "perturbed-xy"
    }
    fn labels(&self) -> &'static [&'static str] {
        &["X", "Y"]
    }
    fn nonnegative(&self) -> &'static [bool] {
        &[true, true]
    }
    fn rhs(&self, s: &[f64], out: &mut [f64]) {
        let v = eval_perturbed_xy([s[0], s[1].max(0.0)], &self.e).expect("clamped");
        out[0] = v[0];
        out[1] = v[1];
    }
    fn jacobian(&self, s: &[f64]) -> DMatrix<f64> {
        dimensionless_jacobian([s[0], s[1]], &self.e.to_dimensionless())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::jacobian_audit;

    #[test]
    fn perturbed_is_the_reexpanded_dimensionless_system() {
        let e = EpsilonParams::default();
        let d = e.to_dimensionless();
        for s in [[0.3, 0.01], [1.2, 0.4], [0.05, 2.0]] {
            let a = eval_perturbed_xy(s, &e).unwrap();
            let b = eval_dimensionless_xy(s, &d).unwrap();
            for i in 0..2 {
                assert!((a[i] - b[i]).abs() <= 1e-12 * a[i].abs().max(b[i].abs()), "{a:?} {b:?}");
            }
        }
    }

    #[test]
    fn boundary_signs() {
        let e = EpsilonParams::default();
        let v = eval_perturbed_xy([0.0, 0.7], &e).unwrap();
        assert!((v[0] - e.epsilon * e.alpha).abs() < 1e-16);
        let x: f64 = 0.4;
        let v = eval_perturbed_xy([x, 0.0], &e).unwrap();
        let e2 = e.epsilon.powi(2);
        let expect = e2 * e2 * x * x / (e2 * (e.sigma2 * x * x + e.sigma4));
        assert!((v[1] - expect).abs() < 1e-15);
    }

    #[test]
    fn jacobian_audit_passes() {
        let m = DimensionlessXy {
            d: DimensionlessParams::table(),
        };
        assert!(jacobian_audit(&m, &[0.4, 0.06]) < 1e-6);
    }
}
