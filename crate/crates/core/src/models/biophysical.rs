//! Dimensional F6P (x) / FBP (y) oscillator in µM and ms.

use nalgebra::DMatrix;

use super::VectorField;
use crate::error::{Error, Result};
use crate::params::BiophysicalParams;

/// Lumped PFK rate `r(x, y; κ)` and its partial derivatives.
pub fn rate(x: f64, y: f64, p: &BiophysicalParams) -> (f64, f64, f64) {
    let x2 = x * x;
    let num = x2 * y / p.kappa5 + x2 / p.kappa6;
    let den = x2 * y / p.kappa1 + x2 / p.kappa2 + y / p.kappa3 + 1.0 / p.kappa4;
    let num_x = 2.0 * x * (y / p.kappa5 + 1.0 / p.kappa6);
    let den_x = 2.0 * x * (y / p.kappa1 + 1.0 / p.kappa2);
    let num_y = x2 / p.kappa5;
    let den_y = x2 / p.kappa1 + 1.0 / p.kappa3;
    let r = num / den;
    (
        r,
        (num_x * den - num * den_x) / (den * den),
        (num_y * den - num * den_y) / (den * den),
    )
}

/// `(dx/dt, dy/dt)`; rejects `y < 0`.
pub fn eval_biophysical_xy(s: [f64; 2], p: &BiophysicalParams) -> Result<[f64; 2]> {
    let [x, y] = s;
    if y < 0.0 {
        return Err(Error::domain("y", y, "FBP must be non-negative"));
    }
    Ok(field(x, y, p))
}

fn field(x: f64, y: f64, p: &BiophysicalParams) -> [f64; 2] {
    let (r, _, _) = rate(x, y, p);
    [
        p.beta * (p.alpha - p.nu * r),
        p.eta * (p.nu * r - p.gamma * (y / p.omega).sqrt()),
    ]
}

#[derive(Clone, Debug)]
pub struct BiophysicalXy {
    pub p: BiophysicalParams,
}

impl BiophysicalXy {
    pub fn new(p: BiophysicalParams) -> Self {
        Self { p }
    }
}

impl VectorField for BiophysicalXy {
    fn id(&self) -> &'static str {
        "biophysical-xy"
    }
    fn labels(&self) -> &'static [&'static str] {
        &["x", "y"]
    }
    fn nonnegative(&self) -> &'static [bool] {
        &[true, true]
    }
    fn rhs(&self, s: &[f64], out: &mut [f64]) {
        let v = field(s[0], s[1].max(0.0), &self.p);
        out[0] = v[0];
        out[1] = v[1];
    }
    fn jacobian(&self, s: &[f64]) -> DMatrix<f64> {
        let p = &self.p;
        let (_, rx, ry) = rate(s[0], s[1], p);
        let sqrt_term = p.gamma / (2.0 * (s[1] * p.omega).sqrt());
        DMatrix::from_row_slice(
            2,
            2,
            &[
                -p.beta * p.nu * rx,
                -p.beta * p.nu * ry,
                p.eta * p.nu * rx,
                p.eta * (p.nu * ry - sqrt_term),
            ],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::jacobian_audit;

    #[test]
    fn production_positive_on_y_axis() {
        let p = BiophysicalParams::default();
        for x in [1.0, 50.0, 300.0] {
            let v = eval_biophysical_xy([x, 0.0], &p).unwrap();
            let expect = p.eta * p.nu * (x * x / p.kappa6) / (x * x / p.kappa2 + 1.0 / p.kappa4);
            assert!((v[1] - expect).abs() <= 1e-15 * expect.abs());
            assert!(v[1] > 0.0);
        }
    }

    #[test]
    fn negative_y_rejected() {
        let p = BiophysicalParams::default();
        assert!(eval_biophysical_xy([10.0, -1e-9], &p).is_err());
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let m = BiophysicalXy::new(BiophysicalParams::default());
        for s in [[150.0, 5.0], [40.0, 0.3], [90.0, 30.0]] {
            assert!(jacobian_audit(&m, &s) < 1e-6);
        }
    }
}
