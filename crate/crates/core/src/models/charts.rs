//! Desingularised fields of the four blow-up charts.
//!
//! Coded directly from the chart equations; nothing here calls the surrogate,
//! so the push-forward comparison in [`crate::blowup`] is a real cross-check.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::VectorField;
use crate::error::Error;
use crate::params::EpsilonParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChartId {
    K1,
    K2,
    K3,
    K4,
}

impl ChartId {
    pub const ALL: [ChartId; 4] = [ChartId::K1, ChartId::K2, ChartId::K3, ChartId::K4];

    pub fn labels(self) -> &'static [&'static str; 3] {
        match self {
            ChartId::K1 => &["r1", "Z1", "eps1"],
            ChartId::K2 => &["X2", "Z2", "r2"],
            ChartId::K3 => &["r3", "Z3", "s3"],
            ChartId::K4 => &["r4", "s4", "eps4"],
        }
    }
}

impl fmt::Display for ChartId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ChartId::K1 => "k1",
            ChartId::K2 => "k2",
            ChartId::K3 => "k3",
            ChartId::K4 => "k4",
        };
        f.write_str(s)
    }
}

impl FromStr for ChartId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "k1" => Ok(ChartId::K1),
            "k2" => Ok(ChartId::K2),
            "k3" => Ok(ChartId::K3),
            "k4" => Ok(ChartId::K4),
            _ => Err(Error::UnknownId {
                kind: "chart",
                id: s.into(),
                valid: "k1, k2, k3, k4".into(),
            }),
        }
    }
}

/// Chart field at `s`.
pub fn eval_chart(chart: ChartId, s: [f64; 3], e: &EpsilonParams) -> [f64; 3] {
    match chart {
        ChartId::K1 => k1(s, e),
        ChartId::K2 => k2(s, e),
        ChartId::K3 => k3(s, e),
        ChartId::K4 => k4(s, e),
    }
}

/// Analytic Jacobian of the chart field.
pub fn chart_jacobian(chart: ChartId, s: [f64; 3], e: &EpsilonParams) -> [[f64; 3]; 3] {
    match chart {
        ChartId::K1 => k1_jac(s, e),
        ChartId::K2 => k2_jac(s, e),
        ChartId::K3 => k3_jac(s, e),
        ChartId::K4 => k4_jac(s, e),
    }
}

fn k1(s: [f64; 3], e: &EpsilonParams) -> [f64; 3] {
    let [r, z, w] = s;
    let (a, al, g) = (e.a(), e.alpha, e.gamma);
    let p = e.sigma2 * r * r + e.sigma3 * z * z + e.sigma4;
    let w2 = w * w;
    let r4 = r.powi(4);
    let b = a * z * z - w2 * al * p + w2 * w2 * e.nu * r4;
    [
        -2.0 * r * w * z * b,
        (1.0 - g * e.sigma1 * z) * z * z - w2 * g * z * p + w2 * w2 * r4,
        2.0 * w2 * z * b,
    ]
}

fn k1_jac(s: [f64; 3], e: &EpsilonParams) -> [[f64; 3]; 3] {
    let [r, z, w] = s;
    let (a, al, g, nu) = (e.a(), e.alpha, e.gamma, e.nu);
    let (s1, s2, s3) = (e.sigma1, e.sigma2, e.sigma3);
    let p = s2 * r * r + s3 * z * z + e.sigma4;
    let w2 = w * w;
    let w4 = w2 * w2;
    let b = a * z * z - w2 * al * p + w4 * nu * r.powi(4);
    let b_r = -2.0 * w2 * al * s2 * r + 4.0 * w4 * nu * r.powi(3);
    let b_z = 2.0 * a * z - 2.0 * w2 * al * s3 * z;
    let b_w = -2.0 * w * al * p + 4.0 * w2 * w * nu * r.powi(4);
    [
        [
            -2.0 * w * z * (b + r * b_r),
            -2.0 * r * w * (b + z * b_z),
            -2.0 * r * z * (b + w * b_w),
        ],
        [
            -2.0 * w2 * g * z * s2 * r + 4.0 * w4 * r.powi(3),
            2.0 * z - 3.0 * g * s1 * z * z - w2 * g * (p + 2.0 * s3 * z * z),
            -2.0 * w * g * z * p + 4.0 * w2 * w * r.powi(4),
        ],
        [
            2.0 * w2 * z * b_r,
            2.0 * w2 * (b + z * b_z),
            4.0 * w * z * b + 2.0 * w2 * z * b_w,
        ],
    ]
}

fn k2(s: [f64; 3], e: &EpsilonParams) -> [f64; 3] {
    let [x, z, r] = s;
    let (a, al, g) = (e.a(), e.alpha, e.gamma);
    let r2 = r * r;
    let x2 = x * x;
    let q = e.sigma3 * z * z + e.sigma4;
    [
        -2.0 * z * (a * x2 * z * z - al * q - r2 * al * e.sigma2 * x2 + r2 * r2 * e.nu * x2),
        (1.0 - g * e.sigma1 * z) * x2 * z * z - g * z * q - r2 * g * e.sigma2 * x2 * z + r2 * r2 * x2,
        0.0,
    ]
}

fn k2_jac(s: [f64; 3], e: &EpsilonParams) -> [[f64; 3]; 3] {
    let [u, z, r] = s;
    let (a, al, g, nu) = (e.a(), e.alpha, e.gamma, e.nu);
    let (s1, s2, s3, s4) = (e.sigma1, e.sigma2, e.sigma3, e.sigma4);
    let et = r * r;
    let c = a * u * u * z * z - al * (s3 * z * z + s4) - et * al * s2 * u * u + et * et * nu * u * u;
    let c_u = 2.0 * a * u * z * z - 2.0 * et * al * s2 * u + 2.0 * et * et * nu * u;
    let c_z = 2.0 * a * u * u * z - 2.0 * al * s3 * z;
    let c_r = (-al * s2 * u * u + 2.0 * et * nu * u * u) * 2.0 * r;
    [
        [-2.0 * z * c_u, -2.0 * (c + z * c_z), -2.0 * z * c_r],
        [
            2.0 * u * z * z - 2.0 * g * s1 * u * z.powi(3) - 2.0 * et * g * s2 * u * z + 2.0 * et * et * u,
            2.0 * u * u * z - 3.0 * g * s1 * u * u * z * z - 3.0 * g * s3 * z * z - g * s4 - et * g * s2 * u * u,
            (-g * s2 * u * u * z + 2.0 * et * u * u) * 2.0 * r,
        ],
        [0.0, 0.0, 0.0],
    ]
}

fn k3(s: [f64; 3], e: &EpsilonParams) -> [f64; 3] {
    let [r, z, sv] = s;
    let (al, g) = (e.alpha, e.gamma);
    let s2 = sv * sv;
    let s3 = s2 * sv;
    let r2 = r * r;
    let c = s2 * ((e.nu - al * (e.sigma1 + s2 * e.sigma3)) * z * z + e.nu * r2 * r2) - al * (e.sigma2 * r2 + e.sigma4);
    [
        -2.0 * z * r * s3 * c,
        z * z + r2 * r2 - g * (e.sigma2 * r2 + e.sigma4) * z - s2 * g * z.powi(3) * (e.sigma1 + s2 * e.sigma3)
            - 4.0 * s3 * z * z * c,
        2.0 * z * s3 * sv * c,
    ]
}

fn k3_jac(s: [f64; 3], e: &EpsilonParams) -> [[f64; 3]; 3] {
    let [r, z, sv] = s;
    let (al, g, nu) = (e.alpha, e.gamma, e.nu);
    let (s1, sg2, sg3, s4) = (e.sigma1, e.sigma2, e.sigma3, e.sigma4);
    let s2 = sv * sv;
    let s3 = s2 * sv;
    let s4p = s2 * s2;
    let m = nu - al * s1 - al * sg3 * s2;
    let c = s2 * (m * z * z + nu * r.powi(4)) - al * (sg2 * r * r + s4);
    let c_r = 4.0 * s2 * nu * r.powi(3) - 2.0 * al * sg2 * r;
    let c_z = 2.0 * s2 * m * z;
    let c_s = 2.0 * sv * (m * z * z + nu * r.powi(4)) - 2.0 * al * sg3 * s3 * z * z;
    [
        [
            -2.0 * z * s3 * (c + r * c_r),
            -2.0 * r * s3 * (c + z * c_z),
            -2.0 * z * r * (3.0 * s2 * c + s3 * c_s),
        ],
        [
            4.0 * r.powi(3) - 2.0 * g * sg2 * r * z - 4.0 * s3 * z * z * c_r,
            2.0 * z - g * (sg2 * r * r + s4) - 3.0 * s2 * g * z * z * (s1 + s2 * sg3) - 4.0 * s3 * (2.0 * z * c + z * z * c_z),
            -g * z.powi(3) * (2.0 * sv * s1 + 4.0 * s3 * sg3) - 4.0 * (3.0 * s2 * z * z * c + s3 * z * z * c_s),
        ],
        [
            2.0 * z * s4p * c_r,
            2.0 * s4p * (c + z * c_z),
            2.0 * z * (4.0 * s3 * c + s4p * c_s),
        ],
    ]
}

fn k4(s: [f64; 3], e: &EpsilonParams) -> [f64; 3] {
    let [r, sv, w] = s;
    let (a, al, g) = (e.a(), e.alpha, e.gamma);
    let s2 = sv * sv;
    let s3 = s2 * sv;
    let w2 = w * w;
    let r4 = r.powi(4);
    let p = e.sigma2 * r * r + e.sigma3 * s2 * s2 + e.sigma4;
    let d = a * s2 - w2 * al * p + w2 * w2 * e.nu * r4 * s2;
    let ee = (1.0 - g * e.sigma1 * s2) - w2 * g * p + w2 * w2 * r4;
    [-4.0 * r * s3 * w * d, sv * ee, -w * (ee - 4.0 * s3 * w * d)]
}

fn k4_jac(s: [f64; 3], e: &EpsilonParams) -> [[f64; 3]; 3] {
    let [r, sv, w] = s;
    let (a, al, g, nu) = (e.a(), e.alpha, e.gamma, e.nu);
    let (s1, sg2, sg3) = (e.sigma1, e.sigma2, e.sigma3);
    let s2 = sv * sv;
    let s3 = s2 * sv;
    let w2 = w * w;
    let w4 = w2 * w2;
    let r4 = r.powi(4);
    let p = sg2 * r * r + sg3 * s2 * s2 + e.sigma4;
    let d = a * s2 - w2 * al * p + w4 * nu * r4 * s2;
    let ee = 1.0 - g * s1 * s2 - w2 * g * p + w4 * r4;
    let d_r = -2.0 * w2 * al * sg2 * r + 4.0 * w4 * nu * r.powi(3) * s2;
    let d_s = 2.0 * a * sv - 4.0 * w2 * al * sg3 * s3 + 2.0 * w4 * nu * r4 * sv;
    let d_w = -2.0 * w * al * p + 4.0 * w2 * w * nu * r4 * s2;
    let e_r = -2.0 * w2 * g * sg2 * r + 4.0 * w4 * r.powi(3);
    let e_s = -2.0 * g * s1 * sv - 4.0 * w2 * g * sg3 * s3;
    let e_w = -2.0 * w * g * p + 4.0 * w2 * w * r4;
    [
        [
            -4.0 * s3 * w * (d + r * d_r),
            -4.0 * r * w * (3.0 * s2 * d + s3 * d_s),
            -4.0 * r * s3 * (d + w * d_w),
        ],
        [sv * e_r, ee + sv * e_s, sv * e_w],
        [
            -w * e_r + 4.0 * s3 * w2 * d_r,
            -w * e_s + 4.0 * (3.0 * s2 * w2 * d + s3 * w2 * d_s),
            -ee - w * e_w + 4.0 * s3 * (2.0 * w * d + w2 * d_w),
        ],
    ]
}

/// A chart field as a [`VectorField`].
#[derive(Clone, Copy, Debug)]
pub struct ChartField {
    pub chart: ChartId,
    pub e: EpsilonParams,
}

impl VectorField for ChartField {
    fn id(&self) -> &'static str {
        match self.chart {
            ChartId::K1 => "chart-k1",
            ChartId::K2 => "chart-k2",
            ChartId::K3 => "chart-k3",
            ChartId::K4 => "chart-k4",
        }
    }
    fn labels(&self) -> &'static [&'static str] {
        self.chart.labels()
    }
    fn nonnegative(&self) -> &'static [bool] {
        match self.chart {
            ChartId::K1 => &[true, true, true],
            ChartId::K2 => &[false, true, true],
            ChartId::K3 => &[true, true, true],
            ChartId::K4 => &[true, true, true],
        }
    }
    fn rhs(&self, s: &[f64], out: &mut [f64]) {
        let v = eval_chart(self.chart, [s[0], s[1], s[2]], &self.e);
        out.copy_from_slice(&v);
    }
    fn jacobian(&self, s: &[f64]) -> DMatrix<f64> {
        let j = chart_jacobian(self.chart, [s[0], s[1], s[2]], &self.e);
        DMatrix::from_fn(3, 3, |i, k| j[i][k])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::regimes::Regime2Uz;
    use crate::models::{jacobian_audit, EpsDecomposed};

    #[test]
    fn gamma2_line_is_stationary_in_k1() {
        let e = EpsilonParams::default();
        let z = 1.0 / (e.gamma * e.sigma1);
        for r in [0.1, 0.5, 1.0] {
            let v = eval_chart(ChartId::K1, [r, z, 0.0], &e);
            assert_eq!(v[2], 0.0);
            assert!(v[1].abs() < 1e-15);
        }
    }

    #[test]
    fn k2_at_zero_radius_is_the_uz_layer() {
        let e = EpsilonParams::default();
        let m = Regime2Uz::new(e);
        let a = eval_chart(ChartId::K2, [1.1, 0.3, 0.0], &e);
        let b = m.full([1.1, 0.3], 0.0);
        for i in 0..2 {
            assert!((a[i] - b[i]).abs() <= 1e-12 * a[i].abs(), "{a:?} {b:?}");
        }
    }

    #[test]
    fn analytic_jacobians_match_finite_differences() {
        let e = EpsilonParams::default();
        for chart in ChartId::ALL {
            let f = ChartField { chart, e };
            for s in [[0.4, 0.9, 0.3], [0.7, 0.2, 0.6], [1.3, 1.7, 0.15]] {
                let err = jacobian_audit(&f, &s);
                assert!(err < 1e-6, "{chart}: {err}");
            }
        }
    }
}
