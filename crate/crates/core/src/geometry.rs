//! Singular geometry: Y-nullcline and its poles, fold points, the unique
//! equilibrium, and the critical manifolds of the three regimes.

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::scaled::dimensionless_jacobian;
use crate::models::{eval_dimensionless_xy, EpsDecomposed, Regime2Uz, Regime3Xv};
use crate::params::{DimensionlessParams, EpsilonParams};

/// Sample count of the √Y sign scan.
pub const SCAN_SAMPLES: usize = 10_000;

/// Point on the Y-nullcline.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NullclinePoint {
    pub y: f64,
    pub x2: f64,
    /// False where the denominator is negative (so `x2 < 0`).
    pub physical: bool,
}

fn nullcline_num(s: f64, d: &DimensionlessParams) -> f64 {
    d.hat_gamma * s * (d.hat_sigma3 * s * s + d.hat_sigma4)
}

/// Denominator of the Y-nullcline as a cubic in `s = √Y`.
pub fn nullcline_den(s: f64, d: &DimensionlessParams) -> f64 {
    d.hat_nu2 * (s * s + d.hat_sigma6) - d.hat_gamma * s * (d.hat_sigma1 * s * s + d.hat_sigma2)
}

/// `X²` on the Y-nullcline at `Y`.
pub fn y_nullcline(y: f64, d: &DimensionlessParams) -> Result<NullclinePoint> {
    if !(y >= 0.0) {
        return Err(Error::domain("Y", y, "must be non-negative"));
    }
    let s = y.sqrt();
    let den = nullcline_den(s, d);
    if den.abs() < 1e-14 {
        return Err(Error::Pole(format!("Y-nullcline denominator vanishes at Y = {y:.12e}")));
    }
    let x2 = nullcline_num(s, d) / den;
    Ok(NullclinePoint {
        y,
        x2,
        physical: den > 0.0,
    })
}

/// `X²` on the X-nullcline at `Y`.
pub fn x_nullcline(y: f64, d: &DimensionlessParams) -> f64 {
    d.hat_alpha * (d.hat_sigma3 * y + d.hat_sigma4)
        / ((d.hat_nu1 - d.hat_alpha * d.hat_sigma1) * y + d.hat_nu1 * d.hat_sigma6 - d.hat_alpha * d.hat_sigma2)
}

/// Bracket sign changes of `g` on `[lo, hi]` and polish each root.
fn scan_roots(
    g: impl Fn(f64) -> f64,
    dg: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    samples: usize,
) -> (Vec<f64>, String) {
    let mut roots = Vec::new();
    let mut pattern = String::new();
    let h = (hi - lo) / samples as f64;
    let mut a = lo;
    let mut ga = g(a);
    for k in 1..=samples {
        let b = lo + k as f64 * h;
        let gb = g(b);
        if k % (samples / 20).max(1) == 0 {
            pattern.push(if gb > 0.0 { '+' } else if gb < 0.0 { '-' } else { '0' });
        }
        if ga == 0.0 {
            roots.push(a);
        } else if ga * gb < 0.0 {
            roots.push(polish(&g, &dg, a, b));
        }
        a = b;
        ga = gb;
    }
    (roots, pattern)
}

/// Safeguarded Newton inside a sign-change bracket.
fn polish(g: &impl Fn(f64) -> f64, dg: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let ga = g(a);
    let mut x = 0.5 * (a + b);
    for _ in 0..200 {
        let gx = g(x);
        if gx == 0.0 {
            return x;
        }
        if gx * ga < 0.0 {
            b = x;
        } else {
            a = x;
        }
        let d = dg(x);
        let newton = x - gx / d;
        x = if d != 0.0 && newton > a && newton < b { newton } else { 0.5 * (a + b) };
        if (b - a).abs() < 1e-15 * x.abs().max(1e-300) {
            break;
        }
    }
    x
}

/// Positive roots `√Y` of the nullcline denominator, ascending.
pub fn nullcline_poles(d: &DimensionlessParams) -> Vec<f64> {
    let hi = 1.5 * d.hat_nu2 / (d.hat_gamma * d.hat_sigma1);
    let g = |s: f64| nullcline_den(s, d);
    let dg = |s: f64| 2.0 * d.hat_nu2 * s - d.hat_gamma * (3.0 * d.hat_sigma1 * s * s + d.hat_sigma2);
    scan_roots(g, dg, 0.0, hi, SCAN_SAMPLES).0
}

/// Fold quartic in `s = √Y`, scaled to a monic polynomial.
pub fn fold_quartic(s: f64, d: &DimensionlessParams) -> f64 {
    let (c3, c2, c0) = fold_coefficients(d);
    s.powi(4) + c3 * s.powi(3) + c2 * s * s + c0
}

fn fold_coefficients(d: &DimensionlessParams) -> (f64, f64, f64) {
    let r = d.hat_sigma4 / d.hat_sigma3;
    (
        2.0 * d.hat_gamma / d.hat_nu2 * (d.hat_sigma1 * r - d.hat_sigma2),
        3.0 * d.hat_sigma6 - r,
        r * d.hat_sigma6,
    )
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FoldReport {
    pub y_f1: f64,
    pub x_f1: f64,
    pub y_f2: f64,
    pub x_f2: f64,
    /// Leading-order prediction `Y_f1 ≈ σ̂₆`.
    pub y_f1_leading: f64,
    /// Leading-order `X_f1` from substituting `Y = σ̂₆` into the nullcline.
    pub x_f1_leading: f64,
    /// Asymptotic root of the reduced quadratic for the upper fold.
    pub y_f2_leading: f64,
    /// Quartic residuals at the two roots.
    pub residuals: [f64; 2],
}

/// Lower and upper folds of the Y-nullcline.
pub fn fold_points(d: &DimensionlessParams) -> Result<FoldReport> {
    let hi = 1.5 / (d.hat_gamma * d.hat_sigma1);
    let (c3, c2, _) = fold_coefficients(d);
    let g = |s: f64| fold_quartic(s, d);
    let dg = |s: f64| 4.0 * s.powi(3) + 3.0 * c3 * s * s + 2.0 * c2 * s;
    let (roots, pattern) = scan_roots(g, dg, 0.0, hi, SCAN_SAMPLES);
    let roots: Vec<f64> = roots.into_iter().filter(|&s| s > 0.0).collect();
    if roots.len() < 2 {
        return Err(Error::Geometry(format!(
            "fold quartic: {} positive root(s) on [0, {hi:.4}], sign pattern {pattern}",
            roots.len()
        )));
    }
    let (s1, s2) = (roots[0], roots[roots.len() - 1]);
    let p1 = y_nullcline(s1 * s1, d)?;
    let p2 = y_nullcline(s2 * s2, d)?;
    let r = d.hat_sigma4 / d.hat_sigma3;
    let b = d.hat_gamma * d.hat_sigma1 * r / d.hat_nu2;
    let sf2 = (b * b + r).sqrt() - b;
    let rs6 = d.hat_sigma6.sqrt();
    let x_f1_leading = (d.hat_gamma * d.hat_sigma4 * rs6
        / (2.0 * d.hat_nu2 * d.hat_sigma6 - d.hat_gamma * d.hat_sigma2 * rs6))
        .sqrt();
    Ok(FoldReport {
        y_f1: s1 * s1,
        x_f1: p1.x2.sqrt(),
        y_f2: s2 * s2,
        x_f2: p2.x2.max(0.0).sqrt(),
        y_f1_leading: d.hat_sigma6,
        x_f1_leading,
        y_f2_leading: sf2 * sf2,
        residuals: [g(s1), g(s2)],
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    UnstableNode,
    UnstableFocus,
    StableNode,
    StableFocus,
    Saddle,
    NonHyperbolic,
}

impl Classification {
    pub fn from_trace_det(tr: f64, det: f64) -> Self {
        let disc = tr * tr - 4.0 * det;
        if det < 0.0 {
            Classification::Saddle
        } else if det == 0.0 || tr == 0.0 {
            Classification::NonHyperbolic
        } else if tr > 0.0 {
            if disc > 0.0 {
                Classification::UnstableNode
            } else {
                Classification::UnstableFocus
            }
        } else if disc > 0.0 {
            Classification::StableNode
        } else {
            Classification::StableFocus
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumReport {
    pub location: [f64; 2],
    pub jacobian: [[f64; 2]; 2],
    pub trace: f64,
    pub determinant: f64,
    pub discriminant: f64,
    pub classification: Classification,
    /// Field norm at the reported location.
    pub residual: f64,
}

impl EquilibriumReport {
    fn from_jacobian(location: [f64; 2], j: [[f64; 2]; 2], residual: f64) -> Self {
        let trace = j[0][0] + j[1][1];
        let determinant = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        Self {
            location,
            jacobian: j,
            trace,
            determinant,
            discriminant: trace * trace - 4.0 * determinant,
            classification: Classification::from_trace_det(trace, determinant),
            residual,
        }
    }
}

/// 2D Newton iteration with an analytic Jacobian.
pub fn newton2(
    f: impl Fn([f64; 2]) -> [f64; 2],
    jac: impl Fn([f64; 2]) -> [[f64; 2]; 2],
    mut x: [f64; 2],
    tol: f64,
) -> Result<[f64; 2]> {
    for _ in 0..100 {
        let v = f(x);
        if v[0].abs().max(v[1].abs()) < tol {
            return Ok(x);
        }
        let j = jac(x);
        let m = Matrix2::new(j[0][0], j[0][1], j[1][0], j[1][1]);
        let Some(inv) = m.try_inverse() else {
            return Err(Error::Geometry(format!("singular Jacobian in Newton at {x:?}")));
        };
        let dx = inv * nalgebra::Vector2::new(v[0], v[1]);
        x = [x[0] - dx[0], x[1] - dx[1]];
        if !x[0].is_finite() || !x[1].is_finite() {
            return Err(Error::Geometry("Newton iteration diverged".into()));
        }
    }
    let v = f(x);
    if v[0].abs().max(v[1].abs()) < tol * 1e3 {
        Ok(x)
    } else {
        Err(Error::Geometry(format!("Newton iteration did not converge (residual {v:?})")))
    }
}

/// Closed-form `(X_eq, Y_eq)` of the dimensionless system.
pub fn equilibrium_closed_form(d: &DimensionlessParams) -> [f64; 2] {
    let s = d.hat_nu2 * d.hat_alpha / (d.hat_nu1 * d.hat_gamma);
    let y = s * s;
    [x_nullcline(y, d).sqrt(), y]
}

/// Unique equilibrium of the dimensionless X–Y system, Newton-refined and classified.
pub fn equilibrium_xy(d: &DimensionlessParams) -> Result<EquilibriumReport> {
    let guess = equilibrium_closed_form(d);
    if !guess[0].is_finite() {
        return Err(Error::Geometry("closed-form equilibrium has negative X²".into()));
    }
    let f = |s: [f64; 2]| eval_dimensionless_xy([s[0], s[1].max(0.0)], d).unwrap_or([f64::NAN; 2]);
    let jac = |s: [f64; 2]| {
        let m = dimensionless_jacobian(s, d);
        [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]
    };
    let loc = newton2(f, jac, guess, 1e-15)?;
    let v = f(loc);
    Ok(EquilibriumReport::from_jacobian(loc, jac(loc), v[0].hypot(v[1])))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stability {
    Attracting,
    Repelling,
    Degenerate,
    FoldBoundary,
}

/// A sampled critical-manifold branch with its nontrivial eigenvalue.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifoldBranch {
    pub label: String,
    pub coords: [String; 2],
    pub parameter: String,
    pub range: (f64, f64),
    pub stability: Stability,
    pub grid: Vec<f64>,
    pub points: Vec<[f64; 2]>,
    pub eigenvalues: Vec<f64>,
}

/// `n` geometrically spaced points on `[lo, hi]` with `lo > 0`.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let r = (hi / lo).ln() / (n - 1) as f64;
    (0..n).map(|k| lo * (r * k as f64).exp()).collect()
}

fn branch(
    label: &str,
    coords: [&str; 2],
    parameter: &str,
    range: (f64, f64),
    stability: Stability,
    grid: Vec<f64>,
    embed: impl Fn(f64) -> [f64; 2],
    lambda: impl Fn(f64) -> f64,
) -> ManifoldBranch {
    ManifoldBranch {
        label: label.into(),
        coords: [coords[0].into(), coords[1].into()],
        parameter: parameter.into(),
        range,
        stability,
        points: grid.iter().map(|&g| embed(g)).collect(),
        eigenvalues: grid.iter().map(|&g| lambda(g)).collect(),
        grid,
    }
}

/// Nontrivial eigenvalue `Df₀·N₀ = X²Z(2 − 3γσ₁Z)` of the X–Z layer problem.
pub fn regime1_eigenvalue(x: f64, z: f64, e: &EpsilonParams) -> f64 {
    x * x * z * (2.0 - 3.0 * e.gamma * e.sigma1 * z)
}

/// `p₁ = (0, 1/(γσ₁))`.
pub fn p1(e: &EpsilonParams) -> [f64; 2] {
    [0.0, 1.0 / (e.gamma * e.sigma1)]
}

/// Γ₀ = {Z = 0}, Γ₁ = {X = 0} and Γ₂ = {Z = 1/(γσ₁)} of the X–Z layer problem.
pub fn regime1_manifolds(e: &EpsilonParams) -> Vec<ManifoldBranch> {
    let zt = 1.0 / (e.gamma * e.sigma1);
    let grid = geometric_grid(1e-3, 2.0, 41);
    let ee = *e;
    vec![
        branch("Gamma0", ["X", "Z"], "X", (0.0, 2.0), Stability::Degenerate, grid.clone(), |x| [x, 0.0], move |x| {
            regime1_eigenvalue(x, 0.0, &ee)
        }),
        branch("Gamma1", ["X", "Z"], "Z", (0.0, 1.5 * zt), Stability::Degenerate, geometric_grid(1e-3, 1.5 * zt, 41), |z| {
            [0.0, z]
        }, move |z| regime1_eigenvalue(0.0, z, &ee)),
        branch("Gamma2", ["X", "Z"], "X", (0.0, 2.0), Stability::Attracting, grid, move |x| [x, zt], move |x| {
            regime1_eigenvalue(x, zt, &ee)
        }),
    ]
}

/// Γ₅ = {Z = 0} of the U–Z layer problem and its node `p₀`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Regime2Objects {
    pub gamma5: ManifoldBranch,
    /// Fast eigendirection along Γ₅, normalised.
    pub gamma5_direction: [f64; 2],
    pub p0: EquilibriumReport,
    pub p0_closed_form: [f64; 2],
}

pub fn regime2_layer_objects(e: &EpsilonParams) -> Result<Regime2Objects> {
    let m = Regime2Uz::new(*e);
    let lam = -e.gamma * e.sigma4;
    let gamma5 = branch(
        "Gamma5",
        ["U", "Z"],
        "U",
        (0.0, 10.0),
        Stability::Attracting,
        geometric_grid(1e-2, 10.0, 41),
        |u| [u, 0.0],
        move |_| lam,
    );
    let dir = m.n0([1.0, 0.0]);
    let nd = dir[0].hypot(dir[1]);
    let f = |s: [f64; 2]| m.n0(s);
    let jac = |s: [f64; 2]| {
        let d = crate::taylor::Taylor::<f64, 2>::variable;
        let du = m.n0([d(s[0]), crate::taylor::Taylor::constant(s[1])]);
        let dz = m.n0([crate::taylor::Taylor::constant(s[0]), d(s[1])]);
        [[du[0].0[1], dz[0].0[1]], [du[1].0[1], dz[1].0[1]]]
    };
    let loc = newton2(f, jac, [1.0, 0.3], 1e-14)?;
    let v = m.full(loc, 0.0);
    let p0 = EquilibriumReport::from_jacobian(loc, m.jacobian_full(loc, 0.0), v[0].hypot(v[1]));
    Ok(Regime2Objects {
        gamma5,
        gamma5_direction: [dir[0] / nd, dir[1] / nd],
        p0,
        p0_closed_form: m.p0(),
    })
}

/// Nontrivial eigenvalue on Γ₄: `γσ₄(V² − 1)/(V² − γσ₂V + 1)`.
pub fn gamma4_eigenvalue(v: f64, e: &EpsilonParams) -> f64 {
    e.gamma * e.sigma4 * (v * v - 1.0) / (v * v - e.gamma * e.sigma2 * v + 1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Regime3Objects {
    pub gamma4a: ManifoldBranch,
    pub gamma4r: ManifoldBranch,
    pub p4: [f64; 2],
}

/// Attracting (V < 1) and repelling (V > 1) halves of Γ₄ and the fold `p₄`.
pub fn regime3_manifold(e: &EpsilonParams) -> Result<Regime3Objects> {
    if e.sigma2 >= 2.0 / e.gamma {
        return Err(Error::Hierarchy(format!(
            "V² − γσ₂V + 1 has real roots (σ₂ = {} ≥ 2/γ)",
            e.sigma2
        )));
    }
    let m = Regime3Xv::new(*e);
    let ee = *e;
    let embed = move |v: f64| [m.gamma4_x(v), v];
    let lam = move |v: f64| gamma4_eigenvalue(v, &ee);
    let below: Vec<f64> = geometric_grid(1e-3, 0.99, 41);
    let above: Vec<f64> = geometric_grid(1.01, 10.0, 41);
    Ok(Regime3Objects {
        gamma4a: branch("Gamma4a", ["X", "V"], "V", (0.0, 1.0), Stability::Attracting, below, embed, lam),
        gamma4r: branch("Gamma4r", ["X", "V"], "V", (1.0, 10.0), Stability::Repelling, above, embed, lam),
        p4: m.p4(),
    })
}

/// Γ₀ᴰ = {Z₁ = 0} (degenerate) in the entry chart and Γ₀ˢ = {ε₄ = 0}
/// (attracting, eigenvalue −1 along ε₄) in the exit chart.
pub fn chart_branches(e: &EpsilonParams) -> Vec<ManifoldBranch> {
    let grid = geometric_grid(1e-3, 1.0, 21);
    let g = e.gamma * e.sigma1;
    vec![
        branch("Gamma0D", ["r1", "Z1"], "r1", (0.0, 1.0), Stability::Degenerate, grid.clone(), |r| [r, 0.0], |_| 0.0),
        branch("Gamma0S", ["r4", "s4"], "s4", (0.0, 1.0 / g.sqrt()), Stability::Attracting, grid, |s| [0.0, s], move |s| {
            -(1.0 - g * s * s)
        }),
    ]
}

/// Limit of the lower fold abscissa along the hierarchy: `√(γσ₄/(2 − γσ₂))`.
pub fn fold_limit_x(e: &EpsilonParams) -> f64 {
    (e.gamma * e.sigma4 / (2.0 - e.gamma * e.sigma2)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::nondimensionalise;
    use crate::params::BiophysicalParams;

    fn table() -> DimensionlessParams {
        nondimensionalise(&BiophysicalParams::default()).unwrap()
    }

    #[test]
    fn equilibrium_is_on_both_nullclines() {
        let d = table();
        let eq = equilibrium_xy(&d).unwrap();
        let n = y_nullcline(eq.location[1], &d).unwrap();
        assert!((n.x2 - eq.location[0].powi(2)).abs() < 1e-10);
        assert_eq!(eq.classification, Classification::UnstableNode);
    }

    #[test]
    fn folds_bracket_the_equilibrium() {
        let d = table();
        let f = fold_points(&d).unwrap();
        let eq = equilibrium_xy(&d).unwrap();
        assert!(f.y_f1 < eq.location[1] && eq.location[1] < f.y_f2);
        assert!(f.residuals[0].abs() < 1e-10 && f.residuals[1].abs() < 1e-10);
    }

    #[test]
    fn single_pole_at_table_values() {
        let p = nullcline_poles(&table());
        assert_eq!(p.len(), 1, "{p:?}");
    }

    #[test]
    fn gamma4_sign_partition() {
        let e = EpsilonParams::default();
        assert_eq!(gamma4_eigenvalue(1.0, &e), 0.0);
        assert!((gamma4_eigenvalue(0.0, &e) + e.gamma).abs() < 1e-15);
    }
}
