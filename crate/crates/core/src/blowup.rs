//! Chart maps of the two cylindrical blow-ups, chart equilibria with their
//! spectra, centre-manifold coefficients and push-forward checks.

use nalgebra::{Complex, Matrix3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dynamics::{drive, linear_fit, Control, Method, Tolerances};
use crate::error::{Error, Result};
use crate::models::charts::chart_jacobian;
use crate::models::{eval_chart, ChartField, ChartId, EpsDecomposed, SurrogateXz};
use crate::params::EpsilonParams;

/// Equilibria whose field residual exceeds this are reported as inconsistent.
pub const EQUILIBRIUM_TOL: f64 = 1e-8;
/// Relative tolerance for fitted centre-manifold coefficients.
pub const CENTRE_FIT_TOL: f64 = 0.10;
/// Displacements used for the centre-manifold fits.
pub const CENTRE_DISPLACEMENTS: [f64; 5] = [1e-2, 3e-3, 1e-3, 3e-4, 1e-4];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapDirection {
    /// Original `(X, Z, ε)` into chart coordinates.
    Forward,
    /// Chart coordinates back to `(X, Z, ε)`.
    Backward,
}

fn locus(chart: ChartId, what: &str) -> Error {
    Error::Locus(format!("{chart}: {what} on the blown-up locus"))
}

fn check_radial(chart: ChartId, s: [f64; 3], radial: &[usize]) -> Result<()> {
    for &i in radial {
        if s[i] < 0.0 || !s[i].is_finite() {
            return Err(Error::domain(chart.labels()[i], s[i], "radial coordinate must be >= 0"));
        }
    }
    Ok(())
}

/// Map between `(X, Z, ε)` and chart coordinates.
pub fn chart_transform(chart: ChartId, s: [f64; 3], dir: MapDirection) -> Result<[f64; 3]> {
    match dir {
        MapDirection::Forward => {
            let [x, z, eps] = s;
            check_radial(chart, s, &[2])?;
            match chart {
                ChartId::K1 => {
                    check_radial(chart, s, &[0])?;
                    if x == 0.0 {
                        return Err(locus(chart, "X = 0"));
                    }
                    Ok([x, z, eps / x])
                }
                ChartId::K2 => {
                    if eps == 0.0 {
                        return Err(locus(chart, "eps = 0"));
                    }
                    Ok([x / eps, z, eps])
                }
                ChartId::K3 => {
                    check_radial(chart, s, &[0])?;
                    if x == 0.0 || eps == 0.0 {
                        return Err(locus(chart, "X = 0 or eps = 0"));
                    }
                    let s3 = eps / x;
                    Ok([x, z / (s3 * s3), s3])
                }
                ChartId::K4 => {
                    check_radial(chart, s, &[0, 1])?;
                    if x == 0.0 || z == 0.0 {
                        return Err(locus(chart, "X = 0 or Z = 0"));
                    }
                    let s4 = z.sqrt();
                    Ok([x, s4, eps / (x * s4)])
                }
            }
        }
        MapDirection::Backward => match chart {
            ChartId::K1 => {
                check_radial(chart, s, &[0, 2])?;
                let [r, z, w] = s;
                Ok([r, z, w * r])
            }
            ChartId::K2 => {
                check_radial(chart, s, &[2])?;
                let [x2, z, r] = s;
                Ok([r * x2, z, r])
            }
            ChartId::K3 => {
                check_radial(chart, s, &[0, 2])?;
                let [r, z3, sv] = s;
                Ok([r, sv * sv * z3, sv * r])
            }
            ChartId::K4 => {
                check_radial(chart, s, &[0, 1, 2])?;
                let [r, sv, w] = s;
                Ok([r, sv * sv, sv * w * r])
            }
        },
    }
}

/// K3 or K4 coordinates expressed in K1.
pub fn to_k1(chart: ChartId, s: [f64; 3]) -> Result<[f64; 3]> {
    match chart {
        ChartId::K1 => Ok(s),
        ChartId::K2 => {
            let [x2, z, r] = s;
            if x2 == 0.0 {
                return Err(locus(chart, "X2 = 0"));
            }
            Ok([r * x2, z, 1.0 / x2])
        }
        ChartId::K3 => Ok([s[0], s[2] * s[2] * s[1], s[2]]),
        ChartId::K4 => Ok([s[0], s[1] * s[1], s[1] * s[2]]),
    }
}

/// Overlap map K3 → K4, defined for `Z₃ > 0` including the cylinder `s₃ = 0`.
pub fn k3_to_k4(s: [f64; 3]) -> Result<[f64; 3]> {
    let [r, z3, sv] = s;
    if z3 <= 0.0 {
        return Err(Error::domain("Z3", z3, "K3 -> K4 overlap needs Z3 > 0"));
    }
    Ok([r, sv * z3.sqrt(), 1.0 / z3.sqrt()])
}

/// `d/dτ_chart = g · d/dτ̄`.
pub fn time_factor(chart: ChartId, s: [f64; 3]) -> Result<f64> {
    let g = match chart {
        ChartId::K1 => 1.0 / (s[0] * s[0]),
        ChartId::K2 => 1.0 / (s[2] * s[2]),
        ChartId::K3 => 1.0 / (s[0] * s[2]).powi(2),
        ChartId::K4 => 2.0 / (s[0] * s[1]).powi(2),
    };
    if g.is_finite() {
        Ok(g)
    } else {
        Err(locus(chart, "time factor"))
    }
}

fn backward_jacobian(chart: ChartId, s: [f64; 3]) -> [[f64; 3]; 3] {
    match chart {
        ChartId::K1 => {
            let [r, _, w] = s;
            [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [w, 0.0, r]]
        }
        ChartId::K2 => {
            let [x2, _, r] = s;
            [[r, 0.0, x2], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
        }
        ChartId::K3 => {
            let [r, z3, sv] = s;
            [[1.0, 0.0, 0.0], [0.0, sv * sv, 2.0 * sv * z3], [sv, 0.0, r]]
        }
        ChartId::K4 => {
            let [r, sv, w] = s;
            [[1.0, 0.0, 0.0], [0.0, 2.0 * sv, 0.0], [sv * w, w * r, sv * r]]
        }
    }
}

/// Largest relative mismatch between `DΦ · v_chart` and `g · F(Φ)` over the
/// samples, where F is the extended surrogate field with `ε' = 0`.
pub fn pushforward_residual(chart: ChartId, samples: &[[f64; 3]], e: &EpsilonParams) -> Result<f64> {
    let m = SurrogateXz::new(*e);
    let mut worst: f64 = 0.0;
    for &s in samples {
        let g = time_factor(chart, s)?;
        let [x, z, eps] = chart_transform(chart, s, MapDirection::Backward)?;
        let f = m.full([x, z], eps);
        let rhs = [g * f[0], g * f[1], 0.0];
        let v = eval_chart(chart, s, e);
        let d = backward_jacobian(chart, s);
        let mut num: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for i in 0..3 {
            let lhs = d[i][0] * v[0] + d[i][1] * v[1] + d[i][2] * v[2];
            num = num.max((lhs - rhs[i]).abs());
            scale = scale.max(lhs.abs()).max(rhs[i].abs());
        }
        worst = worst.max(if scale > 0.0 { num / scale } else { num });
    }
    Ok(worst)
}

/// Uniform random samples away from the blown-up locus.
pub fn default_samples(chart: ChartId, n: usize, seed: u64) -> Vec<[f64; 3]> {
    let ranges: [(f64, f64); 3] = match chart {
        ChartId::K1 => [(0.05, 1.0), (0.05, 2.5), (0.05, 1.0)],
        ChartId::K2 => [(0.05, 3.0), (0.05, 2.5), (0.05, 0.5)],
        ChartId::K3 => [(0.05, 1.0), (0.05, 3.0), (0.05, 0.5)],
        ChartId::K4 => [(0.05, 1.0), (0.05, 1.5), (0.05, 2.0)],
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let mut s = [0.0; 3];
            for (v, (a, b)) in s.iter_mut().zip(ranges) {
                *v = rng.random_range(a..b);
            }
            s
        })
        .collect()
}

/// Largest component a chart field leaves on its invariant planes.
pub fn invariant_plane_leak(chart: ChartId, e: &EpsilonParams, samples: &[[f64; 3]]) -> f64 {
    // (coordinate fixed to zero, component that must vanish)
    let planes: &[(usize, usize)] = match chart {
        ChartId::K1 => &[(2, 2), (0, 0)],
        ChartId::K2 => &[],
        ChartId::K3 => &[(2, 2), (0, 0)],
        ChartId::K4 => &[(0, 0), (1, 1), (2, 2)],
    };
    let mut worst: f64 = 0.0;
    for &s in samples {
        for &(coord, comp) in planes {
            let mut p = s;
            p[coord] = 0.0;
            worst = worst.max(eval_chart(chart, p, e)[comp].abs());
        }
    }
    worst
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Hyperbolicity {
    Hyperbolic,
    PartiallyHyperbolic,
    NonHyperbolic,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChartEquilibrium {
    pub chart: ChartId,
    pub label: String,
    pub coords: [f64; 3],
    /// `(re, im)` pairs in coordinate order when real and diagonal-like,
    /// otherwise sorted by real part.
    pub eigenvalues: Vec<[f64; 2]>,
    pub hyperbolicity: Hyperbolicity,
    pub residual: f64,
    pub note: Option<String>,
}

const ZERO_EIG: f64 = 1e-12;

fn spectrum(chart: ChartId, s: [f64; 3], e: &EpsilonParams) -> Vec<[f64; 2]> {
    let j = chart_jacobian(chart, s, e);
    let off: f64 = (0..3)
        .flat_map(|i| (0..3).filter(move |&k| k != i).map(move |k| (i, k)))
        .map(|(i, k)| j[i][k].abs())
        .fold(0.0, f64::max);
    if off == 0.0 {
        return (0..3).map(|i| [j[i][i], 0.0]).collect();
    }
    let m = Matrix3::from_fn(|i, k| j[i][k]);
    let mut ev: Vec<Complex<f64>> = m.complex_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap_or(std::cmp::Ordering::Equal));
    ev.iter().map(|c| [c.re, c.im]).collect()
}

fn classify(ev: &[[f64; 2]]) -> Hyperbolicity {
    let zeros = ev.iter().filter(|l| l[0].abs() <= ZERO_EIG).count();
    match zeros {
        0 => Hyperbolicity::Hyperbolic,
        z if z < ev.len() => Hyperbolicity::PartiallyHyperbolic,
        _ => Hyperbolicity::NonHyperbolic,
    }
}

fn equilibrium(chart: ChartId, label: &str, s: [f64; 3], e: &EpsilonParams, note: Option<&str>) -> Result<ChartEquilibrium> {
    let v = eval_chart(chart, s, e);
    let residual = v.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    if residual > EQUILIBRIUM_TOL || !residual.is_finite() {
        return Err(Error::Inconsistency(format!(
            "{label} in {chart} has field residual {residual:e}"
        )));
    }
    let eigenvalues = spectrum(chart, s, e);
    Ok(ChartEquilibrium {
        chart,
        label: label.into(),
        coords: s,
        hyperbolicity: classify(&eigenvalues),
        eigenvalues,
        residual,
        note: note.map(str::to_string),
    })
}

/// `(ε₁, Z₁)` of the node p₀ in the plane `r₁ = 0`.
pub fn p0_k1(e: &EpsilonParams) -> [f64; 2] {
    let z = e.alpha / (e.gamma * e.nu);
    let w2 = e.a() * e.alpha / (e.sigma3 * e.alpha * e.alpha + e.sigma4 * e.gamma * e.gamma * e.nu * e.nu);
    [w2.sqrt(), z]
}

/// Fold radius `r = √(γσ₄/(2 − γσ₂))` shared by K3 and K4.
pub fn fold_radius(e: &EpsilonParams) -> f64 {
    (e.gamma * e.sigma4 / (2.0 - e.gamma * e.sigma2)).sqrt()
}

pub fn chart_equilibria(chart: ChartId, e: &EpsilonParams) -> Result<Vec<ChartEquilibrium>> {
    let zs = 1.0 / (e.gamma * e.sigma1);
    let [w0, z0] = p0_k1(e);
    let rf = fold_radius(e);
    match chart {
        ChartId::K1 => Ok(vec![
            equilibrium(chart, "p0", [0.0, z0, w0], e, None)?,
            equilibrium(chart, "p1", [0.0, zs, 0.0], e, None)?,
            equilibrium(
                chart,
                "p378",
                [0.0, 0.0, 0.0],
                e,
                Some("resolved by the second blow-up into Gamma5 (K3), p7 (K3) and p8 (K4)"),
            )?,
        ]),
        ChartId::K2 => Ok(vec![equilibrium(chart, "p0", [1.0 / w0, z0, 0.0], e, None)?]),
        ChartId::K3 => Ok(vec![
            equilibrium(chart, "p3", [0.0, 0.0, 0.0], e, None)?,
            equilibrium(chart, "p4", [rf, rf * rf, 0.0], e, None)?,
            equilibrium(chart, "p7", [0.0, e.gamma * e.sigma4, 0.0], e, None)?,
        ]),
        ChartId::K4 => Ok(vec![
            equilibrium(chart, "p4", [rf, 0.0, 1.0 / rf], e, None)?,
            equilibrium(chart, "p7", [0.0, 0.0, 1.0 / (e.gamma * e.sigma4).sqrt()], e, None)?,
            equilibrium(chart, "p8", [0.0, 0.0, 0.0], e, None)?,
        ]),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CentrePoint {
    P1,
    P3,
    P7,
}

impl std::str::FromStr for CentrePoint {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p1" => Ok(CentrePoint::P1),
            "p3" => Ok(CentrePoint::P3),
            "p7" => Ok(CentrePoint::P7),
            _ => Err(Error::UnknownId {
                kind: "centre point",
                id: s.into(),
                valid: "p1, p3, p7".into(),
            }),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CoefficientFit {
    pub name: String,
    pub power: f64,
    pub coefficient: f64,
    pub fitted_power: f64,
    /// Coefficient fitted with the power held at its stated value.
    pub fitted_coefficient: f64,
    pub samples: Vec<[f64; 2]>,
    pub relative_error: f64,
    pub within_tolerance: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CentreCoefficients {
    pub point: CentrePoint,
    pub chart: ChartId,
    pub fits: Vec<CoefficientFit>,
}

impl CentreCoefficients {
    pub fn all_within_tolerance(&self) -> bool {
        self.fits.iter().all(|f| f.within_tolerance)
    }
}

fn fit(name: &str, power: f64, coefficient: f64, samples: Vec<[f64; 2]>) -> Result<CoefficientFit> {
    let lx: Vec<f64> = samples.iter().map(|p| p[0].ln()).collect();
    let ly: Vec<f64> = samples.iter().map(|p| p[1].abs().ln()).collect();
    if ly.iter().any(|v| !v.is_finite()) {
        return Err(Error::Inconsistency(format!("{name}: non-positive sample in centre fit")));
    }
    let (slope, _) = linear_fit(&lx, &ly).ok_or_else(|| Error::Inconsistency(format!("{name}: too few samples")))?;
    let mean: f64 = lx.iter().zip(&ly).map(|(x, y)| y - power * x).sum::<f64>() / lx.len() as f64;
    let fitted_coefficient = mean.exp() * coefficient.signum();
    let relative_error = ((fitted_coefficient - coefficient) / coefficient).abs();
    Ok(CoefficientFit {
        name: name.into(),
        power,
        coefficient,
        fitted_power: slope,
        fitted_coefficient,
        samples,
        relative_error,
        within_tolerance: relative_error <= CENTRE_FIT_TOL,
    })
}

fn relax(chart: ChartId, e: &EpsilonParams, y0: [f64; 3], duration: f64) -> Result<[f64; 3]> {
    let f = ChartField { chart, e: *e };
    let tol = Tolerances::new(1e-12, 1e-18);
    let run = drive(&f, &y0, 0.0, duration, &tol, |_| Control::Continue)?;
    Ok([run.y[0], run.y[1], run.y[2]])
}

/// Printed leading coefficients with a numerical check: start a small
/// displacement off the point, let the hyperbolic direction relax onto the
/// centre manifold, then fit graph and flow on log-log axes.
pub fn centre_coefficients(point: CentrePoint, e: &EpsilonParams) -> Result<CentreCoefficients> {
    let (g, s1, s3, s4) = (e.gamma, e.sigma1, e.sigma3, e.sigma4);
    match point {
        CentrePoint::P1 => {
            let zs = 1.0 / (g * s1);
            let graph = (s3 + g * g * s1 * s1 * s4) / (g * s1 * s1);
            let flow = 2.0 * e.a() / (g * s1).powi(3);
            let mut gs = Vec::new();
            let mut fs = Vec::new();
            for d in CENTRE_DISPLACEMENTS {
                let y = relax(ChartId::K1, e, [0.0, zs, d], 20.0 * g * s1)?;
                let v = eval_chart(ChartId::K1, y, e);
                gs.push([y[2], zs - y[1]]);
                fs.push([y[2], v[2]]);
            }
            Ok(CentreCoefficients {
                point,
                chart: ChartId::K1,
                fits: vec![
                    fit("graph: 1/(gamma sigma1) - Z1 against eps1", 2.0, graph, gs)?,
                    fit("flow: eps1' against eps1", 2.0, flow, fs)?,
                ],
            })
        }
        CentrePoint::P7 => {
            let z7 = g * s4;
            let flow = -2.0 * e.alpha * g * s4 * s4;
            let mut fs = Vec::new();
            for d in CENTRE_DISPLACEMENTS {
                // p₇ repels in Z₃, so relax backwards in time.
                let y = relax_backward(ChartId::K3, e, [0.0, z7, d], 40.0 / z7)?;
                let v = eval_chart(ChartId::K3, y, e);
                fs.push([y[2], v[2]]);
            }
            Ok(CentreCoefficients {
                point,
                chart: ChartId::K3,
                fits: vec![fit("flow: s3' against s3", 4.0, flow, fs)?],
            })
        }
        CentrePoint::P3 => {
            // Γ₄a near the origin of s₃ = 0: Z₃ ≈ r₃⁴/(γσ₄).
            let graph = 1.0 / (g * s4);
            let mut gs = Vec::new();
            for d in CENTRE_DISPLACEMENTS {
                let y = relax(ChartId::K3, e, [d.sqrt(), 0.0, 0.0], 40.0 / (g * s4))?;
                gs.push([y[0], y[1]]);
            }
            Ok(CentreCoefficients {
                point,
                chart: ChartId::K3,
                fits: vec![fit("graph: Z3 against r3 on s3 = 0", 4.0, graph, gs)?],
            })
        }
    }
}

struct Reversed(ChartField);

impl crate::models::VectorField for Reversed {
    fn id(&self) -> &'static str {
        self.0.id()
    }
    fn labels(&self) -> &'static [&'static str] {
        self.0.labels()
    }
    fn nonnegative(&self) -> &'static [bool] {
        self.0.nonnegative()
    }
    fn rhs(&self, s: &[f64], out: &mut [f64]) {
        self.0.rhs(s, out);
        for v in out.iter_mut() {
            *v = -*v;
        }
    }
}

fn relax_backward(chart: ChartId, e: &EpsilonParams, y0: [f64; 3], duration: f64) -> Result<[f64; 3]> {
    let f = Reversed(ChartField { chart, e: *e });
    let tol = Tolerances::new(1e-12, 1e-18);
    let run = drive(&f, &y0, 0.0, duration, &tol, |_| Control::Continue)?;
    Ok([run.y[0], run.y[1], run.y[2]])
}

#[derive(Clone, Debug, Serialize)]
pub struct Landing {
    pub label: String,
    pub chart: ChartId,
    pub delta: f64,
    pub start: [f64; 3],
    pub point: [f64; 3],
    pub time: f64,
    pub reached: bool,
}

fn run_until(
    chart: ChartId,
    e: &EpsilonParams,
    y0: [f64; 3],
    t_max: f64,
    mut stop: impl FnMut(&[f64]) -> bool,
) -> Result<([f64; 3], f64, bool)> {
    let f = ChartField { chart, e: *e };
    let tol = Tolerances::new(1e-10, 1e-14).with_method(Method::Auto);
    let mut hit = None;
    let run = drive(&f, &y0, 0.0, t_max, &tol, |step| {
        if stop(step.y1) {
            hit = Some(([step.y1[0], step.y1[1], step.y1[2]], step.t1));
            Control::Stop
        } else {
            Control::Continue
        }
    })?;
    Ok(match hit {
        Some((p, t)) => (p, t, true),
        None => ([run.y[0], run.y[1], run.y[2]], run.t, false),
    })
}

/// p₂: where the layer flow of K2 (`r₂ = 0`) started on the centre manifold
/// of p₁ at `ε₁ = δ` first comes within δ of Γ₅.
pub fn heteroclinic_p1_p2(e: &EpsilonParams, delta: f64) -> Result<Landing> {
    let g = e.gamma;
    let s1 = e.sigma1;
    let k = (e.sigma3 + g * g * s1 * s1 * e.sigma4) / (g * s1 * s1);
    let z = 1.0 / (g * s1) - k * delta * delta;
    let start = [1.0 / delta, z, 0.0];
    let (point, time, reached) = run_until(ChartId::K2, e, start, 1e6, |y| y[1] <= delta)?;
    Ok(Landing {
        label: "p2".into(),
        chart: ChartId::K2,
        delta,
        start,
        point,
        time,
        reached,
    })
}

/// p₅ and p₆: the fast jump from the K4 fold displaced by δ, first onto
/// `Γ₀^S = {ε₄ = 0}` and then onto Γ₂ at `s₄ = 1/√(γσ₁)`.
pub fn jump_landings(e: &EpsilonParams, delta: f64) -> Result<[Landing; 2]> {
    let rf = fold_radius(e);
    // s₄ = 0 is invariant: the layer problem on the cylinder.
    let start5 = [rf, 0.0, 1.0 / rf - delta];
    let (p5, t5, r5) = run_until(ChartId::K4, e, start5, 1e8, |y| y[2] <= delta)?;
    let s_top = 1.0 / (e.gamma * e.sigma1).sqrt();
    let start6 = [rf, delta, delta];
    let (p6, t6, r6) = run_until(ChartId::K4, e, start6, 1e8, |y| (y[1] - s_top).abs() <= delta)?;
    Ok([
        Landing {
            label: "p5".into(),
            chart: ChartId::K4,
            delta,
            start: start5,
            point: p5,
            time: t5,
            reached: r5,
        },
        Landing {
            label: "p6".into(),
            chart: ChartId::K4,
            delta,
            start: start6,
            point: p6,
            time: t6,
            reached: r6 && p6[2] <= delta,
        },
    ])
}

#[derive(Clone, Debug, Serialize)]
pub struct Omega07 {
    pub delta: f64,
    pub start: [f64; 3],
    /// Closest approach to p₀ in the `(Z₃, s₃)` plane.
    pub min_distance: f64,
    pub at: [f64; 3],
    pub s3_monotone: bool,
}

/// Backward integration in K3 (`r₃ = 0`) from the centre branch of p₇ at
/// `s₃ = δ`; p₀ is a repelling node, so the connection is traced in reverse.
pub fn omega07(e: &EpsilonParams, delta: f64, duration: f64) -> Result<Omega07> {
    let [w0, z0] = p0_k1(e);
    let target = [z0 / (w0 * w0), w0];
    let z7 = e.gamma * e.sigma4;
    let start = [0.0, z7, delta];
    let f = Reversed(ChartField { chart: ChartId::K3, e: *e });
    let tol = Tolerances::new(1e-10, 1e-14).with_method(Method::Auto);
    let mut best = (f64::INFINITY, start);
    let mut last_s = start[2];
    let mut monotone = true;
    drive(&f, &start, 0.0, duration, &tol, |step| {
        let y = step.y1;
        let d = (y[1] - target[0]).hypot(y[2] - target[1]);
        if d < best.0 {
            best = (d, [y[0], y[1], y[2]]);
        }
        if y[2] < last_s - 1e-15 {
            monotone = false;
        }
        last_s = y[2];
        if d < 1e-8 {
            Control::Stop
        } else {
            Control::Continue
        }
    })?;
    Ok(Omega07 {
        delta,
        start,
        min_distance: best.0,
        at: best.1,
        s3_monotone: monotone,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BlowupReport {
    pub chart: ChartId,
    pub epsilon: f64,
    pub equilibria: Vec<ChartEquilibrium>,
    pub centre: Vec<CentreCoefficients>,
    pub pushforward_residual: f64,
    pub invariant_plane_leak: f64,
    pub landings: Vec<Landing>,
    pub omega07: Option<Omega07>,
}

/// Everything the CLI prints for one chart.
pub fn chart_report(chart: ChartId, e: &EpsilonParams, seed: u64) -> Result<BlowupReport> {
    let samples = default_samples(chart, 100, seed);
    let centre = match chart {
        ChartId::K1 => vec![centre_coefficients(CentrePoint::P1, e)?],
        ChartId::K3 => vec![
            centre_coefficients(CentrePoint::P3, e)?,
            centre_coefficients(CentrePoint::P7, e)?,
        ],
        _ => vec![],
    };
    let landings = match chart {
        ChartId::K2 => vec![heteroclinic_p1_p2(e, 1e-3)?],
        ChartId::K4 => jump_landings(e, 1e-3)?.to_vec(),
        _ => vec![],
    };
    Ok(BlowupReport {
        chart,
        epsilon: e.epsilon,
        equilibria: chart_equilibria(chart, e)?,
        centre,
        pushforward_residual: pushforward_residual(chart, &samples, e)?,
        invariant_plane_leak: invariant_plane_leak(chart, e, &samples),
        landings,
        omega07: match chart {
            ChartId::K3 => Some(omega07(e, 0.1, 1e7)?),
            _ => None,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k1_forward_example() {
        let k = chart_transform(ChartId::K1, [0.5, 1.0, 0.1], MapDirection::Forward).unwrap();
        assert_eq!(k, [0.5, 1.0, 0.2]);
    }

    #[test]
    fn k4_backward_recovers_gamma2() {
        let e = EpsilonParams::default();
        let s = 1.0 / (e.gamma * e.sigma1).sqrt();
        let k1 = to_k1(ChartId::K4, [0.3, s, 0.0]).unwrap();
        assert!((k1[1] - 1.0 / (e.gamma * e.sigma1)).abs() < 1e-14);
    }

    #[test]
    fn locus_is_reported() {
        assert!(matches!(
            chart_transform(ChartId::K1, [0.0, 1.0, 0.1], MapDirection::Forward),
            Err(Error::Locus(_))
        ));
        let e = EpsilonParams::default();
        assert!(matches!(
            pushforward_residual(ChartId::K1, &[[0.0, 1.0, 0.2]], &e),
            Err(Error::Locus(_))
        ));
    }

    #[test]
    fn pushforward_is_exact() {
        let e = EpsilonParams::default();
        for c in ChartId::ALL {
            let r = pushforward_residual(c, &default_samples(c, 100, 1), &e).unwrap();
            assert!(r < 1e-12, "{c}: {r:e}");
        }
    }
}
