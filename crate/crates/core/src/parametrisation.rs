//! Parametrisation method for slow manifolds that are graphs over one
//! coordinate. Everything is evaluated pointwise on jets in ξ, so the
//! derivatives `Dφ_k` needed at later orders come for free.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::geometric_grid;
use crate::models::{EpsDecomposed, Regime2Uz, Regime3Xv, SurrogateXz};
use crate::params::EpsilonParams;
use crate::slowfast::CONTACT_REL_TOL;
use crate::taylor::{Real, Taylor};

/// Highest order the solver will go to.
pub const MAX_ORDER: usize = 5;
/// Residual bound on each order's linear solve.
pub const RESIDUAL_TOL: f64 = 1e-10;
pub const DEFAULT_GRID_POINTS: usize = 41;

const XI_LEN: usize = 8;
const DELTA_LEN: usize = MAX_ORDER + 1;

/// Jet in the manifold coordinate.
pub type XiJet = Taylor<f64, XI_LEN>;
type Series = Taylor<XiJet, DELTA_LEN>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum LeftInverse {
    /// Read off the base-coordinate component.
    #[default]
    GraphPreserving,
    MoorePenrose,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RightInverse {
    /// `N₀ (Df₀N₀)⁻¹`.
    FiberAligned,
    /// Correct only the coordinate normal to the graph.
    GraphPreserving,
    /// `Df₀ᵀ / |Df₀|²`.
    Orthogonal,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Assembly {
    /// Read ε-coefficients from a power series evaluation of the field.
    Exact,
    /// Interpolate the field on Chebyshev nodes in δ ∈ [−step, step].
    FiniteDifference { step: f64, nodes: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ManifoldId {
    Gamma2,
    Gamma5,
    Gamma4,
}

impl ManifoldId {
    pub const ALL: [ManifoldId; 3] = [ManifoldId::Gamma2, ManifoldId::Gamma5, ManifoldId::Gamma4];

    pub fn as_str(self) -> &'static str {
        match self {
            ManifoldId::Gamma2 => "gamma2",
            ManifoldId::Gamma5 => "gamma5",
            ManifoldId::Gamma4 => "gamma4",
        }
    }

    /// The zoomed system the manifold belongs to.
    pub fn model_id(self) -> &'static str {
        match self {
            ManifoldId::Gamma2 => "surrogate-xz",
            ManifoldId::Gamma5 => "regime2-uz",
            ManifoldId::Gamma4 => "regime3-xv",
        }
    }
}

impl std::str::FromStr for ManifoldId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ManifoldId::ALL
            .iter()
            .copied()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::UnknownId {
                kind: "manifold",
                id: s.into(),
                valid: ManifoldId::ALL.iter().map(|m| m.as_str()).collect::<Vec<_>>().join(", "),
            })
    }
}

/// A critical manifold written as the image of `φ₀(ξ)`.
pub trait Embedding: Sync {
    fn name(&self) -> &'static str;
    fn coordinate(&self) -> &'static str;
    /// Index of the state component equal to ξ.
    fn base_index(&self) -> usize;
    fn range(&self) -> (f64, f64);
    fn phi0<T: Real>(&self, xi: T) -> [T; 2];
}

/// `Γ₂`: the top branch `Z = 1/(γσ₁)` of the surrogate, a graph over X.
#[derive(Clone, Copy, Debug)]
pub struct Gamma2 {
    pub e: EpsilonParams,
}

impl Embedding for Gamma2 {
    fn name(&self) -> &'static str {
        "gamma2"
    }
    fn coordinate(&self) -> &'static str {
        "X"
    }
    fn base_index(&self) -> usize {
        0
    }
    fn range(&self) -> (f64, f64) {
        (0.05, 1.0)
    }
    fn phi0<T: Real>(&self, xi: T) -> [T; 2] {
        [xi, T::cst(1.0 / (self.e.gamma * self.e.sigma1))]
    }
}

/// `Γ₅`: the U-axis of the U–Z system.
#[derive(Clone, Copy, Debug)]
pub struct Gamma5;

impl Embedding for Gamma5 {
    fn name(&self) -> &'static str {
        "gamma5"
    }
    fn coordinate(&self) -> &'static str {
        "U"
    }
    fn base_index(&self) -> usize {
        0
    }
    fn range(&self) -> (f64, f64) {
        (0.1, 2.0)
    }
    fn phi0<T: Real>(&self, xi: T) -> [T; 2] {
        [xi, T::cst(0.0)]
    }
}

/// `Γ₄`: the folded manifold of the X–V system, a graph over V.
#[derive(Clone, Copy, Debug)]
pub struct Gamma4 {
    pub e: EpsilonParams,
}

impl Embedding for Gamma4 {
    fn name(&self) -> &'static str {
        "gamma4"
    }
    fn coordinate(&self) -> &'static str {
        "V"
    }
    fn base_index(&self) -> usize {
        1
    }
    fn range(&self) -> (f64, f64) {
        (0.1, 3.0)
    }
    fn phi0<T: Real>(&self, xi: T) -> [T; 2] {
        [Regime3Xv::new(self.e).gamma4_x(xi), xi]
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Choices {
    pub left: LeftInverse,
    pub right: RightInverse,
    pub assembly: Assembly,
}

impl Choices {
    pub fn new(right: RightInverse) -> Self {
        Self {
            left: LeftInverse::GraphPreserving,
            right,
            assembly: Assembly::Exact,
        }
    }
}

impl Default for Choices {
    fn default() -> Self {
        Self::new(RightInverse::FiberAligned)
    }
}

/// Manifold paired with its inverse choices.
#[derive(Clone, Copy, Debug)]
pub struct GraphManifold<G> {
    pub embedding: G,
    pub choices: Choices,
}

impl<G: Embedding> GraphManifold<G> {
    pub fn new(embedding: G, choices: Choices) -> Self {
        Self { embedding, choices }
    }

    /// Geometric grid over the manifold's range.
    pub fn default_grid(&self) -> Vec<f64> {
        let (a, b) = self.embedding.range();
        geometric_grid(a, b, DEFAULT_GRID_POINTS)
    }

    /// Fails where `Dφ₀` vanishes.
    pub fn check_immersion(&self, grid: &[f64]) -> Result<()> {
        for &xi in grid {
            let p = self.embedding.phi0(XiJet::variable(xi));
            let d = [p[0].0[1], p[1].0[1]];
            if d[0] == 0.0 && d[1] == 0.0 || !d[0].is_finite() || !d[1].is_finite() {
                return Err(Error::Geometry(format!(
                    "{} is not immersed at {} = {xi}",
                    self.embedding.name(),
                    self.embedding.coordinate()
                )));
            }
        }
        Ok(())
    }
}

/// All orders 1..=J at a single ξ, kept as jets.
#[derive(Clone, Debug)]
pub struct PointSolution {
    pub xi: f64,
    pub phi0: [XiJet; 2],
    /// `r[k]` and `phi[k]` hold order k; index 0 is the zeroth order.
    pub r: Vec<XiJet>,
    pub phi: Vec<[XiJet; 2]>,
    pub residuals: Vec<f64>,
}

impl PointSolution {
    /// Truncated embedding and its ξ-derivative at δ.
    pub fn embedding_at(&self, delta: f64) -> ([f64; 2], [f64; 2]) {
        let mut p = [0.0; 2];
        let mut d = [0.0; 2];
        for (k, phi) in self.phi.iter().enumerate() {
            let w = delta.powi(k as i32);
            for i in 0..2 {
                p[i] += w * phi[i].0[0];
                d[i] += w * phi[i].0[1];
            }
        }
        (p, d)
    }

    /// Truncated reduced field at δ.
    pub fn reduced_at(&self, delta: f64) -> f64 {
        self.r.iter().enumerate().map(|(k, r)| delta.powi(k as i32) * r.0[0]).sum()
    }

    pub fn order(&self) -> usize {
        self.r.len() - 1
    }
}

fn dot(a: [XiJet; 2], b: [XiJet; 2]) -> XiJet {
    a[0] * b[0] + a[1] * b[1]
}

fn lift(s: [XiJet; 2]) -> [Series; 2] {
    [Series::constant(s[0]), Series::constant(s[1])]
}

/// ε-coefficient `[F(φ₀ + … + δ^{j−1}φ_{j−1})]_j` for j = `order`.
fn assemble<M: EpsDecomposed>(m: &M, phi: &[[XiJet; 2]], order: usize, assembly: Assembly) -> Result<[XiJet; 2]> {
    match assembly {
        Assembly::Exact => {
            let delta = Series::variable(XiJet::cst(0.0));
            let mut s = lift(phi[0]);
            let mut w = Series::cst(1.0);
            for p in phi.iter().skip(1) {
                w = w * delta;
                s[0] = s[0] + w * Series::constant(p[0]);
                s[1] = s[1] + w * Series::constant(p[1]);
            }
            let f = m.full(s, delta);
            Ok([f[0].0[order], f[1].0[order]])
        }
        Assembly::FiniteDifference { step, nodes } => {
            if nodes <= order || !(step > 0.0) {
                return Err(Error::Usage(format!(
                    "finite-difference assembly needs step > 0 and more than {order} nodes"
                )));
            }
            // Chebyshev extreme points in t = δ/step, then a Vandermonde solve per jet coefficient.
            let n = nodes;
            let ts: Vec<f64> = (0..n).map(|i| (std::f64::consts::PI * i as f64 / (n - 1) as f64).cos()).collect();
            let vander = nalgebra::DMatrix::from_fn(n, n, |i, k| ts[i].powi(k as i32));
            let lu = vander.lu();
            let mut samples: Vec<[XiJet; 2]> = Vec::with_capacity(n);
            for &t in &ts {
                let d = t * step;
                let mut s = phi[0];
                for (k, p) in phi.iter().enumerate().skip(1) {
                    let w = d.powi(k as i32);
                    s[0] = s[0] + p[0].scale(w);
                    s[1] = s[1] + p[1].scale(w);
                }
                samples.push(m.full(s, XiJet::cst(d)));
            }
            let mut out = [XiJet::cst(0.0); 2];
            for comp in 0..2 {
                for c in 0..XI_LEN {
                    let rhs = nalgebra::DVector::from_iterator(n, samples.iter().map(|v| v[comp].0[c]));
                    let coeffs = lu
                        .solve(&rhs)
                        .ok_or_else(|| Error::Usage("singular interpolation nodes".into()))?;
                    out[comp].0[c] = coeffs[order] / step.powi(order as i32);
                }
            }
            Ok(out)
        }
    }
}

/// Solve orders 1..=`max_order` at one point of the manifold.
pub fn solve_point<M: EpsDecomposed, G: Embedding>(
    m: &M,
    g: &GraphManifold<G>,
    xi: f64,
    max_order: usize,
) -> Result<PointSolution> {
    if max_order == 0 || max_order > MAX_ORDER {
        return Err(Error::Usage(format!("order must be in 1..={MAX_ORDER}, got {max_order}")));
    }
    let emb = &g.embedding;
    let phi0 = emb.phi0(XiJet::variable(xi));
    let f0 = m.f0(phi0).value();
    if f0.abs() > 1e-10 {
        return Err(Error::Geometry(format!(
            "{} is not critical for {} at {} = {xi} (f0 = {f0:e})",
            emb.name(),
            m.id(),
            emb.coordinate()
        )));
    }
    let dphi0 = [phi0[0].derivative(), phi0[1].derivative()];
    let df = m.df0(phi0);
    let n0 = m.n0(phi0);
    let lambda = dot(df, n0);
    let scale = df[0].value().hypot(df[1].value()) * n0[0].value().hypot(n0[1].value());
    if lambda.value().abs() <= CONTACT_REL_TOL * scale {
        return Err(Error::Contact(format!(
            "Df0 N0 = {:e} vanishes on {} at {} = {xi}",
            lambda.value(),
            emb.name(),
            emb.coordinate()
        )));
    }

    let normal = 1 - emb.base_index();
    let mut r = vec![XiJet::cst(0.0)];
    let mut phi = vec![phi0];
    let mut dphi = vec![dphi0];
    let mut residuals = Vec::with_capacity(max_order);

    for j in 1..=max_order {
        let fj = assemble(m, &phi, j, g.choices.assembly)?;
        let mut gj = fj;
        for k in 1..j {
            gj[0] = gj[0] - dphi[k][0] * r[j - k];
            gj[1] = gj[1] - dphi[k][1] * r[j - k];
        }
        let dfg = dot(df, gj);
        let coef = dfg / lambda;
        let pis = [gj[0] - n0[0] * coef, gj[1] - n0[1] * coef];
        let rj = match g.choices.left {
            LeftInverse::GraphPreserving => pis[emb.base_index()] / dphi0[emb.base_index()],
            LeftInverse::MoorePenrose => dot(dphi0, pis) / dot(dphi0, dphi0),
        };
        // Df₀ φ_j = −(Df₀N₀)⁻¹ Df₀ G_j
        let target = -coef;
        let phij = match g.choices.right {
            RightInverse::FiberAligned => {
                let w = target / lambda;
                [n0[0] * w, n0[1] * w]
            }
            RightInverse::GraphPreserving => {
                let mut v = [XiJet::cst(0.0); 2];
                v[normal] = target / df[normal];
                v
            }
            RightInverse::Orthogonal => {
                let w = target / dot(df, df);
                [df[0] * w, df[1] * w]
            }
        };
        let nd = dot(df, phij);
        let res = [
            dphi0[0] * rj - n0[0] * nd - gj[0],
            dphi0[1] * rj - n0[1] * nd - gj[1],
        ];
        let gscale = 1.0 + gj[0].value().abs().max(gj[1].value().abs());
        residuals.push(res[0].value().abs().max(res[1].value().abs()) / gscale);
        r.push(rj);
        dphi.push([phij[0].derivative(), phij[1].derivative()]);
        phi.push(phij);
    }
    Ok(PointSolution {
        xi,
        phi0,
        r,
        phi,
        residuals,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderSolution {
    pub manifold: String,
    pub order: usize,
    pub grid: Vec<f64>,
    pub r: Vec<f64>,
    pub phi: Vec<[f64; 2]>,
    pub residual: Vec<f64>,
}

impl OrderSolution {
    pub fn max_residual(&self) -> f64 {
        self.residual.iter().fold(0.0, |a, &b| a.max(b))
    }
}

/// Orders 1..=`max_order` on a grid; points are solved in parallel.
pub fn solve_orders<M: EpsDecomposed, G: Embedding>(
    m: &M,
    g: &GraphManifold<G>,
    max_order: usize,
    grid: &[f64],
) -> Result<Vec<OrderSolution>> {
    g.check_immersion(grid)?;
    let points: Vec<PointSolution> = grid
        .par_iter()
        .map(|&xi| solve_point(m, g, xi, max_order))
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(max_order);
    for j in 1..=max_order {
        let sol = OrderSolution {
            manifold: g.embedding.name().into(),
            order: j,
            grid: grid.to_vec(),
            r: points.iter().map(|p| p.r[j].0[0]).collect(),
            phi: points.iter().map(|p| [p.phi[j][0].0[0], p.phi[j][1].0[0]]).collect(),
            residual: points.iter().map(|p| p.residuals[j - 1]).collect(),
        };
        if sol.max_residual() > RESIDUAL_TOL {
            return Err(Error::Inconsistency(format!(
                "order {j} conjugacy residual {:e} on {}",
                sol.max_residual(),
                g.embedding.name()
            )));
        }
        out.push(sol);
    }
    Ok(out)
}

pub fn solve_order<M: EpsDecomposed, G: Embedding>(
    m: &M,
    g: &GraphManifold<G>,
    j: usize,
    grid: &[f64],
) -> Result<OrderSolution> {
    Ok(solve_orders(m, g, j, grid)?.pop().expect("j >= 1"))
}

/// Sup over the grid of `|Dφ r − F(φ, δ)|` for the truncated expansions.
pub fn conjugacy_residual<M: EpsDecomposed, G: Embedding>(
    m: &M,
    g: &GraphManifold<G>,
    order: usize,
    grid: &[f64],
    delta: f64,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &xi in grid {
        let p = solve_point(m, g, xi, order)?;
        let (x, dx) = p.embedding_at(delta);
        let r = p.reduced_at(delta);
        let f = m.full(x, delta);
        let res = (dx[0] * r - f[0]).abs().max((dx[1] * r - f[1]).abs());
        worst = worst.max(res);
    }
    Ok(worst)
}

/// Point-set distance between two truncated manifolds at δ: for each grid
/// point of the first, the nearest point of the second found by Gauss–Newton.
pub fn manifold_distance<M: EpsDecomposed, G: Embedding>(
    m: &M,
    a: &GraphManifold<G>,
    b: &GraphManifold<G>,
    order: usize,
    grid: &[f64],
    delta: f64,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &xi in grid {
        let (p, _) = solve_point(m, a, xi, order)?.embedding_at(delta);
        let mut s = xi;
        let mut dist = f64::INFINITY;
        for _ in 0..30 {
            let (q, dq) = solve_point(m, b, s, order)?.embedding_at(delta);
            let diff = [q[0] - p[0], q[1] - p[1]];
            dist = diff[0].hypot(diff[1]);
            let step = (diff[0] * dq[0] + diff[1] * dq[1]) / (dq[0] * dq[0] + dq[1] * dq[1]);
            s -= step;
            if step.abs() <= 1e-15 * (1.0 + s.abs()) {
                break;
            }
        }
        worst = worst.max(dist);
    }
    Ok(worst)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedForm {
    R2Gamma5,
    Phi2Gamma4,
    R3Gamma4,
}

impl ClosedForm {
    pub const ALL: [ClosedForm; 3] = [ClosedForm::R2Gamma5, ClosedForm::Phi2Gamma4, ClosedForm::R3Gamma4];

    pub fn as_str(self) -> &'static str {
        match self {
            ClosedForm::R2Gamma5 => "r2_gamma5",
            ClosedForm::Phi2Gamma4 => "phi2_gamma4",
            ClosedForm::R3Gamma4 => "r3_gamma4",
        }
    }
}

fn q4(xi: f64, e: &EpsilonParams) -> f64 {
    xi * xi - e.gamma * e.sigma2 * xi + 1.0
}

fn check_xi(xi: f64, which: ClosedForm) -> Result<()> {
    if !xi.is_finite() || xi < 0.0 {
        return Err(Error::domain("xi", xi, format!("{} needs xi >= 0", which.as_str())));
    }
    if which == ClosedForm::R3Gamma4 && (xi - 1.0).abs() < 1e-12 {
        return Err(Error::Pole("r3 blows up at the fold xi = 1".into()));
    }
    Ok(())
}

/// The published closed forms (`σ₄ = 1`). For φ₂ this is the X-component.
pub fn closed_form_reduced(which: ClosedForm, xi: f64, e: &EpsilonParams) -> Result<f64> {
    check_xi(xi, which)?;
    let (al, g, s1) = (e.alpha, e.gamma, e.sigma1);
    let q = q4(xi, e);
    Ok(match which {
        ClosedForm::R2Gamma5 => 2.0 * al * xi * xi / g,
        ClosedForm::Phi2Gamma4 => {
            if xi == 0.0 {
                0.0
            } else {
                g * s1 * xi.powi(4) / (2.0 * xi * q.powi(3)).sqrt()
            }
        }
        ClosedForm::R3Gamma4 => 8.0 * al * (1.0 + xi * xi) / (1.0 - xi * xi) * (xi.powi(3) / (g.powi(3) * q)).sqrt(),
    })
}

/// The same three quantities as produced by the solver's default choices,
/// written in closed form for general σ₄.
pub fn derived_closed_form(which: ClosedForm, xi: f64, e: &EpsilonParams) -> Result<f64> {
    check_xi(xi, which)?;
    let (al, g, s1, s2, s4) = (e.alpha, e.gamma, e.sigma1, e.sigma2, e.sigma4);
    let q = q4(xi, e);
    let x = (g * s4 * xi / q).sqrt();
    Ok(match which {
        ClosedForm::R2Gamma5 => 2.0 * al * xi * xi / g,
        ClosedForm::Phi2Gamma4 => g * s1 * x * xi.powi(3) / (2.0 * q),
        ClosedForm::R3Gamma4 => {
            // V̇ = −2α ξ (σ₂X² + σ₄) ∂_X f₀ / ∂_V f₀ along Γ₄.
            let fx = 2.0 * x * q;
            let fv = x * x * (2.0 * xi - g * s2) - g * s4;
            -2.0 * al * xi * (s2 * x * x + s4) * fx / fv
        }
    })
}

/// Model for a manifold id at the given parameters.
pub enum ManifoldModel {
    Gamma2(SurrogateXz, GraphManifold<Gamma2>),
    Gamma5(Regime2Uz, GraphManifold<Gamma5>),
    Gamma4(Regime3Xv, GraphManifold<Gamma4>),
}

impl ManifoldModel {
    pub fn new(id: ManifoldId, e: EpsilonParams, right: Option<RightInverse>) -> Self {
        let choices = |default| Choices::new(right.unwrap_or(default));
        match id {
            ManifoldId::Gamma2 => ManifoldModel::Gamma2(
                SurrogateXz::new(e),
                GraphManifold::new(Gamma2 { e }, choices(RightInverse::FiberAligned)),
            ),
            ManifoldId::Gamma5 => ManifoldModel::Gamma5(
                Regime2Uz::new(e),
                GraphManifold::new(Gamma5, choices(RightInverse::FiberAligned)),
            ),
            ManifoldId::Gamma4 => ManifoldModel::Gamma4(
                Regime3Xv::new(e),
                GraphManifold::new(Gamma4 { e }, choices(RightInverse::GraphPreserving)),
            ),
        }
    }

    pub fn default_grid(&self) -> Vec<f64> {
        match self {
            ManifoldModel::Gamma2(_, g) => g.default_grid(),
            ManifoldModel::Gamma5(_, g) => g.default_grid(),
            ManifoldModel::Gamma4(_, g) => g
                .default_grid()
                .into_iter()
                .filter(|xi| (xi - 1.0).abs() > 0.1)
                .collect(),
        }
    }

    pub fn solve_orders(&self, max_order: usize, grid: &[f64]) -> Result<Vec<OrderSolution>> {
        match self {
            ManifoldModel::Gamma2(m, g) => solve_orders(m, g, max_order, grid),
            ManifoldModel::Gamma5(m, g) => solve_orders(m, g, max_order, grid),
            ManifoldModel::Gamma4(m, g) => solve_orders(m, g, max_order, grid),
        }
    }

    pub fn conjugacy_residual(&self, order: usize, grid: &[f64], delta: f64) -> Result<f64> {
        match self {
            ManifoldModel::Gamma2(m, g) => conjugacy_residual(m, g, order, grid, delta),
            ManifoldModel::Gamma5(m, g) => conjugacy_residual(m, g, order, grid, delta),
            ManifoldModel::Gamma4(m, g) => conjugacy_residual(m, g, order, grid, delta),
        }
    }

    pub fn coordinate(&self) -> &'static str {
        match self {
            ManifoldModel::Gamma2(_, g) => g.embedding.coordinate(),
            ManifoldModel::Gamma5(_, g) => g.embedding.coordinate(),
            ManifoldModel::Gamma4(_, g) => g.embedding.coordinate(),
        }
    }

    pub fn labels(&self) -> [&'static str; 2] {
        match self {
            ManifoldModel::Gamma2(m, _) => m.labels(),
            ManifoldModel::Gamma5(m, _) => m.labels(),
            ManifoldModel::Gamma4(m, _) => m.labels(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma5_first_two_orders() {
        let e = EpsilonParams::default();
        let mm = ManifoldModel::new(ManifoldId::Gamma5, e, None);
        let sols = mm.solve_orders(2, &[0.5, 1.0, 2.0]).unwrap();
        for k in 0..3 {
            assert!(sols[0].r[k].abs() < 1e-15);
            assert!(sols[0].phi[k][0].abs() < 1e-15 && sols[0].phi[k][1].abs() < 1e-15);
            let xi = sols[1].grid[k];
            let expect = 2.0 * e.alpha * xi * xi / e.gamma;
            assert!((sols[1].r[k] - expect).abs() < 1e-12 * expect, "{} vs {expect}", sols[1].r[k]);
        }
    }

    #[test]
    fn exact_and_interpolated_assembly_agree() {
        let e = EpsilonParams::default();
        let m = Regime3Xv::new(e);
        let exact = GraphManifold::new(Gamma4 { e }, Choices::new(RightInverse::GraphPreserving));
        let mut fd = exact;
        fd.choices.assembly = Assembly::FiniteDifference { step: 0.5, nodes: 17 };
        let a = solve_point(&m, &exact, 0.6, 3).unwrap();
        let b = solve_point(&m, &fd, 0.6, 3).unwrap();
        for j in 1..=3 {
            assert!((a.r[j].0[0] - b.r[j].0[0]).abs() < 1e-8 * (1.0 + a.r[j].0[0].abs()), "order {j}");
            assert!((a.phi[j][0].0[0] - b.phi[j][0].0[0]).abs() < 1e-8 * (1.0 + a.phi[j][0].0[0].abs()));
        }
    }

    #[test]
    fn closed_form_limits_and_signs() {
        let e = EpsilonParams::default();
        assert_eq!(closed_form_reduced(ClosedForm::R2Gamma5, 0.0, &e).unwrap(), 0.0);
        assert!(closed_form_reduced(ClosedForm::R3Gamma4, 0.5, &e).unwrap() > 0.0);
        assert!(closed_form_reduced(ClosedForm::R3Gamma4, 2.0, &e).unwrap() < 0.0);
        assert!(matches!(closed_form_reduced(ClosedForm::R3Gamma4, 1.0, &e), Err(Error::Pole(_))));
        assert!(closed_form_reduced(ClosedForm::Phi2Gamma4, 1e-6, &e).unwrap() < 1e-19);
    }
}
