//! Default sections, surrogate cycles and parallel ε-sweeps.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cycle::{find_limit_cycle, CycleOptions, Direction, LimitCycle, Section};
use super::hausdorff::{hausdorff_distance, rectangle};
use super::segments::{segment_speeds, SegmentConfig, SegmentTable};
use crate::error::{Error, Result};
use crate::geometry::{equilibrium_xy, fold_limit_x, fold_points};
use crate::models::{build_model, ModelContext, ModelId, SurrogateXz};
use crate::params::{compute_reference_scales, EpsilonParams};

/// Surrogate section abscissa: midway between the equilibrium and the lower fold.
pub fn surrogate_section(e: &EpsilonParams) -> Result<Section> {
    let d = e.to_dimensionless();
    let xe = equilibrium_xy(&d)?.location[0];
    let xf = fold_points(&d)?.x_f1;
    Ok(Section::new(0, 0.5 * (xe + xf), Direction::Increasing))
}

/// Section and starting state used when none is given.
pub fn default_section_and_start(id: ModelId, ctx: &ModelContext) -> Result<(Section, Vec<f64>)> {
    match id {
        ModelId::BiophysicalXy | ModelId::Fullflux => {
            let sc = compute_reference_scales(&ctx.biophysical)?;
            let eq = equilibrium_xy(&ctx.dimensionless)?;
            Ok((Section::new(1, eq.location[1] * sc.kappa_y, Direction::Increasing), vec![150.0, 5.0]))
        }
        ModelId::DimensionlessXy | ModelId::PerturbedXy => {
            let d = if id == ModelId::PerturbedXy { ctx.eps.to_dimensionless() } else { ctx.dimensionless };
            let eq = equilibrium_xy(&d)?.location;
            Ok((Section::new(1, eq[1], Direction::Increasing), vec![1.2 * eq[0], eq[1]]))
        }
        ModelId::SurrogateXz => {
            let s = surrogate_section(&ctx.eps)?;
            Ok((s, vec![s.value, 1.0 / (ctx.eps.gamma * ctx.eps.sigma1)]))
        }
        other => Err(Error::Usage(format!("no default Poincaré section for {other}; cycles are defined for the X–Y and X–Z models"))),
    }
}

/// Limit cycle of a registry model from its default section and start.
pub fn model_cycle(id: ModelId, ctx: &ModelContext, opts: &CycleOptions) -> Result<LimitCycle> {
    let (section, y0) = default_section_and_start(id, ctx)?;
    let model = build_model(id, ctx)?;
    let eps = if id.is_dimensional() || id == ModelId::DimensionlessXy { None } else { Some(ctx.eps.epsilon) };
    find_limit_cycle(model.as_ref(), &y0, section, opts, eps)
}

pub fn surrogate_cycle(e: &EpsilonParams, opts: &CycleOptions) -> Result<LimitCycle> {
    let s = surrogate_section(e)?;
    let m = SurrogateXz::new(*e);
    find_limit_cycle(&m, &[s.value, 1.0 / (e.gamma * e.sigma1)], s, opts, Some(e.epsilon))
}

/// Singular rectangle: X from 0 to the limiting fold abscissa, Z from 0 to `1/(γσ₁)`.
pub fn singular_rectangle(e: &EpsilonParams) -> Vec<[f64; 2]> {
    rectangle(fold_limit_x(e), 1.0 / (e.gamma * e.sigma1))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub period: f64,
    pub hausdorff: f64,
    pub convergence: f64,
    pub steps: usize,
    pub orientation: f64,
    pub segments: SegmentTable,
}

fn sweep_one(base: &EpsilonParams, eps: f64, opts: &CycleOptions, seg: &SegmentConfig) -> Result<SweepRow> {
    let e = base.with_epsilon(eps);
    e.validate()?;
    let c = surrogate_cycle(&e, opts)?;
    Ok(SweepRow {
        epsilon: eps,
        period: c.period,
        hausdorff: hausdorff_distance(&c.polyline(0, 1), &singular_rectangle(&e)),
        convergence: c.convergence,
        steps: c.stats.steps,
        orientation: c.signed_area(0, 1),
        segments: segment_speeds(&c, &e, seg),
    })
}

/// Surrogate cycles over `eps`, run concurrently, returned in input order.
pub fn sweep_surrogate(
    base: &EpsilonParams,
    eps: &[f64],
    opts: &CycleOptions,
    seg: &SegmentConfig,
    jobs: Option<usize>,
) -> Result<Vec<SweepRow>> {
    let run = || eps.par_iter().map(|&x| sweep_one(base, x, opts, seg)).collect::<Result<Vec<_>>>();
    match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|err| Error::Usage(format!("thread pool: {err}")))?
            .install(run),
        None => run(),
    }
}

pub fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

pub fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] > w[0])
}
