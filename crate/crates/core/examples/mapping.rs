//! Surrogate cycle mapped back to X–Y, compared with the direct X–Y cycle.

use amo::dynamics::cycle::{return_map_contraction, CycleOptions};
use amo::dynamics::{hausdorff_distance, map_cycle_xz_to_xy, model_cycle, surrogate_cycle};
use amo::models::{build_model, ModelContext, ModelId};

fn main() -> amo::Result<()> {
    let ctx = ModelContext::at_epsilon(0.2241);
    let opts = CycleOptions::default();
    let mapped = map_cycle_xz_to_xy(&surrogate_cycle(&ctx.eps, &opts)?, &ctx.eps);
    let direct = model_cycle(ModelId::PerturbedXy, &ctx, &opts)?;
    println!("period mapped {:.6e}, direct {:.6e}", mapped.period, direct.period);
    println!("phase-path distance {:.3e}", hausdorff_distance(&mapped.polyline(0, 1), &direct.polyline(0, 1)));

    let f = build_model(ModelId::PerturbedXy, &ctx)?;
    let c = return_map_contraction(f.as_ref(), &direct, 0, 1e-3 * direct.section_point[0], &opts.tol)?;
    println!("return-map contraction factor {:.3e}", c.factor);
    Ok(())
}
