//! Limit cycles of the dimensional model and of the X–Z surrogate.

use amo::dynamics::cycle::CycleOptions;
use amo::dynamics::{model_cycle, singular_rectangle, surrogate_cycle, hausdorff_distance};
use amo::models::{ModelContext, ModelId};

fn main() -> amo::Result<()> {
    let opts = CycleOptions::default();
    let ctx = ModelContext::default();
    let c = model_cycle(ModelId::BiophysicalXy, &ctx, &opts)?;
    println!("biophysical period {:.4e} ms after {} returns", c.period, c.returns);

    for eps in [0.3, 0.2241, 0.15] {
        let e = ctx.eps.with_epsilon(eps);
        let s = surrogate_cycle(&e, &opts)?;
        let h = hausdorff_distance(&s.polyline(0, 1), &singular_rectangle(&e));
        println!("eps = {eps}: surrogate period {:.4e}, distance to singular cycle {h:.4}", s.period);
    }
    Ok(())
}
