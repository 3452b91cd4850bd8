//! ε-sweep of surrogate cycles with segment speed exponents.

use amo::dynamics::cycle::CycleOptions;
use amo::dynamics::{fit_exponents, sweep_surrogate, SegmentConfig};
use amo::params::EpsilonParams;

fn main() -> amo::Result<()> {
    let eps = [0.2, 0.15, 0.1];
    let rows = sweep_surrogate(&EpsilonParams::default(), &eps, &CycleOptions::default(), &SegmentConfig::default(), None)?;
    for r in &rows {
        println!("eps = {:<5} period {:.4e}  hausdorff {:.4}", r.epsilon, r.period, r.hausdorff);
    }
    let tables: Vec<_> = rows.into_iter().map(|r| r.segments).collect();
    for f in fit_exponents(&tables) {
        println!("{:<8} slope {:?}", f.label, f.slope);
    }
    Ok(())
}
