//! Slow-manifold parametrisation on Gamma4 to third order.

use amo::parametrisation::{closed_form_reduced, derived_closed_form, ClosedForm, ManifoldId, ManifoldModel};
use amo::params::EpsilonParams;

fn main() -> amo::Result<()> {
    let e = EpsilonParams::default();
    let mm = ManifoldModel::new(ManifoldId::Gamma4, e, None);
    let grid = [0.2, 0.5, 0.8, 1.5, 2.5];
    let sols = mm.solve_orders(3, &grid)?;
    for (k, xi) in grid.iter().enumerate() {
        let r3 = sols[2].r[k];
        println!(
            "V = {xi}: r1 {:+.5e} r2 {:+.5e} r3 {:+.5e} (closed form {:+.5e}, printed {:+.5e})",
            sols[0].r[k],
            sols[1].r[k],
            r3,
            derived_closed_form(ClosedForm::R3Gamma4, *xi, &e)?,
            closed_form_reduced(ClosedForm::R3Gamma4, *xi, &e)?
        );
    }
    for j in 1..=3 {
        let a = mm.conjugacy_residual(j, &grid, 2e-3)?;
        let b = mm.conjugacy_residual(j, &grid, 1e-3)?;
        println!("order {j}: residual {a:.3e} -> {b:.3e}, log2 ratio {:.3}", (a / b).log2());
    }
    Ok(())
}
