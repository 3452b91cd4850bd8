//! Equilibrium, fold points and critical manifolds at the default parameters.

use amo::geometry::{
    equilibrium_closed_form, equilibrium_xy, fold_limit_x, fold_points, regime2_layer_objects, regime3_manifold,
};
use amo::params::EpsilonParams;

fn main() -> amo::Result<()> {
    let e = EpsilonParams::default();
    let d = e.to_dimensionless();

    let eq = equilibrium_xy(&d)?;
    println!("equilibrium {:?} ({:?})", eq.location, eq.classification);
    println!("closed form {:?}", equilibrium_closed_form(&d));

    let f = fold_points(&d)?;
    println!("lower fold X = {:.6}, Y = {:.6e}; limit X = {:.6}", f.x_f1, f.y_f1, fold_limit_x(&e));
    println!("upper fold X = {:.6}, Y = {:.6e}", f.x_f2, f.y_f2);

    let r2 = regime2_layer_objects(&e)?;
    println!("regime 2 node p0 at {:?}, trace {:.4}", r2.p0.location, r2.p0.trace);
    let r3 = regime3_manifold(&e)?;
    println!("regime 3 fold p4 at {:?}", r3.p4);
    for (v, lam) in r3.gamma4a.grid.iter().zip(&r3.gamma4a.eigenvalues).step_by(10) {
        println!("  Gamma4a V = {v:.4}: eigenvalue {lam:.5}");
    }
    Ok(())
}
