//! Reference scales, hatted parameters and the ε-hierarchy of the default table.

use amo::params::{
    compute_reference_scales, extract_hierarchy, nondimensionalise, validate_asymptotics, BiophysicalParams,
    TABLE_DIMENSIONLESS,
};

fn main() -> amo::Result<()> {
    let p = BiophysicalParams::default();
    let s = compute_reference_scales(&p)?;
    println!("kappaX = {:.4} uM, kappaY = {:.4} uM, kappaTau = {:.2} ms", s.kappa_x, s.kappa_y, s.kappa_tau);

    let d = nondimensionalise(&p)?;
    for ((name, v), (_, published)) in d.fields().iter().zip(TABLE_DIMENSIONLESS) {
        println!("{name:<10} {v:>12.5e}  published {published:>9.3e}");
    }

    let e = extract_hierarchy(&d)?;
    println!("epsilon = {:.5}, alpha = {:.5}, nu = {:.5}, gamma = {:.5}", e.epsilon, e.alpha, e.nu, e.gamma);
    println!("sigma1..4 = {:.5} {:.5} {:.5} {:.5}", e.sigma1, e.sigma2, e.sigma3, e.sigma4);

    let report = validate_asymptotics(&d);
    for c in &report.checks {
        println!("{:<24} {:>12.4e} {:<8} {}", c.name, c.measured, c.bound, if c.pass { "ok" } else { "violated" });
    }
    Ok(())
}
