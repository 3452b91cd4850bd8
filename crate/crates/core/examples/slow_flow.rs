//! Tangent/fibre splitting, the reduced vector field and the regular jump test.

use amo::models::{EpsDecomposed, Regime3Xv, SurrogateXz};
use amo::params::EpsilonParams;
use amo::slowfast::{bundle_split, reduced_field, regular_jump_test};

fn main() -> amo::Result<()> {
    let e = EpsilonParams::default();
    let top = 1.0 / (e.gamma * e.sigma1);
    let m = SurrogateXz::new(e);
    for x in [0.1, 0.3, 0.6] {
        let r = reduced_field(&m, [x, top])?;
        println!("Gamma2 X = {x}: reduced field {:?}, fibre eigenvalue {:.4}", r.vector, r.eigenvalue);
    }
    let split = bundle_split(&m, [0.3, top])?;
    println!("tangent {:?}, fibre {:?}", split.tangent, split.fiber);

    let m3 = Regime3Xv::new(e);
    let p4 = m3.p4();
    println!("f0 at p4 = {:?}", m3.f0(p4));
    let jt = regular_jump_test(&m3, p4, None)?;
    println!("p4 jump test: regular = {}, power {:?}, direction {:?}", jt.regular, jt.power, jt.direction);
    Ok(())
}
