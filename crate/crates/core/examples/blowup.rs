//! Chart equilibria, centre-manifold coefficients and connections.

use amo::blowup::{centre_coefficients, chart_equilibria, heteroclinic_p1_p2, jump_landings, omega07, CentrePoint};
use amo::models::ChartId;
use amo::params::EpsilonParams;

fn main() -> amo::Result<()> {
    let e = EpsilonParams::default();
    for chart in ChartId::ALL {
        for q in chart_equilibria(chart, &e)? {
            let ev: Vec<f64> = q.eigenvalues.iter().map(|l| l[0]).collect();
            println!("{chart} {}: {:?} -> {:?}", q.label, q.coords, ev);
        }
    }
    for p in [CentrePoint::P1, CentrePoint::P7] {
        for f in centre_coefficients(p, &e)?.fits {
            println!("{p:?} {}: {:.5} vs {:.5}", f.name, f.fitted_coefficient, f.coefficient);
        }
    }
    let p2 = heteroclinic_p1_p2(&e, 1e-3)?;
    println!("p2 landing {:?}", p2.point);
    for l in jump_landings(&e, 1e-3)? {
        println!("{} landing {:?}", l.label, l.point);
    }
    let o = omega07(&e, 0.1, 1e7)?;
    println!("omega07 closest approach to p0: {:.2e}", o.min_distance);
    Ok(())
}
