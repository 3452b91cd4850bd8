use amo::parametrisation::{
    manifold_distance, Choices, Gamma4, GraphManifold, ManifoldId, ManifoldModel, RightInverse,
};
use amo::models::Regime3Xv;
use amo::params::EpsilonParams;

#[test]
fn residual_scaling_band_on_every_manifold() {
    let e = EpsilonParams::default();
    for id in ManifoldId::ALL {
        let mm = ManifoldModel::new(id, e, None);
        let grid = mm.default_grid();
        for j in 1..=3 {
            let a = mm.conjugacy_residual(j, &grid, 2e-3).unwrap();
            let b = mm.conjugacy_residual(j, &grid, 1e-3).unwrap();
            let k = (a / b).log2();
            let jf = j as f64;
            assert!(k >= jf + 0.5 && k <= jf + 1.5, "{} order {j}: log2 ratio {k}", id.as_str());
        }
    }
}

#[test]
fn right_inverse_choice_moves_the_manifold_only_at_higher_order() {
    let e = EpsilonParams::default();
    let m = Regime3Xv::new(e);
    let a = GraphManifold::new(Gamma4 { e }, Choices::new(RightInverse::FiberAligned));
    let b = GraphManifold::new(Gamma4 { e }, Choices::new(RightInverse::Orthogonal));
    let grid = [0.3, 0.5, 0.7, 1.5, 2.0];
    for j in 1..=2usize {
        let d: Vec<f64> = [0.1, 0.05, 0.025]
            .iter()
            .map(|&delta| manifold_distance(&m, &a, &b, j, &grid, delta).unwrap())
            .collect();
        for w in d.windows(2) {
            if w[0] > 1e-13 {
                assert!(w[0] / w[1] >= 2f64.powf(j as f64 + 0.5), "order {j}: {d:?}");
            }
        }
    }
}

#[test]
fn choices_change_the_coefficients() {
    let e = EpsilonParams::default();
    let grid = [0.5];
    let a = ManifoldModel::new(ManifoldId::Gamma4, e, Some(RightInverse::FiberAligned)).solve_orders(2, &grid).unwrap();
    let b = ManifoldModel::new(ManifoldId::Gamma4, e, Some(RightInverse::Orthogonal)).solve_orders(2, &grid).unwrap();
    assert!((a[1].phi[0][0] - b[1].phi[0][0]).abs() + (a[1].phi[0][1] - b[1].phi[0][1]).abs() > 1e-6);
}
