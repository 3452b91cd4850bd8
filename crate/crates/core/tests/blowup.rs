use amo::blowup::{
    chart_equilibria, chart_transform, default_samples, fold_radius, heteroclinic_p1_p2, invariant_plane_leak,
    jump_landings, k3_to_k4, omega07, to_k1, MapDirection,
};
use amo::models::ChartId;
use amo::params::EpsilonParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn k1_k2_overlap_composes() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let p = [rng.random_range(0.05..2.0), rng.random_range(0.0..3.0), rng.random_range(0.05..0.5)];
        let k1 = chart_transform(ChartId::K1, p, MapDirection::Forward).unwrap();
        let k2 = chart_transform(ChartId::K2, p, MapDirection::Forward).unwrap();
        let via = to_k1(ChartId::K2, k2).unwrap();
        for i in 0..3 {
            assert!((via[i] - k1[i]).abs() <= 1e-14 * k1[i].abs().max(1.0));
        }
        let back = chart_transform(ChartId::K2, k2, MapDirection::Backward).unwrap();
        for i in 0..3 {
            assert!((back[i] - p[i]).abs() <= 1e-14 * p[i].abs().max(1.0));
        }
    }
}

#[test]
fn fold_persists_from_k3_to_k4() {
    let e = EpsilonParams::default();
    let find = |c, l: &str| chart_equilibria(c, &e).unwrap().into_iter().find(|q| q.label == l).unwrap().coords;
    let p4_k3 = find(ChartId::K3, "p4");
    let p4_k4 = find(ChartId::K4, "p4");
    let mapped = k3_to_k4(p4_k3).unwrap();
    let printed = [fold_radius(&e), 0.0, 1.0 / fold_radius(&e)];
    for i in 0..3 {
        assert!((mapped[i] - p4_k4[i]).abs() < 1e-10);
        assert!((mapped[i] - printed[i]).abs() < 1e-10);
    }
}

#[test]
fn invariant_planes_hold() {
    let e = EpsilonParams::default();
    for chart in ChartId::ALL {
        assert!(invariant_plane_leak(chart, &e, &default_samples(chart, 100, 3)) <= 1e-14);
    }
}

#[test]
fn p1_connects_to_gamma5() {
    let e = EpsilonParams::default();
    for d in [1e-3, 1e-4] {
        let l = heteroclinic_p1_p2(&e, d).unwrap();
        assert!(l.reached, "delta {d}: {:?}", l.point);
        assert!(l.point[1] <= d);
    }
}

#[test]
fn jump_lands_on_gamma0_then_gamma2() {
    let e = EpsilonParams::default();
    let top = 1.0 / (e.gamma * e.sigma1).sqrt();
    for d in [1e-3, 1e-4] {
        let [p5, p6] = jump_landings(&e, d).unwrap();
        assert!(p5.reached && p6.reached);
        assert!(p5.point[2] <= d);
        assert!((p6.point[1] - top).abs() <= d);
    }
}

#[test]
fn omega07_traces_back_to_p0() {
    let o = omega07(&EpsilonParams::default(), 0.1, 1e7).unwrap();
    assert!(o.min_distance < 1e-6, "{o:?}");
    assert!(o.s3_monotone);
}
