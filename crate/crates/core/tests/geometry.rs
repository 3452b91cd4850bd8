use amo::geometry::{equilibrium_xy, fold_points, gamma4_eigenvalue};
use amo::models::{eval_dimensionless_xy, EpsDecomposed, Regime3Xv};
use amo::params::EpsilonParams;

const SWEEP: [f64; 5] = [0.3, 0.2241, 0.15, 0.1, 0.05];

#[test]
fn equilibrium_sits_between_the_folds() {
    for eps in SWEEP {
        let d = EpsilonParams::default().with_epsilon(eps).to_dimensionless();
        let f = fold_points(&d).unwrap();
        let y = equilibrium_xy(&d).unwrap().location[1];
        assert!(f.y_f1 < y && y < f.y_f2, "eps {eps}: {} {y} {}", f.y_f1, f.y_f2);
    }
}

#[test]
fn reported_points_resubstitute() {
    for eps in SWEEP {
        let d = EpsilonParams::default().with_epsilon(eps).to_dimensionless();
        let eq = equilibrium_xy(&d).unwrap();
        let v = eval_dimensionless_xy(eq.location, &d).unwrap();
        assert!(v[0].abs().max(v[1].abs()) < 1e-10);
        let f = fold_points(&d).unwrap();
        assert!(f.residuals[0].abs() < 1e-10 && f.residuals[1].abs() < 1e-10);
    }
}

#[test]
fn gamma4_eigenvalue_sign_partition() {
    let e = EpsilonParams::default();
    for k in 1..100 {
        let v = k as f64 / 100.0;
        assert!(gamma4_eigenvalue(v, &e) < 0.0);
        assert!(gamma4_eigenvalue(1.0 + 9.0 * v, &e) > 0.0);
    }
    assert!(gamma4_eigenvalue(1.0, &e).abs() < 1e-12);
    let m = Regime3Xv::new(e);
    assert!(m.f0(m.p4()).abs() < 1e-12);
}
