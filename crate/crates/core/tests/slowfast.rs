use amo::dynamics::{drive, Control, Tolerances};
use amo::models::{EpsDecomposed, Regime2Uz, Regime3Xv, SurrogateXz};
use amo::params::EpsilonParams;
use amo::slowfast::{adjugate, determinant, oblique_projector, reduced_field};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn mat(n: usize, m: usize, v: &[f64]) -> DMatrix<f64> {
    DMatrix::from_row_slice(n, m, v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn projector_identities(v in proptest::collection::vec(-2.0f64..2.0, 4)) {
        let n0 = mat(2, 1, &v[..2]);
        let df0 = mat(1, 2, &v[2..]);
        prop_assume!((df0.clone() * n0.clone())[(0, 0)].abs() > 1e-3);
        let p = oblique_projector(&df0, &n0).unwrap();
        let id = DMatrix::<f64>::identity(2, 2);
        prop_assert!((&p.pi_s * &p.pi_s - &p.pi_s).norm() < 1e-9);
        prop_assert!((&p.pi_s + &p.pi_n - id).norm() < 1e-12);
        prop_assert!((&p.pi_s * &n0).norm() < 1e-9);
    }

    #[test]
    fn adjugate_oracle(v in proptest::collection::vec(-3.0f64..3.0, 9)) {
        let a = mat(3, 3, &v);
        let adj = adjugate(&a).unwrap();
        let det = determinant(&a).unwrap();
        prop_assert!((det - a.determinant()).abs() < 1e-10);
        let id = DMatrix::<f64>::identity(3, 3) * det;
        prop_assert!((&a * &adj - &id).norm() < 1e-9);
        prop_assert!((&adj * &a - id).norm() < 1e-9);
    }

    #[test]
    fn reduced_field_is_tangent(x in 0.05f64..1.5, u in 0.1f64..3.0, v in 0.05f64..0.9) {
        let e = EpsilonParams::default();
        let m2 = SurrogateXz::new(e);
        let z = 1.0 / (e.gamma * e.sigma1);
        check_tangent(&m2, [x, z])?;
        check_tangent(&Regime2Uz::new(e), [u, 0.0])?;
        let m3 = Regime3Xv::new(e);
        check_tangent(&m3, [m3.gamma4_x(v), v])?;
    }
}

fn check_tangent<M: EpsDecomposed>(m: &M, p: [f64; 2]) -> Result<(), TestCaseError> {
    let r = reduced_field(m, p).unwrap();
    let d = m.df0(p);
    let lhs = d[0] * r.vector[0] + d[1] * r.vector[1];
    let scale = (d[0].hypot(d[1]) * r.vector[0].hypot(r.vector[1])).max(1.0);
    prop_assert!(lhs.abs() < 1e-10 * scale, "{}: Df0 r = {lhs:e}", m.id());
    Ok(())
}

#[test]
fn gamma2_slow_drift_matches_trajectories() {
    let e = EpsilonParams::default().with_epsilon(0.01);
    let m = SurrogateXz::new(e);
    let z = 1.0 / (e.gamma * e.sigma1);
    let tol = Tolerances::new(1e-12, 1e-15);
    let window = (0.05, 0.1);
    for x in [0.15, 0.25, 0.35] {
        let mut ts = Vec::new();
        let mut xs = Vec::new();
        drive(&m, &[x, z], 0.0, window.1 / e.epsilon, &tol, |s| {
            let slow = s.t1 * e.epsilon;
            if slow >= window.0 {
                ts.push(slow);
                xs.push(s.y1[0]);
            }
            Control::Continue
        })
        .unwrap();
        assert!(ts.len() > 5);
        let (slope, _) = amo::dynamics::linear_fit(&ts, &xs).unwrap();
        let mid = xs.iter().sum::<f64>() / xs.len() as f64;
        let r = reduced_field(&m, [mid, z]).unwrap().vector[0];
        assert!(((slope - r) / r).abs() < 0.05, "X = {x}: {slope} vs {r}");
    }
}
