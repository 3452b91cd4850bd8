use amo::blowup::{default_samples, pushforward_residual};
use amo::models::{decomposition_residual, ChartId, EpsDecomposed, Regime2Uz, Regime3Xv, SurrogateXz};
use amo::params::EpsilonParams;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn worst<M: EpsDecomposed>(m: &M, lo: [f64; 2], hi: [f64; 2]) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut w: f64 = 0.0;
    for _ in 0..100 {
        let s = [rng.random_range(lo[0]..hi[0]), rng.random_range(lo[1]..hi[1])];
        for d in [0.0, 0.05, 0.2241] {
            w = w.max(decomposition_residual(m, s, d));
        }
    }
    w
}

#[test]
fn decomposition_identity_at_random_states() {
    let e = EpsilonParams::default();
    assert!(worst(&SurrogateXz::new(e), [0.0, 0.0], [2.0, 3.0]) < 1e-12);
    assert!(worst(&Regime2Uz::new(e), [0.0, 0.0], [5.0, 2.0]) < 1e-12);
    assert!(worst(&Regime3Xv::new(e), [0.0, 0.0], [2.0, 5.0]) < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn charts_commute_with_the_surrogate(seed in any::<u64>(), eps in 0.05f64..0.3) {
        let e = EpsilonParams::default().with_epsilon(eps);
        for chart in ChartId::ALL {
            let r = pushforward_residual(chart, &default_samples(chart, 50, seed), &e).unwrap();
            prop_assert!(r < 1e-12, "{chart}: {r:e}");
        }
    }
}
