use amo::models::fullflux::j_gk;
use amo::params::{
    compute_reference_scales, extract_hierarchy, nondimensionalise, BiophysicalParams, ParamFile, SmolenParams,
    TABLE_DIMENSIONLESS,
};
use proptest::prelude::*;

fn sig3(x: f64) -> f64 {
    let p = 10f64.powi(x.abs().log10().floor() as i32 - 2);
    (x / p).round() * p
}

#[test]
fn hierarchy_round_trip_reproduces_table() {
    let d = nondimensionalise(&BiophysicalParams::default()).unwrap();
    let back = extract_hierarchy(&d).unwrap().to_dimensionless();
    for ((name, v), (_, t)) in back.fields().iter().zip(TABLE_DIMENSIONLESS) {
        assert!(((v - t) / t).abs() < 5e-3, "{name}: {v} vs {t}");
    }
}

#[test]
fn cross_table_consistency() {
    let p = BiophysicalParams::default();
    let s = SmolenParams::default();
    assert_eq!(sig3(j_gk(&s)), p.alpha);
    assert_eq!(sig3(1.0 / (1.0 + s.k_gpi)), p.beta);
    assert_eq!(sig3(1.0 / (1.0 + s.k_lg)), p.eta);
    assert_eq!(p.nu, s.v_pfk);
    assert_eq!(sig3(s.v_pdh / 2.0), p.gamma);
}

#[test]
fn shipped_parameter_file_is_the_default() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../params/marinelli2018.json")).unwrap();
    assert_eq!(ParamFile::from_json(&text).unwrap(), ParamFile::default());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kappa_x_identity(k in proptest::collection::vec(0.01f64..100.0, 6), rates in proptest::collection::vec(1e-4f64..1.0, 4)) {
        let p = BiophysicalParams {
            kappa1: k[0], kappa2: k[1], kappa3: k[2] * 1e-3, kappa4: k[3] * 1e-4, kappa5: k[4], kappa6: k[5],
            alpha: rates[0], nu: rates[1], gamma: rates[2], eta: rates[3],
            ..Default::default()
        };
        let s = compute_reference_scales(&p).unwrap();
        let d = nondimensionalise(&p).unwrap();
        let rhs = s.kappa_y * d.hat_sigma6.powf(-0.25);
        prop_assert!(((s.kappa_x - rhs) / rhs).abs() < 1e-12);
    }
}
