use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn amo(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_amo"))
        .arg("--out")
        .arg(out)
        .args(args)
        .env_remove("AMO_OUT_DIR")
        .output()
        .expect("spawn amo")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn column(path: &Path, name: &str) -> Vec<f64> {
    let mut r = csv::Reader::from_path(path).unwrap();
    let idx = r.headers().unwrap().iter().position(|h| h == name).unwrap();
    r.records().map(|rec| rec.unwrap()[idx].parse().unwrap()).collect()
}

#[test]
fn nondim_defaults_match_the_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = amo(dir.path(), &["nondim"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let diffs = column(&dir.path().join("nondim/nondim_table.csv"), "relative_difference");
    assert!(!diffs.is_empty());
    assert!(diffs.iter().all(|d| d.abs() <= 5e-3), "{diffs:?}");
    assert!(dir.path().join("nondim/manifest.json").exists());
}

#[test]
fn emit_scales_adds_the_reference_scales() {
    let dir = tempfile::tempdir().unwrap();
    let o = amo(dir.path(), &["nondim", "--emit-scales"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("kappaX"));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("nondim/nondim.json")).unwrap()).unwrap();
    assert!(v["scales"]["kappaX"].as_f64().unwrap() > 0.0);
}

#[test]
fn missing_parameter_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = serde_json::to_value(amo::cli::RunConfig::default()).unwrap();
    cfg["biophysical"].as_object_mut().unwrap().remove("kappa5");
    let path = dir.path().join("cfg.json");
    fs::write(&path, cfg.to_string()).unwrap();
    let o = amo(dir.path(), &["--config", path.to_str().unwrap(), "nondim"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("kappa5"), "{}", stderr(&o));
}

#[test]
fn unknown_ids_list_the_valid_ones() {
    let dir = tempfile::tempdir().unwrap();
    let o = amo(dir.path(), &["simulate", "--model", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("surrogate-xz"), "{}", stderr(&o));
    let o = amo(dir.path(), &["blowup", "--chart", "k9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("k4"), "{}", stderr(&o));
}

#[test]
fn verify_round_trips_and_detects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(amo(dir.path(), &["geometry"]).status.code(), Some(0));
    let o = amo(dir.path(), &["--verify", "geometry"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = dir.path().join("geometry/nullclines.csv");
    let mut text = fs::read_to_string(&csv).unwrap();
    text.push_str("0,0,0\n");
    fs::write(&csv, text).unwrap();
    let o = amo(dir.path(), &["--verify", "geometry"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("nullclines.csv"));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        assert_eq!(amo(d.path(), &["reduce", "--manifold", "gamma4"]).status.code(), Some(0));
    }
    for name in ["reduce.csv", "reduce.json", "reduce.svg"] {
        let x = fs::read(a.path().join("reduce").join(name)).unwrap();
        let y = fs::read(b.path().join("reduce").join(name)).unwrap();
        assert!(x == y, "{name} differs");
    }
}

#[test]
fn k4_report_lists_the_saddle_at_p8() {
    let dir = tempfile::tempdir().unwrap();
    let o = amo(dir.path(), &["blowup", "--chart", "k4", "--report"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let p8 = v["equilibria"]
        .as_array()
        .unwrap()
        .iter()
        .find(|q| q["label"] == "p8")
        .expect("p8");
    let mut re: Vec<f64> = p8["eigenvalues"].as_array().unwrap().iter().map(|l| l[0].as_f64().unwrap()).collect();
    re.sort_by(f64::total_cmp);
    assert!((re[0] + 1.0).abs() < 1e-9 && re[1].abs() < 1e-9 && (re[2] - 1.0).abs() < 1e-9, "{re:?}");
}

#[test]
fn hausdorff_sweep_is_monotone() {
    let dir = tempfile::tempdir().unwrap();
    let o = amo(dir.path(), &["sweep", "--observable", "hausdorff", "--eps", "0.3,0.2241,0.15"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let h = column(&dir.path().join("sweep/sweep.csv"), "hausdorff");
    assert_eq!(h.len(), 3);
    assert!(h.windows(2).all(|w| w[1] < w[0]), "{h:?}");
}

#[test]
fn simulate_writes_trace_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let o = amo(dir.path(), &["simulate", "--model", "surrogate-xz", "--duration", "50"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t = column(&dir.path().join("simulate/trajectory.csv"), "t");
    assert!(t.len() > 10 && (t[t.len() - 1] - 50.0).abs() < 1e-9);
    assert!(fs::read_to_string(dir.path().join("simulate/trace.svg")).unwrap().starts_with("<svg"));
}
