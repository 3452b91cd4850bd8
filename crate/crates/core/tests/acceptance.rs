//! One PASS/FAIL line per acceptance criterion.
//!
//! Criteria that do not hold are reported as FAIL with their measured values;
//! the binary itself only exits non-zero when a criterion cannot be evaluated
//! for a reason other than the numerics (a panic).

use std::time::Instant;

use amo::blowup::{centre_coefficients, chart_equilibria, default_samples, pushforward_residual, CentrePoint};
use amo::cli::commands::fold_sweep;
use amo::dynamics::cycle::{return_map_contraction, CycleOptions};
use amo::dynamics::sweep::{strictly_decreasing, strictly_increasing};
use amo::dynamics::{
    fit_exponents, hausdorff_distance, map_cycle_xz_to_xy, model_cycle, surrogate_cycle, sweep_surrogate,
    SegmentConfig,
};
use amo::geometry::equilibrium_xy;
use amo::models::biophysical::rate;
use amo::models::fullflux::{fluxes, weight_shares};
use amo::models::scaled::eval_dimensionless_xy;
use amo::models::{build_model, ChartId, ModelContext, ModelId};
use amo::parametrisation::{closed_form_reduced, derived_closed_form, ClosedForm, ManifoldId, ManifoldModel};
use amo::params::{nondimensionalise, BiophysicalParams, DimensionlessParams, EpsilonParams, SmolenParams};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> amo::Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Published dimensionless table.
const TABLE: [f64; 9] = [5.56e-3, 6.72e-2, 1.0, 3.30e-1, 1.38, 4.20e-2, 1.14e-1, 5.02e-2, 2.52e-3];

fn c1_nondim() -> amo::Result<Outcome> {
    let t = Instant::now();
    let d = nondimensionalise(&BiophysicalParams::default())?;
    let secs = t.elapsed().as_secs_f64();
    let worst = d
        .fields()
        .iter()
        .zip(TABLE)
        .map(|((_, v), p)| rel(*v, p))
        .fold(0.0, f64::max);
    outcome(worst <= 5e-3 && secs < 1.0, format!("max rel. diff {:.3}% (tol 0.5%), {secs:.2e} s", 100.0 * worst))
}

fn c2_period() -> amo::Result<Outcome> {
    let t = Instant::now();
    let c = model_cycle(ModelId::BiophysicalXy, &ModelContext::default(), &CycleOptions::default())?;
    let secs = t.elapsed().as_secs_f64();
    let err = rel(c.period, 4.28e5);
    outcome(
        err < 0.02 && secs < 30.0,
        format!("period {:.5e} ms, rel. err {:.3}% (tol 2%), {secs:.1} s", c.period, 100.0 * err),
    )
}

fn c3_flux() -> amo::Result<Outcome> {
    let b = BiophysicalParams::default();
    let s = SmolenParams::default();
    let mut worst = (0.0, 0.0, 0.0);
    for i in 0..20 {
        for j in 0..20 {
            let x = 10.0 + 490.0 * i as f64 / 19.0;
            let y = 0.1 + 99.9 * j as f64 / 19.0;
            let reduced = b.nu * rate(x, y, &b).0;
            let full = fluxes(x, y, &s)?.j_pfk;
            let d = rel(reduced, full);
            if d > worst.0 {
                worst = (d, x, y);
            }
        }
    }
    let (d, x, y) = worst;
    if d <= 0.01 {
        return outcome(true, format!("max rel. diff {:.3}% at ({x}, {y:.2}) uM (tol 1%)", 100.0 * d));
    }
    let shares = weight_shares(x, y, &s)?;
    let top: Vec<String> = shares.iter().take(3).map(|(k, v)| format!("{k} {v:.3}")).collect();
    outcome(
        d <= 0.05,
        format!(
            "max rel. diff {:.3}% at ({x}, {y:.2}) uM exceeds 1%; dominant weights {}; fallback tol 5%",
            100.0 * d,
            top.join(", ")
        ),
    )
}

/// Newton on the dimensionless field with a central-difference Jacobian.
fn newton_oracle(d: &DimensionlessParams, mut s: [f64; 2]) -> Option<[f64; 2]> {
    let f = |s: [f64; 2]| eval_dimensionless_xy(s, d).ok();
    for _ in 0..60 {
        let v = f(s)?;
        let mut j = [[0.0; 2]; 2];
        for k in 0..2 {
            let h = 1e-7 * s[k].abs().max(1e-3);
            let mut a = s;
            let mut b = s;
            a[k] += h;
            b[k] -= h;
            let (fa, fb) = (f(a)?, f(b)?);
            j[0][k] = (fa[0] - fb[0]) / (2.0 * h);
            j[1][k] = (fa[1] - fb[1]) / (2.0 * h);
        }
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        let dx = (v[0] * j[1][1] - v[1] * j[0][1]) / det;
        let dy = (j[0][0] * v[1] - j[1][0] * v[0]) / det;
        s = [s[0] - dx, s[1] - dy];
        if dx.abs() < 1e-15 * s[0].abs() && dy.abs() < 1e-15 * s[1].abs() {
            break;
        }
    }
    Some(s)
}

fn c4_equilibrium() -> amo::Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for eps in [0.3, 0.2241, 0.1] {
        let d = EpsilonParams::default().with_epsilon(eps).to_dimensionless();
        let y_closed = (d.hat_alpha / (d.hat_gamma * d.hat_nu1)).powi(2);
        let eq = equilibrium_xy(&d)?;
        let guess = [eq.location[0] * 1.05, eq.location[1] * 0.95];
        let oracle = newton_oracle(&d, guess).unwrap_or([f64::NAN; 2]);
        let ey = rel(y_closed, oracle[1]);
        let ok = ey < 1e-10 && eq.determinant > 0.0 && eq.trace > 0.0 && eq.discriminant > 0.0;
        pass &= ok;
        parts.push(format!(
            "eps {eps}: Y rel. err {ey:.1e}, det {:.2e}, tr {:.2e}, disc {:.2e} ({:?})",
            eq.determinant, eq.trace, eq.discriminant, eq.classification
        ));
    }
    outcome(pass, parts.join("; "))
}

fn c5_fold() -> amo::Result<Outcome> {
    let e = EpsilonParams::default();
    let rows = fold_sweep(&e, &[0.2, 0.1, 0.05, 0.025])?;
    let ratios: Vec<f64> = rows.iter().filter_map(|r| r.ratio).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.y_f1_over_sigma6).collect();
    let printed_limit = (e.gamma / (2.0 - e.gamma * e.sigma2)).sqrt();
    let pass = ratios.iter().all(|q| (0.15..=0.45).contains(q)) && ys.iter().all(|y| (0.5..=2.0).contains(y));
    outcome(
        pass,
        format!(
            "ratios {:.3?} (band [0.15, 0.45]), Y_f1/sigma6 {:.3?} (band [0.5, 2]), limit {:.6} (sigma4 = 1 form {:.6})",
            ratios, ys, rows[0].limit, printed_limit
        ),
    )
}

fn c6_parametrisation() -> amo::Result<Outcome> {
    let e = EpsilonParams::default();
    let mut worst_printed: Vec<(ClosedForm, f64)> = Vec::new();
    let mut worst_derived = 0.0f64;
    for (id, form, j, comp) in [
        (ManifoldId::Gamma5, ClosedForm::R2Gamma5, 2, None),
        (ManifoldId::Gamma4, ClosedForm::Phi2Gamma4, 2, Some(0)),
        (ManifoldId::Gamma4, ClosedForm::R3Gamma4, 3, None),
    ] {
        let mm = ManifoldModel::new(id, e, None);
        let grid: Vec<f64> = mm
            .default_grid()
            .into_iter()
            .filter(|xi| form != ClosedForm::R3Gamma4 || (xi - 1.0).abs() > 0.1)
            .collect();
        let sol = &mm.solve_orders(j, &grid)?[j - 1];
        let mut w = 0.0f64;
        for (k, &xi) in grid.iter().enumerate() {
            let v = match comp {
                Some(c) => sol.phi[k][c],
                None => sol.r[k],
            };
            w = w.max(rel(v, closed_form_reduced(form, xi, &e)?));
            worst_derived = worst_derived.max(rel(v, derived_closed_form(form, xi, &e)?));
        }
        worst_printed.push((form, w));
    }
    let mut band = true;
    let mut logs = Vec::new();
    for id in ManifoldId::ALL {
        let mm = ManifoldModel::new(id, e, None);
        let grid = mm.default_grid();
        for j in 1..=3 {
            let k = (mm.conjugacy_residual(j, &grid, 2e-3)? / mm.conjugacy_residual(j, &grid, 1e-3)?).log2();
            band &= k >= j as f64 + 0.5 && k <= j as f64 + 1.5;
            logs.push(format!("{k:.2}"));
        }
    }
    let forms_ok = worst_printed.iter().all(|(_, w)| *w < 1e-8);
    let printed: Vec<String> = worst_printed.iter().map(|(f, w)| format!("{} {w:.1e}", f.as_str())).collect();
    outcome(
        forms_ok && band,
        format!(
            "vs printed forms (tol 1e-8): {}; vs derived forms {worst_derived:.1e}; log2 residual ratios {} (band [j+0.5, j+1.5])",
            printed.join(", "),
            logs.join(" ")
        ),
    )
}

fn eig(chart: ChartId, label: &str, e: &EpsilonParams) -> amo::Result<Vec<f64>> {
    let q = chart_equilibria(chart, e)?
        .into_iter()
        .find(|q| q.label == label)
        .ok_or_else(|| amo::Error::Inconsistency(format!("{label} missing in {chart:?}")))?;
    Ok(q.eigenvalues.iter().map(|l| l[0]).collect())
}

fn c7_blowup() -> amo::Result<Outcome> {
    let e = EpsilonParams::default();
    let mut worst = 0.0f64;
    for chart in [ChartId::K1, ChartId::K2, ChartId::K3, ChartId::K4] {
        worst = worst.max(pushforward_residual(chart, &default_samples(chart, 100, 7), &e)?);
    }
    let g = e.gamma;
    let close = |a: &[f64], b: &[f64]| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-10);
    let sorted = |mut v: Vec<f64>| {
        v.sort_by(f64::total_cmp);
        v
    };
    let p1 = eig(ChartId::K1, "p1", &e)?;
    let p7 = eig(ChartId::K3, "p7", &e)?;
    let p8 = eig(ChartId::K4, "p8", &e)?;
    let p3 = eig(ChartId::K3, "p3", &e)?;
    let p1_ok = p1.iter().any(|l| (l + 1.0 / (g * e.sigma1)).abs() < 1e-10);
    let p7_ok = close(&sorted(p7.clone()), &sorted(vec![0.0, 0.0, g]));
    let p8_ok = close(&sorted(p8.clone()), &[-1.0, 0.0, 1.0]);
    let p3_ok = close(&p3, &[0.0, -g, 0.0]);
    outcome(
        worst < 1e-12 && p1_ok && p7_ok && p8_ok && p3_ok,
        format!(
            "pushforward max {worst:.1e} (tol 1e-12); p1 {p1:.6?} [{p1_ok}], p7 {p7:.6?} [{p7_ok}], p8 {p8:.6?} [{p8_ok}], p3 {p3:.6?} [{p3_ok}]"
        ),
    )
}

fn c8_centre() -> amo::Result<Outcome> {
    let e = EpsilonParams::default();
    let mut pass = true;
    let mut parts = Vec::new();
    for point in [CentrePoint::P1, CentrePoint::P7] {
        let c = centre_coefficients(point, &e)?;
        for f in &c.fits {
            pass &= f.relative_error < 0.1;
            parts.push(format!("{:?} {} {:.2}%", point, f.name, 100.0 * f.relative_error));
        }
    }
    outcome(pass, format!("{} (tol 10%)", parts.join(", ")))
}

fn c9_sweep() -> amo::Result<Outcome> {
    let eps = [0.3, 0.2241, 0.15, 0.1];
    let rows = sweep_surrogate(&EpsilonParams::default(), &eps, &CycleOptions::default(), &SegmentConfig::default(), None)?;
    let h: Vec<f64> = rows.iter().map(|r| r.hausdorff).collect();
    let p: Vec<f64> = rows.iter().map(|r| r.period).collect();
    outcome(
        strictly_decreasing(&h) && strictly_increasing(&p),
        format!("Hausdorff {h:.4?}, period {p:.4?} over eps {eps:?}"),
    )
}

fn c10_exponents() -> amo::Result<Outcome> {
    let t = Instant::now();
    let eps = [0.2, 0.15, 0.1, 0.07, 0.05];
    let rows = sweep_surrogate(&EpsilonParams::default(), &eps, &CycleOptions::default(), &SegmentConfig::default(), None)?;
    let tables: Vec<_> = rows.into_iter().map(|r| r.segments).collect();
    let fits = fit_exponents(&tables);
    let secs = t.elapsed().as_secs_f64();
    let targets = [("gamma2", 1.0, 0.5), ("gamma1", 2.0, 0.5), ("gamma5", 8.0, 1.0), ("gamma4a", 6.0, 1.0), ("jump", 0.0, 0.5)];
    let mut pass = secs < 600.0;
    let mut parts = Vec::new();
    for (label, target, tol) in targets {
        // The jump is judged on its fast tail, i.e. the maximum speed.
        let fit = fits.iter().find(|f| f.label == label);
        let slope = fit.and_then(|f| if label == "jump" { f.slope_of_max } else { f.slope });
        let ok = slope.is_some_and(|s| (s - target).abs() <= tol);
        pass &= ok;
        parts.push(format!(
            "{label} {} (want {target} +/- {tol})",
            slope.map_or("empty".into(), |s| format!("{s:.2}"))
        ));
    }
    outcome(pass, format!("{}; {secs:.1} s", parts.join(", ")))
}

fn c11_mapping() -> amo::Result<Outcome> {
    let ctx = ModelContext::at_epsilon(0.2241);
    let opts = CycleOptions::default();
    let mapped = map_cycle_xz_to_xy(&surrogate_cycle(&ctx.eps, &opts)?, &ctx.eps);
    let direct = model_cycle(ModelId::PerturbedXy, &ctx, &opts)?;
    let h = hausdorff_distance(&mapped.polyline(0, 1), &direct.polyline(0, 1));
    let dp = rel(mapped.period, direct.period);
    outcome(
        h < 1e-3 && dp < 0.01,
        format!("phase-path Hausdorff {h:.2e} (tol 1e-3), period mismatch {:.4}% (tol 1%)", 100.0 * dp),
    )
}

fn c12_contraction() -> amo::Result<Outcome> {
    let ctx = ModelContext::at_epsilon(0.2241);
    let opts = CycleOptions::default();
    let direct = model_cycle(ModelId::PerturbedXy, &ctx, &opts)?;
    let f = build_model(ModelId::PerturbedXy, &ctx)?;
    let along = 1 - direct.section.coord;
    let c = return_map_contraction(f.as_ref(), &direct, along, 1e-3 * direct.section_point[along], &opts.tol)?;
    outcome(c.factor < 0.1, format!("contraction factor {:.2e} (tol 0.1)", c.factor))
}

fn main() {
    let criteria: [(&str, fn() -> amo::Result<Outcome>); 12] = [
        ("nondimensionalisation", c1_nondim),
        ("biophysical period", c2_period),
        ("flux equivalence", c3_flux),
        ("equilibrium classification", c4_equilibrium),
        ("fold convergence", c5_fold),
        ("parametrisation oracles", c6_parametrisation),
        ("blow-up transcription", c7_blowup),
        ("centre-manifold coefficients", c8_centre),
        ("singular-cycle convergence", c9_sweep),
        ("timescale exponents", c10_exponents),
        ("surrogate equivalence", c11_mapping),
        ("return-map contraction", c12_contraction),
    ];
    let mut passed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (pass, detail) = match f() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        passed += pass as usize;
        println!("{} {:>2} {name}: {detail}", if pass { "PASS" } else { "FAIL" }, i + 1);
    }
    println!("{passed}/{} criteria pass", criteria.len());
}
