//! One function per subcommand. Each writes into a [`Sink`] and returns the
//! text printed on stdout.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use super::config::{RunConfig, Sink};
use crate::blowup::{chart_report, BlowupReport};
use crate::dynamics::segments::SEGMENT_LABELS;
use crate::dynamics::sweep::{default_section_and_start, strictly_decreasing, strictly_increasing};
use crate::dynamics::{fit_exponents, integrate, model_cycle, sweep_surrogate, SegmentConfig, Tolerances};
use crate::dynamics::cycle::CycleOptions;
use crate::error::{Error, Result};
use crate::geometry::{
    chart_branches, equilibrium_xy, fold_limit_x, fold_points, geometric_grid, nullcline_poles, regime1_manifolds,
    regime2_layer_objects, regime3_manifold, x_nullcline, y_nullcline, EquilibriumReport, FoldReport,
};
use crate::models::{build_model, ChartId, ModelId};
use crate::output::{Plot, Series};
use crate::parametrisation::{
    closed_form_reduced, derived_closed_form, ClosedForm, ManifoldId, ManifoldModel, RightInverse, MAX_ORDER,
};
use crate::params::{
    compute_reference_scales, extract_hierarchy, nondimensionalise, validate_asymptotics, DimensionlessParams,
    ReferenceScales, ValidationReport, TABLE_DIMENSIONLESS, TABLE_REL_TOL,
};

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub name: String,
    pub computed: f64,
    pub published: f64,
    pub relative_difference: f64,
    pub pass: bool,
}

pub fn table_comparison(d: &DimensionlessParams) -> Vec<TableRow> {
    d.fields()
        .iter()
        .zip(TABLE_DIMENSIONLESS.iter())
        .map(|(&(name, computed), &(_, published))| {
            let rel = ((computed - published) / published).abs();
            TableRow {
                name: name.into(),
                computed,
                published,
                relative_difference: rel,
                pass: rel < TABLE_REL_TOL,
            }
        })
        .collect()
}

#[derive(Serialize)]
struct NondimOut {
    dimensionless: DimensionlessParams,
    table: Vec<TableRow>,
    validation: ValidationReport,
    hierarchy: Option<crate::params::EpsilonParams>,
    hierarchy_error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    scales: Option<ReferenceScales>,
}

pub fn nondim(cfg: &RunConfig, emit_scales: bool, sink: &mut Sink) -> Result<String> {
    let d = nondimensionalise(&cfg.biophysical)?;
    let table = table_comparison(&d);
    let (hierarchy, hierarchy_error) = match extract_hierarchy(&d) {
        Ok(e) => (Some(e), None),
        Err(err) => (None, Some(err.to_string())),
    };
    let out = NondimOut {
        dimensionless: d,
        validation: validate_asymptotics(&d),
        hierarchy,
        hierarchy_error,
        scales: if emit_scales { Some(compute_reference_scales(&cfg.biophysical)?) } else { None },
        table: table.clone(),
    };
    sink.json("nondim.json", &out)?;
    let rows: Vec<(String, Vec<f64>)> = table
        .iter()
        .map(|r| (r.name.clone(), vec![r.computed, r.published, r.relative_difference]))
        .collect();
    sink.labelled_csv("nondim_table.csv", &["name", "computed", "published", "relative_difference"], &rows)?;

    let mut s = String::new();
    let _ = writeln!(s, "{:<10} {:>12} {:>12} {:>10}", "name", "computed", "published", "rel.diff");
    for r in &table {
        let _ = writeln!(
            s,
            "{:<10} {:>12.4e} {:>12.3e} {:>9.3}% {}",
            r.name,
            r.computed,
            r.published,
            100.0 * r.relative_difference,
            if r.pass { "" } else { "FAIL" }
        );
    }
    if let Some(e) = &out.hierarchy {
        let _ = writeln!(s, "epsilon = {:.5}", e.epsilon);
    }
    if let Some(sc) = &out.scales {
        let _ = writeln!(
            s,
            "scales: kappaX = {:.6e} uM, kappaY = {:.6e} uM, kappaTau = {:.6e} ms",
            sc.kappa_x, sc.kappa_y, sc.kappa_tau
        );
    }
    Ok(s)
}

#[derive(Serialize)]
struct CycleSummary {
    model: String,
    period: f64,
    convergence: f64,
    returns: usize,
    section_point: Vec<f64>,
}

pub fn simulate(
    cfg: &RunConfig,
    model: &str,
    duration: Option<f64>,
    start: Option<Vec<f64>>,
    cycle: bool,
    sink: &mut Sink,
) -> Result<String> {
    let id = ModelId::from_str(model)?;
    let ctx = cfg.context()?;
    let f = build_model(id, &ctx)?;
    let y0 = match start {
        Some(y) => y,
        None => default_section_and_start(id, &ctx)
            .map_err(|_| Error::Usage(format!("model {id} has no default start; pass --start")))?
            .1,
    };
    let duration = duration.unwrap_or(if id.is_dimensional() { 1e6 } else { 1e3 });
    let eps = (!id.is_dimensional()).then_some(ctx.eps.epsilon);
    let tol = Tolerances::new(1e-10, 1e-14);
    let traj = integrate(f.as_ref(), &y0, duration, &tol, eps)?;

    let mut header = vec!["t"];
    header.extend(traj.labels.iter().map(|s| s.as_str()));
    let rows: Vec<Vec<f64>> = traj
        .t
        .iter()
        .zip(&traj.states)
        .map(|(t, y)| std::iter::once(*t).chain(y.iter().copied()).collect())
        .collect();
    sink.csv("trajectory.csv", &header, &rows)?;
    let unit = if id.is_dimensional() { "t (ms)" } else { "t" };
    let mut trace = Plot::new(&format!("{id} time trace"), unit, "state");
    for (i, l) in traj.labels.iter().enumerate() {
        trace = trace.with(Series::new(l.clone(), traj.t.iter().zip(&traj.states).map(|(t, y)| [*t, y[i]]).collect()));
    }
    sink.svg("trace.svg", &trace)?;
    if traj.labels.len() >= 2 {
        let phase = Plot::new(&format!("{id} phase path"), &traj.labels[0], &traj.labels[1])
            .with(Series::new("orbit", traj.states.iter().map(|y| [y[0], y[1]]).collect()));
        sink.svg("phase.svg", &phase)?;
    }

    let mut s = format!(
        "{id}: {} steps to t = {:.6e}, final state {:?}\n",
        traj.stats.steps,
        traj.t.last().copied().unwrap_or(0.0),
        traj.last_state()
    );
    if cycle {
        let c = model_cycle(id, &ctx, &CycleOptions::default())?;
        let _ = writeln!(s, "limit cycle period {:.6e} (return gap {:.2e})", c.period, c.convergence);
        sink.json(
            "cycle.json",
            &CycleSummary {
                model: id.to_string(),
                period: c.period,
                convergence: c.convergence,
                returns: c.returns,
                section_point: c.section_point.clone(),
            },
        )?;
        let mut header = vec!["t"];
        header.extend(c.labels.iter().map(|s| s.as_str()));
        let rows: Vec<Vec<f64>> = c
            .times
            .iter()
            .zip(&c.points)
            .map(|(t, y)| std::iter::once(*t).chain(y.iter().copied()).collect())
            .collect();
        sink.csv("cycle.csv", &header, &rows)?;
    }
    Ok(s)
}

#[derive(Serialize)]
struct GeometryOut {
    folds: FoldReport,
    fold_limit_x: f64,
    equilibrium: EquilibriumReport,
    equilibrium_closed_form: [f64; 2],
    nullcline_poles: Vec<f64>,
    regime1: Vec<crate::geometry::ManifoldBranch>,
    regime2: crate::geometry::Regime2Objects,
    regime3: crate::geometry::Regime3Objects,
    charts: Vec<crate::geometry::ManifoldBranch>,
}

pub fn geometry(cfg: &RunConfig, sink: &mut Sink) -> Result<String> {
    let ctx = cfg.context()?;
    let d = ctx.dimensionless;
    let e = ctx.eps;
    let folds = fold_points(&d)?;
    let eq = equilibrium_xy(&d)?;
    let poles = nullcline_poles(&d);
    let out = GeometryOut {
        folds: folds.clone(),
        fold_limit_x: fold_limit_x(&e),
        equilibrium: eq.clone(),
        equilibrium_closed_form: crate::geometry::equilibrium_closed_form(&d),
        nullcline_poles: poles.iter().map(|s| s * s).collect(),
        regime1: regime1_manifolds(&e),
        regime2: regime2_layer_objects(&e)?,
        regime3: regime3_manifold(&e)?,
        charts: chart_branches(&e),
    };
    sink.json("geometry.json", &out)?;

    let ys = geometric_grid(1e-6, 1.5 / (d.hat_gamma * d.hat_sigma1), 400);
    let root = |x2: f64| if x2 >= 0.0 { x2.sqrt() } else { f64::NAN };
    let rows: Vec<Vec<f64>> = ys
        .iter()
        .map(|&y| {
            let xy = y_nullcline(y, &d).ok().filter(|p| p.physical).map_or(f64::NAN, |p| root(p.x2));
            vec![y, root(x_nullcline(y, &d)), xy]
        })
        .collect();
    sink.csv("nullclines.csv", &["Y", "X_on_x_nullcline", "X_on_y_nullcline"], &rows)?;
    let plot = Plot {
        log_x: true,
        log_y: true,
        ..Plot::new("nullclines", "X", "Y")
    }
    .with(Series::new("X-nullcline", rows.iter().map(|r| [r[1], r[0]]).collect()))
    .with(Series::new("Y-nullcline", rows.iter().map(|r| [r[2], r[0]]).collect()))
    .with(Series::new("equilibrium", vec![eq.location, eq.location]));
    sink.svg("nullclines.svg", &plot)?;

    let mut s = String::new();
    let _ = writeln!(s, "equilibrium (X, Y) = ({:.6e}, {:.6e}), {:?}", eq.location[0], eq.location[1], eq.classification);
    let _ = writeln!(s, "  trace {:.4e}, det {:.4e}, discriminant {:.4e}", eq.trace, eq.determinant, eq.discriminant);
    let _ = writeln!(s, "lower fold (X, Y) = ({:.6e}, {:.6e}); limit X = {:.6e}", folds.x_f1, folds.y_f1, out.fold_limit_x);
    let _ = writeln!(s, "upper fold (X, Y) = ({:.6e}, {:.6e})", folds.x_f2, folds.y_f2);
    let _ = writeln!(s, "nullcline poles at Y = {:?}", out.nullcline_poles);
    Ok(s)
}

#[derive(Serialize)]
struct ClosedFormRow {
    name: String,
    xi: f64,
    solver: f64,
    printed: f64,
    derived: f64,
    relative_to_printed: f64,
    relative_to_derived: f64,
}

#[derive(Serialize)]
struct ScalingRow {
    order: usize,
    delta: f64,
    residual: f64,
    residual_half: f64,
    log2_ratio: f64,
}

#[derive(Serialize)]
struct ReduceOut {
    manifold: String,
    right_inverse: Option<RightInverse>,
    order: usize,
    grid: Vec<f64>,
    max_residual: Vec<f64>,
    closed_forms: Vec<ClosedFormRow>,
    scaling: Vec<ScalingRow>,
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

pub fn reduce(
    cfg: &RunConfig,
    manifold: &str,
    order: usize,
    grid: Option<Vec<f64>>,
    right: Option<&str>,
    delta: f64,
    sink: &mut Sink,
) -> Result<String> {
    let id = ManifoldId::from_str(manifold)?;
    if order == 0 || order > MAX_ORDER {
        return Err(Error::Usage(format!("order must lie in 1..={MAX_ORDER}")));
    }
    let right = right
        .map(|r| {
            serde_json::from_value::<RightInverse>(serde_json::Value::String(r.into())).map_err(|_| Error::UnknownId {
                kind: "right inverse",
                id: r.into(),
                valid: "fiber-aligned, graph-preserving, orthogonal".into(),
            })
        })
        .transpose()?;
    let e = cfg.epsilon_params()?;
    let mm = ManifoldModel::new(id, e, right);
    let grid = grid.unwrap_or_else(|| mm.default_grid());
    let sols = mm.solve_orders(order, &grid)?;
    let [l0, l1] = mm.labels();

    let mut header = vec!["xi".to_string()];
    for j in 1..=order {
        header.extend([format!("r{j}"), format!("phi{j}_{l0}"), format!("phi{j}_{l1}"), format!("residual{j}")]);
    }
    let rows: Vec<Vec<f64>> = (0..grid.len())
        .map(|k| {
            let mut row = vec![grid[k]];
            for s in &sols {
                row.extend([s.r[k], s.phi[k][0], s.phi[k][1], s.residual[k]]);
            }
            row
        })
        .collect();
    let header_ref: Vec<&str> = header.iter().map(|s| s.as_str()).collect();
    sink.csv("reduce.csv", &header_ref, &rows)?;

    let forms: Vec<(ClosedForm, usize, Option<usize>)> = match id {
        ManifoldId::Gamma5 => vec![(ClosedForm::R2Gamma5, 2, None)],
        ManifoldId::Gamma4 => vec![(ClosedForm::Phi2Gamma4, 2, Some(0)), (ClosedForm::R3Gamma4, 3, None)],
        ManifoldId::Gamma2 => vec![],
    };
    let mut closed_forms = Vec::new();
    for (form, j, comp) in forms {
        if j > order {
            continue;
        }
        let sol = &sols[j - 1];
        for (k, &xi) in grid.iter().enumerate() {
            if form == ClosedForm::R3Gamma4 && (xi - 1.0).abs() <= 0.1 {
                continue;
            }
            let solver = match comp {
                Some(c) => sol.phi[k][c],
                None => sol.r[k],
            };
            let printed = closed_form_reduced(form, xi, &e)?;
            let derived = derived_closed_form(form, xi, &e)?;
            closed_forms.push(ClosedFormRow {
                name: form.as_str().into(),
                xi,
                solver,
                printed,
                derived,
                relative_to_printed: rel(solver, printed),
                relative_to_derived: rel(solver, derived),
            });
        }
    }
    let scaling = (1..=order)
        .map(|j| {
            let a = mm.conjugacy_residual(j, &grid, delta)?;
            let b = mm.conjugacy_residual(j, &grid, delta / 2.0)?;
            Ok(ScalingRow {
                order: j,
                delta,
                residual: a,
                residual_half: b,
                log2_ratio: (a / b).log2(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let out = ReduceOut {
        manifold: id.as_str().into(),
        right_inverse: right,
        order,
        grid: grid.clone(),
        max_residual: sols.iter().map(|s| s.max_residual()).collect(),
        closed_forms,
        scaling,
    };
    sink.json("reduce.json", &out)?;
    let mut plot = Plot::new(&format!("reduced field on {}", id.as_str()), mm.coordinate(), "r_j");
    for s in &sols {
        plot = plot.with(Series::new(format!("r{}", s.order), grid.iter().zip(&s.r).map(|(x, r)| [*x, *r]).collect()));
    }
    sink.svg("reduce.svg", &plot)?;

    let mut s = format!("{}: orders 1..={order} on {} points\n", id.as_str(), grid.len());
    for (j, r) in out.max_residual.iter().enumerate() {
        let _ = writeln!(s, "  order {}: max conjugacy residual {:.3e}", j + 1, r);
    }
    for r in &out.scaling {
        let _ = writeln!(
            s,
            "  order {}: residual at delta {:.1e} -> {:.3e}, halved -> {:.3e}, log2 ratio {:.3}",
            r.order, r.delta, r.residual, r.residual_half, r.log2_ratio
        );
    }
    for name in ["r2_gamma5", "phi2_gamma4", "r3_gamma4"] {
        let rows: Vec<&ClosedFormRow> = out.closed_forms.iter().filter(|c| c.name == name).collect();
        if rows.is_empty() {
            continue;
        }
        let p = rows.iter().map(|c| c.relative_to_printed).fold(0.0, f64::max);
        let d = rows.iter().map(|c| c.relative_to_derived).fold(0.0, f64::max);
        let _ = writeln!(s, "  {name}: max rel. diff vs printed {p:.3e}, vs derived {d:.3e}");
    }
    Ok(s)
}

pub fn blowup(cfg: &RunConfig, chart: &str, report: bool, sink: &mut Sink) -> Result<String> {
    let chart = ChartId::from_str(chart)?;
    let e = cfg.epsilon_params()?;
    let r: BlowupReport = chart_report(chart, &e, cfg.seed)?;
    sink.json(&format!("blowup_{chart}.json"), &r)?;
    let rows: Vec<(String, Vec<f64>)> = r
        .equilibria
        .iter()
        .map(|q| {
            let mut v = q.coords.to_vec();
            for l in &q.eigenvalues {
                v.extend(l);
            }
            v.resize(9, f64::NAN);
            (q.label.clone(), v)
        })
        .collect();
    let labels = chart.labels();
    sink.labelled_csv(
        &format!("equilibria_{chart}.csv"),
        &["label", labels[0], labels[1], labels[2], "re1", "im1", "re2", "im2", "re3", "im3"],
        &rows,
    )?;
    if report {
        return crate::output::canonical_json(&r);
    }
    let mut s = format!(
        "{chart}: pushforward residual {:.3e}, invariant-plane leak {:.3e}\n",
        r.pushforward_residual, r.invariant_plane_leak
    );
    for q in &r.equilibria {
        let ev: Vec<String> = q
            .eigenvalues
            .iter()
            .map(|l| if l[1] == 0.0 { format!("{:.6}", l[0]) } else { format!("{:.6}{:+.6}i", l[0], l[1]) })
            .collect();
        let _ = writeln!(s, "  {} at {:?}: spectrum ({}) {:?}", q.label, q.coords, ev.join(", "), q.hyperbolicity);
    }
    for c in &r.centre {
        for f in &c.fits {
            let _ = writeln!(
                s,
                "  {:?} {}: fitted power {:.3}, coefficient {:.5} vs {:.5} ({:.2}%)",
                c.point,
                f.name,
                f.fitted_power,
                f.fitted_coefficient,
                f.coefficient,
                100.0 * f.relative_error
            );
        }
    }
    for l in &r.landings {
        let _ = writeln!(s, "  {} reached {} at {:?} (t = {:.4e})", l.label, l.reached, l.point, l.time);
    }
    if let Some(o) = &r.omega07 {
        let _ = writeln!(s, "  omega07: closest approach to p0 {:.3e}, s3 monotone {}", o.min_distance, o.s3_monotone);
    }
    Ok(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Observable {
    Hausdorff,
    Period,
    Segments,
    Fold,
}

impl FromStr for Observable {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hausdorff" => Ok(Observable::Hausdorff),
            "period" => Ok(Observable::Period),
            "segments" => Ok(Observable::Segments),
            "fold" => Ok(Observable::Fold),
            _ => Err(Error::UnknownId {
                kind: "observable",
                id: s.into(),
                valid: "hausdorff, period, segments, fold".into(),
            }),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FoldRow {
    pub epsilon: f64,
    pub x_f1: f64,
    pub limit: f64,
    pub error: f64,
    pub ratio: Option<f64>,
    pub y_f1_over_sigma6: f64,
}

pub fn fold_sweep(base: &crate::params::EpsilonParams, eps: &[f64]) -> Result<Vec<FoldRow>> {
    let mut rows: Vec<FoldRow> = Vec::new();
    for &x in eps {
        let e = base.with_epsilon(x);
        e.validate()?;
        let d = e.to_dimensionless();
        let f = fold_points(&d)?;
        let limit = fold_limit_x(&e);
        let error = (f.x_f1 - limit).abs();
        let ratio = rows.last().map(|p| error / p.error);
        rows.push(FoldRow {
            epsilon: x,
            x_f1: f.x_f1,
            limit,
            error,
            ratio,
            y_f1_over_sigma6: f.y_f1 / d.hat_sigma6,
        });
    }
    Ok(rows)
}

pub fn sweep(cfg: &RunConfig, observable: &str, eps: &[f64], jobs: Option<usize>, sink: &mut Sink) -> Result<String> {
    let obs = Observable::from_str(observable)?;
    if eps.is_empty() {
        return Err(Error::Usage("--eps needs at least one value".into()));
    }
    let base = cfg.epsilon_params()?;
    let mut s = String::new();
    if obs == Observable::Fold {
        let rows = fold_sweep(&base, eps)?;
        sink.json("fold_sweep.json", &rows)?;
        sink.csv(
            "fold_sweep.csv",
            &["epsilon", "X_f1", "limit", "error", "ratio", "Y_f1_over_sigma6"],
            &rows
                .iter()
                .map(|r| vec![r.epsilon, r.x_f1, r.limit, r.error, r.ratio.unwrap_or(f64::NAN), r.y_f1_over_sigma6])
                .collect::<Vec<_>>(),
        )?;
        let _ = writeln!(s, "{:>8} {:>14} {:>12} {:>8} {:>10}", "epsilon", "X_f1", "error", "ratio", "Y_f1/s6");
        for r in &rows {
            let _ = writeln!(
                s,
                "{:>8} {:>14.8} {:>12.4e} {:>8} {:>10.4}",
                r.epsilon,
                r.x_f1,
                r.error,
                r.ratio.map_or("-".into(), |v| format!("{v:.3}")),
                r.y_f1_over_sigma6
            );
        }
        return Ok(s);
    }
    let seg = SegmentConfig::default();
    let rows = sweep_surrogate(&base, eps, &CycleOptions::default(), &seg, jobs)?;
    sink.csv(
        "sweep.csv",
        &["epsilon", "period", "hausdorff", "convergence", "steps", "orientation"],
        &rows
            .iter()
            .map(|r| vec![r.epsilon, r.period, r.hausdorff, r.convergence, r.steps as f64, r.orientation])
            .collect::<Vec<_>>(),
    )?;
    let mut header = vec!["epsilon".to_string()];
    for l in SEGMENT_LABELS {
        header.extend([format!("{l}_median"), format!("{l}_duration")]);
    }
    let seg_rows: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| {
            let mut v = vec![r.epsilon];
            for l in SEGMENT_LABELS {
                let sp = r.segments.get(l);
                v.push(sp.and_then(|x| x.median).unwrap_or(f64::NAN));
                v.push(sp.map_or(0.0, |x| x.duration));
            }
            v
        })
        .collect();
    let header_ref: Vec<&str> = header.iter().map(|s| s.as_str()).collect();
    sink.csv("segments.csv", &header_ref, &seg_rows)?;
    let tables: Vec<_> = rows.iter().map(|r| r.segments.clone()).collect();
    let fits = fit_exponents(&tables);
    sink.json("exponents.json", &fits)?;

    let col: Vec<f64> = rows
        .iter()
        .map(|r| match obs {
            Observable::Period => r.period,
            _ => r.hausdorff,
        })
        .collect();
    let name = if obs == Observable::Period { "period" } else { "hausdorff" };
    let plot = Plot {
        log_x: true,
        log_y: true,
        ..Plot::new(&format!("{name} against epsilon"), "epsilon", name)
    }
    .with(Series::new(name, eps.iter().zip(&col).map(|(e, v)| [*e, *v]).collect()));
    sink.svg(&format!("{name}.svg"), &plot)?;

    let _ = writeln!(s, "{:>8} {:>14} {:>12}", "epsilon", "period", "hausdorff");
    for r in &rows {
        let _ = writeln!(s, "{:>8} {:>14.6e} {:>12.6e}", r.epsilon, r.period, r.hausdorff);
    }
    match obs {
        Observable::Hausdorff => {
            let _ = writeln!(s, "hausdorff strictly decreasing: {}", strictly_decreasing(&col));
        }
        Observable::Period => {
            let _ = writeln!(s, "period strictly increasing: {}", strictly_increasing(&col));
        }
        Observable::Segments | Observable::Fold => {
            for f in &fits {
                let _ = writeln!(
                    s,
                    "{:<8} slope {}",
                    f.label,
                    f.slope.map_or("n/a".into(), |v| format!("{v:.3}"))
                );
            }
        }
    }
    Ok(s)
}

#[derive(Serialize)]
struct Check {
    name: String,
    value: String,
    pass: bool,
}

/// Self-checks against the embedded published values.
pub fn report(cfg: &RunConfig, sink: &mut Sink) -> Result<String> {
    let mut checks = Vec::new();
    let mut push = |name: &str, value: String, pass: bool| {
        checks.push(Check {
            name: name.into(),
            value,
            pass,
        })
    };
    let d = nondimensionalise(&cfg.biophysical)?;
    let table = table_comparison(&d);
    let worst = table.iter().map(|r| r.relative_difference).fold(0.0, f64::max);
    push("dimensionless table", format!("max rel. diff {worst:.3e}"), table.iter().all(|r| r.pass));

    let e = cfg.epsilon_params()?;
    let eq = equilibrium_xy(&e.to_dimensionless())?;
    push(
        "equilibrium class",
        format!("{:?} (tr {:.3e}, det {:.3e})", eq.classification, eq.trace, eq.determinant),
        eq.determinant > 0.0 && eq.trace > 0.0,
    );
    let folds = fold_sweep(&e, &[0.2, 0.1, 0.05, 0.025])?;
    let ratios_ok = folds.iter().filter_map(|r| r.ratio).all(|q| (0.15..=0.45).contains(&q));
    push(
        "fold convergence",
        format!("ratios {:?}", folds.iter().filter_map(|r| r.ratio).collect::<Vec<_>>()),
        ratios_ok,
    );
    let k1 = chart_report(ChartId::K1, &e, cfg.seed)?;
    let lam = k1.equilibria.iter().find(|q| q.label == "p1").map(|q| q.eigenvalues[1][0]);
    let target = -1.0 / (e.gamma * e.sigma1);
    push(
        "p1 eigenvalue",
        format!("{lam:?} vs {target:.6}"),
        lam.is_some_and(|l| (l - target).abs() < 1e-10),
    );
    let ctx = cfg.context()?;
    let c = model_cycle(ModelId::BiophysicalXy, &ctx, &CycleOptions::default())?;
    push(
        "biophysical period",
        format!("{:.6e} ms", c.period),
        ((c.period - 4.28e5) / 4.28e5).abs() < 0.02,
    );
    sink.json("report.json", &checks)?;
    let mut md = String::from("| check | value | pass |\n|---|---|---|\n");
    for c in &checks {
        let _ = writeln!(md, "| {} | {} | {} |", c.name, c.value, if c.pass { "yes" } else { "no" });
    }
    sink.text("report.md", &md)?;
    Ok(md)
}
