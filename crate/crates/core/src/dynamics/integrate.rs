//! Adaptive integration: Dormand–Prince 5(4) with PI step control and dense
//! output, plus an implicit trapezoidal fallback for stiff stretches.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::VectorField;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Dopri5,
    Trapezoid,
    /// Dormand–Prince first; trapezoid if the explicit run reports stiffness.
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub rel: f64,
    pub abs: f64,
    /// Initial step; chosen automatically when `None`.
    pub h_init: Option<f64>,
    pub h_max: f64,
    /// Steps below this (relative to |t|+1) raise a stiffness error.
    pub h_min_rel: f64,
    pub max_steps: usize,
    pub method: Method,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rel: 1e-9,
            abs: 1e-12,
            h_init: None,
            h_max: f64::INFINITY,
            h_min_rel: 1e-14,
            max_steps: 5_000_000,
            method: Method::Dopri5,
        }
    }
}

impl Tolerances {
    pub fn new(rel: f64, abs: f64) -> Self {
        Self {
            rel,
            abs,
            ..Self::default()
        }
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn with_h_max(mut self, h_max: f64) -> Self {
        self.h_max = h_max;
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct IntegratorStats {
    pub steps: usize,
    pub rejects: usize,
    pub fevals: usize,
    pub clamp_events: usize,
    pub method: String,
}

/// A non-negativity clamp applied after an accepted step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClampEvent {
    pub t: f64,
    pub index: usize,
    pub value: f64,
}

/// One accepted step with its continuous extension.
pub struct StepView<'a> {
    pub t0: f64,
    pub t1: f64,
    pub y0: &'a [f64],
    pub y1: &'a [f64],
    dense: Dense<'a>,
}

enum Dense<'a> {
    Dopri(&'a [Vec<f64>; 5]),
    Hermite { f0: &'a [f64], f1: &'a [f64] },
}

impl StepView<'_> {
    /// State at `t ∈ [t0, t1]` from the step's continuous extension.
    pub fn interp(&self, t: f64, out: &mut [f64]) {
        let h = self.t1 - self.t0;
        let th = if h == 0.0 { 1.0 } else { (t - self.t0) / h };
        match &self.dense {
            Dense::Dopri(r) => {
                let th1 = 1.0 - th;
                for i in 0..out.len() {
                    out[i] = r[0][i] + th * (r[1][i] + th1 * (r[2][i] + th * (r[3][i] + th1 * r[4][i])));
                }
            }
            Dense::Hermite { f0, f1 } => {
                let (h00, h10, h01, h11) = (
                    2.0 * th.powi(3) - 3.0 * th * th + 1.0,
                    th.powi(3) - 2.0 * th * th + th,
                    -2.0 * th.powi(3) + 3.0 * th * th,
                    th.powi(3) - th * th,
                );
                for i in 0..out.len() {
                    out[i] = h00 * self.y0[i] + h10 * h * f0[i] + h01 * self.y1[i] + h11 * h * f1[i];
                }
            }
        }
    }
}

/// What the observer wants after each step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

/// Outcome of a driven integration.
#[derive(Clone, Debug)]
pub struct RunSummary {
    pub t: f64,
    pub y: Vec<f64>,
    pub stats: IntegratorStats,
    pub clamps: Vec<ClampEvent>,
    pub stopped_early: bool,
}

// Dormand–Prince tableau (autonomous fields, so the nodes are not needed).
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

// PI controller constants.
const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

fn clamp_state(f: &dyn VectorField, t: f64, y: &mut [f64], clamps: &mut Vec<ClampEvent>) {
    for (i, &nn) in f.nonnegative().iter().enumerate() {
        if nn && y[i] < 0.0 {
            clamps.push(ClampEvent { t, index: i, value: y[i] });
            y[i] = 0.0;
        }
    }
}

fn err_norm(err: &[f64], y0: &[f64], y1: &[f64], tol: &Tolerances) -> f64 {
    let n = err.len() as f64;
    let mut acc = 0.0;
    for i in 0..err.len() {
        let sc = tol.abs + tol.rel * y0[i].abs().max(y1[i].abs());
        acc += (err[i] / sc).powi(2);
    }
    (acc / n).sqrt()
}

fn initial_step(f: &dyn VectorField, t_span: f64, y0: &[f64], f0: &[f64], tol: &Tolerances, order: i32) -> f64 {
    let n = y0.len();
    let mut d0 = 0.0;
    let mut d1 = 0.0;
    for i in 0..n {
        let sc = tol.abs + tol.rel * y0[i].abs();
        d0 += (y0[i] / sc).powi(2);
        d1 += (f0[i] / sc).powi(2);
    }
    let (d0, d1) = ((d0 / n as f64).sqrt(), (d1 / n as f64).sqrt());
    let mut h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h0 = h0.min(t_span.abs()).min(tol.h_max);
    let y1: Vec<f64> = (0..n).map(|i| y0[i] + h0 * f0[i]).collect();
    let mut f1 = vec![0.0; n];
    f.rhs(&y1, &mut f1);
    let mut d2 = 0.0;
    for i in 0..n {
        let sc = tol.abs + tol.rel * y0[i].abs();
        d2 += ((f1[i] - f0[i]) / sc).powi(2);
    }
    let d2 = (d2 / n as f64).sqrt() / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(1.0 / (order as f64 + 1.0))
    };
    (100.0 * h0).min(h1).min(t_span.abs()).min(tol.h_max)
}

/// Integrate from `t0` to `t_end`, calling `observer` after each accepted step.
pub fn drive<O>(f: &dyn VectorField, y0: &[f64], t0: f64, t_end: f64, tol: &Tolerances, observer: O) -> Result<RunSummary>
where
    O: FnMut(&StepView) -> Control,
{
    match tol.method {
        Method::Dopri5 => drive_dopri(f, y0, t0, t_end, tol, observer),
        Method::Trapezoid => drive_trapezoid(f, y0, t0, t_end, tol, observer),
        Method::Auto => {
            let mut obs = observer;
            match drive_dopri(f, y0, t0, t_end, tol, &mut obs) {
                Err(Error::Stiffness(_)) => drive_trapezoid(f, y0, t0, t_end, tol, &mut obs),
                other => other,
            }
        }
    }
}

fn drive_dopri<O>(f: &dyn VectorField, y0: &[f64], t0: f64, t_end: f64, tol: &Tolerances, mut observer: O) -> Result<RunSummary>
where
    O: FnMut(&StepView) -> Control,
{
    let n = y0.len();
    let dir = if t_end >= t0 { 1.0 } else { -1.0 };
    let mut stats = IntegratorStats {
        method: "dopri5".into(),
        ..Default::default()
    };
    let mut clamps = Vec::new();
    let mut y = y0.to_vec();
    let mut t = t0;
    let mut k: [Vec<f64>; 7] = std::array::from_fn(|_| vec![0.0; n]);
    let mut ytmp = vec![0.0; n];
    let mut ynew = vec![0.0; n];
    let mut err = vec![0.0; n];
    let mut rcont: [Vec<f64>; 5] = std::array::from_fn(|_| vec![0.0; n]);
    f.rhs(&y, &mut k[0]);
    stats.fevals += 1;
    let mut h = tol.h_init.unwrap_or_else(|| initial_step(f, t_end - t0, &y, &k[0], tol, 5)).abs();
    stats.fevals += 1;
    let mut fac_old: f64 = 1e-4;
    let mut last_rejected = false;

    while dir * (t_end - t) > 0.0 {
        if stats.steps + stats.rejects >= tol.max_steps {
            return Err(Error::Stiffness(format!(
                "dopri5 exceeded {} steps at t = {t:.6e} (h = {h:.3e}) in {}",
                tol.max_steps,
                f.id()
            )));
        }
        let h_min = tol.h_min_rel * (t.abs() + 1.0);
        if h < h_min {
            return Err(Error::Stiffness(format!(
                "dopri5 step {h:.3e} below {h_min:.3e} at t = {t:.6e} in {}",
                f.id()
            )));
        }
        h = h.min(tol.h_max);
        let mut last = false;
        if dir * (t + dir * h - t_end) >= 0.0 {
            h = (t_end - t).abs();
            last = true;
        }
        let hs = dir * h;

        for i in 0..n {
            ytmp[i] = y[i] + hs * A21 * k[0][i];
        }
        f.rhs(&ytmp, &mut k[1]);
        for i in 0..n {
            ytmp[i] = y[i] + hs * (A31 * k[0][i] + A32 * k[1][i]);
        }
        f.rhs(&ytmp, &mut k[2]);
        for i in 0..n {
            ytmp[i] = y[i] + hs * (A41 * k[0][i] + A42 * k[1][i] + A43 * k[2][i]);
        }
        f.rhs(&ytmp, &mut k[3]);
        for i in 0..n {
            ytmp[i] = y[i] + hs * (A51 * k[0][i] + A52 * k[1][i] + A53 * k[2][i] + A54 * k[3][i]);
        }
        f.rhs(&ytmp, &mut k[4]);
        for i in 0..n {
            ytmp[i] = y[i] + hs * (A61 * k[0][i] + A62 * k[1][i] + A63 * k[2][i] + A64 * k[3][i] + A65 * k[4][i]);
        }
        f.rhs(&ytmp, &mut k[5]);
        for i in 0..n {
            ynew[i] = y[i] + hs * (A71 * k[0][i] + A73 * k[2][i] + A74 * k[3][i] + A75 * k[4][i] + A76 * k[5][i]);
        }
        f.rhs(&ynew, &mut k[6]);
        stats.fevals += 6;
        for i in 0..n {
            err[i] = hs
                * (E1 * k[0][i] + E3 * k[2][i] + E4 * k[3][i] + E5 * k[4][i] + E6 * k[5][i] + E7 * k[6][i]);
        }
        let en = err_norm(&err, &y, &ynew, tol);
        if !en.is_finite() {
            stats.rejects += 1;
            h *= FAC_MIN;
            last_rejected = true;
            continue;
        }
        let expo1 = 0.2 - BETA * 0.75;
        let fac11 = en.powf(expo1);
        if en <= 1.0 {
            let mut fac = fac11 / fac_old.powf(BETA);
            fac = (fac / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
            let mut h_new = h / fac;
            if last_rejected {
                h_new = h_new.min(h);
            }
            fac_old = en.max(1e-4);

            for i in 0..n {
                let ydiff = ynew[i] - y[i];
                let bspl = hs * k[0][i] - ydiff;
                rcont[0][i] = y[i];
                rcont[1][i] = ydiff;
                rcont[2][i] = bspl;
                rcont[3][i] = ydiff - hs * k[6][i] - bspl;
                rcont[4][i] = hs
                    * (D1 * k[0][i] + D3 * k[2][i] + D4 * k[3][i] + D5 * k[4][i] + D6 * k[5][i] + D7 * k[6][i]);
            }
            let t_new = if last { t_end } else { t + hs };
            let n_before = clamps.len();
            clamp_state(f, t_new, &mut ynew, &mut clamps);
            if clamps.len() != n_before {
                f.rhs(&ynew, &mut k[6]);
                stats.fevals += 1;
            }
            stats.steps += 1;
            let view = StepView {
                t0: t,
                t1: t_new,
                y0: &y,
                y1: &ynew,
                dense: Dense::Dopri(&rcont),
            };
            let ctl = observer(&view);
            t = t_new;
            std::mem::swap(&mut y, &mut ynew);
            let k6 = std::mem::take(&mut k[6]);
            k[0] = k6;
            k[6] = vec![0.0; n];
            h = h_new;
            last_rejected = false;
            if ctl == Control::Stop {
                stats.clamp_events = clamps.len();
                return Ok(RunSummary {
                    t,
                    y,
                    stats,
                    clamps,
                    stopped_early: true,
                });
            }
        } else {
            stats.rejects += 1;
            h /= (fac11 / SAFETY).min(1.0 / FAC_MIN);
            last_rejected = true;
        }
    }
    stats.clamp_events = clamps.len();
    Ok(RunSummary {
        t,
        y,
        stats,
        clamps,
        stopped_early: false,
    })
}

/// One trapezoidal step solved by Newton iteration.
fn trapezoid_step(
    f: &dyn VectorField,
    y: &[f64],
    fy: &[f64],
    h: f64,
    stats: &mut IntegratorStats,
) -> Option<(Vec<f64>, Vec<f64>)> {
    let n = y.len();
    let mut z: Vec<f64> = (0..n).map(|i| y[i] + h * fy[i]).collect();
    let mut fz = vec![0.0; n];
    let jac = f.jacobian(y);
    let m = DMatrix::<f64>::identity(n, n) - jac * (0.5 * h);
    let lu = m.lu();
    for _ in 0..12 {
        f.rhs(&z, &mut fz);
        stats.fevals += 1;
        let g = DVector::from_fn(n, |i, _| z[i] - y[i] - 0.5 * h * (fy[i] + fz[i]));
        let dz = lu.solve(&g)?;
        let mut small = true;
        for i in 0..n {
            z[i] -= dz[i];
            if dz[i].abs() > 1e-12 * (1.0 + z[i].abs()) {
                small = false;
            }
        }
        if small {
            f.rhs(&z, &mut fz);
            stats.fevals += 1;
            return Some((z, fz));
        }
    }
    None
}

fn drive_trapezoid<O>(
    f: &dyn VectorField,
    y0: &[f64],
    t0: f64,
    t_end: f64,
    tol: &Tolerances,
    mut observer: O,
) -> Result<RunSummary>
where
    O: FnMut(&StepView) -> Control,
{
    let n = y0.len();
    let dir = if t_end >= t0 { 1.0 } else { -1.0 };
    let mut stats = IntegratorStats {
        method: "trapezoid".into(),
        ..Default::default()
    };
    let mut clamps = Vec::new();
    let mut y = y0.to_vec();
    let mut fy = vec![0.0; n];
    f.rhs(&y, &mut fy);
    let mut t = t0;
    let mut h = tol.h_init.unwrap_or_else(|| initial_step(f, t_end - t0, &y, &fy, tol, 2)).abs();
    while dir * (t_end - t) > 0.0 {
        if stats.steps + stats.rejects >= tol.max_steps {
            return Err(Error::Stiffness(format!(
                "trapezoid exceeded {} steps at t = {t:.6e} in {}",
                tol.max_steps,
                f.id()
            )));
        }
        let h_min = tol.h_min_rel * (t.abs() + 1.0);
        if h < h_min {
            return Err(Error::Stiffness(format!(
                "trapezoid step {h:.3e} below {h_min:.3e} at t = {t:.6e} in {}",
                f.id()
            )));
        }
        h = h.min(tol.h_max);
        let mut last = false;
        if dir * (t + dir * h - t_end) >= 0.0 {
            h = (t_end - t).abs();
            last = true;
        }
        let hs = dir * h;
        // Step doubling: one full step against two half steps.
        let full = trapezoid_step(f, &y, &fy, hs, &mut stats);
        let half = trapezoid_step(f, &y, &fy, 0.5 * hs, &mut stats)
            .and_then(|(ym, fm)| trapezoid_step(f, &ym, &fm, 0.5 * hs, &mut stats));
        let (Some((yf, _)), Some((yh, fh))) = (full, half) else {
            stats.rejects += 1;
            h *= 0.25;
            continue;
        };
        let err: Vec<f64> = (0..n).map(|i| (yh[i] - yf[i]) / 3.0).collect();
        let en = err_norm(&err, &y, &yh, tol);
        let fac = if en == 0.0 { FAC_MAX } else { (SAFETY * en.powf(-1.0 / 3.0)).clamp(FAC_MIN, FAC_MAX) };
        if en <= 1.0 {
            let mut ynew: Vec<f64> = (0..n).map(|i| yh[i] + err[i]).collect();
            let t_new = if last { t_end } else { t + hs };
            clamp_state(f, t_new, &mut ynew, &mut clamps);
            let mut fnew = fh;
            f.rhs(&ynew, &mut fnew);
            stats.fevals += 1;
            stats.steps += 1;
            let view = StepView {
                t0: t,
                t1: t_new,
                y0: &y,
                y1: &ynew,
                dense: Dense::Hermite { f0: &fy, f1: &fnew },
            };
            let ctl = observer(&view);
            t = t_new;
            y = ynew;
            fy = fnew;
            h *= fac;
            if ctl == Control::Stop {
                stats.clamp_events = clamps.len();
                return Ok(RunSummary {
                    t,
                    y,
                    stats,
                    clamps,
                    stopped_early: true,
                });
            }
        } else {
            stats.rejects += 1;
            h *= fac.min(0.9);
        }
    }
    stats.clamp_events = clamps.len();
    Ok(RunSummary {
        t,
        y,
        stats,
        clamps,
        stopped_early: false,
    })
}

/// Time-stamped states of one run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Trajectory {
    pub model: String,
    pub epsilon: Option<f64>,
    pub labels: Vec<String>,
    pub t: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub stats: IntegratorStats,
    pub tolerances: Tolerances,
    pub clamps: Vec<ClampEvent>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn last_state(&self) -> &[f64] {
        self.states.last().map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Component `i` across all samples.
    pub fn column(&self, i: usize) -> Vec<f64> {
        self.states.iter().map(|s| s[i]).collect()
    }
}

/// Integrate for `duration`, recording every accepted step (and the start).
pub fn integrate(
    f: &dyn VectorField,
    y0: &[f64],
    duration: f64,
    tol: &Tolerances,
    epsilon: Option<f64>,
) -> Result<Trajectory> {
    check_initial(f, y0)?;
    let mut t = vec![0.0];
    let mut states = vec![y0.to_vec()];
    let run = drive(f, y0, 0.0, duration, tol, |v| {
        t.push(v.t1);
        states.push(v.y1.to_vec());
        Control::Continue
    })?;
    Ok(Trajectory {
        model: f.id().into(),
        epsilon,
        labels: f.labels().iter().map(|s| s.to_string()).collect(),
        t,
        states,
        stats: run.stats,
        tolerances: *tol,
        clamps: run.clamps,
    })
}

/// Reject initial states outside the model's domain.
pub fn check_initial(f: &dyn VectorField, y0: &[f64]) -> Result<()> {
    if y0.len() != f.dim() {
        return Err(Error::Usage(format!(
            "{} expects {} coordinates, got {}",
            f.id(),
            f.dim(),
            y0.len()
        )));
    }
    for (i, (&v, &nn)) in y0.iter().zip(f.nonnegative()).enumerate() {
        if !v.is_finite() || (nn && v < 0.0) {
            return Err(Error::domain(f.labels()[i], v, "outside the model's domain"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Decay;
    impl VectorField for Decay {
        fn id(&self) -> &'static str {
            "decay"
        }
        fn labels(&self) -> &'static [&'static str] {
            &["u", "v"]
        }
        fn nonnegative(&self) -> &'static [bool] {
            &[false, false]
        }
        fn rhs(&self, s: &[f64], out: &mut [f64]) {
            out[0] = s[1];
            out[1] = -s[0];
        }
    }

    #[test]
    fn harmonic_oscillator_both_methods() {
        for m in [Method::Dopri5, Method::Trapezoid] {
            let tol = Tolerances::new(1e-10, 1e-12).with_method(m);
            let tr = integrate(&Decay, &[1.0, 0.0], 10.0, &tol, None).unwrap();
            let y = tr.last_state();
            let bound = if m == Method::Dopri5 { 1e-8 } else { 1e-6 };
            assert!((y[0] - 10f64.cos()).abs() < bound, "{m:?} {y:?}");
            assert!((y[1] + 10f64.sin()).abs() < bound, "{m:?}");
        }
    }

    #[test]
    fn dense_output_is_accurate_inside_steps() {
        let tol = Tolerances::new(1e-10, 1e-12);
        let mut worst: f64 = 0.0;
        drive(&Decay, &[1.0, 0.0], 0.0, 5.0, &tol, |v| {
            let mut out = [0.0; 2];
            let tm = 0.5 * (v.t0 + v.t1);
            v.interp(tm, &mut out);
            worst = worst.max((out[0] - tm.cos()).abs());
            Control::Continue
        })
        .unwrap();
        assert!(worst < 1e-8, "{worst}");
    }
}
