//! Poincaré sections, limit-cycle extraction and return-map contraction.

use serde::{Deserialize, Serialize};

use super::integrate::{check_initial, drive, Control, IntegratorStats, StepView, Tolerances};
use crate::error::{Error, Result};
use crate::models::VectorField;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Increasing,
    Decreasing,
    Either,
}

/// The hyperplane `state[coord] = value`, crossed in `direction`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Section {
    pub coord: usize,
    pub value: f64,
    pub direction: Direction,
}

impl Section {
    pub fn new(coord: usize, value: f64, direction: Direction) -> Self {
        Self { coord, value, direction }
    }

    fn crossed(&self, a: f64, b: f64) -> bool {
        let v = self.value;
        let up = a < v && b >= v;
        let down = a > v && b <= v;
        match self.direction {
            Direction::Increasing => up,
            Direction::Decreasing => down,
            Direction::Either => up || down,
        }
    }

    /// Crossing inside an accepted step, located by bisection on the dense output.
    pub fn locate(&self, view: &StepView) -> Option<(f64, Vec<f64>)> {
        if !self.crossed(view.y0[self.coord], view.y1[self.coord]) {
            return None;
        }
        let n = view.y0.len();
        let mut buf = vec![0.0; n];
        let (mut lo, mut hi) = (view.t0, view.t1);
        let g0 = view.y0[self.coord] - self.value;
        for _ in 0..200 {
            if (hi - lo).abs() <= 1e-12 * (1.0 + lo.abs().max(hi.abs())) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            view.interp(mid, &mut buf);
            if (buf[self.coord] - self.value) * g0 > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        view.interp(hi, &mut buf);
        buf[self.coord] = self.value;
        Some((hi, buf))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleOptions {
    pub tol: Tolerances,
    /// Give up after this much model time.
    pub max_duration: f64,
    /// Successive returns closer than this (relative to `max(1, |state|)`) end the search.
    pub return_tol: f64,
    pub max_returns: usize,
    /// Points per accepted step stored in the loop polyline (dense output fills the gaps).
    pub samples_per_step: usize,
}

impl Default for CycleOptions {
    fn default() -> Self {
        Self {
            tol: Tolerances::new(1e-10, 1e-14),
            max_duration: f64::INFINITY,
            return_tol: 1e-8,
            max_returns: 200,
            samples_per_step: 4,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LimitCycle {
    pub model: String,
    pub epsilon: Option<f64>,
    pub labels: Vec<String>,
    pub section: Section,
    /// Return time, in the model's own time unit.
    pub period: f64,
    /// Distance between the last two returns.
    pub convergence: f64,
    pub returns: usize,
    /// One closed loop starting and ending on the section.
    pub times: Vec<f64>,
    pub points: Vec<Vec<f64>>,
    pub section_point: Vec<f64>,
    pub stats: IntegratorStats,
}

impl LimitCycle {
    pub fn column(&self, i: usize) -> Vec<f64> {
        self.points.iter().map(|p| p[i]).collect()
    }

    /// Planar polyline of coordinates `(i, j)`.
    pub fn polyline(&self, i: usize, j: usize) -> Vec<[f64; 2]> {
        self.points.iter().map(|p| [p[i], p[j]]).collect()
    }

    /// Twice the signed area enclosed by the planar projection; positive for counterclockwise.
    pub fn signed_area(&self, i: usize, j: usize) -> f64 {
        let p = self.polyline(i, j);
        let mut a = 0.0;
        for k in 0..p.len() {
            let (x0, y0) = (p[k][0], p[k][1]);
            let (x1, y1) = (p[(k + 1) % p.len()][0], p[(k + 1) % p.len()][1]);
            a += x0 * y1 - x1 * y0;
        }
        a
    }
}

/// Dense samples strictly after `from` up to and including the step end.
fn push_samples(v: &StepView, from: f64, n: usize, ts: &mut Vec<f64>, ys: &mut Vec<Vec<f64>>) {
    push_samples_until(v, from, v.t1, n, ts, ys);
    ts.push(v.t1);
    ys.push(v.y1.to_vec());
}

/// Dense samples strictly between `from` and `to`.
fn push_samples_until(v: &StepView, from: f64, to: f64, n: usize, ts: &mut Vec<f64>, ys: &mut Vec<Vec<f64>>) {
    let mut buf = vec![0.0; v.y0.len()];
    for k in 1..n.max(1) {
        let t = from + (to - from) * k as f64 / n as f64;
        v.interp(t, &mut buf);
        ts.push(t);
        ys.push(buf.clone());
    }
}

fn return_distance(a: &[f64], b: &[f64]) -> f64 {
    let scale = a.iter().chain(b).fold(1.0f64, |m, v| m.max(v.abs()));
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) / scale
}

/// Integrate past transients until two successive section returns agree.
pub fn find_limit_cycle(
    f: &dyn VectorField,
    y0: &[f64],
    section: Section,
    opts: &CycleOptions,
    epsilon: Option<f64>,
) -> Result<LimitCycle> {
    check_initial(f, y0)?;
    let mut crossings: Vec<(f64, Vec<f64>)> = Vec::new();
    let mut loop_t: Vec<f64> = Vec::new();
    let mut loop_y: Vec<Vec<f64>> = Vec::new();
    let mut done: Option<(Vec<f64>, Vec<Vec<f64>>, f64)> = None;
    let run = drive(f, y0, 0.0, opts.max_duration, &opts.tol, |v| {
        if let Some((tc, yc)) = section.locate(v) {
            if let Some((tp, yp)) = crossings.last() {
                let d = return_distance(yp, &yc);
                if d < opts.return_tol {
                    let mut ts = std::mem::take(&mut loop_t);
                    let mut ys = std::mem::take(&mut loop_y);
                    push_samples_until(v, v.t0, tc, opts.samples_per_step, &mut ts, &mut ys);
                    ts.push(tc);
                    ys.push(yc.clone());
                    let t_start = *tp;
                    for t in ts.iter_mut() {
                        *t -= t_start;
                    }
                    done = Some((ts, ys, d));
                    crossings.push((tc, yc));
                    return Control::Stop;
                }
            }
            loop_t = vec![tc];
            loop_y = vec![yc.clone()];
            push_samples(v, tc, opts.samples_per_step, &mut loop_t, &mut loop_y);
            crossings.push((tc, yc));
            if crossings.len() > opts.max_returns {
                return Control::Stop;
            }
        } else if !crossings.is_empty() {
            push_samples(v, v.t0, opts.samples_per_step, &mut loop_t, &mut loop_y);
        }
        Control::Continue
    })?;
    let Some((times, points, convergence)) = done else {
        let last_gap = if crossings.len() >= 2 {
            let k = crossings.len();
            format!("{:.3e}", return_distance(&crossings[k - 2].1, &crossings[k - 1].1))
        } else {
            "n/a".into()
        };
        return Err(Error::NoCycle(format!(
            "{}: {} section returns by t = {:.6e}, last return gap {last_gap}",
            f.id(),
            crossings.len(),
            run.t
        )));
    };
    let k = crossings.len();
    Ok(LimitCycle {
        model: f.id().into(),
        epsilon,
        labels: f.labels().iter().map(|s| s.to_string()).collect(),
        section,
        period: crossings[k - 1].0 - crossings[k - 2].0,
        convergence,
        returns: k,
        times,
        points,
        section_point: crossings[k - 1].1.clone(),
        stats: run.stats,
    })
}

/// Next section crossing from `y0`, or a no-cycle error within `max_duration`.
pub fn next_return(
    f: &dyn VectorField,
    y0: &[f64],
    section: Section,
    tol: &Tolerances,
    max_duration: f64,
) -> Result<(f64, Vec<f64>)> {
    let mut hit = None;
    drive(f, y0, 0.0, max_duration, tol, |v| {
        if let Some(c) = section.locate(v) {
            hit = Some(c);
            Control::Stop
        } else {
            Control::Continue
        }
    })?;
    hit.ok_or_else(|| Error::NoCycle(format!("{}: no section return within {max_duration:.3e}", f.id())))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Contraction {
    pub offset: f64,
    pub initial_gap: f64,
    pub returned_gap: f64,
    pub factor: f64,
}

/// Displace the cycle's section point by `±offset` along coordinate `along`
/// and compare the gap after one return with the initial gap.
pub fn return_map_contraction(
    f: &dyn VectorField,
    cycle: &LimitCycle,
    along: usize,
    offset: f64,
    tol: &Tolerances,
) -> Result<Contraction> {
    if along == cycle.section.coord {
        return Err(Error::Usage("offset direction must lie inside the section".into()));
    }
    let mut a = cycle.section_point.clone();
    let mut b = cycle.section_point.clone();
    a[along] -= offset;
    b[along] += offset;
    let horizon = 3.0 * cycle.period;
    let (_, ra) = next_return(f, &a, cycle.section, tol, horizon)?;
    let (_, rb) = next_return(f, &b, cycle.section, tol, horizon)?;
    let initial_gap = 2.0 * offset;
    let returned_gap = ra.iter().zip(&rb).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    Ok(Contraction {
        offset,
        initial_gap,
        returned_gap,
        factor: returned_gap / initial_gap,
    })
}
