//! Partition of a surrogate cycle into timescale segments and log-log fits of
//! their speeds across an ε-sweep.

use serde::{Deserialize, Serialize};

use super::cycle::LimitCycle;
use crate::models::{SurrogateXz, VectorField};
use crate::params::EpsilonParams;

/// Membership thresholds. Heuristic defaults, not derived quantities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentConfig {
    /// Half-width of the band around `Z = 1/(γσ₁)`.
    pub top_band: f64,
    /// Left segment: `X < ε^left_exp`.
    pub left_exp: f64,
    /// Bottom segments: `Z < ε^bottom_exp`.
    pub bottom_exp: f64,
    /// Bottom split between Γ₅ and Γ₄a at `X = ε^split_exp`.
    pub split_exp: f64,
}

impl Default for SegmentConfig {
    fn default() -> Self {
        Self {
            top_band: 0.1,
            left_exp: 1.5,
            bottom_exp: 1.5,
            split_exp: 0.5,
        }
    }
}

pub const SEGMENT_LABELS: [&str; 5] = ["gamma2", "gamma1", "gamma5", "gamma4a", "jump"];

/// Segment index of a point, in [`SEGMENT_LABELS`] order.
pub fn classify(x: f64, z: f64, e: &EpsilonParams, cfg: &SegmentConfig) -> usize {
    let eps = e.epsilon;
    if (z - 1.0 / (e.gamma * e.sigma1)).abs() < cfg.top_band {
        0
    } else if x < eps.powf(cfg.left_exp) {
        1
    } else if z < eps.powf(cfg.bottom_exp) {
        if x < eps.powf(cfg.split_exp) {
            2
        } else {
            3
        }
    } else {
        4
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentSpeed {
    pub label: String,
    pub samples: usize,
    /// Time spent in the segment.
    pub duration: f64,
    pub min: Option<f64>,
    pub median: Option<f64>,
    pub max: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentTable {
    pub epsilon: f64,
    pub segments: Vec<SegmentSpeed>,
    pub warnings: Vec<String>,
}

impl SegmentTable {
    pub fn get(&self, label: &str) -> Option<&SegmentSpeed> {
        self.segments.iter().find(|s| s.label == label)
    }
}

fn median(v: &mut [f64]) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    Some(if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) })
}

/// Minimum and median field norm per segment of a surrogate cycle.
pub fn segment_speeds(cycle: &LimitCycle, e: &EpsilonParams, cfg: &SegmentConfig) -> SegmentTable {
    let field = SurrogateXz::new(*e);
    let mut speeds: Vec<Vec<f64>> = vec![Vec::new(); SEGMENT_LABELS.len()];
    let mut durations = [0.0; 5];
    let mut out = [0.0; 2];
    for (k, p) in cycle.points.iter().enumerate() {
        let seg = classify(p[0], p[1], e, cfg);
        field.rhs(p, &mut out);
        speeds[seg].push(out[0].hypot(out[1]));
        if k + 1 < cycle.points.len() {
            durations[seg] += cycle.times[k + 1] - cycle.times[k];
        }
    }
    let mut warnings = Vec::new();
    let segments = SEGMENT_LABELS
        .iter()
        .zip(speeds.iter_mut())
        .zip(durations)
        .map(|((label, v), duration)| {
            if v.is_empty() {
                warnings.push(format!("segment {label} is empty at epsilon = {}", e.epsilon));
            }
            SegmentSpeed {
                label: label.to_string(),
                samples: v.len(),
                duration,
                min: v.iter().cloned().reduce(f64::min),
                max: v.iter().cloned().reduce(f64::max),
                median: median(v),
            }
        })
        .collect();
    SegmentTable {
        epsilon: e.epsilon,
        segments,
        warnings,
    }
}

/// Least-squares line through `(x, y)` pairs: `(slope, intercept)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    let n = xs.len();
    if n < 2 {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub label: String,
    /// Fitted exponent of the median speed, `None` with fewer than two non-empty samples.
    pub slope: Option<f64>,
    pub slope_of_min: Option<f64>,
    pub slope_of_max: Option<f64>,
    pub epsilons: Vec<f64>,
}

/// Fit `log(speed)` against `log(ε)` per segment.
pub fn fit_exponents(tables: &[SegmentTable]) -> Vec<ExponentFit> {
    SEGMENT_LABELS
        .iter()
        .map(|label| {
            let rows: Vec<(f64, f64, f64, f64)> = tables
                .iter()
                .filter_map(|t| {
                    let s = t.get(label)?;
                    Some((t.epsilon.ln(), s.median?.ln(), s.min?.ln(), s.max?.ln()))
                })
                .collect();
            let xs: Vec<f64> = rows.iter().map(|r| r.0).collect();
            let med: Vec<f64> = rows.iter().map(|r| r.1).collect();
            let mins: Vec<f64> = rows.iter().map(|r| r.2).collect();
            let maxs: Vec<f64> = rows.iter().map(|r| r.3).collect();
            ExponentFit {
                label: label.to_string(),
                slope: linear_fit(&xs, &med).map(|f| f.0),
                slope_of_min: linear_fit(&xs, &mins).map(|f| f.0),
                slope_of_max: linear_fit(&xs, &maxs).map(|f| f.0),
                epsilons: rows.iter().map(|r| r.0.exp()).collect(),
            }
        })
        .collect()
}
