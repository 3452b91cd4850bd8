//! Map surrogate (X, Z; τ̄) output back to the perturbed X–Y system (X, Y; τ).

use super::cycle::LimitCycle;
use super::integrate::Trajectory;
use crate::models::SurrogateXz;
use crate::params::EpsilonParams;

/// `Y = Z²` and `τ = ∫ 2Z(σ₁X²Z² + ε²(σ₂X² + σ₃Z² + σ₄)) dτ̄` by the trapezoidal rule.
pub fn map_states_times(times: &[f64], states: &[Vec<f64>], e: &EpsilonParams) -> (Vec<f64>, Vec<Vec<f64>>) {
    let m = SurrogateXz::new(*e);
    let mut t_out = Vec::with_capacity(times.len());
    let mut acc = times.first().copied().unwrap_or(0.0);
    let mut prev: Option<(f64, f64)> = None;
    for (t, s) in times.iter().zip(states) {
        let g = m.time_factor(s[0], s[1]);
        if let Some((tp, gp)) = prev {
            acc += 0.5 * (g + gp) * (t - tp);
        }
        t_out.push(acc);
        prev = Some((*t, g));
    }
    let y_out = states.iter().map(|s| vec![s[0], s[1] * s[1]]).collect();
    (t_out, y_out)
}

pub fn map_xz_to_xy(t: &Trajectory, e: &EpsilonParams) -> Trajectory {
    let (times, states) = map_states_times(&t.t, &t.states, e);
    Trajectory {
        model: "perturbed-xy".into(),
        epsilon: Some(e.epsilon),
        labels: vec!["X".into(), "Y".into()],
        t: times,
        states,
        stats: t.stats.clone(),
        tolerances: t.tolerances,
        clamps: t.clamps.clone(),
    }
}

/// Mapped cycle; the period is the remapped loop duration.
pub fn map_cycle_xz_to_xy(c: &LimitCycle, e: &EpsilonParams) -> LimitCycle {
    let (times, points) = map_states_times(&c.times, &c.points, e);
    let period = times.last().copied().unwrap_or(0.0) - times.first().copied().unwrap_or(0.0);
    let mut sp = c.section_point.clone();
    sp[1] *= sp[1];
    LimitCycle {
        model: "perturbed-xy".into(),
        epsilon: Some(e.epsilon),
        labels: vec!["X".into(), "Y".into()],
        section: c.section,
        period,
        convergence: c.convergence,
        returns: c.returns,
        times,
        points,
        section_point: sp,
        stats: c.stats.clone(),
    }
}
