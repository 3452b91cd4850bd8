use amo::dynamics::cycle::CycleOptions;
use amo::dynamics::{drive, surrogate_cycle, Control, Method, Tolerances};
use amo::models::{SurrogateXz, VectorField};
use amo::params::EpsilonParams;

/// Surrogate field plus forcing whose exact solution is a polynomial in t.
struct Manufactured(SurrogateXz);

fn exact(t: f64) -> [f64; 2] {
    [0.3 + 0.1 * t + 0.05 * t * t, 1.0 - 0.2 * t + 0.03 * t * t * t]
}

fn exact_dt(t: f64) -> [f64; 2] {
    [0.1 + 0.1 * t, -0.2 + 0.09 * t * t]
}

impl VectorField for Manufactured {
    fn id(&self) -> &'static str {
        "manufactured"
    }
    fn labels(&self) -> &'static [&'static str] {
        &["t", "X", "Z"]
    }
    fn nonnegative(&self) -> &'static [bool] {
        &[false, false, false]
    }
    fn rhs(&self, s: &[f64], out: &mut [f64]) {
        let mut f = [0.0; 2];
        let mut g = [0.0; 2];
        self.0.rhs(&s[1..], &mut f);
        self.0.rhs(&exact(s[0]), &mut g);
        let d = exact_dt(s[0]);
        out[0] = 1.0;
        out[1] = f[0] + d[0] - g[0];
        out[2] = f[1] + d[1] - g[1];
    }
}

const HORIZON: f64 = 3.0;

fn error_at(method: Method, h: f64) -> f64 {
    let f = Manufactured(SurrogateXz::new(EpsilonParams::default()));
    let tol = Tolerances {
        rel: 1e6,
        abs: 1e6,
        h_init: Some(h),
        h_max: h,
        ..Tolerances::default()
    }
    .with_method(method);
    let y0 = [0.0, exact(0.0)[0], exact(0.0)[1]];
    let run = drive(&f, &y0, 0.0, HORIZON, &tol, |_| Control::Continue).unwrap();
    let x = exact(HORIZON);
    (run.y[1] - x[0]).abs().max((run.y[2] - x[1]).abs())
}

#[test]
fn observed_orders_match_nominal() {
    // The trapezoid driver returns the step-doubling extrapolation, which is
    // fourth order because the trapezoid error expands in even powers of h.
    for (method, order, h) in [(Method::Trapezoid, 4.0, 0.05), (Method::Dopri5, 5.0, 0.05)] {
        let p = (error_at(method, h) / error_at(method, h / 2.0)).log2();
        assert!((p - order).abs() <= 0.3, "{method:?}: observed order {p}");
    }
}

#[test]
fn period_converges_under_tolerance_refinement() {
    let e = EpsilonParams::default();
    let coarse = CycleOptions {
        tol: Tolerances::new(1e-9, 1e-13),
        ..CycleOptions::default()
    };
    let fine = CycleOptions {
        tol: Tolerances::new(1e-10, 1e-14),
        ..CycleOptions::default()
    };
    let a = surrogate_cycle(&e, &coarse).unwrap().period;
    let b = surrogate_cycle(&e, &fine).unwrap().period;
    assert!(((a - b) / b).abs() < 1e-4, "{a} vs {b}");
}

#[test]
fn orientation_and_frequency_across_the_sweep() {
    let base = EpsilonParams::default();
    let mut last = 0.0;
    for eps in [0.3, 0.2241, 0.15, 0.1] {
        let c = surrogate_cycle(&base.with_epsilon(eps), &CycleOptions::default()).unwrap();
        assert!(c.signed_area(0, 1) > 0.0, "eps {eps}: clockwise");
        assert!(c.period > last);
        last = c.period;
    }
}
