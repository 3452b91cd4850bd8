//! Vector fields: the dimensional oscillator, its full-flux origin, the scaled
//! and perturbed systems, the polynomial surrogate, the two zoomed regimes and
//! the four blow-up charts.

use nalgebra::DMatrix;

use crate::taylor::Real;

pub mod biophysical;
pub mod charts;
pub mod fullflux;
pub mod regimes;
pub mod registry;
pub mod scaled;
pub mod surrogate;

pub use biophysical::{eval_biophysical_xy, BiophysicalXy};
pub use charts::{eval_chart, ChartField, ChartId};
pub use fullflux::{eval_fullflux, Fluxes, Fullflux};
pub use regimes::{Regime2Uz, Regime3Xv};
pub use registry::{build_model, ModelContext, ModelId};
pub use scaled::{eval_dimensionless_xy, eval_perturbed_xy, DimensionlessXy, PerturbedXy};
pub use surrogate::SurrogateXz;

/// An autonomous vector field on a low-dimensional state space.
pub trait VectorField: Send + Sync {
    fn id(&self) -> &'static str;
    fn labels(&self) -> &'static [&'static str];

    fn dim(&self) -> usize {
        self.labels().len()
    }

    /// Coordinates that must stay non-negative; integrators clamp these.
    fn nonnegative(&self) -> &'static [bool];

    /// Evaluate the field. Callers keep `s` inside the domain.
    fn rhs(&self, s: &[f64], out: &mut [f64]);

    fn jacobian(&self, s: &[f64]) -> DMatrix<f64> {
        fd_jacobian(self, s)
    }
}

/// Central-difference Jacobian with step `1e-6 (1 + |s_j|)`.
pub fn fd_jacobian<F: VectorField + ?Sized>(f: &F, s: &[f64]) -> DMatrix<f64> {
    let n = s.len();
    let mut jac = DMatrix::zeros(n, n);
    let mut plus = vec![0.0; n];
    let mut minus = vec![0.0; n];
    let mut x = s.to_vec();
    for j in 0..n {
        let h = 1e-6 * (1.0 + s[j].abs());
        x[j] = s[j] + h;
        f.rhs(&x, &mut plus);
        x[j] = s[j] - h;
        f.rhs(&x, &mut minus);
        x[j] = s[j];
        for i in 0..n {
            jac[(i, j)] = (plus[i] - minus[i]) / (2.0 * h);
        }
    }
    jac
}

/// Largest relative disagreement between the analytic and finite-difference Jacobians.
pub fn jacobian_audit<F: VectorField + ?Sized>(f: &F, s: &[f64]) -> f64 {
    let a = f.jacobian(s);
    let b = fd_jacobian(f, s);
    let scale = a.abs().max().max(1e-300);
    (a - b).abs().max() / scale
}

/// A planar field written as `N₀(s) f₀(s) + Σ δ^i F_i(s)` in an expansion
/// parameter δ (ε for the surrogate and the X–V system, ε² for the U–Z system).
///
/// Methods are generic over [`Real`] so the same code runs on numbers, on jets
/// along a manifold and on power series in δ.
pub trait EpsDecomposed: Sync {
    fn id(&self) -> &'static str;
    fn labels(&self) -> [&'static str; 2];
    /// Numerical value of δ for the stored parameters.
    fn expansion_parameter(&self) -> f64;
    /// Name of the expansion parameter for reports.
    fn expansion_name(&self) -> &'static str;

    fn n0<T: Real>(&self, s: [T; 2]) -> [T; 2];
    fn f0<T: Real>(&self, s: [T; 2]) -> T;
    fn df0<T: Real>(&self, s: [T; 2]) -> [T; 2];

    /// Powers of δ carrying a perturbation term, ascending.
    fn powers(&self) -> &'static [u32];
    /// Perturbation term multiplying `δ^power`; zero for powers not listed.
    fn term<T: Real>(&self, power: u32, s: [T; 2]) -> [T; 2];

    /// Independent closed-form evaluation of the whole field.
    fn full<T: Real>(&self, s: [T; 2], delta: T) -> [T; 2];

    /// Analytic Jacobian of [`full`](Self::full) at δ.
    fn jacobian_full(&self, s: [f64; 2], delta: f64) -> [[f64; 2]; 2];

    /// `N₀ f₀ + Σ δ^i F_i`, assembled from the pieces.
    fn recomposed<T: Real>(&self, s: [T; 2], delta: T) -> [T; 2] {
        let n0 = self.n0(s);
        let f0 = self.f0(s);
        let mut out = [n0[0] * f0, n0[1] * f0];
        for &p in self.powers() {
            let t = self.term(p, s);
            let w = delta.powi(p);
            out[0] = out[0] + w * t[0];
            out[1] = out[1] + w * t[1];
        }
        out
    }
}

/// Relative mismatch between the recomposed and closed-form fields.
pub fn decomposition_residual<M: EpsDecomposed>(m: &M, s: [f64; 2], delta: f64) -> f64 {
    let a = m.full(s, delta);
    let b = m.recomposed(s, delta);
    let scale = a[0].abs().max(a[1].abs()).max(b[0].abs().max(b[1].abs()));
    let d = (a[0] - b[0]).abs().max((a[1] - b[1]).abs());
    if scale == 0.0 {
        d
    } else {
        d / scale
    }
}

/// Wraps a decomposed field as a [`VectorField`] at its stored δ.
macro_rules! impl_vector_field_for_decomposed {
    ($ty:ty, $labels:expr, $nonneg:expr) => {
        impl $crate::models::VectorField for $ty {
            fn id(&self) -> &'static str {
                <$ty as $crate::models::EpsDecomposed>::id(self)
            }
            fn labels(&self) -> &'static [&'static str] {
                &$labels
            }
            fn nonnegative(&self) -> &'static [bool] {
                &$nonneg
            }
            fn rhs(&self, s: &[f64], out: &mut [f64]) {
                use $crate::models::EpsDecomposed;
                let v = self.full([s[0], s[1]], self.expansion_parameter());
                out[0] = v[0];
                out[1] = v[1];
            }
            fn jacobian(&self, s: &[f64]) -> nalgebra::DMatrix<f64> {
                use $crate::models::EpsDecomposed;
                let j = self.jacobian_full([s[0], s[1]], self.expansion_parameter());
                nalgebra::DMatrix::from_row_slice(2, 2, &[j[0][0], j[0][1], j[1][0], j[1][1]])
            }
        }
    };
}
pub(crate) use impl_vector_field_for_decomposed;
