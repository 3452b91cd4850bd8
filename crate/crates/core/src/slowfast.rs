//! Factored layer problems `N₀ f₀`: oblique projectors, adjugates, reduced
//! fields and the regular-jump test.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::models::EpsDecomposed;

/// Relative singularity threshold for `det(Df₀N₀)`.
pub const CONTACT_REL_TOL: f64 = 1e-10;
/// Tolerance on `|f₀|` for a point to count as lying on S.
pub const ON_MANIFOLD_TOL: f64 = 1e-10;

const MAX_COFACTOR_DIM: usize = 4;

fn check_square(a: &DMatrix<f64>) -> Result<usize> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::Usage(format!("matrix is {}x{}, expected square", n, a.ncols())));
    }
    if n > MAX_COFACTOR_DIM {
        return Err(Error::Usage(format!("cofactor expansion supports n <= {MAX_COFACTOR_DIM}, got {n}")));
    }
    Ok(n)
}

fn minor(a: &DMatrix<f64>, row: usize, col: usize) -> DMatrix<f64> {
    a.clone().remove_row(row).remove_column(col)
}

fn det_rec(a: &DMatrix<f64>) -> f64 {
    match a.nrows() {
        0 => 1.0,
        1 => a[(0, 0)],
        2 => a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)],
        n => (0..n)
            .map(|j| {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * a[(0, j)] * det_rec(&minor(a, 0, j))
            })
            .sum(),
    }
}

/// Determinant by cofactor expansion (n ≤ 4).
pub fn determinant(a: &DMatrix<f64>) -> Result<f64> {
    check_square(a)?;
    Ok(det_rec(a))
}

/// Classical adjoint `adj(A)`, with `A adj(A) = det(A) I` (n ≤ 4).
pub fn adjugate(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = check_square(a)?;
    if n == 1 {
        return Ok(DMatrix::from_element(1, 1, 1.0));
    }
    let mut adj = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            adj[(j, i)] = sign * det_rec(&minor(a, i, j));
        }
    }
    Ok(adj)
}

/// Scale used for the contact test: `‖Df₀‖ ‖N₀‖` (Frobenius).
pub fn contact_scale(df0: &DMatrix<f64>, n0: &DMatrix<f64>) -> f64 {
    df0.norm() * n0.norm()
}

/// Whether `Df₀N₀` is singular relative to the scale of its factors.
pub fn is_contact(df0: &DMatrix<f64>, n0: &DMatrix<f64>) -> Result<bool> {
    let det = determinant(&(df0 * n0))?;
    Ok(det.abs() <= CONTACT_REL_TOL * contact_scale(df0, n0))
}

fn condition_number(a: &DMatrix<f64>) -> f64 {
    let sv = a.clone().svd(false, false).singular_values;
    let max = sv.max();
    let min = sv.min();
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

#[derive(Clone, Debug)]
pub struct Projector {
    /// Oblique projection onto `T_x S` along the fibres.
    pub pi_s: DMatrix<f64>,
    /// Complementary projection onto the fibre span.
    pub pi_n: DMatrix<f64>,
    /// `Df₀ N₀`.
    pub restricted: DMatrix<f64>,
    pub condition: f64,
}

/// `Π^S = I − N₀ (Df₀N₀)⁻¹ Df₀`.
pub fn oblique_projector(df0: &DMatrix<f64>, n0: &DMatrix<f64>) -> Result<Projector> {
    let n = n0.nrows();
    if df0.ncols() != n || df0.nrows() != n0.ncols() {
        return Err(Error::Usage(format!(
            "shape mismatch: Df0 is {}x{}, N0 is {}x{}",
            df0.nrows(),
            df0.ncols(),
            n0.nrows(),
            n0.ncols()
        )));
    }
    let restricted = df0 * n0;
    let det = determinant(&restricted)?;
    if det.abs() <= CONTACT_REL_TOL * contact_scale(df0, n0) {
        return Err(Error::Contact(format!(
            "det(Df0 N0) = {det:e} is singular; use regular_jump_test"
        )));
    }
    let inv = adjugate(&restricted)? / det;
    let pi_n = n0 * inv * df0;
    let pi_s = DMatrix::identity(n, n) - &pi_n;
    Ok(Projector {
        pi_s,
        pi_n,
        condition: condition_number(&restricted),
        restricted,
    })
}

fn column(v: [f64; 2]) -> DMatrix<f64> {
    DMatrix::from_column_slice(2, 1, &v)
}

fn row(v: [f64; 2]) -> DMatrix<f64> {
    DMatrix::from_row_slice(1, 2, &v)
}

fn check_on_manifold<M: EpsDecomposed>(m: &M, x: [f64; 2]) -> Result<()> {
    let f = m.f0(x);
    if f.abs() > ON_MANIFOLD_TOL || !f.is_finite() {
        return Err(Error::Geometry(format!(
            "point ({}, {}) is off the critical manifold of {}: f0 = {f:e}",
            x[0],
            x[1],
            m.id()
        )));
    }
    Ok(())
}

/// Splitting `T_x R² = T_x S ⊕ span N₀(x)` at a point of S.
#[derive(Clone, Debug, Serialize)]
pub struct BundleSplit {
    pub base: [f64; 2],
    pub tangent: [f64; 2],
    pub fiber: [f64; 2],
    pub restricted: f64,
}

impl BundleSplit {
    /// `|det [tangent fiber]|`; zero exactly when the sum is not direct.
    pub fn direct_sum_measure(&self) -> f64 {
        (self.tangent[0] * self.fiber[1] - self.tangent[1] * self.fiber[0]).abs()
    }
}

pub fn bundle_split<M: EpsDecomposed>(m: &M, x: [f64; 2]) -> Result<BundleSplit> {
    check_on_manifold(m, x)?;
    let df = m.df0(x);
    let n0 = m.n0(x);
    let norm = df[0].hypot(df[1]);
    let tangent = if norm > 0.0 { [-df[1] / norm, df[0] / norm] } else { [0.0, 0.0] };
    Ok(BundleSplit {
        base: x,
        tangent,
        fiber: n0,
        restricted: df[0] * n0[0] + df[1] * n0[1],
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ReducedField {
    pub point: [f64; 2],
    pub vector: [f64; 2],
    /// Nontrivial eigenvalue `Df₀N₀` of the layer problem.
    pub eigenvalue: f64,
    pub condition: f64,
    /// Set when F₁ vanishes identically; the leading slow flow is then
    /// higher order and must come from the parametrisation method.
    pub higher_order: bool,
}

/// `Π^S(x) F₁(x)` at a normally hyperbolic point of S.
pub fn reduced_field<M: EpsDecomposed>(m: &M, x: [f64; 2]) -> Result<ReducedField> {
    check_on_manifold(m, x)?;
    let df = row(m.df0(x));
    let n0 = column(m.n0(x));
    let p = match oblique_projector(&df, &n0) {
        Ok(p) => p,
        Err(Error::Contact(msg)) => {
            // Π^S F₁ is zero for any projector when F₁ vanishes at x.
            let f1 = if m.powers().contains(&1) { m.term(1, x) } else { [0.0, 0.0] };
            if f1 == [0.0, 0.0] {
                return Ok(ReducedField {
                    point: x,
                    vector: [0.0, 0.0],
                    eigenvalue: (&df * &n0)[(0, 0)],
                    condition: f64::INFINITY,
                    higher_order: !m.powers().contains(&1),
                });
            }
            return Err(Error::Contact(msg));
        }
        Err(e) => return Err(e),
    };
    let eigenvalue = p.restricted[(0, 0)];
    if !m.powers().contains(&1) {
        return Ok(ReducedField {
            point: x,
            vector: [0.0, 0.0],
            eigenvalue,
            condition: p.condition,
            higher_order: true,
        });
    }
    let f1 = column(m.term(1, x));
    let v = &p.pi_s * f1;
    Ok(ReducedField {
        point: x,
        vector: [v[(0, 0)], v[(1, 0)]],
        eigenvalue,
        condition: p.condition,
        higher_order: false,
    })
}

/// Like [`reduced_field`] but refuses to return the trivial flow.
pub fn leading_reduced_field<M: EpsDecomposed>(m: &M, x: [f64; 2]) -> Result<ReducedField> {
    let r = reduced_field(m, x)?;
    if r.higher_order {
        return Err(Error::HigherOrder(format!(
            "F1 vanishes identically for {}; use the parametrisation method",
            m.id()
        )));
    }
    Ok(r)
}

#[derive(Clone, Debug, Serialize)]
pub struct JumpTest {
    pub regular: bool,
    /// `N₀ adj(Df₀N₀) Df₀ F`.
    pub direction: Vec<f64>,
    pub magnitude: f64,
    pub scale: f64,
    /// Power of the forcing term used (model form only).
    pub power: Option<u32>,
}

/// Matrix form of the jump test at a contact point.
pub fn jump_product(n0: &DMatrix<f64>, df0: &DMatrix<f64>, forcing: &DVector<f64>) -> Result<JumpTest> {
    let restricted = df0 * n0;
    let m = restricted.nrows();
    let tol = CONTACT_REL_TOL * contact_scale(df0, n0);
    let sv = restricted.clone().svd(false, false).singular_values;
    let rank = sv.iter().filter(|&&s| s > tol).count();
    match m - rank {
        0 => {
            return Err(Error::Usage(format!(
                "Df0 N0 has full rank ({rank}); not a contact point"
            )))
        }
        1 => {}
        d => {
            return Err(Error::DegenerateContact(format!(
                "rank of Df0 N0 drops by {d}; the adjugate vanishes"
            )))
        }
    }
    let adj = adjugate(&restricted)?;
    let product = n0 * &adj * df0 * forcing;
    let magnitude = product.norm();
    let scale = n0.norm() * adj.norm() * df0.norm() * forcing.norm();
    Ok(JumpTest {
        regular: magnitude > CONTACT_REL_TOL * scale,
        direction: product.iter().copied().collect(),
        magnitude,
        scale,
        power: None,
    })
}

/// Jump test for a decomposed planar field at a contact point of S.
///
/// With `power = None` the forcing is the first perturbation term that is not
/// parallel to the fibre.
pub fn regular_jump_test<M: EpsDecomposed>(m: &M, x: [f64; 2], power: Option<u32>) -> Result<JumpTest> {
    check_on_manifold(m, x)?;
    let n0v = m.n0(x);
    let power = match power {
        Some(p) => p,
        None => {
            let nn = n0v[0].hypot(n0v[1]);
            m.powers()
                .iter()
                .copied()
                .find(|&p| {
                    let f = m.term(p, x);
                    let cross = (n0v[0] * f[1] - n0v[1] * f[0]).abs();
                    cross > CONTACT_REL_TOL * nn * f[0].hypot(f[1])
                })
                .ok_or_else(|| Error::HigherOrder("every perturbation term is fibre-aligned here".into()))?
        }
    };
    let f = m.term(power, x);
    let mut t = jump_product(&column(n0v), &row(m.df0(x)), &DVector::from_column_slice(&f))?;
    t.power = Some(power);
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{Regime3Xv, SurrogateXz};
    use crate::params::EpsilonParams;

    #[test]
    fn axis_aligned_projector() {
        let p = oblique_projector(&DMatrix::from_row_slice(1, 2, &[0.0, 1.0]), &column([0.0, 1.0])).unwrap();
        assert_eq!(p.pi_s, DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn tangent_fibre_is_contact() {
        let err = oblique_projector(&DMatrix::from_row_slice(1, 2, &[1.0, 0.0]), &column([0.0, 1.0])).unwrap_err();
        assert!(matches!(err, Error::Contact(_)));
    }

    #[test]
    fn nilpotent_adjugate() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let adj = adjugate(&a).unwrap();
        assert_eq!(adj, DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 0.0, 0.0]));
        assert_eq!(&a * &adj, DMatrix::zeros(2, 2));
    }

    #[test]
    fn gamma2_reduced_flow() {
        let e = EpsilonParams::default();
        let m = SurrogateXz::new(e);
        let zt = 1.0 / (e.gamma * e.sigma1);
        let r = reduced_field(&m, [0.3, zt]).unwrap();
        let expect = -2.0 * e.a() * 0.09 / (e.gamma * e.sigma1).powi(3);
        assert!((r.vector[0] - expect).abs() < 1e-14 * expect.abs());
        assert_eq!(r.vector[1], 0.0);
        assert_eq!(reduced_field(&m, [0.0, zt]).unwrap().vector, [0.0, 0.0]);
    }

    #[test]
    fn regime3_has_higher_order_flow() {
        let m = Regime3Xv::new(EpsilonParams::default());
        let x = [m.gamma4_x(0.5), 0.5];
        assert!(reduced_field(&m, x).unwrap().higher_order);
        assert!(matches!(leading_reduced_field(&m, x), Err(Error::HigherOrder(_))));
    }
}
