//! `T = Λ³W` for a 6-dimensional `W`, acted on by `sl(W)`, with
//! `(x|y) = det(x∧y)` and `trace(f d_{x,y}) = −2(f.x|y)`.

use num_traits::One;

use crate::exterior::{ExtBasis, MultiIndex};
use crate::linalg::{Matrix, SparseOp, SparseVec};
use crate::scalar::{qi, Rational};
use crate::sts::{calibrate_alpha, ModelLabel, StsError, TripleSystem, Z4Grading};

use super::trace::{trace_gram, TraceSolver};
use super::{det_gram, weight_123, Model};

/// Basis of `sl_n`: the `E_ab` (`a ≠ b`, row-major) followed by `H_a = E_aa − E_{a+1,a+1}`.
pub fn sl_basis(n: usize) -> Vec<SparseOp> {
    let unit = |a: usize, b: usize| {
        let mut cols = vec![SparseVec::new(); n];
        cols[b] = SparseVec::unit(a);
        SparseOp::from_columns(n, cols)
    };
    let mut out = Vec::with_capacity(n * n - 1);
    for a in 0..n {
        for b in 0..n {
            if a != b {
                out.push(unit(a, b));
            }
        }
    }
    for a in 0..n - 1 {
        out.push(unit(a, a).sub(&unit(a + 1, a + 1)));
    }
    out
}

/// Coordinates of a traceless matrix in [`sl_basis`].
pub fn sl_coords(m: &SparseOp) -> Vec<Rational> {
    let n = m.rows();
    let mut out = Vec::with_capacity(n * n - 1);
    for a in 0..n {
        for b in 0..n {
            if a != b {
                out.push(m.get(a, b));
            }
        }
    }
    // diag(d) = Σ h_a H_a with h_a = d_1 + … + d_a
    let mut acc = Rational::from(0);
    for a in 0..n - 1 {
        acc += m.get(a, a);
        out.push(acc.clone());
    }
    out
}

pub struct E6Data {
    pub cube: ExtBasis,
    pub sl: Vec<SparseOp>,
    pub solver: TraceSolver,
    pub omega: Matrix,
}

impl E6Data {
    pub fn monomial(&self, idx: &[usize]) -> SparseVec {
        SparseVec::unit(self.cube.index_of(MultiIndex::from_indices(idx)).expect("a 3-subset of 1..6"))
    }

    /// `d_{x,y}` as an endomorphism of `W`.
    pub fn d_on_w(&self, x: &SparseVec, y: &SparseVec) -> SparseOp {
        SparseOp::linear_combination(&self.sl, &self.solver.coeffs_vec(x, y))
    }
}

pub fn e6_data() -> Result<E6Data, StsError> {
    let cube = ExtBasis::degree(6, 3);
    let sl = sl_basis(6);
    let rho = sl.iter().map(|f| cube.derivation(f)).collect();
    let omega = det_gram(&cube);
    let solver = TraceSolver::new(&omega, rho, &trace_gram(&sl), &qi(-2))?;
    Ok(E6Data { cube, sl, solver, omega })
}

/// The grading by the weight `#(I ∩ {1,2,3}) − #(I ∩ {4,5,6})` mod 4.
pub(crate) fn cube_grading(cube: &ExtBasis) -> Z4Grading {
    let (deg1, deg3) = (0..cube.len()).partition(|&k| weight_123(cube.monomial(k)).rem_euclid(4) == 1);
    Z4Grading::new(deg1, deg3)
}

/// The split product on `Λ³W` together with its data.
pub(crate) fn split_system(label: ModelLabel) -> Result<(E6Data, TripleSystem), StsError> {
    let data = e6_data()?;
    let trip = data.solver.product_tensor();
    let alpha = calibrate_alpha(&data.omega, &trip)?;
    if alpha != Rational::one() {
        return Err(StsError::Calibration(format!("E6 product calibrates to {alpha}")));
    }
    let system = TripleSystem::new(label, data.omega.clone(), trip)?;
    Ok((data, system))
}

pub fn build_e6_split() -> Result<Model, StsError> {
    let (data, system) = split_system(ModelLabel::E6Split)?;
    Ok(Model { system, grading: cube_grading(&data.cube) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl_coordinates_roundtrip() {
        let basis = sl_basis(4);
        for b in &basis {
            let c = sl_coords(b);
            assert_eq!(SparseOp::linear_combination(&basis, &c), *b);
        }
    }

    #[test]
    fn probe_diag() {
        let data = e6_data().unwrap();
        let x = data.monomial(&[1, 2, 3]);
        let z = data.monomial(&[4, 5, 6]);
        let d = data.d_on_w(&x, &z);
        let diag: Vec<Rational> = [-1, -1, -1, 1, 1, 1].iter().map(|&v| qi(v)).collect();
        assert_eq!(d.to_matrix(), Matrix::diag(&diag));
        assert!(data.solver.d_op(&x, &x).is_zero());
        assert_eq!(data.solver.d_op(&x, &z).apply(&x), x.scale(&qi(-3)));
        assert_eq!(data.omega.bilinear(&x, &z), Rational::one());
    }
}
