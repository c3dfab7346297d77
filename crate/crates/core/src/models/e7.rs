//! The even half-spin module `T = Λ₀W` (`dim W = 6`) of `so(W ⊕ W*)`, with
//! `(x|y) = b_a(x, y) = det(x̂ ∧ y)` and `trace(σ d_{x,y}) = −4 b_a(σ.x, y)`.

use num_traits::{One, Zero};

use crate::clifford::SpinModule;
use crate::exterior::{merge_sign, MultiIndex};
use crate::linalg::{Matrix, SparseOp, SparseVec};
use crate::scalar::{qi, Rational};
use crate::sts::{calibrate_alpha, ModelLabel, StsError, TripleSystem, Z4Grading};

use super::trace::{trace_gram, TraceSolver};
use super::Model;

pub struct E7Data {
    pub spin: SpinModule,
    /// `(a, b)` with `a < b`: the basis element `σ_{x_a, x_b}` of `so(W ⊕ W*)`.
    pub pairs: Vec<(usize, usize)>,
    pub sigmas: Vec<SparseOp>,
    pub solver: TraceSolver,
    pub omega: Matrix,
}

impl E7Data {
    pub fn monomial(&self, idx: &[usize]) -> SparseVec {
        SparseVec::unit(self.spin.even_basis().index_of(MultiIndex::from_indices(idx)).expect("even monomial"))
    }

    /// Index in the `so` basis of `σ_{x_a, x_b}` (`a < b`).
    pub fn pair_index(&self, a: usize, b: usize) -> usize {
        self.pairs.iter().position(|&p| p == (a, b)).expect("a < b within range")
    }
}

/// `b_a(e_I, e_J)`.
pub(crate) fn ba_monomials(i: MultiIndex, j: MultiIndex, ground: usize) -> Rational {
    if !i.is_disjoint(j) || i.union(j) != MultiIndex::full(ground) {
        return Rational::zero();
    }
    let r = i.len();
    let hat = if (r * r.saturating_sub(1) / 2).is_multiple_of(2) { 1 } else { -1 };
    Rational::from((hat * merge_sign(i, j)) as i64)
}

pub fn e7_data() -> Result<E7Data, StsError> {
    let spin = SpinModule::new(6);
    let d = spin.vector_dim();
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|a| (a + 1..d).map(move |b| (a, b))).collect();
    let sigmas: Vec<SparseOp> = pairs.iter().map(|&(a, b)| spin.sigma(&SparseVec::unit(a), &SparseVec::unit(b))).collect();
    let rho = pairs
        .iter()
        .map(|&(a, b)| spin.restrict_even(&spin.so_embedding(&SparseVec::unit(a), &SparseVec::unit(b))))
        .collect();
    let even = spin.even_basis();
    let omega = Matrix::from_fn(even.len(), even.len(), |i, j| ba_monomials(even.monomial(i), even.monomial(j), 6));
    let solver = TraceSolver::new(&omega, rho, &trace_gram(&sigmas), &qi(-4))?;
    Ok(E7Data { spin, pairs, sigmas, solver, omega })
}

/// Degrees `{0, 4}` in `T_1̄` and `{2, 6}` in `T_3̄`.
pub(crate) fn even_grading(spin: &SpinModule) -> Z4Grading {
    let even = spin.even_basis();
    let (deg1, deg3) = (0..even.len()).partition(|&k| even.monomial(k).len().is_multiple_of(4));
    Z4Grading::new(deg1, deg3)
}

pub(crate) fn split_system(label: ModelLabel) -> Result<(E7Data, TripleSystem), StsError> {
    let data = e7_data()?;
    let trip = data.solver.product_tensor();
    let alpha = calibrate_alpha(&data.omega, &trip)?;
    if alpha != Rational::one() {
        return Err(StsError::Calibration(format!("E7 product calibrates to {alpha}")));
    }
    let system = TripleSystem::new(label, data.omega.clone(), trip)?;
    Ok((data, system))
}

pub fn build_e7_split() -> Result<Model, StsError> {
    let (data, system) = split_system(ModelLabel::E7Split)?;
    Ok(Model { grading: even_grading(&data.spin), system })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probe_cartan_element() {
        let data = e7_data().unwrap();
        let one = data.monomial(&[]);
        let top = data.monomial(&[1, 2, 3, 4, 5, 6]);
        assert_eq!(one, SparseVec::unit(0));
        assert_eq!(top, SparseVec::unit(31));
        let c = data.solver.coeffs_vec(&one, &top);
        // d_{1, e_123456} = Σ σ_{e^i, e_i} = −Σ σ_{x_{i−1}, x_{i+5}}
        let mut expect = vec![Rational::zero(); data.pairs.len()];
        for i in 1..=6 {
            expect[data.pair_index(i - 1, i + 5)] = qi(-1);
        }
        assert_eq!(c, expect);
        assert_eq!(data.solver.d_op(&one, &top).apply(&one), one.scale(&qi(-3)));
        assert!(data.solver.d_op(&one, &one).is_zero());
        assert_eq!(data.omega.bilinear(&one, &top), Rational::one());
    }
}
