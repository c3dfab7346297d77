//! `T = Λ²U ⊕ Λ²U*` (`dim U = 8`) as a module for `L = sl(U) ⊕ Λ⁴U`, the
//! split algebra of type E7, with `trace(l d_{x,y}) = −2(l.x|y)`.
//!
//! `L` is assembled first and checked (Jacobi, faithful action on `T`,
//! Killing form `36·(·|·)_L`) before the product on `T` is solved for.

use num_traits::{One, Zero};

use crate::envelope::LieAlgebra;
use crate::exterior::{merge_sign, ExtBasis, MultiIndex};
use crate::linalg::{Matrix, SparseOp, SparseVec};
use crate::scalar::{qi, Rational};
use crate::sts::{calibrate_alpha, ModelLabel, StsError, TripleSystem, Z4Grading};

use super::det_gram;
use super::e6::{sl_basis, sl_coords};
use super::trace::{trace_gram, TraceSolver};
use super::Model;

/// Number of `sl(U)` basis elements; `Λ⁴U` follows.
pub const SL_DIM: usize = 63;
/// Half of `dim T`: `Λ²U` occupies `0..28`, `Λ²U*` occupies `28..56`.
pub const HALF: usize = 28;

fn sgn(s: i32) -> Rational {
    Rational::from(s as i64)
}

pub struct E8Data {
    pub two: ExtBasis,
    pub four: ExtBasis,
    /// Basis of `sl(U)` as matrices on `U`.
    pub sl: Vec<SparseOp>,
    /// `L` with basis `sl(U)` then `Λ⁴U` (lex).
    pub algebra: LieAlgebra,
    /// `ρ(l)` on `T` for every basis element `l` of `L`.
    pub rho: Vec<SparseOp>,
    /// Gram matrix of `(·|·)_L`.
    pub form: Matrix,
    pub omega: Matrix,
    pub solver: TraceSolver,
}

impl E8Data {
    /// `e_J ∈ Λ²U` (`dual = false`) or `e^J ∈ Λ²U*`.
    pub fn vector(&self, idx: &[usize], dual: bool) -> SparseVec {
        let k = self.two.index_of(MultiIndex::from_indices(idx)).expect("a 2-subset of 1..8");
        SparseVec::unit(if dual { HALF + k } else { k })
    }

    /// The `sl(U)` component of an element of `L`, as a matrix on `U`.
    pub fn sl_part(&self, c: &[Rational]) -> SparseOp {
        SparseOp::linear_combination(&self.sl, &c[..SL_DIM])
    }
}

/// `e_I.e_J` for `|I| = 4`, `|J| = 2`: an element of `Λ²U*`.
fn four_on_two(i: MultiIndex, j: MultiIndex) -> Option<(i32, MultiIndex)> {
    if !i.is_disjoint(j) {
        return None;
    }
    let u = i.union(j);
    let c = u.complement(8);
    Some((merge_sign(i, j) * merge_sign(u, c), c))
}

/// `e_I.e^J` for `|I| = 4`, `|J| = 2`: an element of `Λ²U`.
fn four_on_dual(i: MultiIndex, j: MultiIndex) -> Option<(i32, MultiIndex)> {
    if !j.is_subset(i) {
        return None;
    }
    let ib = i.complement(8);
    let rest = i.minus(j);
    Some((merge_sign(i, ib) * merge_sign(ib, j) * merge_sign(ib.union(j), rest), rest))
}

/// The action of `Λ⁴U` on `T`.
fn four_action(two: &ExtBasis, i: MultiIndex) -> SparseOp {
    let cols = (0..2 * HALF)
        .map(|col| {
            let (dual, j) = (col >= HALF, two.monomial(col % HALF));
            let img = if dual { four_on_dual(i, j) } else { four_on_two(i, j) };
            match img {
                None => SparseVec::new(),
                Some((s, m)) => {
                    let k = two.index_of(m).expect("degree two");
                    SparseVec::single(if dual { k } else { HALF + k }, sgn(s))
                }
            }
        })
        .collect();
    SparseOp::from_columns(2 * HALF, cols)
}

/// The action of `f ∈ sl(U)` on `T`: derivations of `f` and `−fᵀ`.
fn sl_action(two: &ExtBasis, f: &SparseOp) -> SparseOp {
    let a = two.derivation(f);
    let b = two.derivation(&f.transpose().scale(&qi(-1)));
    let mut cols: Vec<SparseVec> = a.columns().to_vec();
    cols.extend(b.columns().iter().map(|c| c.map_indices(|i| i + HALF)));
    SparseOp::from_columns(2 * HALF, cols)
}

pub fn e8_data() -> Result<E8Data, StsError> {
    let two = ExtBasis::degree(8, 2);
    let four = ExtBasis::degree(8, 4);
    let sl = sl_basis(8);
    let sl_gram = trace_gram(&sl);
    let sl_inv = sl_gram.inverse().map_err(|_| StsError::Construction("trace form on sl(U) is degenerate".into()))?;
    let det4 = det_gram(&four);
    let on_four: Vec<SparseOp> = sl.iter().map(|f| four.derivation(f)).collect();
    let m = SL_DIM + four.len();

    let lift = |c: Vec<Rational>, offset: usize| {
        SparseVec::from_entries(c.into_iter().enumerate().map(|(k, v)| (k + offset, v)).collect())
    };
    let bracket = |a: usize, b: usize| -> SparseVec {
        match (a < SL_DIM, b < SL_DIM) {
            (true, true) => lift(sl_coords(&sl[a].commutator(&sl[b])), 0),
            (true, false) => on_four[a].column(b - SL_DIM).map_indices(|k| k + SL_DIM),
            (false, true) => on_four[b].column(a - SL_DIM).map_indices(|k| k + SL_DIM).neg(),
            (false, false) => {
                // trace(f[x,y]) = det(f.x ∧ y)
                let y = SparseVec::unit(b - SL_DIM);
                let rhs: Vec<Rational> =
                    on_four.iter().map(|f| det4.bilinear(f.column(a - SL_DIM), &y)).collect();
                lift(sl_inv.mul_vec(&rhs), 0)
            }
        }
    };
    let algebra = LieAlgebra::from_upper(m, bracket).map_err(|e| StsError::Construction(e.to_string()))?;

    let mut rho: Vec<SparseOp> = sl.iter().map(|f| sl_action(&two, f)).collect();
    rho.extend(four.monomials().iter().map(|&i| four_action(&two, i)));

    let form = Matrix::from_fn(m, m, |a, b| match (a < SL_DIM, b < SL_DIM) {
        (true, true) => sl_gram.get(a, b),
        (false, false) => det4.get(a - SL_DIM, b - SL_DIM),
        _ => Rational::zero(),
    });
    let omega = Matrix::from_fn(2 * HALF, 2 * HALF, |i, j| {
        if j == i + HALF {
            Rational::one()
        } else if i == j + HALF {
            -Rational::one()
        } else {
            Rational::zero()
        }
    });
    let solver = TraceSolver::new(&omega, rho.clone(), &form, &qi(-2))?;
    Ok(E8Data { two, four, sl, algebra, rho, form, omega, solver })
}

/// Whether `ρ` is a representation of `L` on all basis pairs.
pub fn representation_holds(data: &E8Data) -> bool {
    use rayon::prelude::*;
    let m = data.algebra.dim();
    (0..m * m).into_par_iter().all(|p| {
        let (a, b) = (p / m, p % m);
        if a >= b {
            return true;
        }
        let c = data.algebra.bracket(a, b);
        let lhs = c.iter().fold(SparseOp::zero(2 * HALF, 2 * HALF), |acc, (k, v)| acc.add_scaled(v, &data.rho[*k]));
        lhs == data.rho[a].commutator(&data.rho[b])
    })
}

pub(crate) fn split_system(label: ModelLabel) -> Result<(E8Data, TripleSystem), StsError> {
    let data = e8_data()?;
    if !representation_holds(&data) {
        return Err(StsError::Construction("Λ²U ⊕ Λ²U* is not a representation of sl(U) ⊕ Λ⁴U".into()));
    }
    let trip = data.solver.product_tensor();
    let alpha = calibrate_alpha(&data.omega, &trip)?;
    if alpha != Rational::one() {
        return Err(StsError::Calibration(format!("E8 product calibrates to {alpha}")));
    }
    let system = TripleSystem::new(label, data.omega.clone(), trip)?;
    Ok((data, system))
}

pub(crate) fn halves_grading() -> Z4Grading {
    Z4Grading::new((0..HALF).collect(), (HALF..2 * HALF).collect())
}

pub fn build_e8_split() -> Result<Model, StsError> {
    let (_, system) = split_system(ModelLabel::E8Split)?;
    Ok(Model { system, grading: halves_grading() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;
    use crate::sts::{CheckMode, DEFAULT_SEED};

    #[test]
    fn acting_algebra() {
        let data = e8_data().unwrap();
        assert_eq!(data.algebra.dim(), 133);
        assert!(representation_holds(&data));
        assert!(data.algebra.check_jacobi(CheckMode::Sampled { seed: DEFAULT_SEED, count: 20_000 }).passed());
        assert_eq!(data.algebra.killing_gram(), data.form.scale(&qi(36)));
    }

    #[test]
    fn probe() {
        let data = e8_data().unwrap();
        let x = data.vector(&[1, 2], false);
        let y = data.vector(&[1, 2], true);
        assert!(data.solver.d_op(&x, &x).is_zero());
        let c = data.solver.coeffs_vec(&x, &y);
        assert!(c[SL_DIM..].iter().all(Zero::is_zero));
        let mut diag = vec![q(1, 2); 8];
        diag[0] = q(-3, 2);
        diag[1] = q(-3, 2);
        assert_eq!(data.sl_part(&c).to_matrix(), Matrix::diag(&diag));
        assert_eq!(data.solver.d_op(&x, &y).apply(&x), x.scale(&qi(-3)));
        assert_eq!(data.omega.bilinear(&x, &y), Rational::one());
    }
}
