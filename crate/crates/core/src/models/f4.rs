//! The 14-dimensional system inside `Λ³W`, `W` a 6-dimensional symplectic space.
//!
//! `W` has basis `u_i = e_i`, `v_i = e_{i+3}` (`i = 1, 2, 3`) with
//! `b(u_i, v_i) = 1`. `T` is the kernel of the contraction
//! `x₁∧x₂∧x₃ ↦ b(x₁,x₂)x₃ + b(x₂,x₃)x₁ + b(x₃,x₁)x₂`, the form is
//! `(x|y) = det(x∧y)` and `d_{x,y} ∈ sp(W)` is fixed by
//! `trace(f d_{x,y}) = −2(f.x|y)`.

use num_traits::{One, Zero};

use crate::exterior::{ExtBasis, MultiIndex};
use crate::linalg::{Matrix, SparseOp, SparseVec, Subspace};
use crate::scalar::{qi, Rational};
use crate::sts::{calibrate_alpha, ModelLabel, StsError, TripleSystem, Z4Grading};

use super::trace::{trace_gram, TraceSolver};
use super::{det_gram, weight_123, Model};

/// `b(e_a, e_b)` for 0-based indices.
fn b(a: usize, c: usize) -> Rational {
    if c == a + 3 && a < 3 {
        Rational::one()
    } else if a == c + 3 && c < 3 {
        -Rational::one()
    } else {
        Rational::zero()
    }
}

/// `γ_{a,b}: w ↦ b(e_a, w)e_b + b(e_b, w)e_a` for `a ≤ b`, a basis of `sp(W)`.
pub fn sp_basis() -> Vec<SparseOp> {
    let mut out = Vec::new();
    for a in 0..6 {
        for c in a..6 {
            let cols = (0..6)
                .map(|w| SparseVec::single(c, b(a, w)).add(&SparseVec::single(a, b(c, w))))
                .collect();
            out.push(SparseOp::from_columns(6, cols));
        }
    }
    out
}

/// The ambient `Λ³W`, the subspace `T` and the restricted `sp(W)` action.
pub struct F4Data {
    pub cube: ExtBasis,
    pub t: Subspace,
    pub solver: TraceSolver,
    pub omega: Matrix,
}

impl F4Data {
    /// Coordinates in `T` of an element of `Λ³W` given by monomials.
    pub fn vector(&self, terms: &[(i64, &[usize])]) -> Option<SparseVec> {
        let v = SparseVec::from_entries(
            terms.iter().map(|(c, idx)| (self.cube.index_of(MultiIndex::from_indices(idx)).unwrap(), Rational::from(*c))).collect(),
        );
        self.t.coords_sparse(&v)
    }
}

pub fn f4_data() -> Result<F4Data, StsError> {
    let cube = ExtBasis::degree(6, 3);
    // contraction Λ³W → W
    let contraction = Matrix::from_fn(6, cube.len(), |row, col| {
        let idx: Vec<usize> = cube.monomial(col).indices().iter().map(|i| i - 1).collect();
        let (x1, x2, x3) = (idx[0], idx[1], idx[2]);
        let mut c = Rational::zero();
        for (p, r, s) in [(x1, x2, x3), (x2, x3, x1), (x3, x1, x2)] {
            if s == row {
                c += b(p, r);
            }
        }
        c
    });
    let kernel: Vec<SparseVec> = contraction.kernel().iter().map(|v| SparseVec::from_dense(v)).collect();
    if kernel.len() != 14 {
        return Err(StsError::Construction(format!("contraction kernel has dimension {}", kernel.len())));
    }
    let t = Subspace::new(cube.len(), kernel)?;
    let det = det_gram(&cube);
    let basis = t.basis();
    let omega = Matrix::from_fn(14, 14, |i, j| det.bilinear(&basis[i], &basis[j]));
    let sp = sp_basis();
    let rho = sp
        .iter()
        .map(|g| t.restrict(&cube.derivation(g)))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| StsError::Construction("sp(W) does not preserve the kernel".into()))?;
    let solver = TraceSolver::new(&omega, rho, &trace_gram(&sp), &qi(-2))?;
    Ok(F4Data { cube, t, solver, omega })
}

pub fn build_f4() -> Result<Model, StsError> {
    let data = f4_data()?;
    let trip = data.solver.product_tensor();
    let alpha = calibrate_alpha(&data.omega, &trip)?;
    if alpha != Rational::one() {
        return Err(StsError::Calibration(format!("F4 product calibrates to {alpha}")));
    }
    let mut deg1 = Vec::new();
    let mut deg3 = Vec::new();
    for (k, v) in data.t.basis().iter().enumerate() {
        let ws: Vec<i32> = v.iter().map(|(i, _)| weight_123(data.cube.monomial(*i))).collect();
        if ws.iter().any(|w| *w != ws[0]) {
            return Err(StsError::Construction("kernel basis vector is not a weight vector".into()));
        }
        if ws[0].rem_euclid(4) == 1 {
            deg1.push(k);
        } else {
            deg3.push(k);
        }
    }
    let system = TripleSystem::new(ModelLabel::F4, data.omega, trip)?;
    Ok(Model { system, grading: Z4Grading::new(deg1, deg3) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn probe_and_calibration() {
        let data = f4_data().unwrap();
        let x = data.vector(&[(1, &[1, 2, 3])]).unwrap();
        let z = data.vector(&[(1, &[4, 5, 6])]).unwrap();
        let d = data.solver.d_op(&x, &z);
        assert_eq!(d.apply(&x), x.scale(&qi(-3)));
        assert!(data.solver.d_op(&x, &x).is_zero());
        assert_eq!(data.omega.bilinear(&x, &z), Rational::one());
        assert!(data.omega.bilinear(&x, &x).is_zero());
        let trip = data.solver.product_tensor();
        assert_eq!(calibrate_alpha(&data.omega, &trip).unwrap(), Rational::one());
        assert_eq!(calibrate_alpha(&data.omega.scale(&qi(2)), &trip).unwrap(), q(1, 2));
    }
}
