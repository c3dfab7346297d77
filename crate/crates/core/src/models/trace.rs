//! Recovering `d_{x,y}` from a trace equation `⟨f, d_{x,y}⟩ = s·(f.x | y)`.
//!
//! Given a basis `f_α` of the acting algebra, its representation `ρ_α` on
//! `T`, and the Gram matrix `G_{αβ} = ⟨f_α, f_β⟩` of a non-degenerate
//! invariant form, `d_{x,y} = Σ c_β f_β` with `G c = s·((ρ_α x | y))_α`.

use num_traits::Zero;
use rayon::prelude::*;

use crate::linalg::{Matrix, SparseOp, SparseVec};
use crate::scalar::Rational;
use crate::sts::StsError;

pub struct TraceSolver {
    n: usize,
    rho: Vec<SparseOp>,
    ginv: Matrix,
    /// `w[α][i][j] = s·(ρ_α e_i | e_j)`.
    rhs: Vec<Vec<Vec<Rational>>>,
}

/// `G_{αβ} = trace(m_α m_β)`.
pub fn trace_gram(mats: &[SparseOp]) -> Matrix {
    let k = mats.len();
    let entries: Vec<Rational> = (0..k * k)
        .into_par_iter()
        .map(|p| {
            let (a, b) = (p / k, p % k);
            if a <= b {
                mats[a].trace_product(&mats[b])
            } else {
                Rational::zero()
            }
        })
        .collect();
    Matrix::from_fn(k, k, |a, b| if a <= b { entries[a * k + b].clone() } else { entries[b * k + a].clone() })
}

impl TraceSolver {
    pub fn new(omega: &Matrix, rho: Vec<SparseOp>, gram: &Matrix, scale: &Rational) -> Result<Self, StsError> {
        let n = omega.rows();
        if rho.iter().any(|r| r.rows() != n || r.cols() != n) || gram.rows() != rho.len() {
            return Err(StsError::Construction("trace solver: inconsistent sizes".into()));
        }
        let ginv = gram.inverse().map_err(|_| StsError::Construction("trace form is degenerate".into()))?;
        let rhs = rho
            .par_iter()
            .map(|r| {
                (0..n)
                    .map(|i| {
                        let col = r.column(i);
                        (0..n).map(|j| scale * &omega.bilinear(col, &SparseVec::unit(j))).collect()
                    })
                    .collect()
            })
            .collect();
        Ok(Self { n, rho, ginv, rhs })
    }

    pub fn algebra_dim(&self) -> usize {
        self.rho.len()
    }

    /// Coordinates of `d_{e_i,e_j}` in the acting-algebra basis.
    pub fn coeffs(&self, i: usize, j: usize) -> Vec<Rational> {
        let rhs: Vec<Rational> = self.rhs.iter().map(|w| w[i][j].clone()).collect();
        self.ginv.mul_vec(&rhs)
    }

    /// Coordinates of `d_{x,y}` for arbitrary vectors.
    pub fn coeffs_vec(&self, x: &SparseVec, y: &SparseVec) -> Vec<Rational> {
        let rhs: Vec<Rational> = self
            .rhs
            .iter()
            .map(|w| {
                let mut acc = Rational::zero();
                for (i, a) in x.iter() {
                    for (j, b) in y.iter() {
                        acc += &(&w[*i][*j] * a) * b;
                    }
                }
                acc
            })
            .collect();
        self.ginv.mul_vec(&rhs)
    }

    pub fn op_from_coeffs(&self, c: &[Rational]) -> SparseOp {
        SparseOp::linear_combination(&self.rho, c)
    }

    pub fn d_op(&self, x: &SparseVec, y: &SparseVec) -> SparseOp {
        self.op_from_coeffs(&self.coeffs_vec(x, y))
    }

    /// The full product tensor `[e_i, e_j, e_k] = d_{e_i,e_j}(e_k)`.
    pub fn product_tensor(&self) -> Vec<SparseVec> {
        let n = self.n;
        let ops: Vec<SparseOp> = (0..n * n)
            .into_par_iter()
            .map(|p| {
                let (i, j) = (p / n, p % n);
                if i <= j {
                    self.op_from_coeffs(&self.coeffs(i, j))
                } else {
                    SparseOp::zero(n, n)
                }
            })
            .collect();
        (0..n * n * n)
            .into_par_iter()
            .map(|p| {
                let (i, j, k) = (p / (n * n), (p / n) % n, p % n);
                let (a, b) = if i <= j { (i, j) } else { (j, i) };
                ops[a * n + b].column(k).clone()
            })
            .collect()
    }
}
