//! Constructors for every family of simple real symplectic triple systems,
//! each paired with a Z/4-grading supported in degrees 1̄ and 3̄.

pub mod classical;
pub mod e6;
pub mod e7;
pub mod e8;
pub mod f4;
pub mod g2;
pub mod real_form;
pub mod trace;

use num_traits::Zero;

use crate::exterior::{merge_sign, ExtBasis, MultiIndex};
use crate::linalg::Matrix;
use crate::scalar::Rational;
use crate::sts::{ModelLabel, StsError, TripleSystem, Z4Grading};

/// A constructed system together with its grading.
#[derive(Debug, Clone)]
pub struct Model {
    pub system: TripleSystem,
    pub grading: Z4Grading,
}

/// Gram matrix of `(x|y) = det(x∧y)` between monomials of a span.
pub(crate) fn det_gram(basis: &ExtBasis) -> Matrix {
    let top = MultiIndex::full(basis.ground());
    Matrix::from_fn(basis.len(), basis.len(), |i, j| {
        let (mi, mj) = (basis.monomial(i), basis.monomial(j));
        if mi.is_disjoint(mj) && mi.union(mj) == top {
            Rational::from(merge_sign(mi, mj) as i64)
        } else {
            Rational::zero()
        }
    })
}

/// Weight `#(I ∩ {1,2,3}) − #(I ∩ {4,5,6})` of a monomial of `ΛW`, `dim W = 6`.
pub(crate) fn weight_123(m: MultiIndex) -> i32 {
    m.indices().iter().map(|&i| if i <= 3 { 1 } else { -1 }).sum()
}

/// Builds the model for a label.
pub fn build(label: ModelLabel) -> Result<Model, StsError> {
    use ModelLabel::*;
    label.validate()?;
    match label {
        Special { n } => classical::build_special(n),
        Orthogonal { p, q } => classical::build_orthogonal(p, q),
        Symplectic { n } => classical::build_symplectic(n),
        Unitarian { p, q } => classical::build_unitarian(p, q),
        Quaternionic { n } => classical::build_quaternionic(n),
        G2 => g2::build_g2(),
        F4 => f4::build_f4(),
        E6Split => e6::build_e6_split(),
        E7Split => e7::build_e7_split(),
        E8Split => e8::build_e8_split(),
        E6NonSplit { p } => real_form::build_e6_nonsplit(p),
        E7So102 => real_form::build_e7_so102(),
        E7SoStar => real_form::build_e7_sostar(),
        E8NonSplit => real_form::build_e8_nonsplit(),
    }
}

/// One label per row of the classification, with small parameters for the classical families.
pub fn representatives() -> Vec<ModelLabel> {
    use ModelLabel::*;
    vec![
        Special { n: 2 },
        Orthogonal { p: 2, q: 1 },
        Symplectic { n: 2 },
        Unitarian { p: 1, q: 1 },
        Quaternionic { n: 2 },
        G2,
        F4,
        E6Split,
        E6NonSplit { p: 3 },
        E6NonSplit { p: 5 },
        E7Split,
        E7SoStar,
        E7So102,
        E8Split,
        E8NonSplit,
    ]
}

/// Every admissible label with `n ≤ 3` for the rank-parametrized classical families,
/// `p + q ≤ 4` for the signature-parametrized ones, plus all exceptional labels.
pub fn catalog() -> Vec<ModelLabel> {
    use ModelLabel::*;
    let mut out = Vec::new();
    for n in 1..=3 {
        out.push(Special { n });
    }
    for m in 1..=4 {
        for p in (0..=m).rev() {
            let q = m - p;
            if (Orthogonal { p, q }).validate().is_ok() {
                out.push(Orthogonal { p, q });
            }
        }
    }
    for n in 1..=3 {
        out.push(Symplectic { n });
    }
    for m in 1..=4 {
        for p in (0..=m).rev() {
            out.push(Unitarian { p, q: m - p });
        }
    }
    for n in 1..=3 {
        out.push(Quaternionic { n });
    }
    out.extend(representatives().into_iter().filter(ModelLabel::is_exceptional));
    out
}

/// The grading attached to a label's model.
pub fn z4_grading_for(label: ModelLabel) -> Result<Z4Grading, StsError> {
    Ok(build(label)?.grading)
}
