//! Exterior algebras `ΛW` over a basis `e_1, …, e_N` with `N ≤ 8`.
//!
//! Basis monomials are [`MultiIndex`] bitmasks: bit `i − 1` set means `e_i`
//! occurs. The sign `(−1)^{IJ}` of `e_I ∧ e_J = (−1)^{IJ} e_{I∪J}` is the
//! parity of the merge permutation, i.e. of the number of pairs
//! `(i, j) ∈ I × J` with `i > j`.
//!
//! The dual algebra `ΛW*` reuses [`ExtElement`] with `dual = true`; `e^I`
//! pairs with `e_J` by `δ_{IJ}` (determinant convention).

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::linalg::{SparseOp, SparseVec};
use crate::scalar::{Rational, Scalar};

/// Largest supported ground dimension.
pub const MAX_GROUND: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExteriorError {
    #[error("ground dimensions differ ({0} vs {1})")]
    GroundMismatch(usize, usize),
    #[error("cannot combine an element of ΛW with one of ΛW*")]
    DualMismatch,
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("index {0} outside 1..={1}")]
    IndexRange(usize, usize),
}

/// A set of ground indices `{i₁ < … < i_r} ⊆ {1, …, 8}` stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiIndex(u8);

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex(0);

    pub fn from_bits(bits: u8) -> Self {
        Self(bits)
    }

    /// From 1-based indices in any order; duplicates are an error upstream, here they collapse.
    pub fn from_indices(idx: &[usize]) -> Self {
        let mut b = 0u8;
        for &i in idx {
            assert!((1..=MAX_GROUND).contains(&i), "ground index {i} out of range");
            b |= 1 << (i - 1);
        }
        Self(b)
    }

    /// The full set `{1, …, n}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_GROUND);
        Self(((1u16 << n) - 1) as u8)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        (1..=MAX_GROUND).contains(&i) && self.0 & (1 << (i - 1)) != 0
    }

    /// Increasing 1-based index sequence.
    pub fn indices(self) -> Vec<usize> {
        (1..=MAX_GROUND).filter(|&i| self.contains(i)).collect()
    }

    pub fn complement(self, n: usize) -> Self {
        Self(!self.0 & Self::full(n).0)
    }

    pub fn union(self, o: Self) -> Self {
        Self(self.0 | o.0)
    }

    pub fn intersection(self, o: Self) -> Self {
        Self(self.0 & o.0)
    }

    pub fn minus(self, o: Self) -> Self {
        Self(self.0 & !o.0)
    }

    pub fn is_disjoint(self, o: Self) -> bool {
        self.0 & o.0 == 0
    }

    pub fn is_subset(self, o: Self) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn with(self, i: usize) -> Self {
        Self(self.0 | (1 << (i - 1)))
    }

    pub fn without(self, i: usize) -> Self {
        Self(self.0 & !(1 << (i - 1)))
    }

    /// Number of members strictly greater than `i`.
    fn count_above(self, i: usize) -> u32 {
        (self.0 as u32 >> i).count_ones()
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "∅");
        }
        for i in self.indices() {
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

/// `(−1)^{IJ}` for disjoint `I, J`: `+1` or `−1`. Panics if they overlap.
pub fn merge_sign(i: MultiIndex, j: MultiIndex) -> i32 {
    assert!(i.is_disjoint(j), "merge sign needs disjoint index sets");
    let inversions: u32 = j.indices().into_iter().map(|x| i.count_above(x)).sum();
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// All `r`-subsets of `{1, …, n}` in lexicographic order of their increasing sequences.
pub fn subsets(n: usize, r: usize) -> Vec<MultiIndex> {
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
        if cur.len() == r {
            out.push(MultiIndex::from_indices(cur));
            return;
        }
        for i in start..=n {
            if n - i + 1 < r - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, n, r, &mut Vec::new(), &mut out);
    out
}

/// All subsets of `{1,…,n}` with degree in `degrees`, grouped by degree (in the given order), lex within a degree.
pub fn graded_subsets(n: usize, degrees: &[usize]) -> Vec<MultiIndex> {
    degrees.iter().flat_map(|&r| subsets(n, r)).collect()
}

fn sign<S: Scalar>(s: i32, v: S) -> S {
    if s >= 0 {
        v
    } else {
        -v
    }
}

/// An element of `ΛW` (or of `ΛW*` when `dual`).
#[derive(Clone, PartialEq)]
pub struct ExtElement<S: Scalar = Rational> {
    ground: usize,
    dual: bool,
    terms: BTreeMap<MultiIndex, S>,
}

impl<S: Scalar> fmt::Debug for ExtElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let sym = if self.dual { "e^" } else { "e_" };
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("{c:?}·{sym}{m:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<S: Scalar> ExtElement<S> {
    pub fn zero(ground: usize) -> Self {
        assert!(ground <= MAX_GROUND, "ground dimension above {MAX_GROUND}");
        Self { ground, dual: false, terms: BTreeMap::new() }
    }

    pub fn one(ground: usize) -> Self {
        Self::monomial(ground, MultiIndex::EMPTY)
    }

    /// The basis monomial `e_I`.
    pub fn monomial(ground: usize, i: MultiIndex) -> Self {
        Self::term(ground, i, S::one())
    }

    /// `c·e_I`.
    pub fn term(ground: usize, i: MultiIndex, c: S) -> Self {
        let mut x = Self::zero(ground);
        assert!(i.is_subset(MultiIndex::full(ground)), "index set outside ground");
        x.add_term(i, c);
        x
    }

    /// `e_{i₁…i_r}` from 1-based indices, reordered with the appropriate sign.
    pub fn basis(ground: usize, idx: &[usize]) -> Self {
        let mut x = Self::one(ground);
        for &i in idx {
            x = x.wedge(&Self::monomial(ground, MultiIndex::from_indices(&[i]))).expect("same ground");
        }
        x
    }

    /// Same coefficients, reinterpreted in the dual algebra.
    pub fn into_dual(mut self) -> Self {
        self.dual = true;
        self
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn is_dual(&self) -> bool {
        self.dual
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: MultiIndex) -> S {
        self.terms.get(&i).cloned().unwrap_or_else(S::zero)
    }

    pub fn add_term(&mut self, i: MultiIndex, c: S) {
        if c.is_zero() {
            return;
        }
        let v = match self.terms.remove(&i) {
            Some(old) => old + c,
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(i, v);
        }
    }

    fn compatible(&self, o: &Self) -> Result<(), ExteriorError> {
        if self.ground != o.ground {
            return Err(ExteriorError::GroundMismatch(self.ground, o.ground));
        }
        if self.dual != o.dual {
            return Err(ExteriorError::DualMismatch);
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self, ExteriorError> {
        self.compatible(o)?;
        let mut out = self.clone();
        for (i, c) in &o.terms {
            out.add_term(*i, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self { ground: self.ground, dual: self.dual, terms: BTreeMap::new() };
        for (i, v) in &self.terms {
            out.add_term(*i, v.clone() * c.clone());
        }
        out
    }

    /// The degree when homogeneous (`None` for zero or mixed elements).
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|m| m.len());
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    pub fn wedge(&self, o: &Self) -> Result<Self, ExteriorError> {
        self.compatible(o)?;
        let mut out = Self { ground: self.ground, dual: self.dual, terms: BTreeMap::new() };
        for (i, a) in &self.terms {
            for (j, b) in &o.terms {
                if i.is_disjoint(*j) {
                    out.add_term(i.union(*j), sign(merge_sign(*i, *j), a.clone() * b.clone()));
                }
            }
        }
        Ok(out)
    }

    /// `ŝ`: the sign `(−1)^{r(r−1)/2}` on the degree-`r` part.
    pub fn hat(&self) -> Self {
        let mut out = self.clone();
        for (i, c) in out.terms.iter_mut() {
            let r = i.len();
            if (r * r.saturating_sub(1) / 2) % 2 == 1 {
                *c = -c.clone();
            }
        }
        out
    }

    /// Coefficient of the top monomial `e_{1…N}`.
    pub fn top_coefficient(&self) -> S {
        self.coeff(MultiIndex::full(self.ground))
    }

    /// `Φ(e_I) = (−1)^{IĪ} e^{Ī}` on a homogeneous element.
    pub fn phi(&self) -> Result<Self, ExteriorError> {
        if self.is_zero() {
            return Ok(Self { ground: self.ground, dual: !self.dual, terms: BTreeMap::new() });
        }
        self.degree().ok_or(ExteriorError::NotHomogeneous)?;
        let mut out = Self { ground: self.ground, dual: !self.dual, terms: BTreeMap::new() };
        for (i, c) in &self.terms {
            let ic = i.complement(self.ground);
            out.add_term(ic, sign(merge_sign(*i, ic), c.clone()));
        }
        Ok(out)
    }

    /// The odd superderivation `δ_{e^j}` with `δ(e_i) = δ_{ij}`.
    pub fn contract(&self, j: usize) -> Result<Self, ExteriorError> {
        if !(1..=self.ground).contains(&j) {
            return Err(ExteriorError::IndexRange(j, self.ground));
        }
        let mut out = Self { ground: self.ground, dual: self.dual, terms: BTreeMap::new() };
        for (i, c) in &self.terms {
            if i.contains(j) {
                // j sits after every smaller member of I
                let before = i.len() - 1 - i.count_above(j) as usize;
                out.add_term(i.without(j), sign(if before.is_multiple_of(2) { 1 } else { -1 }, c.clone()));
            }
        }
        Ok(out)
    }

    /// Complex conjugation of the coefficients.
    pub fn conj(&self) -> Self {
        Self { ground: self.ground, dual: self.dual, terms: self.terms.iter().map(|(i, c)| (*i, c.conj())).collect() }
    }

    /// Applies a map on coefficients (used for scalar-type changes).
    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> ExtElement<T> {
        let mut out = ExtElement::<T> { ground: self.ground, dual: self.dual, terms: BTreeMap::new() };
        for (i, c) in &self.terms {
            out.add_term(*i, f(c));
        }
        out
    }
}

/// `det(x ∧ y)`: the top coefficient of `x ∧ y`.
pub fn det_pairing<S: Scalar>(x: &ExtElement<S>, y: &ExtElement<S>) -> Result<S, ExteriorError> {
    Ok(x.wedge(y)?.top_coefficient())
}

/// `b_a(s, t) = det(ŝ ∧ t)`.
pub fn ba_form<S: Scalar>(s: &ExtElement<S>, t: &ExtElement<S>) -> Result<S, ExteriorError> {
    det_pairing(&s.hat(), t)
}

/// `e_I ∧ e_J` on monomials: `Some((sign, I ∪ J))` or `None` when they overlap.
pub fn wedge_monomials(i: MultiIndex, j: MultiIndex) -> Option<(i32, MultiIndex)> {
    i.is_disjoint(j).then(|| (merge_sign(i, j), i.union(j)))
}

/// An ordered list of monomials with reverse lookup, giving coordinates on a span of `e_I`'s.
#[derive(Clone, Debug)]
pub struct ExtBasis {
    ground: usize,
    monomials: Vec<MultiIndex>,
    pos: Vec<Option<usize>>,
}

impl ExtBasis {
    pub fn new(ground: usize, monomials: Vec<MultiIndex>) -> Self {
        let mut pos = vec![None; 256];
        for (k, m) in monomials.iter().enumerate() {
            assert!(pos[m.bits() as usize].is_none(), "repeated monomial");
            pos[m.bits() as usize] = Some(k);
        }
        Self { ground, monomials, pos }
    }

    /// `Λ^r W` in lex order.
    pub fn degree(ground: usize, r: usize) -> Self {
        Self::new(ground, subsets(ground, r))
    }

    /// The whole of `ΛW`, by degree then lex.
    pub fn full(ground: usize) -> Self {
        Self::new(ground, graded_subsets(ground, &(0..=ground).collect::<Vec<_>>()))
    }

    /// The even part `Λ₀W`, by degree then lex.
    pub fn even(ground: usize) -> Self {
        Self::new(ground, graded_subsets(ground, &(0..=ground).step_by(2).collect::<Vec<_>>()))
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomial(&self, k: usize) -> MultiIndex {
        self.monomials[k]
    }

    pub fn monomials(&self) -> &[MultiIndex] {
        &self.monomials
    }

    pub fn index_of(&self, m: MultiIndex) -> Option<usize> {
        self.pos[m.bits() as usize]
    }

    /// Coordinates of a rational element supported on this basis.
    pub fn coords(&self, x: &ExtElement<Rational>) -> Option<SparseVec> {
        let e = x.terms().map(|(m, c)| self.index_of(*m).map(|k| (k, c.clone()))).collect::<Option<Vec<_>>>()?;
        Some(SparseVec::from_entries(e))
    }

    pub fn element(&self, v: &SparseVec) -> ExtElement<Rational> {
        let mut x = ExtElement::zero(self.ground);
        for (k, c) in v.iter() {
            x.add_term(self.monomials[*k], c.clone());
        }
        x
    }

    /// The operator induced on this span by a map of monomials, `e_I ↦ Σ c·e_J`.
    pub fn operator(&self, f: impl Fn(MultiIndex) -> Vec<(i32, MultiIndex)>) -> SparseOp {
        self.operator_to(self, |m| f(m).into_iter().map(|(s, j)| (Rational::from(s as i64), j)).collect())
    }

    /// Operator from this span to `target`; panics if an image leaves `target`.
    pub fn operator_to(&self, target: &ExtBasis, f: impl Fn(MultiIndex) -> Vec<(Rational, MultiIndex)>) -> SparseOp {
        let cols = self
            .monomials
            .iter()
            .map(|&m| {
                SparseVec::from_entries(
                    f(m).into_iter()
                        .map(|(c, j)| (target.index_of(j).unwrap_or_else(|| panic!("image e_{j:?} outside target span")), c))
                        .collect(),
                )
            })
            .collect();
        SparseOp::from_columns(target.len(), cols)
    }

    /// Extends an endomorphism `A` of `W` (column `a` = image of `e_{a+1}`) as a derivation of this span.
    pub fn derivation(&self, a: &SparseOp) -> SparseOp {
        assert_eq!(a.rows(), self.ground, "endomorphism must act on the ground space");
        self.operator_to(self, |m| derivation_image(m, a))
    }
}

/// The image of `e_I` under the derivation extending `A ∈ End(W)`.
pub fn derivation_image(m: MultiIndex, a: &SparseOp) -> Vec<(Rational, MultiIndex)> {
    let idx = m.indices();
    let mut out = Vec::new();
    for (p, &i) in idx.iter().enumerate() {
        let before = MultiIndex::from_indices(&idx[..p]);
        let after = MultiIndex::from_indices(&idx[p + 1..]);
        for (l, c) in a.column(i - 1).iter() {
            let l1 = l + 1;
            let single = MultiIndex::from_indices(&[l1]);
            if !before.is_disjoint(single) || !after.is_disjoint(single) {
                continue;
            }
            let s = merge_sign(before, single) * merge_sign(before.with(l1), after);
            out.push((if s > 0 { c.clone() } else { -c.clone() }, before.with(l1).union(after)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;

    type E = ExtElement<Rational>;

    /// Sign of sorting a sequence by adjacent transpositions.
    fn sort_sign(mut v: Vec<usize>) -> i32 {
        let mut s = 1;
        for i in 0..v.len() {
            for j in 0..v.len() - 1 - i {
                if v[j] > v[j + 1] {
                    v.swap(j, j + 1);
                    s = -s;
                }
            }
        }
        s
    }

    #[test]
    fn merge_sign_matches_sorting_oracle() {
        for a in 0u16..256 {
            for b in 0u16..256 {
                let (i, j) = (MultiIndex(a as u8), MultiIndex(b as u8));
                if i.is_disjoint(j) {
                    let mut seq = i.indices();
                    seq.extend(j.indices());
                    assert_eq!(merge_sign(i, j), sort_sign(seq));
                }
            }
        }
    }

    #[test]
    fn wedge_examples() {
        assert_eq!(E::basis(6, &[1, 2]).wedge(&E::basis(6, &[3, 4])).unwrap(), E::basis(6, &[1, 2, 3, 4]));
        assert_eq!(E::basis(6, &[3, 4]).wedge(&E::basis(6, &[1, 2])).unwrap(), E::basis(6, &[1, 2, 3, 4]));
        assert_eq!(
            E::basis(6, &[3, 4, 5, 6]).wedge(&E::basis(6, &[1, 2])).unwrap(),
            E::basis(6, &[1, 2, 3, 4, 5, 6])
        );
        assert_eq!(E::basis(6, &[2, 1]), E::basis(6, &[1, 2]).scale(&qi(-1)));
        assert!(E::zero(6).wedge(&E::zero(8)).is_err());
    }

    #[test]
    fn det_pairing_examples() {
        assert_eq!(det_pairing(&E::basis(6, &[1, 2, 3]), &E::basis(6, &[4, 5, 6])).unwrap(), qi(1));
        assert_eq!(det_pairing(&E::basis(6, &[1, 2, 3]), &E::basis(6, &[1, 2, 3])).unwrap(), qi(0));
        assert_eq!(det_pairing(&E::basis(8, &[1, 2]), &E::basis(8, &[3, 4, 5, 6, 7, 8])).unwrap(), qi(1));
        assert_eq!(det_pairing(&E::basis(6, &[4, 5, 6]), &E::basis(6, &[1, 2, 3])).unwrap(), qi(-1));
    }

    #[test]
    fn phi_examples() {
        assert_eq!(E::basis(6, &[1, 2, 3]).phi().unwrap(), E::basis(6, &[4, 5, 6]).into_dual());
        assert_eq!(E::basis(8, &[5, 6, 7, 8]).phi().unwrap(), E::basis(8, &[1, 2, 3, 4]).into_dual());
        assert_eq!(E::one(8).phi().unwrap(), E::basis(8, &[1, 2, 3, 4, 5, 6, 7, 8]).into_dual());
        let mixed = E::one(6).add(&E::basis(6, &[1])).unwrap();
        assert_eq!(mixed.phi(), Err(ExteriorError::NotHomogeneous));
    }

    #[test]
    fn phi_twice_regression() {
        // Φ_{N−i}∘Φ_i = (−1)^{i(N−i)}·id
        for n in [6usize, 8] {
            for r in 0..=n {
                for m in subsets(n, r) {
                    let x = E::monomial(n, m);
                    let back = x.phi().unwrap().phi().unwrap();
                    let s = if (r * (n - r)) % 2 == 0 { 1 } else { -1 };
                    assert_eq!(back, x.scale(&qi(s)));
                }
            }
        }
    }

    #[test]
    fn contraction_examples() {
        let e12 = E::basis(6, &[1, 2]);
        assert_eq!(e12.contract(1).unwrap(), E::basis(6, &[2]));
        assert_eq!(e12.contract(2).unwrap(), E::basis(6, &[1]).scale(&qi(-1)));
        assert!(e12.contract(3).unwrap().is_zero());
    }

    #[test]
    fn hat_examples() {
        assert_eq!(E::one(6).hat(), E::one(6));
        assert_eq!(E::basis(6, &[1, 2]).hat(), E::basis(6, &[1, 2]).scale(&qi(-1)));
        assert_eq!(E::basis(6, &[1, 2, 3, 4]).hat(), E::basis(6, &[1, 2, 3, 4]));
    }

    #[test]
    fn ba_form_examples() {
        assert_eq!(ba_form(&E::one(6), &E::basis(6, &[1, 2, 3, 4, 5, 6])).unwrap(), qi(1));
        assert_eq!(ba_form(&E::basis(6, &[1, 2, 3, 4]), &E::basis(6, &[5, 6])).unwrap(), qi(1));
        assert_eq!(ba_form(&E::basis(6, &[1, 2]), &E::basis(6, &[1, 2])).unwrap(), qi(0));
    }

    #[test]
    fn sign_associativity_exhaustive() {
        let n = 6;
        let all: Vec<MultiIndex> = (0..64u8).map(MultiIndex).collect();
        for &i in &all {
            for &j in all.iter().filter(|j| j.is_disjoint(i)) {
                for &k in all.iter().filter(|k| k.is_disjoint(i) && k.is_disjoint(j)) {
                    let lhs = merge_sign(i, j) * merge_sign(i.union(j), k);
                    let rhs = merge_sign(i, j.union(k)) * merge_sign(j, k);
                    assert_eq!(lhs, rhs, "{i:?} {j:?} {k:?}");
                }
            }
        }
        assert_eq!(MultiIndex::full(n).len(), 6);
    }

    #[test]
    fn ba_even_odd_orthogonal_and_alternating_on_even() {
        let even = ExtBasis::even(6);
        let all = ExtBasis::full(6);
        for &s in all.monomials() {
            for &t in all.monomials() {
                let v = ba_form(&E::monomial(6, s), &E::monomial(6, t)).unwrap();
                let s_even = s.len() % 2 == 0;
                let t_even = t.len() % 2 == 0;
                if s_even != t_even {
                    assert_eq!(v, qi(0));
                }
                if s_even && t_even {
                    assert_eq!(v, -ba_form(&E::monomial(6, t), &E::monomial(6, s)).unwrap());
                }
            }
        }
        assert_eq!(even.len(), 32);
    }

    #[test]
    fn derivation_of_identity_is_degree() {
        let b = ExtBasis::degree(6, 3);
        let d = b.derivation(&SparseOp::identity(6));
        assert_eq!(d, SparseOp::identity(20).scale(&qi(3)));
    }

    #[test]
    fn subsets_are_lex() {
        let s = subsets(4, 2);
        let seqs: Vec<Vec<usize>> = s.iter().map(|m| m.indices()).collect();
        assert_eq!(seqs, vec![vec![1, 2], vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4], vec![3, 4]]);
    }
}
