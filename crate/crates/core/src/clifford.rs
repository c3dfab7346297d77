//! The Clifford algebra of `W ⊕ W*` (split quadratic form) acting on `ΛW`.
//!
//! A vector `u ∈ W` acts by left multiplication `l_u`, a covector `f ∈ W*` by
//! the odd superderivation `δ_f`; then `l_u δ_f + δ_f l_u = f(u)·id`, which is
//! the Clifford relation `xy + yx = q(x, y)` for the polar form
//! `q(e_i, e^j) = δ_ij`. The orthogonal Lie algebra embeds in the even part
//! via `σ_{x,y} ↦ −½(xy − yx)`, where `σ_{x,y}(z) = q(x,z)y − q(y,z)x`.
//!
//! Coordinates on `W ⊕ W*` put `e_1, …, e_N` first and `e^1, …, e^N` after.

use thiserror::Error;

use crate::exterior::{merge_sign, ExtBasis, MultiIndex};
use crate::linalg::{SparseOp, SparseVec};
use crate::scalar::{q, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliffordError {
    #[error("spinor parity does not match the operator")]
    Parity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

/// An element of one half-spin module `Λ₀W` or `Λ₁W`, in that half's basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinVector {
    pub parity: Parity,
    pub coords: SparseVec,
}

/// An operator on `ΛW` in the basis of [`ExtBasis::full`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliffordOp(pub SparseOp);

impl CliffordOp {
    pub fn op(&self) -> &SparseOp {
        &self.0
    }

    pub fn compose(&self, o: &CliffordOp) -> CliffordOp {
        CliffordOp(self.0.compose(&o.0))
    }

    pub fn add(&self, o: &CliffordOp) -> CliffordOp {
        CliffordOp(self.0.add(&o.0))
    }

    pub fn scale(&self, c: &Rational) -> CliffordOp {
        CliffordOp(self.0.scale(c))
    }
}

/// The spin representation of `Cl(W ⊕ W*)` on `ΛW` for `dim W = ground`.
#[derive(Debug, Clone)]
pub struct SpinModule {
    ground: usize,
    full: ExtBasis,
    even: ExtBasis,
    odd: ExtBasis,
    even_pos: Vec<usize>,
    odd_pos: Vec<usize>,
    generators: Vec<SparseOp>,
}

impl SpinModule {
    pub fn new(ground: usize) -> Self {
        let full = ExtBasis::full(ground);
        let even = ExtBasis::even(ground);
        let odd_degrees: Vec<usize> = (1..=ground).step_by(2).collect();
        let odd = ExtBasis::new(ground, crate::exterior::graded_subsets(ground, &odd_degrees));
        let even_pos = even.monomials().iter().map(|m| full.index_of(*m).unwrap()).collect();
        let odd_pos = odd.monomials().iter().map(|m| full.index_of(*m).unwrap()).collect();
        let mut generators = Vec::with_capacity(2 * ground);
        for i in 1..=ground {
            let single = MultiIndex::from_indices(&[i]);
            generators.push(full.operator(|m| {
                if m.contains(i) {
                    vec![]
                } else {
                    vec![(merge_sign(single, m), m.with(i))]
                }
            }));
        }
        for i in 1..=ground {
            generators.push(full.operator(|m| {
                if m.contains(i) {
                    let before = m.len() - 1 - (m.bits() as u32 >> i).count_ones() as usize;
                    vec![(if before.is_multiple_of(2) { 1 } else { -1 }, m.without(i))]
                } else {
                    vec![]
                }
            }));
        }
        Self { ground, full, even, odd, even_pos, odd_pos, generators }
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    /// Dimension of `W ⊕ W*`.
    pub fn vector_dim(&self) -> usize {
        2 * self.ground
    }

    pub fn full_basis(&self) -> &ExtBasis {
        &self.full
    }

    pub fn even_basis(&self) -> &ExtBasis {
        &self.even
    }

    pub fn odd_basis(&self) -> &ExtBasis {
        &self.odd
    }

    /// Polar form: `q(e_i, e^j) = q(e^j, e_i) = δ_ij`, zero on `W × W` and `W* × W*`.
    pub fn polar(&self, x: &SparseVec, y: &SparseVec) -> Rational {
        let n = self.ground;
        let mut acc = Rational::from(0);
        for (a, u) in x.iter() {
            let partner = if *a < n { a + n } else { a - n };
            if let Some(v) = y.get_ref(partner) {
                acc += u * v;
            }
        }
        acc
    }

    /// `Λ(v)` for `v ∈ W ⊕ W*`.
    pub fn clifford_generator(&self, v: &SparseVec) -> CliffordOp {
        let ops: Vec<SparseOp> = v.iter().map(|(a, _)| self.generators[*a].clone()).collect();
        let coeffs: Vec<Rational> = v.iter().map(|(_, c)| c.clone()).collect();
        if ops.is_empty() {
            let d = self.full.len();
            return CliffordOp(SparseOp::zero(d, d));
        }
        CliffordOp(SparseOp::linear_combination(&ops, &coeffs))
    }

    /// The basis generator: `l_{e_{a+1}}` for `a < N`, `δ_{e^{a−N+1}}` otherwise.
    pub fn generator(&self, a: usize) -> &SparseOp {
        &self.generators[a]
    }

    /// `σ_{x,y}` as a matrix on `W ⊕ W*`.
    pub fn sigma(&self, x: &SparseVec, y: &SparseVec) -> SparseOp {
        let d = self.vector_dim();
        let cols = (0..d)
            .map(|k| {
                let z = SparseVec::unit(k);
                y.scale(&self.polar(x, &z)).sub(&x.scale(&self.polar(y, &z)))
            })
            .collect();
        SparseOp::from_columns(d, cols)
    }

    /// The even Clifford element `−½(xy − yx)` representing `σ_{x,y}`.
    pub fn so_embedding(&self, x: &SparseVec, y: &SparseVec) -> CliffordOp {
        let (lx, ly) = (self.clifford_generator(x), self.clifford_generator(y));
        CliffordOp(lx.0.commutator(&ly.0).scale(&q(-1, 2)))
    }

    /// Restriction of an even operator to `Λ₀W`.
    pub fn restrict_even(&self, op: &CliffordOp) -> SparseOp {
        op.0.block(&self.even_pos, &self.even_pos)
    }

    /// Restriction of an even operator to `Λ₁W`.
    pub fn restrict_odd(&self, op: &CliffordOp) -> SparseOp {
        op.0.block(&self.odd_pos, &self.odd_pos)
    }

    /// Acts with an even operator on a half-spin vector of the given parity.
    pub fn half_spin_action(&self, op: &CliffordOp, s: &SpinVector) -> Result<SpinVector, CliffordError> {
        let (pos, other) = match s.parity {
            Parity::Even => (&self.even_pos, &self.odd_pos),
            Parity::Odd => (&self.odd_pos, &self.even_pos),
        };
        let embedded = s.coords.map_indices(|k| pos[k]);
        let img = op.0.apply(&embedded);
        let mut back = vec![usize::MAX; self.full.len()];
        for (k, &p) in pos.iter().enumerate() {
            back[p] = k;
        }
        if img.iter().any(|(i, _)| other.contains(i)) {
            return Err(CliffordError::Parity);
        }
        Ok(SpinVector { parity: s.parity, coords: img.map_indices(|i| back[i]) })
    }

    /// The coordinate vector in `W ⊕ W*` of `e_i` (1-based).
    pub fn e(&self, i: usize) -> SparseVec {
        SparseVec::unit(i - 1)
    }

    /// The coordinate vector in `W ⊕ W*` of `e^i` (1-based).
    pub fn e_dual(&self, i: usize) -> SparseVec {
        SparseVec::unit(self.ground + i - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;

    fn spin() -> SpinModule {
        SpinModule::new(6)
    }

    fn mono(s: &SpinModule, idx: &[usize]) -> SparseVec {
        SparseVec::unit(s.full_basis().index_of(MultiIndex::from_indices(idx)).unwrap())
    }

    #[test]
    fn generator_examples() {
        let s = spin();
        let l1 = s.clifford_generator(&s.e(1));
        assert_eq!(l1.0.apply(&mono(&s, &[])), mono(&s, &[1]));
        let d1 = s.clifford_generator(&s.e_dual(1));
        assert_eq!(d1.0.apply(&mono(&s, &[1, 2])), mono(&s, &[2]));
        let x = s.e(1).add(&s.e_dual(1));
        let g = s.clifford_generator(&x);
        assert_eq!(g.compose(&g).0, SparseOp::identity(64));
    }

    #[test]
    fn clifford_relations_all_pairs() {
        let s = spin();
        for a in 0..12 {
            for b in 0..12 {
                let (x, y) = (SparseVec::unit(a), SparseVec::unit(b));
                let (gx, gy) = (s.clifford_generator(&x), s.clifford_generator(&y));
                let anti = gx.compose(&gy).add(&gy.compose(&gx));
                assert_eq!(anti.0, SparseOp::identity(64).scale(&s.polar(&x, &y)), "{a} {b}");
            }
        }
    }

    #[test]
    fn sigma_weight_rule() {
        let s = spin();
        let sig = s.sigma(&s.e_dual(1), &s.e(1));
        assert_eq!(sig.apply(&s.e(1)), s.e(1));
        assert_eq!(sig.apply(&s.e_dual(1)), s.e_dual(1).neg());
        let sig12 = s.sigma(&s.e(1), &s.e(2));
        assert_eq!(sig12.apply(&s.e_dual(1)), s.e(2));
        let emb = s.so_embedding(&s.e_dual(1), &s.e(1));
        for &m in s.even_basis().monomials() {
            let v = SparseVec::unit(s.full_basis().index_of(m).unwrap());
            let expect = if m.contains(1) { q(1, 2) } else { q(-1, 2) };
            assert_eq!(emb.0.apply(&v), v.scale(&expect));
        }
    }

    #[test]
    fn total_weight_on_extremes() {
        let s = spin();
        let mut total = s.so_embedding(&s.e_dual(1), &s.e(1));
        for i in 2..=6 {
            total = total.add(&s.so_embedding(&s.e_dual(i), &s.e(i)));
        }
        let one = SpinVector { parity: Parity::Even, coords: SparseVec::unit(0) };
        assert_eq!(s.half_spin_action(&total, &one).unwrap().coords, SparseVec::single(0, qi(-3)));
        let top = SpinVector { parity: Parity::Even, coords: SparseVec::unit(31) };
        assert_eq!(s.half_spin_action(&total, &top).unwrap().coords, SparseVec::single(31, qi(3)));
        let e12 = SpinVector { parity: Parity::Even, coords: SparseVec::unit(1) };
        let w1 = s.so_embedding(&s.e_dual(1), &s.e(1));
        assert_eq!(s.half_spin_action(&w1, &e12).unwrap().coords, SparseVec::single(1, q(1, 2)));
        let odd = s.clifford_generator(&s.e(1));
        assert_eq!(s.half_spin_action(&odd, &one), Err(CliffordError::Parity));
    }

    #[test]
    fn so_embedding_is_lie_homomorphism() {
        let s = spin();
        let basis: Vec<SparseVec> = (0..12).map(SparseVec::unit).collect();
        let mut pairs = Vec::new();
        for a in 0..12 {
            for b in a + 1..12 {
                pairs.push((a, b));
            }
        }
        let emb: Vec<CliffordOp> = pairs.iter().map(|&(a, b)| s.so_embedding(&basis[a], &basis[b])).collect();
        let to_emb = |v: &SparseVec, w: &SparseVec| s.so_embedding(v, w);
        for (i, &(a, b)) in pairs.iter().enumerate() {
            let sig = s.sigma(&basis[a], &basis[b]);
            for (j, &(c, d)) in pairs.iter().enumerate() {
                let lhs = emb[i].0.commutator(&emb[j].0);
                let rhs = to_emb(&sig.apply(&basis[c]), &basis[d]).add(&to_emb(&basis[c], &sig.apply(&basis[d])));
                assert_eq!(lhs, rhs.0);
            }
        }
    }

    #[test]
    fn generators_are_ba_symmetric() {
        use crate::exterior::{ba_form, ExtElement};
        let s = spin();
        let full = s.full_basis();
        for a in 0..12 {
            let g = s.generator(a);
            for i in 0..64 {
                let gi = full.element(&g.apply(&SparseVec::unit(i)));
                for j in 0..64 {
                    let gj = full.element(&g.apply(&SparseVec::unit(j)));
                    let (ei, ej): (ExtElement, ExtElement) = (full.element(&SparseVec::unit(i)), full.element(&SparseVec::unit(j)));
                    assert_eq!(ba_form(&gi, &ej).unwrap(), ba_form(&ei, &gj).unwrap());
                }
            }
        }
    }
}
