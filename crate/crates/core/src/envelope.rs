//! Lie algebras given by structure constants, the standard enveloping algebra
//! `g(T) = sp(V) ⊕ inder(T) ⊕ (V ⊗ T)`, Killing forms and the classification
//! table.
//!
//! `V` is two-dimensional with `⟨e₁|e₂⟩ = 1`; `sp(V)` has the basis
//! `h = diag(1, −1)`, `e = E₁₂`, `f = E₂₁`, and `γ_{a,b} = ⟨a|·⟩b + ⟨b|·⟩a`
//! gives `γ_{e₁,e₁} = 2e`, `γ_{e₂,e₂} = −2f`, `γ_{e₁,e₂} = −h`. The odd
//! bracket is `[a⊗x, b⊗y] = (x|y)γ_{a,b} + ⟨a|b⟩d_{x,y}`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use num_traits::{One, Zero};

use crate::linalg::{inertia, Accumulator, Inertia, Matrix, SparseOp, SparseVec};
use crate::scalar::Rational;
use crate::sts::{CheckMode, Inder, Lcg, ModelLabel, TripleSystem, DEFAULT_SAMPLES, DEFAULT_SEED};

/// Largest dimension for which Jacobi is checked on every basis triple.
pub const JACOBI_EXHAUSTIVE_LIMIT: usize = 52;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("expected {expected} brackets, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("bracket is not antisymmetric at ({0},{1})")]
    NotAntisymmetric(usize, usize),
    #[error("bracket value outside the algebra at ({0},{1})")]
    OutOfRange(usize, usize),
}

/// A Lie algebra on `ℚᵐ` with `[e_i, e_j] = brackets[i·m + j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    m: usize,
    brackets: Vec<SparseVec>,
    parity: Option<Vec<u8>>,
}

impl LieAlgebra {
    pub fn new(m: usize, brackets: Vec<SparseVec>) -> Result<Self, LieError> {
        if brackets.len() != m * m {
            return Err(LieError::Shape { expected: m * m, got: brackets.len() });
        }
        for i in 0..m {
            for j in i..m {
                let (a, b) = (&brackets[i * m + j], &brackets[j * m + i]);
                if a.support_bound() > m {
                    return Err(LieError::OutOfRange(i, j));
                }
                if *a != b.neg() {
                    return Err(LieError::NotAntisymmetric(i, j));
                }
            }
        }
        Ok(Self { m, brackets, parity: None })
    }

    /// Builds from the brackets `[e_i, e_j]` with `i < j`.
    pub fn from_upper(m: usize, f: impl Fn(usize, usize) -> SparseVec + Sync) -> Result<Self, LieError> {
        let upper: Vec<SparseVec> =
            (0..m * m).into_par_iter().map(|p| if p / m < p % m { f(p / m, p % m) } else { SparseVec::new() }).collect();
        let mut brackets = upper;
        for i in 0..m {
            for j in 0..i {
                brackets[i * m + j] = brackets[j * m + i].neg();
            }
        }
        Self::new(m, brackets)
    }

    pub fn with_parity(mut self, parity: Vec<u8>) -> Self {
        assert_eq!(parity.len(), self.m);
        self.parity = Some(parity);
        self
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn parity(&self) -> Option<&[u8]> {
        self.parity.as_deref()
    }

    pub fn bracket(&self, i: usize, j: usize) -> &SparseVec {
        &self.brackets[i * self.m + j]
    }

    pub fn brackets(&self) -> &[SparseVec] {
        &self.brackets
    }

    /// Replaces one structure constant pair (keeps antisymmetry); meant for mutation tests.
    pub fn with_bracket(mut self, i: usize, j: usize, v: SparseVec) -> Self {
        let m = self.m;
        self.brackets[j * m + i] = v.neg();
        self.brackets[i * m + j] = v;
        self
    }

    pub fn bracket_vec(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut acc = Accumulator::new(self.m);
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                acc.add_scaled(&(a * b), self.bracket(*i, *j));
            }
        }
        acc.finish()
    }

    /// `ad e_i`.
    pub fn ad(&self, i: usize) -> SparseOp {
        SparseOp::from_columns(self.m, (0..self.m).map(|l| self.bracket(i, l).clone()).collect())
    }

    /// `[e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]]`.
    pub fn jacobiator(&self, i: usize, j: usize, k: usize) -> SparseVec {
        let mut acc = Accumulator::new(self.m);
        for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
            for (l, x) in self.bracket(b, c).iter() {
                acc.add_scaled(x, self.bracket(a, *l));
            }
        }
        acc.finish()
    }

    pub fn check_jacobi(&self, mode: CheckMode) -> JacobiReport {
        let m = self.m;
        let exhaustive = matches!(mode, CheckMode::Exhaustive) && m <= JACOBI_EXHAUSTIVE_LIMIT;
        if exhaustive {
            let triples: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
            let bad = triples
                .par_iter()
                .map(|&(i, j)| (j + 1..m).find(|&k| !self.jacobiator(i, j, k).is_zero()).map(|k| (i, j, k)))
                .find_first(|r| r.is_some())
                .flatten();
            let checked = (m * m.saturating_sub(1) * m.saturating_sub(2) / 6) as u64;
            return JacobiReport { exhaustive: true, seed: None, checked, counterexample: bad };
        }
        let (seed, count) = match mode {
            CheckMode::Sampled { seed, count } => (seed, count),
            CheckMode::Exhaustive => (DEFAULT_SEED, DEFAULT_SAMPLES),
        };
        let mut rng = Lcg::new(seed);
        let samples: Vec<(usize, usize, usize)> = (0..count)
            .map(|_| {
                let mut t = [0usize; 3];
                loop {
                    for x in t.iter_mut() {
                        *x = rng.below(m as u64) as usize;
                    }
                    if m < 3 || (t[0] != t[1] && t[1] != t[2] && t[0] != t[2]) {
                        break;
                    }
                }
                (t[0], t[1], t[2])
            })
            .collect();
        let bad = samples
            .par_iter()
            .map(|&(i, j, k)| (!self.jacobiator(i, j, k).is_zero()).then_some((i, j, k)))
            .find_first(|r| r.is_some())
            .flatten();
        JacobiReport { exhaustive: false, seed: Some(seed), checked: count as u64, counterexample: bad }
    }

    /// The Gram matrix `κ(e_i, e_j) = tr(ad e_i ∘ ad e_j)`.
    pub fn killing_gram(&self) -> Matrix {
        let m = self.m;
        let ads: Vec<SparseOp> = (0..m).into_par_iter().map(|i| self.ad(i)).collect();
        let rows: Vec<SparseVec> = (0..m)
            .into_par_iter()
            .map(|i| SparseVec::from_dense(&(0..m).map(|j| ads[i].trace_product(&ads[j])).collect::<Vec<_>>()))
            .collect();
        Matrix::from_sparse_rows(m, rows)
    }

    /// Signature of the Killing form.
    pub fn killing_signature(&self) -> i64 {
        inertia(&self.killing_gram()).signature()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JacobiReport {
    pub exhaustive: bool,
    pub seed: Option<u64>,
    pub checked: u64,
    pub counterexample: Option<(usize, usize, usize)>,
}

impl JacobiReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

// ---------------------------------------------------------------------------
// The standard enveloping algebra

/// `g(T)` with its basis layout.
#[derive(Debug, Clone)]
pub struct Envelope {
    pub algebra: LieAlgebra,
    /// `dim T`.
    pub n: usize,
    /// `dim inder(T)`.
    pub k: usize,
}

pub const H: usize = 0;
pub const E: usize = 1;
pub const F: usize = 2;

impl Envelope {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn sp_range(&self) -> std::ops::Range<usize> {
        0..3
    }

    pub fn inder_range(&self) -> std::ops::Range<usize> {
        3..3 + self.k
    }

    pub fn odd_range(&self) -> std::ops::Range<usize> {
        3 + self.k..3 + self.k + 2 * self.n
    }

    /// Index of `e₁ ⊗ x_i` (`s = 0`) or `e₂ ⊗ x_i` (`s = 1`).
    pub fn odd(&self, s: usize, i: usize) -> usize {
        3 + self.k + s * self.n + i
    }
}

/// `γ_{e_a, e_b}` in the basis `(h, e, f)`.
fn gamma(a: usize, b: usize) -> SparseVec {
    match (a, b) {
        (0, 0) => SparseVec::single(E, Rational::from(2)),
        (1, 1) => SparseVec::single(F, Rational::from(-2)),
        _ => SparseVec::single(H, -Rational::one()),
    }
}

/// `⟨e_a|e_b⟩`.
fn vpair(a: usize, b: usize) -> Rational {
    match (a, b) {
        (0, 1) => Rational::one(),
        (1, 0) => -Rational::one(),
        _ => Rational::zero(),
    }
}

/// The image of `e_s` under `h`, `e`, `f`: `(coefficient, target)`.
fn sp_on_v(x: usize, s: usize) -> Option<(Rational, usize)> {
    match (x, s) {
        (H, 0) => Some((Rational::one(), 0)),
        (H, 1) => Some((-Rational::one(), 1)),
        (E, 1) => Some((Rational::one(), 0)),
        (F, 0) => Some((Rational::one(), 1)),
        _ => None,
    }
}

pub fn build_envelope(t: &TripleSystem, inder: &Inder) -> Result<Envelope, LieError> {
    let n = t.n();
    let k = inder.dim();
    let m = 3 + k + 2 * n;
    let lay = Envelope { algebra: LieAlgebra { m: 0, brackets: vec![], parity: None }, n, k };
    let odd_of = |x: usize| -> (usize, usize) { ((x - 3 - k) / n, (x - 3 - k) % n) };
    let ins = inder.algebra();
    let bracket = |i: usize, j: usize| -> SparseVec {
        let in_sp = |x: usize| x < 3;
        let in_inder = |x: usize| (3..3 + k).contains(&x);
        if in_sp(i) && in_sp(j) {
            return match (i, j) {
                (H, E) => SparseVec::single(E, Rational::from(2)),
                (H, F) => SparseVec::single(F, Rational::from(-2)),
                (E, F) => SparseVec::single(H, Rational::one()),
                _ => unreachable!("upper triangle only"),
            };
        }
        if in_sp(i) && in_inder(j) {
            return SparseVec::new();
        }
        if in_sp(i) {
            let (s, x) = odd_of(j);
            return match sp_on_v(i, s) {
                Some((c, s2)) => SparseVec::single(lay.odd(s2, x), c),
                None => SparseVec::new(),
            };
        }
        if in_inder(i) && in_inder(j) {
            return ins.bracket(i - 3, j - 3).map_indices(|l| l + 3);
        }
        if in_inder(i) {
            let (s, x) = odd_of(j);
            return inder.ops()[i - 3].column(x).map_indices(|l| lay.odd(s, l));
        }
        let ((a, x), (b, y)) = (odd_of(i), odd_of(j));
        let g = gamma(a, b).scale(&t.form_basis(x, y));
        let d = inder.pair_coords(x, y).map_indices(|l| l + 3).scale(&vpair(a, b));
        g.add(&d)
    };
    let algebra = LieAlgebra::from_upper(m, bracket)?;
    let parity = (0..m).map(|i| u8::from(i >= 3 + k)).collect();
    Ok(Envelope { algebra: algebra.with_parity(parity), n, k })
}

// ---------------------------------------------------------------------------
// Killing forms

#[derive(Debug, Clone)]
pub struct KillingReport {
    pub gram: Matrix,
    pub inertia: Inertia,
    pub signature: i64,
    pub sp_signature: i64,
    pub inder_block_signature: i64,
    pub odd_signature: i64,
    /// `κ(h, h)`.
    pub kappa_hh: Rational,
    pub even_odd_orthogonal: bool,
    pub sp_inder_orthogonal: bool,
    /// `c` with `κ(a⊗x, b⊗y) = c·⟨a|b⟩(x|y)`, when such a `c` exists.
    pub odd_factor: Option<Rational>,
    pub nondegenerate: bool,
}

pub fn killing(env: &Envelope) -> KillingReport {
    let gram = env.algebra.killing_gram();
    let block = |r: std::ops::Range<usize>| -> i64 {
        let idx: Vec<usize> = r.collect();
        inertia(&gram.submatrix(&idx, &idx)).signature()
    };
    let all = inertia(&gram);
    let zero_between = |a: std::ops::Range<usize>, b: std::ops::Range<usize>| {
        a.clone().all(|i| b.clone().all(|j| gram.get(i, j).is_zero()))
    };
    let even = 0..3 + env.k;
    KillingReport {
        inertia: all,
        signature: all.signature(),
        sp_signature: block(env.sp_range()),
        inder_block_signature: block(env.inder_range()),
        odd_signature: block(env.odd_range()),
        kappa_hh: gram.get(H, H),
        even_odd_orthogonal: zero_between(even, env.odd_range()),
        sp_inder_orthogonal: zero_between(env.sp_range(), env.inder_range()),
        odd_factor: None,
        nondegenerate: all.zero == 0,
        gram,
    }
}

/// Adds the odd-block factorization `κ(a⊗x, b⊗y) = c⟨a|b⟩(x|y)` to a report.
pub fn odd_factorization(env: &Envelope, t: &TripleSystem, report: &mut KillingReport) {
    let n = env.n;
    let mut c: Option<Rational> = None;
    let mut ok = true;
    'outer: for a in 0..2 {
        for b in 0..2 {
            for x in 0..n {
                for y in 0..n {
                    let kv = report.gram.get(env.odd(a, x), env.odd(b, y));
                    let base = vpair(a, b) * t.form_basis(x, y);
                    if c.is_none() && !base.is_zero() {
                        c = Some(&kv / &base);
                    }
                    let expect = match &c {
                        Some(c) => c * &base,
                        None => Rational::zero(),
                    };
                    if kv != expect && !(c.is_none() && base.is_zero() && kv.is_zero()) {
                        ok = false;
                        break 'outer;
                    }
                }
            }
        }
    }
    report.odd_factor = if ok { c } else { None };
}

// ---------------------------------------------------------------------------
// Classification

/// Expected invariants of one row of the classification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRow {
    pub label: ModelLabel,
    pub envelope_name: String,
    pub inder_name: String,
    pub dim_t: usize,
    pub dim_inder: usize,
    pub dim_envelope: usize,
    pub envelope_signature: i64,
    /// Signature of the Killing form of `inder(T)` itself (its centre lies in the radical).
    pub inder_signature: i64,
    pub inder_simple: bool,
}

/// Killing signature of `so_{a,b}(ℝ)` for `a + b ≥ 3`.
pub fn so_signature(a: i64, b: i64) -> i64 {
    a * b - a * (a - 1) / 2 - b * (b - 1) / 2
}

/// Killing signature of `su_{a,b}`.
pub fn su_signature(a: i64, b: i64) -> i64 {
    1 - (a - b) * (a - b)
}

pub fn classification_row(label: ModelLabel) -> ClassificationRow {
    use ModelLabel::*;
    let dim_t = label.dim();
    let (g, h, dim_inder, sg, sh, simple): (String, String, usize, i64, i64, bool) = match label {
        Symplectic { n } => (
            format!("sp_{}(R)", 2 * n + 2),
            format!("sp_{}(R)", 2 * n),
            n * (2 * n + 1),
            n as i64 + 1,
            n as i64,
            true,
        ),
        Orthogonal { p, q } => {
            let (a, b) = (p as i64, q as i64);
            let m = p + q;
            (
                format!("so_{},{}(R)", p + 2, q + 2),
                format!("so_{p},{q}(R) + sl_2(R)"),
                m * (m - 1) / 2 + 3,
                so_signature(a + 2, b + 2),
                so_signature(a, b) + 1,
                false,
            )
        }
        Quaternionic { n } => (
            format!("so*_{}", 2 * n + 4),
            format!("so*_{} + su_2", 2 * n),
            3 + n * (2 * n - 1),
            -(n as i64 + 2),
            if n == 1 { -3 } else { -(n as i64) - 3 },
            false,
        ),
        Special { n } => (
            format!("sl_{}(R)", n + 2),
            format!("gl_{n}(R)"),
            n * n,
            n as i64 + 1,
            n as i64 - 1,
            false,
        ),
        Unitarian { p, q } => (
            format!("su_{},{}", p + 1, q + 1),
            format!("u_{p},{q}"),
            (p + q) * (p + q),
            su_signature(p as i64, q as i64),
            su_signature(p as i64, q as i64),
            false,
        ),
        G2 => ("g_2,2".into(), "sl_2(R)".into(), 3, 2, 1, true),
        F4 => ("f_4,4".into(), "sp_6(R)".into(), 21, 4, 3, true),
        E6Split => ("e_6,6".into(), "sl_6(R)".into(), 35, 6, 5, true),
        E6NonSplit { p } => {
            let q = 6 - p;
            let name = if p == 3 { "e_6,2" } else { "e_6,-14" };
            (name.into(), format!("su_{p},{q}"), 35, su_signature(p as i64, q as i64) + 1, su_signature(p as i64, q as i64), true)
        }
        E7Split => ("e_7,7".into(), "so_6,6(R)".into(), 66, 7, 6, true),
        E7SoStar => ("e_7,-5".into(), "so*_12".into(), 66, -5, -6, true),
        E7So102 => ("e_7,-25".into(), "so_10,2(R)".into(), 66, -25, -26, true),
        E8Split => ("e_8,8".into(), "e_7,7".into(), 133, 8, 7, true),
        E8NonSplit => ("e_8,-24".into(), "e_7,-25".into(), 133, -24, -25, true),
    };
    ClassificationRow {
        label,
        envelope_name: g,
        inder_name: h,
        dim_t,
        dim_inder,
        dim_envelope: 3 + dim_inder + 2 * dim_t,
        envelope_signature: sg,
        inder_signature: sh,
        inder_simple: simple,
    }
}

/// Computed invariants to compare against a [`ClassificationRow`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComputedInvariants {
    pub dim_t: usize,
    pub dim_inder: usize,
    pub dim_envelope: usize,
    pub envelope_signature: i64,
    pub inder_signature: i64,
    pub odd_signature: i64,
}

impl ClassificationRow {
    pub fn matches(&self, c: &ComputedInvariants) -> bool {
        self.dim_t == c.dim_t
            && self.dim_inder == c.dim_inder
            && self.dim_envelope == c.dim_envelope
            && self.envelope_signature == c.envelope_signature
            && self.inder_signature == c.inder_signature
            && c.odd_signature == 0
    }
}
