//! Symplectic triple systems: storage, axiom verification, inner derivations,
//! shifts, isomorphisms and Z/4-gradings.
//!
//! A system on `ℚⁿ` is an alternating form `(x|y) = xᵀΩy` together with a
//! trilinear product `[x, y, z]` stored on all `n³` basis triples. The four
//! axioms checked by [`check_axioms`] are
//!
//! * symmetry: `[x,y,z] = [y,x,z]`;
//! * alternation: `[x,y,z] − [x,z,y] = (x|z)y − (x|y)z + 2(y|z)x`;
//! * derivation: `d_{x,y} = [x,y,·]` is a derivation of the product;
//! * form invariance: `([x,y,u]|v) = −(u|[x,y,v])`.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::envelope::LieAlgebra;
use crate::linalg::{
    invariant_forms_with_hint, Accumulator, BilinearForm, LinalgError, Matrix, SparseOp, SparseVec, Subspace, Symmetry,
};
use crate::scalar::Rational;

use num_traits::{One, Zero};

/// Largest dimension for which the derivation axiom is checked on every basis quintuple.
pub const EXHAUSTIVE_LIMIT: usize = 14;
/// Seed used when a check above [`EXHAUSTIVE_LIMIT`] needs random samples and none was given.
pub const DEFAULT_SEED: u64 = 0x5EED_2010;
/// Minimum number of random quintuples drawn above [`EXHAUSTIVE_LIMIT`].
pub const DEFAULT_SAMPLES: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StsError {
    #[error("invalid parameters for {family}: {reason}")]
    Parameters { family: &'static str, reason: String },
    #[error("malformed system: {0}")]
    Malformed(String),
    #[error("linear algebra: {0}")]
    Linalg(#[from] LinalgError),
    #[error("inner derivations do not close under the commutator")]
    NotClosed,
    #[error("calibration failed: {0}")]
    Calibration(String),
    #[error("construction check failed: {0}")]
    Construction(String),
}

// ---------------------------------------------------------------------------
// Labels

/// One of the fifteen families of simple real symplectic triple systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelLabel {
    /// `W ⊕ W*` with `dim W = n`.
    Special { n: usize },
    /// `V ⊗ W` with `W` carrying a form of signature `(p, q)`.
    Orthogonal { p: usize, q: usize },
    /// A symplectic space of dimension `2n`.
    Symplectic { n: usize },
    /// A complex hermitian space of signature `(p, q)`, realified.
    Unitarian { p: usize, q: usize },
    /// A quaternionic skew-hermitian space of rank `n`, realified.
    Quaternionic { n: usize },
    G2,
    F4,
    E6Split,
    /// `p ∈ {3, 5}`.
    E6NonSplit { p: usize },
    E7Split,
    E7SoStar,
    E7So102,
    E8Split,
    E8NonSplit,
}

impl ModelLabel {
    /// Command-line family names.
    pub const NAMES: [&'static str; 14] = [
        "special",
        "orthogonal",
        "symplectic",
        "unitarian",
        "quaternionic",
        "g2",
        "f4",
        "e6split",
        "e6nonsplit",
        "e7split",
        "e7sostar",
        "e7so102",
        "e8split",
        "e8nonsplit",
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Special { .. } => "special",
            Self::Orthogonal { .. } => "orthogonal",
            Self::Symplectic { .. } => "symplectic",
            Self::Unitarian { .. } => "unitarian",
            Self::Quaternionic { .. } => "quaternionic",
            Self::G2 => "g2",
            Self::F4 => "f4",
            Self::E6Split => "e6split",
            Self::E6NonSplit { .. } => "e6nonsplit",
            Self::E7Split => "e7split",
            Self::E7SoStar => "e7sostar",
            Self::E7So102 => "e7so102",
            Self::E8Split => "e8split",
            Self::E8NonSplit => "e8nonsplit",
        }
    }

    /// Integer parameters as `(name, value)` pairs, in a fixed order.
    pub fn params(&self) -> Vec<(&'static str, usize)> {
        match *self {
            Self::Special { n } | Self::Symplectic { n } | Self::Quaternionic { n } => vec![("n", n)],
            Self::Orthogonal { p, q } | Self::Unitarian { p, q } => vec![("p", p), ("q", q)],
            Self::E6NonSplit { p } => vec![("p", p)],
            _ => vec![],
        }
    }

    /// Parses a name plus optional parameters and validates the admissible range.
    pub fn from_parts(name: &str, n: Option<usize>, p: Option<usize>, q: Option<usize>) -> Result<Self, StsError> {
        let need = |v: Option<usize>, what: &str, family: &'static str| {
            v.ok_or_else(|| StsError::Parameters { family, reason: format!("missing parameter {what}") })
        };
        let label = match name {
            "special" => Self::Special { n: need(n, "n", "special")? },
            "orthogonal" => Self::Orthogonal { p: need(p, "p", "orthogonal")?, q: need(q, "q", "orthogonal")? },
            "symplectic" => Self::Symplectic { n: need(n, "n", "symplectic")? },
            "unitarian" => Self::Unitarian { p: need(p, "p", "unitarian")?, q: need(q, "q", "unitarian")? },
            "quaternionic" => Self::Quaternionic { n: need(n, "n", "quaternionic")? },
            "g2" => Self::G2,
            "f4" => Self::F4,
            "e6split" => Self::E6Split,
            "e6nonsplit" => Self::E6NonSplit { p: need(p, "p", "e6nonsplit")? },
            "e7split" => Self::E7Split,
            "e7sostar" => Self::E7SoStar,
            "e7so102" => Self::E7So102,
            "e8split" => Self::E8Split,
            "e8nonsplit" => Self::E8NonSplit,
            other => {
                return Err(StsError::Parameters { family: "label", reason: format!("unknown family {other:?}") })
            }
        };
        label.validate()?;
        Ok(label)
    }

    pub fn validate(&self) -> Result<(), StsError> {
        let bad = |family, reason: &str| Err(StsError::Parameters { family, reason: reason.to_string() });
        match *self {
            Self::Special { n: 0 } => bad("special", "n must be at least 1"),
            Self::Symplectic { n: 0 } => bad("symplectic", "n must be at least 1"),
            Self::Quaternionic { n: 0 } => bad("quaternionic", "n must be at least 1"),
            Self::Orthogonal { p, q } if p + q < 3 => bad("orthogonal", "p + q must be at least 3"),
            Self::Unitarian { p, q } if p + q == 0 => bad("unitarian", "p + q must be at least 1"),
            Self::E6NonSplit { p } if p != 3 && p != 5 => bad("e6nonsplit", "p must be 3 or 5"),
            _ => Ok(()),
        }
    }

    /// Dimension of the underlying real space.
    pub fn dim(&self) -> usize {
        match *self {
            Self::Special { n } | Self::Symplectic { n } => 2 * n,
            Self::Orthogonal { p, q } | Self::Unitarian { p, q } => 2 * (p + q),
            Self::Quaternionic { n } => 4 * n,
            Self::G2 => 4,
            Self::F4 => 14,
            Self::E6Split | Self::E6NonSplit { .. } => 20,
            Self::E7Split | Self::E7SoStar | Self::E7So102 => 32,
            Self::E8Split | Self::E8NonSplit => 56,
        }
    }

    pub fn is_exceptional(&self) -> bool {
        !matches!(
            self,
            Self::Special { .. }
                | Self::Orthogonal { .. }
                | Self::Symplectic { .. }
                | Self::Unitarian { .. }
                | Self::Quaternionic { .. }
        )
    }
}

impl fmt::Display for ModelLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())?;
        let p = self.params();
        if !p.is_empty() {
            let s: Vec<String> = p.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(f, "({})", s.join(","))?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Triple systems

/// A finite-dimensional triple system with an alternating form.
#[derive(Clone, PartialEq, Eq)]
pub struct TripleSystem {
    n: usize,
    omega: BilinearForm,
    omega_op: SparseOp,
    trip: Vec<SparseVec>,
    label: ModelLabel,
}

impl fmt::Debug for TripleSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TripleSystem").field("label", &self.label).field("n", &self.n).finish_non_exhaustive()
    }
}

impl TripleSystem {
    /// `trip[(i·n + j)·n + k] = [e_i, e_j, e_k]`.
    pub fn new(label: ModelLabel, omega: Matrix, trip: Vec<SparseVec>) -> Result<Self, StsError> {
        let n = omega.rows();
        if trip.len() != n * n * n {
            return Err(StsError::Malformed(format!("expected {} product entries, got {}", n * n * n, trip.len())));
        }
        if trip.iter().any(|v| v.support_bound() > n) {
            return Err(StsError::Malformed("product value outside the space".into()));
        }
        let omega_op = SparseOp::from_matrix(&omega);
        let omega = BilinearForm::new(omega, Symmetry::Alternating)?;
        Ok(Self { n, omega, omega_op, trip, label })
    }

    /// Builds the product tensor from a function on basis triples.
    pub fn from_fn(
        label: ModelLabel,
        omega: Matrix,
        f: impl Fn(usize, usize, usize) -> SparseVec + Sync,
    ) -> Result<Self, StsError> {
        let n = omega.rows();
        let trip: Vec<SparseVec> = (0..n * n * n).into_par_iter().map(|t| f(t / (n * n), (t / n) % n, t % n)).collect();
        Self::new(label, omega, trip)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn label(&self) -> ModelLabel {
        self.label
    }

    pub fn with_label(mut self, label: ModelLabel) -> Self {
        self.label = label;
        self
    }

    pub fn omega(&self) -> &BilinearForm {
        &self.omega
    }

    pub fn omega_op(&self) -> &SparseOp {
        &self.omega_op
    }

    /// `[e_i, e_j, e_k]`.
    pub fn trip(&self, i: usize, j: usize, k: usize) -> &SparseVec {
        &self.trip[(i * self.n + j) * self.n + k]
    }

    pub fn trip_entries(&self) -> &[SparseVec] {
        &self.trip
    }

    /// `(x|y)`.
    pub fn form(&self, x: &SparseVec, y: &SparseVec) -> Rational {
        x.dot(&self.omega_op.apply(y))
    }

    pub fn form_basis(&self, i: usize, j: usize) -> Rational {
        self.omega_op.get(i, j)
    }

    /// `[x, y, z]` by trilinear expansion.
    pub fn product(&self, x: &SparseVec, y: &SparseVec, z: &SparseVec) -> SparseVec {
        let mut acc = Accumulator::new(self.n);
        self.product_into(x, y, z, &mut acc);
        acc.finish()
    }

    fn product_into(&self, x: &SparseVec, y: &SparseVec, z: &SparseVec, acc: &mut Accumulator) {
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                let ab = a * b;
                for (k, c) in z.iter() {
                    acc.add_scaled(&(&ab * c), self.trip(*i, *j, *k));
                }
            }
        }
    }

    /// `d_{e_i, e_j}` as an operator.
    pub fn d_op(&self, i: usize, j: usize) -> SparseOp {
        SparseOp::from_columns(self.n, (0..self.n).map(|k| self.trip(i, j, k).clone()).collect())
    }

    /// `d_{x,y}` as an operator.
    pub fn d_op_vec(&self, x: &SparseVec, y: &SparseVec) -> SparseOp {
        let mut acc = Accumulator::new(self.n);
        let cols = (0..self.n)
            .map(|k| {
                self.product_into(x, y, &SparseVec::unit(k), &mut acc);
                acc.finish()
            })
            .collect();
        SparseOp::from_columns(self.n, cols)
    }

    /// The matrix of `z ↦ [x, y, z]`.
    pub fn d_map(&self, x: &SparseVec, y: &SparseVec) -> Matrix {
        self.d_op_vec(x, y).to_matrix()
    }

    /// `T^{[α]}`: form and product both scaled by `α`.
    pub fn scaled(&self, alpha: &Rational) -> TripleSystem {
        TripleSystem::new(
            self.label,
            self.omega.gram().scale(alpha),
            self.trip.iter().map(|v| v.scale(alpha)).collect(),
        )
        .expect("scaling preserves shape")
    }

    /// `T^{[±1]}`.
    pub fn shift(&self, sign: i32) -> TripleSystem {
        assert!(sign == 1 || sign == -1, "shift sign must be ±1");
        self.scaled(&Rational::from(sign as i64))
    }

    /// The structure transported along an invertible `f`, making `f` an isomorphism onto the result.
    pub fn apply_isomorphism(&self, f: &Matrix) -> Result<TripleSystem, StsError> {
        if f.rows() != self.n || f.cols() != self.n {
            return Err(StsError::Malformed("isomorphism has the wrong shape".into()));
        }
        let finv = f.inverse()?;
        let fo = SparseOp::from_matrix(f);
        let gi = SparseOp::from_matrix(&finv);
        // Ω' = f⁻ᵀ Ω f⁻¹
        let omega = gi.transpose().compose(&self.omega_op).compose(&gi).to_matrix();
        TripleSystem::from_fn(self.label, omega, |i, j, k| {
            fo.apply(&self.product(gi.column(i), gi.column(j), gi.column(k)))
        })
    }

    pub fn sign_map(&self, grading: &Z4Grading) -> SparseOp {
        let mut d = vec![Rational::one(); self.n];
        for &i in &grading.deg3 {
            d[i] = -Rational::one();
        }
        SparseOp::from_columns(self.n, d.into_iter().enumerate().map(|(i, c)| SparseVec::single(i, c)).collect())
    }
}

/// Whether `f` is an isomorphism `T → T'`.
pub fn is_isomorphism(t: &TripleSystem, t2: &TripleSystem, f: &SparseOp) -> bool {
    let n = t.n();
    if t2.n() != n || f.rows() != n || f.cols() != n {
        return false;
    }
    let pulled = f.transpose().compose(t2.omega_op()).compose(f);
    if pulled != *t.omega_op() {
        return false;
    }
    if crate::linalg::Matrix::rank(&f.to_matrix()) != n {
        return false;
    }
    (0..n * n * n).into_par_iter().all(|t_| {
        let (i, j, k) = (t_ / (n * n), (t_ / n) % n, t_ % n);
        f.apply(t.trip(i, j, k)) == t2.product(f.column(i), f.column(j), f.column(k))
    })
}

// ---------------------------------------------------------------------------
// Axiom verification

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckMode {
    Exhaustive,
    Sampled { seed: u64, count: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axiom {
    Symmetry,
    Alternation,
    Derivation,
    FormInvariance,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Symmetry => "symmetry [x,y,z]=[y,x,z]",
            Axiom::Alternation => "alternation [x,y,z]-[x,z,y]=(x|z)y-(x|y)z+2(y|z)x",
            Axiom::Derivation => "derivation d_{x,y}[u,v,w]=[d u,v,w]+[u,d v,w]+[u,v,d w]",
            Axiom::FormInvariance => "invariance ([x,y,u]|v)=-(u|[x,y,v])",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomOutcome {
    pub axiom: Axiom,
    /// Number of individual identities evaluated.
    pub checked: u64,
    /// First failing instance, described in basis indices.
    pub counterexample: Option<String>,
}

impl AxiomOutcome {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub mode: CheckMode,
    /// Seed of the random quintuples (if any were drawn).
    pub seed: Option<u64>,
    pub samples: usize,
    /// Whether the derivation axiom was also checked as an operator identity over a basis of inner derivations.
    pub operator_identity: bool,
    pub outcomes: Vec<AxiomOutcome>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(AxiomOutcome::passed)
    }

    pub fn first_failure(&self) -> Option<&AxiomOutcome> {
        self.outcomes.iter().find(|o| !o.passed())
    }
}

/// Deterministic 64-bit linear congruential generator (Knuth's MMIX constants).
#[derive(Debug, Clone)]
pub struct Lcg(u64);

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Self(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        self.0
    }

    /// Uniform-ish value in `0..bound` from the high bits.
    pub fn below(&mut self, bound: u64) -> u64 {
        ((self.next_u64() >> 32) * bound) >> 32
    }

    /// A nonzero rational with small numerator and denominator.
    pub fn small_rational(&mut self) -> Rational {
        let num = self.below(9) as i64 - 4;
        let num = if num == 0 { 5 } else { num };
        Rational::new(num, self.below(3) as i64 + 1)
    }

    /// A random vector in `ℚⁿ` supported on one to three coordinates.
    pub fn sparse_vector(&mut self, n: usize) -> SparseVec {
        let k = self.below(3) as usize + 1;
        SparseVec::from_entries((0..k).map(|_| (self.below(n as u64) as usize, self.small_rational())).collect())
    }
}

fn first_failure<T: Send>(
    range: impl IndexedParallelIterator<Item = T>,
    f: impl Fn(&T) -> Option<String> + Sync + Send,
) -> Option<String> {
    range.map(|t| f(&t)).find_first(|r| r.is_some()).flatten()
}

/// Checks the four axioms.
///
/// Symmetry, alternation and form invariance are always checked on every
/// basis pair or triple. The derivation axiom is checked on every basis
/// quintuple when `n ≤ EXHAUSTIVE_LIMIT` in exhaustive mode; otherwise on
/// seeded random rational quintuples, and for `n > EXHAUSTIVE_LIMIT` also as
/// the operator identity `[D, d_{u,v}] = d_{Du,v} + d_{u,Dv}` for every `D`
/// in a basis of the inner derivations and every basis pair `(u, v)`.
pub fn check_axioms(t: &TripleSystem, mode: CheckMode) -> AxiomReport {
    let n = t.n();
    let mut outcomes = Vec::new();

    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let sym = first_failure(pairs.par_iter(), |&&(i, j)| {
        (0..n).find(|&k| t.trip(i, j, k) != t.trip(j, i, k)).map(|k| format!("basis triple ({i},{j},{k})"))
    });
    outcomes.push(AxiomOutcome { axiom: Axiom::Symmetry, checked: (n * n * n) as u64, counterexample: sym });

    let two = Rational::from(2);
    let alt = first_failure(pairs.par_iter(), |&&(i, j)| {
        (0..n).find_map(|k| {
            let lhs = t.trip(i, j, k).sub(t.trip(i, k, j));
            let rhs = SparseVec::single(j, t.form_basis(i, k))
                .sub(&SparseVec::single(k, t.form_basis(i, j)))
                .add(&SparseVec::single(i, &two * &t.form_basis(j, k)));
            (lhs != rhs).then(|| format!("basis triple ({i},{j},{k})"))
        })
    });
    outcomes.push(AxiomOutcome { axiom: Axiom::Alternation, checked: (n * n * n) as u64, counterexample: alt });

    let upper: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let om = t.omega_op();
    let inv = first_failure(upper.par_iter(), |&&(i, j)| {
        let d = t.d_op(i, j);
        let m = d.transpose().compose(om).add(&om.compose(&d));
        (!m.is_zero()).then(|| {
            let (u, c) = m.columns().iter().enumerate().find(|(_, c)| !c.is_zero()).unwrap();
            format!("basis quadruple ({i},{j},{},{u})", c.entries()[0].0)
        })
    });
    outcomes.push(AxiomOutcome { axiom: Axiom::FormInvariance, checked: (n * n * n * n) as u64, counterexample: inv });

    let (seed, count) = match mode {
        CheckMode::Exhaustive => (DEFAULT_SEED, DEFAULT_SAMPLES),
        CheckMode::Sampled { seed, count } => (seed, count),
    };
    let exhaustive = matches!(mode, CheckMode::Exhaustive) && n <= EXHAUSTIVE_LIMIT;
    let operator_identity = n > EXHAUSTIVE_LIMIT;
    let mut checked = 0u64;
    let mut der = None;
    if exhaustive {
        let ops: Vec<SparseOp> = pairs.iter().map(|&(i, j)| t.d_op(i, j)).collect();
        der = first_failure(upper.par_iter(), |&&(i, j)| {
            let d = &ops[i * n + j];
            upper.iter().find_map(|&(u, v)| {
                derivation_defect(t, &ops, d, u, v).then(|| format!("basis quintuple ({i},{j},{u},{v},·)"))
            })
        });
        checked += (n as u64).pow(5);
    } else {
        if operator_identity {
            let ops: Vec<SparseOp> = pairs.iter().map(|&(i, j)| t.d_op(i, j)).collect();
            match inder_basis_indices(t, &ops) {
                Some(basis) => {
                    der = first_failure(basis.par_iter(), |&&b| {
                        let d = &ops[b];
                        upper.iter().find_map(|&(u, v)| {
                            derivation_defect(t, &ops, d, u, v)
                                .then(|| format!("inner derivation d_({},{}) at basis pair ({u},{v})", b / n, b % n))
                        })
                    });
                    checked += (upper.len() * basis.len() * n) as u64;
                }
                None => der = Some("inner derivations could not be spanned".to_string()),
            }
        }
        if der.is_none() {
            der = sampled_derivation(t, seed, count);
            checked += count as u64;
        }
    }
    outcomes.push(AxiomOutcome { axiom: Axiom::Derivation, checked, counterexample: der });

    AxiomReport {
        mode,
        seed: (!exhaustive).then_some(seed),
        samples: if exhaustive { 0 } else { count },
        operator_identity,
        outcomes,
    }
}

/// `[D, d_{u,v}] ≠ d_{Du,v} + d_{u,Dv}` for an operator `D` and basis `u, v`.
fn derivation_defect(t: &TripleSystem, ops: &[SparseOp], d: &SparseOp, u: usize, v: usize) -> bool {
    let n = t.n();
    let duv = &ops[u * n + v];
    let lhs = d.commutator(duv);
    let combine = |w: &SparseVec, fixed: usize, first: bool| -> Vec<(SparseOp, Rational)> {
        w.iter()
            .map(|(k, c)| {
                let op = if first { ops[k * n + fixed].clone() } else { ops[fixed * n + k].clone() };
                (op, c.clone())
            })
            .collect()
    };
    let mut terms = combine(d.column(u), v, true);
    terms.extend(combine(d.column(v), u, false));
    if terms.is_empty() {
        return !lhs.is_zero();
    }
    let (o, c): (Vec<SparseOp>, Vec<Rational>) = terms.into_iter().unzip();
    lhs != SparseOp::linear_combination(&o, &c)
}

fn sampled_derivation(t: &TripleSystem, seed: u64, count: usize) -> Option<String> {
    let n = t.n();
    let mut rng = Lcg::new(seed);
    let samples: Vec<[SparseVec; 5]> = (0..count)
        .map(|_| std::array::from_fn(|_| rng.sparse_vector(n)))
        .collect();
    first_failure(samples.par_iter().enumerate(), |&(s, [x, y, u, v, w])| {
        let lhs = t.product(x, y, &t.product(u, v, w));
        let rhs = t
            .product(&t.product(x, y, u), v, w)
            .add(&t.product(u, &t.product(x, y, v), w))
            .add(&t.product(u, v, &t.product(x, y, w)));
        (lhs != rhs).then(|| format!("random quintuple #{s} (seed {seed})"))
    })
}

/// Indices `i·n + j` of pairs whose `d_{e_i,e_j}` form a basis of the inner derivations.
fn inder_basis_indices(t: &TripleSystem, ops: &[SparseOp]) -> Option<Vec<usize>> {
    let n = t.n();
    let flat: Vec<SparseVec> = ops.iter().map(SparseOp::flatten).collect();
    let candidates: Vec<usize> = (0..n).flat_map(|i| (i..n).map(move |j| i * n + j)).collect();
    let chosen = modular_basis_selection(n * n, &candidates, &flat);
    Subspace::new(n * n, chosen.iter().map(|&c| flat[c].clone()).collect()).ok()?;
    Some(chosen)
}

/// Greedy selection of linearly independent vectors, decided modulo a large prime.
///
/// Independence modulo a prime implies independence over ℚ, so the selection
/// is always independent; spanning is certified separately by exact coordinates.
fn modular_basis_selection(dim: usize, candidates: &[usize], vecs: &[SparseVec]) -> Vec<usize> {
    let mut e = crate::linalg::ModularEchelon::new(dim);
    candidates.iter().copied().filter(|&c| e.insert_rational(&vecs[c])).collect()
}

// ---------------------------------------------------------------------------
// Inner derivations

/// The inner derivation algebra with coordinates for every `d_{e_i,e_j}`.
#[derive(Debug, Clone)]
pub struct Inder {
    n: usize,
    ops: Vec<SparseOp>,
    pairs: Vec<(usize, usize)>,
    span: Subspace,
    pair_coords: Vec<SparseVec>,
    algebra: LieAlgebra,
}

impl Inder {
    pub fn dim(&self) -> usize {
        self.ops.len()
    }

    /// Basis operators on `T`.
    pub fn ops(&self) -> &[SparseOp] {
        &self.ops
    }

    /// The basis pairs `(i, j)` with `ops[a] = d_{e_i,e_j}`.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Coordinates of `d_{e_i,e_j}` in the basis.
    pub fn pair_coords(&self, i: usize, j: usize) -> &SparseVec {
        &self.pair_coords[i * self.n + j]
    }

    /// Coordinates of an operator on `T`, if it is an inner derivation.
    pub fn coords(&self, op: &SparseOp) -> Option<Vec<Rational>> {
        self.span.coords(&op.flatten())
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn contains(&self, op: &SparseOp) -> bool {
        self.coords(op).is_some()
    }

    pub fn as_matrices(&self) -> Vec<Matrix> {
        self.ops.iter().map(SparseOp::to_matrix).collect()
    }
}

/// A basis of `span{d_{x,y}}`, its structure constants and closure certificate.
pub fn inder_span(t: &TripleSystem) -> Result<Inder, StsError> {
    let n = t.n();
    let ops: Vec<SparseOp> = (0..n * n).into_par_iter().map(|p| t.d_op(p / n, p % n)).collect();
    let flat: Vec<SparseVec> = ops.par_iter().map(SparseOp::flatten).collect();
    let candidates: Vec<usize> = (0..n).flat_map(|i| (i..n).map(move |j| i * n + j)).collect();
    let chosen = modular_basis_selection(n * n, &candidates, &flat);
    let span = Subspace::new(n * n, chosen.iter().map(|&c| flat[c].clone()).collect())?;
    let pair_coords: Vec<SparseVec> = (0..n * n)
        .into_par_iter()
        .map(|p| {
            let (i, j) = (p / n, p % n);
            let q = if i <= j { p } else { j * n + i };
            span.coords_sparse(&flat[q])
        })
        .collect::<Option<Vec<_>>>()
        .ok_or(StsError::NotClosed)?;
    let basis_ops: Vec<SparseOp> = chosen.iter().map(|&c| ops[c].clone()).collect();
    let k = basis_ops.len();
    let brackets: Vec<SparseVec> = (0..k * k)
        .into_par_iter()
        .map(|p| {
            let (a, b) = (p / k, p % k);
            if a == b {
                return Some(SparseVec::new());
            }
            span.coords_sparse(&basis_ops[a].commutator(&basis_ops[b]).flatten())
        })
        .collect::<Option<Vec<_>>>()
        .ok_or(StsError::NotClosed)?;
    let algebra = LieAlgebra::new(k, brackets).map_err(|e| StsError::Malformed(e.to_string()))?;
    Ok(Inder {
        n,
        ops: basis_ops,
        pairs: chosen.iter().map(|&c| (c / n, c % n)).collect(),
        span,
        pair_coords,
        algebra,
    })
}

/// Dimension (and basis) of the inder-invariant alternating forms on `T`.
pub fn invariant_alternating_forms(t: &TripleSystem, inder: &Inder) -> Result<Vec<Matrix>, StsError> {
    let res = invariant_forms_with_hint(inder.ops(), Symmetry::Alternating, &[t.omega().gram().clone()])?;
    Ok(res.basis)
}

// ---------------------------------------------------------------------------
// Gradings

/// A decomposition `T = T_1̄ ⊕ T_3̄` along basis vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Z4Grading {
    pub deg1: Vec<usize>,
    pub deg3: Vec<usize>,
}

impl Z4Grading {
    pub fn new(mut deg1: Vec<usize>, mut deg3: Vec<usize>) -> Self {
        deg1.sort_unstable();
        deg3.sort_unstable();
        Self { deg1, deg3 }
    }

    /// Degree (1 or 3) of every basis index, or `None` if the parts do not partition `0..n`.
    pub fn degrees(&self, n: usize) -> Option<Vec<u8>> {
        let mut deg = vec![0u8; n];
        for (&d, part) in [(1u8, &self.deg1), (3u8, &self.deg3)].iter().map(|(d, p)| (d, *p)) {
            for &i in part {
                if i >= n || deg[i] != 0 {
                    return None;
                }
                deg[i] = d;
            }
        }
        deg.iter().all(|&d| d != 0).then_some(deg)
    }
}

/// Whether the form and product respect the grading.
pub fn check_z4_grading(t: &TripleSystem, g: &Z4Grading) -> bool {
    let n = t.n();
    let Some(deg) = g.degrees(n) else { return false };
    let form_ok = (0..n).all(|i| (0..n).all(|j| (deg[i] + deg[j]) % 4 == 0 || t.form_basis(i, j).is_zero()));
    form_ok
        && (0..n * n * n).into_par_iter().all(|p| {
            let (i, j, k) = (p / (n * n), (p / n) % n, p % n);
            let target = (deg[i] + deg[j] + deg[k]) % 4;
            t.trip(i, j, k).iter().all(|(l, _)| deg[*l] == target)
        })
}

// ---------------------------------------------------------------------------
// Calibration

/// The scalar `α` with `[x,y,z] − [x,z,y] = α((x|z)y − (x|y)z + 2(y|z)x)` on all basis triples.
///
/// `trip` is indexed like [`TripleSystem::trip_entries`]. Fails when the ratio
/// is undefined or differs between triples.
pub fn calibrate_alpha(omega: &Matrix, trip: &[SparseVec]) -> Result<Rational, StsError> {
    let n = omega.rows();
    if trip.len() != n * n * n {
        return Err(StsError::Calibration("product tensor has the wrong size".into()));
    }
    let at = |i: usize, j: usize, k: usize| &trip[(i * n + j) * n + k];
    let two = Rational::from(2);
    let mut alpha: Option<Rational> = None;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let lhs = at(i, j, k).sub(at(i, k, j));
                let rhs = SparseVec::single(j, omega.get(i, k))
                    .sub(&SparseVec::single(k, omega.get(i, j)))
                    .add(&SparseVec::single(i, &two * &omega.get(j, k)));
                if alpha.is_none() {
                    if let Some((idx, r)) = rhs.entries().first() {
                        alpha = Some(lhs.get(*idx) / r.clone());
                    }
                }
                let ok = match &alpha {
                    Some(a) => lhs == rhs.scale(a),
                    None => lhs.is_zero(),
                };
                if !ok {
                    return Err(StsError::Calibration(format!("ratio differs at basis triple ({i},{j},{k})")));
                }
            }
        }
    }
    match alpha {
        Some(a) if !a.is_zero() => Ok(a),
        _ => Err(StsError::Calibration("the form vanishes identically".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;

    /// The two-dimensional system `[x,y,z] = (x|z)y + (y|z)x` with `(e_0|e_1) = 1`.
    fn sympl2(flip: bool) -> TripleSystem {
        let omega = Matrix::from_rows(vec![vec![qi(0), qi(1)], vec![qi(-1), qi(0)]]);
        let s = if flip { -1 } else { 1 };
        let om = omega.clone();
        TripleSystem::from_fn(ModelLabel::Symplectic { n: 1 }, omega, move |i, j, k| {
            SparseVec::single(j, om.get(i, k)).add(&SparseVec::single(i, om.get(j, k) * qi(s)))
        })
        .unwrap()
    }

    #[test]
    fn small_system_passes() {
        let r = check_axioms(&sympl2(false), CheckMode::Exhaustive);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn mutant_fails_alternation() {
        let r = check_axioms(&sympl2(true), CheckMode::Exhaustive);
        assert_eq!(r.first_failure().map(|o| o.axiom), Some(Axiom::Symmetry));
        let alt = r.outcomes.iter().find(|o| o.axiom == Axiom::Alternation).unwrap();
        assert!(!alt.passed());
    }

    #[test]
    fn d_map_example() {
        let t = sympl2(false);
        let d = t.d_map(&SparseVec::unit(0), &SparseVec::unit(1));
        assert_eq!(d, Matrix::diag(&[qi(-1), qi(1)]));
        assert!(t.d_map(&SparseVec::new(), &SparseVec::unit(1)).is_zero());
    }

    #[test]
    fn inder_is_sl2() {
        let t = sympl2(false);
        let i = inder_span(&t).unwrap();
        assert_eq!(i.dim(), 3);
        let forms = invariant_alternating_forms(&t, &i).unwrap();
        assert_eq!(forms.len(), 1);
    }

    #[test]
    fn shift_and_grading() {
        let t = sympl2(false);
        assert_eq!(t.shift(1), t);
        assert_eq!(t.shift(-1).shift(-1), t);
        let g = Z4Grading::new(vec![0], vec![1]);
        assert!(check_z4_grading(&t, &g));
        assert!(is_isomorphism(&t, &t.shift(-1), &t.sign_map(&g)));
        assert!(!is_isomorphism(&t, &t.shift(-1), &SparseOp::identity(2)));
        let minus = SparseOp::identity(2).scale(&qi(-1));
        assert!(is_isomorphism(&t, &t, &minus));
        assert_eq!(t.apply_isomorphism(&Matrix::identity(2)).unwrap(), t);
    }

    #[test]
    fn calibration_scales_inversely_with_form() {
        let t = sympl2(false);
        assert_eq!(calibrate_alpha(t.omega().gram(), t.trip_entries()).unwrap(), qi(1));
        let doubled = t.omega().gram().scale(&qi(2));
        assert_eq!(calibrate_alpha(&doubled, t.trip_entries()).unwrap(), Rational::new(1, 2));
    }

    #[test]
    fn lcg_is_reproducible() {
        let mut a = Lcg::new(7);
        let mut b = Lcg::new(7);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        assert!((0..1000).all(|_| a.below(5) < 5));
    }

    #[test]
    fn label_parsing() {
        assert_eq!(ModelLabel::from_parts("symplectic", Some(2), None, None).unwrap().dim(), 4);
        assert!(ModelLabel::from_parts("orthogonal", None, Some(1), Some(1)).is_err());
        assert!(ModelLabel::from_parts("e6nonsplit", None, Some(4), None).is_err());
        assert!(ModelLabel::from_parts("nope", None, None, None).is_err());
    }
}
