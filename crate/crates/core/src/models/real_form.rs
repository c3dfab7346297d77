//! Real forms of the split exceptional systems, cut out by conjugate-linear
//! involutions `Γ(v) = M·v̄` of the complexified space.
//!
//! The complexified space `T ⊗ ℂ` is realified with interleaved coordinates
//! (`2k` real part, `2k+1` imaginary part of coordinate `k`). The real form
//! is `T^Γ = ker(Γ − id)`; its form and product are the complex ones,
//! optionally multiplied by `𝐢`, and both are checked to land back in `ℝ`
//! and in `T^Γ` respectively.

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::clifford::SpinModule;
use crate::exterior::{merge_sign, ExtBasis, ExtElement, MultiIndex};
use crate::linalg::{Accumulator, Matrix, SparseOp, SparseVec, Subspace};
use crate::scalar::{qi, GaussianRational, Rational};
use crate::sts::{ModelLabel, StsError, TripleSystem, Z4Grading};

use super::{e6, e7, e8, Model};

/// How the Z/4-grading of the real form is cut out.
#[derive(Debug, Clone)]
pub enum GradingOp {
    /// `T_1̄` = real vectors, `T_3̄` = imaginary vectors.
    Conjugation,
    /// `T_1̄`, `T_3̄` = the `±1` eigenspaces of a complex-linear involution with real matrix.
    Linear(SparseOp),
}

/// `v ↦ M v̄` on realified coordinates.
pub fn realify_conjugate_linear(m: &SparseOp) -> SparseOp {
    let n = m.cols();
    let mut cols = Vec::with_capacity(2 * n);
    for c in m.columns() {
        cols.push(c.map_indices(|k| 2 * k));
        cols.push(c.map_indices(|k| 2 * k + 1).neg());
    }
    debug_assert_eq!(cols.len(), 2 * n);
    SparseOp::from_columns(2 * m.rows(), cols)
}

/// `v ↦ M v` on realified coordinates, for a real matrix `M`.
pub fn realify_linear(m: &SparseOp) -> SparseOp {
    let mut cols = Vec::with_capacity(2 * m.cols());
    for c in m.columns() {
        cols.push(c.map_indices(|k| 2 * k));
        cols.push(c.map_indices(|k| 2 * k + 1));
    }
    SparseOp::from_columns(2 * m.rows(), cols)
}

/// `+1` if `Γ² = id`, `−1` if `Γ² = −id`, `None` otherwise.
pub fn involution_sign(m: &SparseOp) -> Option<i32> {
    let r = realify_conjugate_linear(m);
    let sq = r.compose(&r);
    let id = SparseOp::identity(r.rows());
    if sq == id {
        Some(1)
    } else if sq == id.scale(&qi(-1)) {
        Some(-1)
    } else {
        None
    }
}

fn rows_of(op: &SparseOp) -> Vec<SparseVec> {
    op.transpose().columns().to_vec()
}

/// Complex coordinates of a realified vector.
fn complex_entries(v: &SparseVec) -> Vec<(usize, GaussianRational)> {
    let mut out: Vec<(usize, GaussianRational)> = Vec::new();
    for (k, c) in v.iter() {
        let slot = k / 2;
        if out.last().map(|(s, _)| *s) != Some(slot) {
            out.push((slot, GaussianRational::default()));
        }
        let z = &mut out.last_mut().unwrap().1;
        if k % 2 == 0 {
            z.re = c.clone();
        } else {
            z.im = c.clone();
        }
    }
    out
}

/// Realified `twist · (re + 𝐢·im)`.
fn realify_parts(re: &SparseVec, im: &SparseVec, twist: bool) -> SparseVec {
    let (re, im) = if twist { (im.neg(), re.clone()) } else { (re.clone(), im.clone()) };
    re.map_indices(|k| 2 * k).add(&im.map_indices(|k| 2 * k + 1))
}

/// A real form together with the realified vectors spanning it.
pub struct RealForm {
    pub model: Model,
    /// Basis of `T^Γ` inside the realified complex space.
    pub embedding: Subspace,
}

/// Cuts the real form `T^Γ` out of a split system `t`.
pub fn real_form(
    label: ModelLabel,
    t: &TripleSystem,
    m: &SparseOp,
    grading: &GradingOp,
    twist: bool,
) -> Result<RealForm, StsError> {
    let n = t.n();
    if involution_sign(m) != Some(1) {
        return Err(StsError::Construction(format!("{label}: the conjugate-linear map is not an involution")));
    }
    let r = realify_conjugate_linear(m);
    let id = SparseOp::identity(2 * n);
    let g = match grading {
        GradingOp::Conjugation => realify_conjugate_linear(&SparseOp::identity(n)),
        GradingOp::Linear(g) => realify_linear(g),
    };
    if r.compose(&g) != g.compose(&r) || g.compose(&g) != id {
        return Err(StsError::Construction(format!("{label}: grading operator is not a commuting involution")));
    }
    let fixed = rows_of(&r.sub(&id));
    let eigen = |sign: i64| -> Vec<SparseVec> {
        let mut rows = fixed.clone();
        rows.extend(rows_of(&g.sub(&id.scale(&qi(sign)))));
        Matrix::from_sparse_rows(2 * n, rows).kernel().iter().map(|v| SparseVec::from_dense(v)).collect()
    };
    let (deg1, deg3) = (eigen(1), eigen(-1));
    if deg1.len() + deg3.len() != n {
        return Err(StsError::Construction(format!("{label}: fixed space has the wrong dimension")));
    }
    let split = deg1.len();
    let basis: Vec<SparseVec> = deg1.into_iter().chain(deg3).collect();
    let embedding = Subspace::new(2 * n, basis)?;
    let z: Vec<Vec<(usize, GaussianRational)>> = embedding.basis().iter().map(complex_entries).collect();

    let omega_c = t.omega().gram();
    let form = |i: usize, j: usize| -> Result<Rational, StsError> {
        let mut acc = GaussianRational::default();
        for (a, za) in &z[i] {
            for (b, zb) in &z[j] {
                acc = acc + (za * zb).scale(&omega_c.get(*a, *b));
            }
        }
        let v = if twist { GaussianRational::i() * acc } else { acc };
        if !v.im.is_zero() {
            return Err(StsError::Construction(format!("{label}: form is not real on the fixed space")));
        }
        Ok(v.re)
    };
    let mut omega_rows = Vec::with_capacity(n);
    for i in 0..n {
        omega_rows.push((0..n).map(|j| form(i, j)).collect::<Result<Vec<_>, _>>()?);
    }
    let omega = Matrix::from_rows(omega_rows);

    let trip = (0..n * n * n)
        .into_par_iter()
        .map(|p| {
            let (i, j, k) = (p / (n * n), (p / n) % n, p % n);
            let mut re = Accumulator::new(n);
            let mut im = Accumulator::new(n);
            for (a, za) in &z[i] {
                for (b, zb) in &z[j] {
                    let zab = za * zb;
                    for (c, zc) in &z[k] {
                        let w = &zab * zc;
                        let v = t.trip(*a, *b, *c);
                        if !w.re.is_zero() {
                            re.add_scaled(&w.re, v);
                        }
                        if !w.im.is_zero() {
                            im.add_scaled(&w.im, v);
                        }
                    }
                }
            }
            let amb = realify_parts(&re.finish(), &im.finish(), twist);
            embedding.coords_sparse(&amb)
        })
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| StsError::Construction(format!("{label}: product leaves the fixed space")))?;
    let system = TripleSystem::new(label, omega, trip)?;
    let grading = Z4Grading::new((0..split).collect(), (split..n).collect());
    Ok(RealForm { model: Model { system, grading }, embedding })
}

// ---------------------------------------------------------------------------
// E6: Γ = Φ₃⁻¹Ψ for a hermitian form of signature (p, 6 − p)

/// `M(e_I) = −(−1)^{IĪ} (−1)^{|I ∩ {p+1,…,6}|} e_Ī` on `Λ³W`.
pub fn e6_gamma(cube: &ExtBasis, p: usize) -> SparseOp {
    let neg = MultiIndex::from_indices(&(p + 1..=6).collect::<Vec<_>>());
    cube.operator(|i| {
        let c = i.complement(6);
        let s = if i.intersection(neg).len() % 2 == 0 { 1 } else { -1 };
        vec![(-merge_sign(i, c) * s, c)]
    })
}

pub fn build_e6_nonsplit(p: usize) -> Result<Model, StsError> {
    let label = ModelLabel::E6NonSplit { p };
    label.validate()?;
    let (data, split) = e6::split_system(label)?;
    let m = e6_gamma(&data.cube, p);
    Ok(real_form(label, &split, &m, &GradingOp::Conjugation, true)?.model)
}

// ---------------------------------------------------------------------------
// E7: two real forms of the half-spin module

/// `Λ(w₇w₈w₉w₁₀) = (l₁ − δ₁)(l₂ − δ₂)(l₃ − δ₃)(l₄ − δ₄)` on `Λ₀W`.
pub fn e7_so102_gamma(spin: &SpinModule) -> SparseOp {
    let d = spin.full_basis().len();
    let mut acc = SparseOp::identity(d);
    for i in 1..=4 {
        let gen = spin.clifford_generator(&spin.e(i).sub(&spin.e_dual(i))).0;
        acc = acc.compose(&gen);
    }
    spin.restrict_even(&crate::clifford::CliffordOp(acc))
}

/// `−Λ(w₁)Λ(w₁₁) = −(l₁ + δ₁)(l₅ − δ₅)`: eigenvalue `±1` where `h` acts by `±½`.
pub fn e7_so102_grading(spin: &SpinModule) -> SparseOp {
    let w1 = spin.clifford_generator(&spin.e(1).add(&spin.e_dual(1)));
    let w11 = spin.clifford_generator(&spin.e(5).sub(&spin.e_dual(5)));
    spin.restrict_even(&w1.compose(&w11).scale(&qi(-1)))
}

pub fn build_e7_so102() -> Result<Model, StsError> {
    let (data, split) = e7::split_system(ModelLabel::E7So102)?;
    let m = e7_so102_gamma(&data.spin);
    let g = e7_so102_grading(&data.spin);
    Ok(real_form(ModelLabel::E7So102, &split, &m, &GradingOp::Linear(g), false)?.model)
}

/// The automorphism of `ΛW` induced by `e_i ↦ e_{i+3}`, `e_{i+3} ↦ −e_i` (`i ≤ 3`), on `Λ₀W`.
pub fn e7_sostar_gamma(spin: &SpinModule) -> SparseOp {
    let image = |i: usize| -> ExtElement<Rational> {
        if i <= 3 {
            ExtElement::basis(6, &[i + 3])
        } else {
            ExtElement::basis(6, &[i - 3]).scale(&qi(-1))
        }
    };
    let even = spin.even_basis();
    let cols = even
        .monomials()
        .iter()
        .map(|m| {
            let img = m
                .indices()
                .into_iter()
                .fold(ExtElement::one(6), |acc, i| acc.wedge(&image(i)).expect("same ground"));
            even.coords(&img).expect("degree is preserved")
        })
        .collect();
    SparseOp::from_columns(even.len(), cols)
}

pub fn build_e7_sostar() -> Result<Model, StsError> {
    let (data, split) = e7::split_system(ModelLabel::E7SoStar)?;
    let m = e7_sostar_gamma(&data.spin);
    let even = data.spin.even_basis();
    let diag: Vec<Rational> =
        (0..even.len()).map(|k| if even.monomial(k).len() % 4 == 0 { Rational::one() } else { qi(-1) }).collect();
    let g = SparseOp::from_matrix(&Matrix::diag(&diag));
    Ok(real_form(ModelLabel::E7SoStar, &split, &m, &GradingOp::Linear(g), false)?.model)
}

// ---------------------------------------------------------------------------
// E8: Υ_T for a hermitian form of signature (6, 2)

/// Signs `s_J = Π_{j ∈ J} s_j` with `s_j = −1` exactly for `j > p`.
fn hermitian_sign(j: MultiIndex, p: usize) -> i32 {
    if j.indices().iter().filter(|&&i| i > p).count() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `Υ_T`: `e_J ↦ s_J e^J` and `e^J ↦ s_J e_J`.
pub fn e8_upsilon(two: &ExtBasis, p: usize) -> SparseOp {
    let half = two.len();
    let cols = (0..2 * half)
        .map(|col| {
            let k = col % half;
            let s = Rational::from(hermitian_sign(two.monomial(k), p) as i64);
            SparseVec::single(if col < half { half + k } else { k }, s)
        })
        .collect();
    SparseOp::from_columns(2 * half, cols)
}

pub fn build_e8_nonsplit() -> Result<Model, StsError> {
    let (data, split) = e8::split_system(ModelLabel::E8NonSplit)?;
    let m = e8_upsilon(&data.two, 6);
    Ok(real_form(ModelLabel::E8NonSplit, &split, &m, &GradingOp::Conjugation, true)?.model)
}

/// Number of increasing `I = (1, i, j, k)` with `|I ∩ {p+1,…,8}|` even.
pub fn upsilon_even_count(p: usize) -> usize {
    crate::exterior::subsets(8, 4)
        .into_iter()
        .filter(|i| i.contains(1) && hermitian_sign(*i, p) == 1)
        .count()
}

/// Killing signature of `L^Υ` predicted from the count: `sign(su_{p,8−p}) + 2c − (70 − 2c)`.
pub fn upsilon_predicted_signature(p: usize) -> i64 {
    let c = upsilon_even_count(p) as i64;
    let d = 2 * p as i64 - 8;
    1 - d * d + 4 * c - 70
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e6_gamma_values() {
        let cube = ExtBasis::degree(6, 3);
        let at = |idx: &[usize]| cube.index_of(MultiIndex::from_indices(idx)).unwrap();
        for p in [3, 5] {
            let m = e6_gamma(&cube, p);
            assert_eq!(*m.column(at(&[1, 2, 3])), SparseVec::single(at(&[4, 5, 6]), qi(-1)));
            assert_eq!(involution_sign(&m), Some(1));
        }
        for p in [4, 6] {
            assert_eq!(involution_sign(&e6_gamma(&cube, p)), Some(-1));
        }
    }

    #[test]
    fn e6_pairing_two_i() {
        // (e123 − e456 | 𝐢(e123 + e456)) = 2𝐢, both vectors fixed by Γ
        let (data, split) = e6::split_system(ModelLabel::E6NonSplit { p: 3 }).unwrap();
        let at = |idx: &[usize]| data.cube.index_of(MultiIndex::from_indices(idx)).unwrap();
        let (a, b) = (at(&[1, 2, 3]), at(&[4, 5, 6]));
        let x = SparseVec::from_entries(vec![(2 * a, qi(1)), (2 * b, qi(-1))]);
        let y = SparseVec::from_entries(vec![(2 * a + 1, qi(1)), (2 * b + 1, qi(1))]);
        let r = realify_conjugate_linear(&e6_gamma(&data.cube, 3));
        assert_eq!(r.apply(&x), x);
        assert_eq!(r.apply(&y), y);
        let (zx, zy) = (complex_entries(&x), complex_entries(&y));
        let mut acc = GaussianRational::default();
        for (i, u) in &zx {
            for (j, v) in &zy {
                acc = acc + (u * v).scale(&split.form_basis(*i, *j));
            }
        }
        assert_eq!(acc, GaussianRational::new(qi(0), qi(2)));
    }

    #[test]
    fn e7_so102_values() {
        let spin = SpinModule::new(6);
        let even = spin.even_basis();
        let at = |idx: &[usize]| even.index_of(MultiIndex::from_indices(idx)).unwrap();
        let m = e7_so102_gamma(&spin);
        assert_eq!(*m.column(at(&[])), SparseVec::unit(at(&[1, 2, 3, 4])));
        assert_eq!(*m.column(at(&[5, 6])), SparseVec::unit(at(&[1, 2, 3, 4, 5, 6])));
        assert_eq!(involution_sign(&m), Some(1));
        let g = e7_so102_grading(&spin);
        assert_eq!(g.compose(&g), SparseOp::identity(32));
        assert_eq!(g.compose(&m), m.compose(&g));
        // (1 + e1234 | e56 + e123456) = 2
        let x = SparseVec::unit(at(&[])).add(&SparseVec::unit(at(&[1, 2, 3, 4])));
        let y = SparseVec::unit(at(&[5, 6])).add(&SparseVec::unit(at(&[1, 2, 3, 4, 5, 6])));
        let omega = Matrix::from_fn(32, 32, |i, j| e7::ba_monomials(even.monomial(i), even.monomial(j), 6));
        assert_eq!(omega.bilinear(&x, &y), qi(2));
    }

    #[test]
    fn e7_sostar_values() {
        let spin = SpinModule::new(6);
        let even = spin.even_basis();
        let m = e7_sostar_gamma(&spin);
        assert_eq!(*m.column(0), SparseVec::unit(0));
        assert_eq!(*m.column(31), SparseVec::unit(31));
        assert_eq!(involution_sign(&m), Some(1));
        assert_eq!(e7::ba_monomials(even.monomial(0), even.monomial(31), 6), Rational::one());
    }

    #[test]
    fn e8_counts() {
        let counts: Vec<usize> = [4, 6, 8].iter().map(|&p| upsilon_even_count(p)).collect();
        assert_eq!(counts, vec![19, 15, 35]);
        let sigs: Vec<i64> = [4, 6, 8].iter().map(|&p| upsilon_predicted_signature(p)).collect();
        assert_eq!(sigs, vec![7, -25, 7]);
        let two = ExtBasis::degree(8, 2);
        assert_eq!(involution_sign(&e8_upsilon(&two, 6)), Some(1));
    }
}
