//! The five classical families: special, orthogonal, symplectic, unitarian
//! and quaternionic.
//!
//! The last two are built over ℂ and ℍ and realified with interleaved
//! coordinates: `(u_r, 𝐢u_r)` and `(u_r, u_r𝐢, u_r𝐣, u_r𝐤)` respectively.

use num_traits::{One, Zero};

use crate::linalg::{Matrix, SparseVec};
use crate::scalar::{q, qi, realify_complex, realify_quaternion, GaussianRational, Rational, RationalQuaternion};
use crate::sts::{ModelLabel, StsError, TripleSystem, Z4Grading};

use super::Model;

fn delta(a: usize, b: usize) -> Rational {
    if a == b {
        Rational::one()
    } else {
        Rational::zero()
    }
}

/// `T = W ⊕ W*` with `[x, f, y] = f(x)y + 2f(y)x` and `(f|x) = f(x)`.
///
/// Basis: `w_0..w_{n−1}` then `f_0..f_{n−1}` (the dual basis).
pub fn build_special(n: usize) -> Result<Model, StsError> {
    let label = ModelLabel::Special { n };
    label.validate()?;
    let omega = Matrix::from_fn(2 * n, 2 * n, |a, b| match (a < n, b < n) {
        (true, false) => -delta(a, b - n),
        (false, true) => delta(a - n, b),
        _ => Rational::zero(),
    });
    let w = |i: usize, c: Rational| SparseVec::single(i, c);
    let f = |i: usize, c: Rational| SparseVec::single(n + i, c);
    let system = TripleSystem::from_fn(label, omega, |a, b, c| {
        let (wa, wb, wc) = (a < n, b < n, c < n);
        if wa == wb {
            return SparseVec::new();
        }
        // (i, j): the W slot and the W* slot of the first two arguments
        let (i, j) = if wa { (a, b - n) } else { (b, a - n) };
        if wc {
            let k = c;
            w(k, delta(j, i)).add(&w(i, qi(2) * delta(j, k)))
        } else {
            let k = c - n;
            f(k, -delta(i, j)).add(&f(j, qi(-2) * delta(k, i)))
        }
    })?;
    let grading = Z4Grading::new((0..n).collect(), (n..2 * n).collect());
    Ok(Model { system, grading })
}

/// `⟨e_s|e_t⟩` on the two-dimensional symplectic space `V` with `⟨u|v⟩ = 1`.
fn vpair(s: usize, t: usize) -> Rational {
    match (s, t) {
        (0, 1) => Rational::one(),
        (1, 0) => -Rational::one(),
        _ => Rational::zero(),
    }
}

/// `T = V ⊗ W` with `b = diag(+1ᵖ, −1^q)` on `W`:
///
/// `(u⊗x | v⊗y) = ½⟨u|v⟩b(x,y)` and
/// `[u⊗x, v⊗y, w⊗z] = ½(⟨u|w⟩v + ⟨v|w⟩u)⊗b(x,y)z + ⟨u|v⟩w⊗(b(x,z)y − b(y,z)x)`.
///
/// Basis: `u⊗w_a` then `v⊗w_a`.
pub fn build_orthogonal(p: usize, qq: usize) -> Result<Model, StsError> {
    let label = ModelLabel::Orthogonal { p, q: qq };
    label.validate()?;
    let m = p + qq;
    let b = |x: usize, y: usize| -> Rational {
        if x != y {
            Rational::zero()
        } else if x < p {
            Rational::one()
        } else {
            -Rational::one()
        }
    };
    let split = |i: usize| (i / m, i % m);
    let idx = |s: usize, a: usize| s * m + a;
    let half = q(1, 2);
    let omega = Matrix::from_fn(2 * m, 2 * m, |i, j| {
        let ((s, x), (t, y)) = (split(i), split(j));
        &half * &(vpair(s, t) * b(x, y))
    });
    let system = TripleSystem::from_fn(label, omega, |i, j, k| {
        let ((s, x), (t, y), (r, z)) = (split(i), split(j), split(k));
        let bxy = b(x, y);
        let mut out = SparseVec::new();
        if !bxy.is_zero() {
            let c = &half * &bxy;
            out = out
                .add(&SparseVec::single(idx(t, z), &c * &vpair(s, r)))
                .add(&SparseVec::single(idx(s, z), &c * &vpair(t, r)));
        }
        let st = vpair(s, t);
        if !st.is_zero() {
            out = out
                .add(&SparseVec::single(idx(r, y), &st * &b(x, z)))
                .add(&SparseVec::single(idx(r, x), -(&st * &b(y, z))));
        }
        out
    })?;
    let grading = Z4Grading::new((0..m).collect(), (m..2 * m).collect());
    Ok(Model { system, grading })
}

/// `T` of dimension `2n` with `(x_i|y_i) = 1` and `[x, y, z] = (x|z)y + (y|z)x`.
///
/// Basis: `x_0..x_{n−1}` then `y_0..y_{n−1}`.
pub fn build_symplectic(n: usize) -> Result<Model, StsError> {
    let label = ModelLabel::Symplectic { n };
    label.validate()?;
    let omega = Matrix::from_fn(2 * n, 2 * n, |a, b| {
        if b == a + n && a < n {
            Rational::one()
        } else if a == b + n && b < n {
            -Rational::one()
        } else {
            Rational::zero()
        }
    });
    let om = omega.clone();
    let system = TripleSystem::from_fn(label, omega, move |a, b, c| {
        SparseVec::single(b, om.get(a, c)).add(&SparseVec::single(a, om.get(b, c)))
    })?;
    let grading = Z4Grading::new((0..n).collect(), (n..2 * n).collect());
    Ok(Model { system, grading })
}

type Cvec = Vec<GaussianRational>;

fn cunit(m: usize, real_index: usize) -> Cvec {
    let mut v = vec![GaussianRational::default(); m];
    v[real_index / 2] = if real_index.is_multiple_of(2) { GaussianRational::real(qi(1)) } else { GaussianRational::i() };
    v
}

fn cadd(a: &Cvec, b: &Cvec) -> Cvec {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

fn cscale(c: &GaussianRational, a: &Cvec) -> Cvec {
    a.iter().map(|x| c.clone() * x.clone()).collect()
}

/// Hermitian form of signature `(p, q)`, linear in the first slot.
fn herm(p: usize, x: &Cvec, y: &Cvec) -> GaussianRational {
    let mut acc = GaussianRational::default();
    for (r, (a, b)) in x.iter().zip(y).enumerate() {
        let t = a.clone() * b.conj();
        acc = if r < p { acc + t } else { acc - t };
    }
    acc
}

/// Realified hermitian system: `(x|y) = Im h(x,y)`, `{x|y} = Re h(x,y)` and
/// `[x,y,z] = 𝐢(h(z,x)y + h(z,y)x + {x|y}z)`.
pub fn build_unitarian(p: usize, qq: usize) -> Result<Model, StsError> {
    let label = ModelLabel::Unitarian { p, q: qq };
    label.validate()?;
    let m = p + qq;
    let n = 2 * m;
    let omega = Matrix::from_fn(n, n, |a, b| herm(p, &cunit(m, a), &cunit(m, b)).im);
    let i = GaussianRational::i();
    let system = TripleSystem::from_fn(label, omega, |a, b, c| {
        let (x, y, z) = (cunit(m, a), cunit(m, b), cunit(m, c));
        let re = GaussianRational::real(herm(p, &x, &y).re);
        let sum = cadd(&cadd(&cscale(&herm(p, &z, &x), &y), &cscale(&herm(p, &z, &y), &x)), &cscale(&re, &z));
        SparseVec::from_dense(&realify_complex(&cscale(&i, &sum)))
    })?;
    let grading = Z4Grading::new((0..n).step_by(2).collect(), (1..n).step_by(2).collect());
    Ok(Model { system, grading })
}

type Hvec = Vec<RationalQuaternion>;

fn hunit(m: usize, real_index: usize) -> Hvec {
    let mut v = vec![RationalQuaternion::zero(); m];
    v[real_index / 4] = match real_index % 4 {
        0 => RationalQuaternion::one(),
        1 => RationalQuaternion::i(),
        2 => RationalQuaternion::j(),
        _ => RationalQuaternion::k(),
    };
    v
}

/// `x·s` (right scalar multiplication).
fn hright(x: &Hvec, s: &RationalQuaternion) -> Hvec {
    x.iter().map(|a| a * s).collect()
}

fn hadd(a: &Hvec, b: &Hvec) -> Hvec {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

/// Skew-hermitian form `h(x,y) = Σ x̄_r 𝐢 y_r`.
fn skew(x: &Hvec, y: &Hvec) -> RationalQuaternion {
    let i = RationalQuaternion::i();
    x.iter().zip(y).fold(RationalQuaternion::zero(), |acc, (a, b)| acc + &(&a.conj() * &i) * b)
}

/// Realified quaternionic system: `(x|y) = Re h(x,y)`, `{x|y}` its pure part and
/// `[x,y,z] = x·h(y,z) + y·h(x,z) + z·{x|y}`.
pub fn build_quaternionic(n: usize) -> Result<Model, StsError> {
    let label = ModelLabel::Quaternionic { n };
    label.validate()?;
    let dim = 4 * n;
    let omega = Matrix::from_fn(dim, dim, |a, b| skew(&hunit(n, a), &hunit(n, b)).re());
    let system = TripleSystem::from_fn(label, omega, |a, b, c| {
        let (x, y, z) = (hunit(n, a), hunit(n, b), hunit(n, c));
        let sum = hadd(&hadd(&hright(&x, &skew(&y, &z)), &hright(&y, &skew(&x, &z))), &hright(&z, &skew(&x, &y).pure()));
        SparseVec::from_dense(&realify_quaternion(&sum))
    })?;
    let deg1 = (0..dim).filter(|r| r % 4 == 0 || r % 4 == 2).collect();
    let deg3 = (0..dim).filter(|r| r % 4 == 1 || r % 4 == 3).collect();
    Ok(Model { system, grading: Z4Grading::new(deg1, deg3) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn special_n1_value() {
        let m = build_special(1).unwrap();
        assert_eq!(*m.system.trip(0, 1, 0), SparseVec::single(0, qi(3)));
    }

    #[test]
    fn orthogonal_form_value() {
        let m = build_orthogonal(3, 0).unwrap();
        assert_eq!(m.system.form_basis(0, 3), q(1, 2));
    }

    #[test]
    fn symplectic_value() {
        let m = build_symplectic(1).unwrap();
        assert_eq!(*m.system.trip(0, 1, 1), SparseVec::unit(1));
    }

    #[test]
    fn unitarian_values() {
        let m = build_unitarian(1, 0).unwrap();
        assert_eq!(*m.system.trip(0, 0, 0), SparseVec::single(1, qi(3)));
        assert_eq!(m.system.form_basis(0, 1), qi(-1));
    }

    #[test]
    fn quaternionic_values() {
        let m = build_quaternionic(1).unwrap();
        assert_eq!(*m.system.trip(0, 0, 0), SparseVec::single(1, qi(3)));
        assert_eq!(m.system.form_basis(0, 1), qi(-1));
    }
}
