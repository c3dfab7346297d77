//! Binary cubic forms with transvectants, and the triple system on `V₃`.

use num_traits::{One, Zero};
use std::ops::{Add, Mul};

use crate::linalg::{Matrix, SparseVec};
use crate::scalar::{qi, Rational};
use crate::sts::{calibrate_alpha, ModelLabel, StsError, TripleSystem, Z4Grading};

use super::Model;

/// A homogeneous binary form: `coeffs[k]` multiplies `X^{d−k} Y^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly2 {
    coeffs: Vec<Rational>,
}

fn falling(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    (n - k + 1..=n).map(|v| v as i64).product()
}

fn binom(n: usize, k: usize) -> i64 {
    falling(n, k) / falling(k, k)
}

impl Poly2 {
    pub fn zero(degree: usize) -> Self {
        Self { coeffs: vec![Rational::zero(); degree + 1] }
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a binary form needs at least one coefficient");
        Self { coeffs }
    }

    /// `X^{d−k} Y^k`.
    pub fn monomial(degree: usize, k: usize) -> Self {
        let mut p = Self::zero(degree);
        p.coeffs[k] = Rational::one();
        p
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// `∂^{a+b} / ∂X^a ∂Y^b`.
    pub fn derivative(&self, a: usize, b: usize) -> Self {
        let d = self.degree();
        if a + b > d {
            return Self::zero(0);
        }
        let mut out = Self::zero(d - a - b);
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() || k < b || d - k < a {
                continue;
            }
            let f = falling(d - k, a) * falling(k, b);
            out.coeffs[k - b] = &out.coeffs[k - b] + &(c * &Rational::from(f));
        }
        out
    }
}

impl Add<&Poly2> for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        assert_eq!(self.degree(), rhs.degree(), "adding forms of different degree");
        Poly2 { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Mul<&Poly2> for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut out = Poly2::zero(self.degree() + rhs.degree());
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out.coeffs[i + j] = &out.coeffs[i + j] + &(a * b);
            }
        }
        out
    }
}

/// The `q`-th transvectant `(f, g)_q`, a form of degree `deg f + deg g − 2q`.
pub fn transvect(f: &Poly2, g: &Poly2, q: usize) -> Result<Poly2, StsError> {
    let (n, m) = (f.degree(), g.degree());
    if q > n.min(m) {
        return Err(StsError::Parameters {
            family: "transvectant",
            reason: format!("order {q} exceeds the degrees {n} and {m}"),
        });
    }
    let mut acc = Poly2::zero(n + m - 2 * q);
    for i in 0..=q {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        let term = &f.derivative(q - i, i) * &g.derivative(i, q - i);
        acc = &acc + &term.scale(&Rational::from(sign * binom(q, i)));
    }
    let norm = Rational::new(1, falling(n, q) * falling(m, q));
    Ok(acc.scale(&norm))
}

fn tv(f: &Poly2, g: &Poly2, q: usize) -> Poly2 {
    transvect(f, g, q).expect("transvectant order within range")
}

fn to_vec(p: &Poly2) -> SparseVec {
    SparseVec::from_dense(p.coeffs())
}

/// `((f, g)_2, h)_1` on the monomial basis of `V₃`, indexed like a product tensor.
fn raw_product() -> Vec<SparseVec> {
    let basis: Vec<Poly2> = (0..4).map(|k| Poly2::monomial(3, k)).collect();
    let mut out = Vec::with_capacity(64);
    for f in &basis {
        for g in &basis {
            let fg = tv(f, g, 2);
            for h in &basis {
                out.push(to_vec(&tv(&fg, h, 1)));
            }
        }
    }
    out
}

fn form_matrix() -> Matrix {
    Matrix::from_fn(4, 4, |i, j| tv(&Poly2::monomial(3, i), &Poly2::monomial(3, j), 3).coeffs()[0].clone())
}

/// The ratio `α` for the product without its factor six (expected `1/6`).
pub fn unscaled_alpha() -> Result<Rational, StsError> {
    calibrate_alpha(&form_matrix(), &raw_product())
}

/// `T = V₃` with `(f|g) = (f,g)₃` and `[f,g,h] = 6((f,g)₂,h)₁`.
pub fn build_g2() -> Result<Model, StsError> {
    let six = qi(6);
    let trip: Vec<SparseVec> = raw_product().iter().map(|v| v.scale(&six)).collect();
    let system = TripleSystem::new(ModelLabel::G2, form_matrix(), trip)?;
    // X³ and Y³ have weights ∓3, X²Y and XY² weights ∓1
    let grading = Z4Grading::new(vec![1, 3], vec![0, 2]);
    Ok(Model { system, grading })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn generic(k: usize, seed: i64) -> Poly2 {
        Poly2::from_coeffs((0..=k).map(|i| Rational::new((i as i64 * 7 + seed) % 11 - 5, 1 + i as i64 % 3)).collect())
    }

    #[test]
    fn x3_y3_pairing() {
        let v = transvect(&Poly2::monomial(3, 0), &Poly2::monomial(3, 3), 3).unwrap();
        assert_eq!(v.coeffs(), &[Rational::one()]);
    }

    #[test]
    fn zeroth_is_product_and_odd_self_vanish() {
        let (f, g) = (generic(3, 1), generic(2, 4));
        assert_eq!(transvect(&f, &g, 0).unwrap(), &f * &g);
        for qq in [1, 3] {
            assert!(transvect(&f, &f, qq).unwrap().is_zero());
        }
        assert!(transvect(&f, &g, 3).is_err());
    }

    #[test]
    fn factor_six() {
        assert_eq!(unscaled_alpha().unwrap(), q(1, 6));
        let m = build_g2().unwrap();
        assert_eq!(calibrate_alpha(m.system.omega().gram(), m.system.trip_entries()).unwrap(), Rational::one());
    }

    /// `2(f,g)₃h + (h,g)₃f − (h,f)₃g = 6(((f,h)₂,g)₁ − ((g,h)₂,f)₁)` on all basis triples.
    #[test]
    fn gordan_regression() {
        let basis: Vec<Poly2> = (0..4).map(|k| Poly2::monomial(3, k)).collect();
        for f in &basis {
            for g in &basis {
                for h in &basis {
                    let s = |p: Poly2| p.coeffs()[0].clone();
                    let lhs = &(&h.scale(&(s(tv(f, g, 3)) * qi(2))) + &f.scale(&s(tv(h, g, 3))))
                        + &g.scale(&-s(tv(h, f, 3)));
                    let rhs = (&tv(&tv(f, h, 2), g, 1) + &tv(&tv(g, h, 2), f, 1).scale(&qi(-1))).scale(&qi(6));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
