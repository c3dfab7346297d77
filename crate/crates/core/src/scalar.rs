//! Exact scalars.
//!
//! [`Rational`] is the single ground scalar of every stored tensor. It keeps
//! numerator and denominator in machine words while they fit and falls back to
//! arbitrary precision transparently, so results never depend on the path taken.
//! [`GaussianRational`] and [`RationalQuaternion`] only live inside constructors
//! until realification turns them back into rational coordinates.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Failure to parse a rational from text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRationalError(pub String);

/// An exact rational number in lowest terms with positive denominator.
#[derive(Clone)]
pub struct Rational(Repr);

#[derive(Clone)]
enum Repr {
    /// `num / den` with `den > 0`, `gcd(num, den) = 1` and `num != i64::MIN`.
    Small(i64, i64),
    /// Anything that does not fit the small representation.
    Big(Box<BigRational>),
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a <= u64::MAX as u128 && b <= u64::MAX as u128 {
        let (mut x, mut y) = (a as u64, b as u64);
        while y != 0 {
            let t = x % y;
            x = y;
            y = t;
        }
        return x as u128;
    }
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn fits_small(v: i128) -> bool {
    v > i64::MIN as i128 && v <= i64::MAX as i128
}

impl Rational {
    /// Builds `num / den`; panics when `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    /// The integer `v`.
    pub fn from_int(v: i64) -> Self {
        if v == i64::MIN {
            Self::from_i128(v as i128, 1)
        } else {
            Rational(Repr::Small(v, 1))
        }
    }

    /// Builds a rational from big integers; panics when `den == 0`.
    pub fn from_bigints(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Self::from_big(BigRational::new(num, den))
    }

    fn from_i128(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        if num == 0 {
            return Rational(Repr::Small(0, 1));
        }
        let neg = (num < 0) != (den < 0);
        let (un, ud) = (num.unsigned_abs(), den.unsigned_abs());
        let g = gcd_u128(un, ud);
        let (un, ud) = (un / g, ud / g);
        if un <= i64::MAX as u128 && ud <= i64::MAX as u128 {
            let n = un as i64;
            Rational(Repr::Small(if neg { -n } else { n }, ud as i64))
        } else {
            let n = BigInt::from(un);
            let n = if neg { -n } else { n };
            Rational(Repr::Big(Box::new(BigRational::new_raw(n, BigInt::from(ud)))))
        }
    }

    fn from_big(r: BigRational) -> Self {
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            if n != i64::MIN {
                return Rational(Repr::Small(n, d));
            }
        }
        Rational(Repr::Big(Box::new(r)))
    }

    /// Arbitrary-precision view of the value.
    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    /// Numerator and denominator when both fit in an `i64`.
    pub fn as_small(&self) -> Option<(i64, i64)> {
        match self.0 {
            Repr::Small(n, d) => Some((n, d)),
            Repr::Big(_) => None,
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(b) => b.is_integer(),
        }
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(n, _) => n.signum() as i32,
            Repr::Big(b) => {
                if b.is_positive() {
                    1
                } else if b.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn recip(&self) -> Self {
        match &self.0 {
            Repr::Small(n, d) => {
                assert!(*n != 0, "reciprocal of zero");
                Self::from_i128(*d as i128, *n as i128)
            }
            Repr::Big(b) => Self::from_big(b.recip()),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Rational::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    fn add_ref(&self, o: &Self) -> Self {
        if let (Repr::Small(a, b), Repr::Small(c, d)) = (&self.0, &o.0) {
            if *b == 1 && *d == 1 {
                return Self::from_i128(*a as i128 + *c as i128, 1);
            }
            if b == d {
                return Self::from_i128(*a as i128 + *c as i128, *b as i128);
            }
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            return Self::from_i128(a * d + c * b, b * d);
        }
        Self::from_big(self.to_big() + o.to_big())
    }

    fn sub_ref(&self, o: &Self) -> Self {
        if let (Repr::Small(a, b), Repr::Small(c, d)) = (&self.0, &o.0) {
            if *b == 1 && *d == 1 {
                return Self::from_i128(*a as i128 - *c as i128, 1);
            }
            if b == d {
                return Self::from_i128(*a as i128 - *c as i128, *b as i128);
            }
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            return Self::from_i128(a * d - c * b, b * d);
        }
        Self::from_big(self.to_big() - o.to_big())
    }

    fn mul_ref(&self, o: &Self) -> Self {
        if let (Repr::Small(a, b), Repr::Small(c, d)) = (&self.0, &o.0) {
            if *b == 1 && *d == 1 {
                let p = *a as i128 * *c as i128;
                if fits_small(p) {
                    return Rational(Repr::Small(p as i64, 1));
                }
            }
            return Self::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128);
        }
        Self::from_big(self.to_big() * o.to_big())
    }

    fn div_ref(&self, o: &Self) -> Self {
        assert!(!o.is_zero(), "division by zero");
        if let (Repr::Small(a, b), Repr::Small(c, d)) = (&self.0, &o.0) {
            return Self::from_i128(*a as i128 * *d as i128, *b as i128 * *c as i128);
        }
        Self::from_big(self.to_big() / o.to_big())
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational(Repr::Small(0, 1))
    }
    fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational(Repr::Small(1, 1))
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_int(v)
    }
}

impl From<i32> for Rational {
    fn from(v: i32) -> Self {
        Rational::from_int(v as i64)
    }
}

impl From<BigRational> for Rational {
    fn from(v: BigRational) -> Self {
        Rational::from_big(v)
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => a == c && b == d,
            (Repr::Big(x), Repr::Big(y)) => x == y,
            // Canonical form: a value that fits is never stored big.
            _ => false,
        }
    }
}

impl Eq for Rational {}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small(n, d) => {
                0u8.hash(state);
                n.hash(state);
                d.hash(state);
            }
            Repr::Big(b) => {
                1u8.hash(state);
                b.numer().hash(state);
                b.denom().hash(state);
            }
        }
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        if let (Repr::Small(a, b), Repr::Small(c, d)) = (&self.0, &other.0) {
            return (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128));
        }
        self.to_big().cmp(&other.to_big())
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(b) if b.is_integer() => write!(f, "{}", b.numer()),
            Repr::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Accepts `p` or `p/q` with decimal integers and `q != 0`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseRationalError(s.to_string());
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Rational::from_bigints(n, d))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $inner:ident, $atr:ident, $am:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $m(self, o: &Rational) -> Rational {
                self.$inner(o)
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $m(self, o: Rational) -> Rational {
                self.$inner(&o)
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $m(self, o: &Rational) -> Rational {
                self.$inner(o)
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(self, o: Rational) -> Rational {
                self.$inner(&o)
            }
        }
        impl $atr<&Rational> for Rational {
            fn $am(&mut self, o: &Rational) {
                *self = self.$inner(o);
            }
        }
        impl $atr<Rational> for Rational {
            fn $am(&mut self, o: Rational) {
                *self = self.$inner(&o);
            }
        }
    };
}

forward_binop!(Add, add, add_ref, AddAssign, add_assign);
forward_binop!(Sub, sub, sub_ref, SubAssign, sub_assign);
forward_binop!(Mul, mul, mul_ref, MulAssign, mul_assign);
forward_binop!(Div, div, div_ref, DivAssign, div_assign);

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match &self.0 {
            Repr::Small(n, d) => Rational(Repr::Small(-n, *d)),
            Repr::Big(b) => Rational::from_big(-(**b).clone()),
        }
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |a, b| a * b)
    }
}

/// Shorthand for `Rational::new`.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

/// Shorthand for an integer rational.
pub fn qi(v: i64) -> Rational {
    Rational::from_int(v)
}

/// Scalars allowed as coefficients of exterior-algebra elements.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Complex conjugation (the identity on rationals).
    fn conj(&self) -> Self;
}

impl Scalar for Rational {
    fn conj(&self) -> Self {
        self.clone()
    }
}

/// `re + im·𝐢` with rational parts.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self { re, im: Rational::zero() }
    }

    /// The imaginary unit 𝐢.
    pub fn i() -> Self {
        Self { re: Rational::zero(), im: Rational::one() }
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -&self.im }
    }

    /// `re² + im²`.
    pub fn norm_sq(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { re: &self.re * c, im: &self.im * c }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn recip(&self) -> Self {
        let n = self.norm_sq();
        assert!(!n.is_zero(), "reciprocal of zero");
        let c = self.conj();
        Self { re: &c.re / &n, im: &c.im / &n }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i)", self.re, self.im)
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        &self * &o
    }
}

impl Mul<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Div for GaussianRational {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        &self * &o.recip()
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self { re: -self.re, im: -self.im }
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::real(Rational::one())
    }
}

impl Scalar for GaussianRational {
    fn conj(&self) -> Self {
        GaussianRational::conj(self)
    }
}

/// `a + b𝐢 + c𝐣 + d𝐤` with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RationalQuaternion {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

impl RationalQuaternion {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        Self { a, b, c, d }
    }

    pub fn real(a: Rational) -> Self {
        Self { a, ..Self::default() }
    }

    pub fn i() -> Self {
        Self { b: Rational::one(), ..Self::default() }
    }

    pub fn j() -> Self {
        Self { c: Rational::one(), ..Self::default() }
    }

    pub fn k() -> Self {
        Self { d: Rational::one(), ..Self::default() }
    }

    /// The four coefficients in the order 1, 𝐢, 𝐣, 𝐤.
    pub fn coeffs(&self) -> [Rational; 4] {
        [self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone()]
    }

    pub fn from_coeffs(c: [Rational; 4]) -> Self {
        let [a, b, c, d] = c;
        Self { a, b, c, d }
    }

    pub fn conj(&self) -> Self {
        Self { a: self.a.clone(), b: -&self.b, c: -&self.c, d: -&self.d }
    }

    /// `a² + b² + c² + d²`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a + &self.b * &self.b + &self.c * &self.c + &self.d * &self.d
    }

    /// The real part `a`.
    pub fn re(&self) -> Rational {
        self.a.clone()
    }

    /// The pure part `b𝐢 + c𝐣 + d𝐤`.
    pub fn pure(&self) -> Self {
        Self { a: Rational::zero(), ..self.clone() }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self { a: &self.a * s, b: &self.b * s, c: &self.c * s, d: &self.d * s }
    }
}

impl fmt::Debug for RationalQuaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i + {}j + {}k)", self.a, self.b, self.c, self.d)
    }
}

impl Add for RationalQuaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { a: self.a + o.a, b: self.b + o.b, c: self.c + o.c, d: self.d + o.d }
    }
}

impl Sub for RationalQuaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { a: self.a - o.a, b: self.b - o.b, c: self.c - o.c, d: self.d - o.d }
    }
}

impl Neg for RationalQuaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }
}

impl Mul<&RationalQuaternion> for &RationalQuaternion {
    type Output = RationalQuaternion;
    fn mul(self, o: &RationalQuaternion) -> RationalQuaternion {
        let (a1, b1, c1, d1) = (&self.a, &self.b, &self.c, &self.d);
        let (a2, b2, c2, d2) = (&o.a, &o.b, &o.c, &o.d);
        RationalQuaternion {
            a: a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            b: a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            c: a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            d: a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        }
    }
}

impl Mul for RationalQuaternion {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        &self * &o
    }
}

impl Zero for RationalQuaternion {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }
}

impl One for RationalQuaternion {
    fn one() -> Self {
        Self::real(Rational::one())
    }
}

/// Interleaved realification `(re₁, im₁, re₂, im₂, …)` of a complex vector.
pub fn realify_complex(v: &[GaussianRational]) -> Vec<Rational> {
    v.iter().flat_map(|z| [z.re.clone(), z.im.clone()]).collect()
}

/// Inverse of [`realify_complex`]; panics on odd length.
pub fn unrealify_complex(v: &[Rational]) -> Vec<GaussianRational> {
    assert!(v.len().is_multiple_of(2), "realified vector must have even length");
    v.chunks(2).map(|c| GaussianRational::new(c[0].clone(), c[1].clone())).collect()
}

/// Interleaved realification `(a₁, b₁, c₁, d₁, …)` of a quaternionic vector.
pub fn realify_quaternion(v: &[RationalQuaternion]) -> Vec<Rational> {
    v.iter().flat_map(|x| x.coeffs()).collect()
}

/// Inverse of [`realify_quaternion`]; panics unless the length is a multiple of 4.
pub fn unrealify_quaternion(v: &[Rational]) -> Vec<RationalQuaternion> {
    assert!(v.len().is_multiple_of(4), "realified vector length must be a multiple of 4");
    v.chunks(4)
        .map(|c| RationalQuaternion::from_coeffs([c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone()]))
        .collect()
}

/// The 2×2 block of multiplication by 𝐢 in realified coordinates.
pub fn complex_unit_block() -> [[Rational; 2]; 2] {
    [[qi(0), qi(-1)], [qi(1), qi(0)]]
}

/// The 4×4 block `B` with `realify(x·s) = B·realify(x)` for one quaternionic slot.
pub fn quaternion_right_block(s: &RationalQuaternion) -> [[Rational; 4]; 4] {
    let units = [
        RationalQuaternion::one(),
        RationalQuaternion::i(),
        RationalQuaternion::j(),
        RationalQuaternion::k(),
    ];
    let mut out: [[Rational; 4]; 4] = Default::default();
    for (col, u) in units.iter().enumerate() {
        let img = (u * s).coeffs();
        for (row, v) in img.into_iter().enumerate() {
            out[row][col] = v;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_sign() {
        let r = q(6, -4);
        assert_eq!(r.as_small(), Some((-3, 2)));
        assert_eq!(q(0, -5), Rational::zero());
        assert_eq!(format!("{}", q(10, 5)), "2");
        assert_eq!(format!("{}", q(-1, 3)), "-1/3");
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = qi(i64::MAX);
        let sq = &big * &big;
        assert!(sq.as_small().is_none());
        let back = &sq / &big;
        assert_eq!(back, big);
        assert_eq!(back.as_small(), Some((i64::MAX, 1)));
        let m = qi(i64::MIN);
        assert_eq!(-(-&m), m);
        assert_eq!(&m - &m, Rational::zero());
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["0", "-7", "3/4", "-12/5", "123456789012345678901234567891/7"] {
            let r: Rational = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
        assert_eq!("4/6".parse::<Rational>().unwrap(), q(2, 3));
    }

    #[test]
    fn ordering_matches_big() {
        assert!(q(1, 3) < q(1, 2));
        assert!(q(-1, 2) < q(-1, 3));
        let huge = &qi(i64::MAX) * &qi(3);
        assert!(huge > qi(i64::MAX));
    }

    #[test]
    fn quaternion_units() {
        let (i, j, k) = (RationalQuaternion::i(), RationalQuaternion::j(), RationalQuaternion::k());
        assert_eq!(&i * &j, k);
        assert_eq!(&j * &i, -k.clone());
        assert_eq!(&k * &k, -RationalQuaternion::one());
    }

    #[test]
    fn realify_examples() {
        let one = GaussianRational::real(qi(1));
        assert_eq!(realify_complex(&[one]), vec![qi(1), qi(0)]);
        assert_eq!(realify_complex(&[GaussianRational::i()]), vec![qi(0), qi(1)]);
        let v = [GaussianRational::new(qi(2), qi(3)), GaussianRational::real(qi(-1))];
        assert_eq!(realify_complex(&v), vec![qi(2), qi(3), qi(-1), qi(0)]);

        assert_eq!(realify_quaternion(&[RationalQuaternion::one()]), vec![qi(1), qi(0), qi(0), qi(0)]);
        assert_eq!(realify_quaternion(&[RationalQuaternion::j()]), vec![qi(0), qi(0), qi(1), qi(0)]);
        let x = RationalQuaternion::i() - RationalQuaternion::k();
        assert_eq!(realify_quaternion(&[x]), vec![qi(0), qi(1), qi(0), qi(-1)]);
    }

    #[test]
    fn right_blocks_are_integer_and_act_correctly() {
        let x = RationalQuaternion::new(qi(1), qi(2), qi(-3), q(1, 2));
        for s in [RationalQuaternion::i(), RationalQuaternion::j(), RationalQuaternion::k()] {
            let b = quaternion_right_block(&s);
            assert!(b.iter().flatten().all(|e| e.is_integer()));
            let rx = x.coeffs();
            let img: Vec<Rational> =
                (0..4).map(|r| (0..4).map(|c| &b[r][c] * &rx[c]).sum()).collect();
            assert_eq!(img, (&x * &s).coeffs().to_vec());
        }
    }
}
