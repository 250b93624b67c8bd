//! Exact rational and Gaussian-rational scalars.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseError;

/// An exact rational number, always kept in lowest terms with a positive
/// denominator.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar(BigRational);

impl Scalar {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn int(n: i64) -> Self {
        Scalar(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigints(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Scalar(BigRational::new(num, den))
    }

    pub fn zero() -> Self {
        Scalar(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        if self.is_zero() {
            0
        } else if self.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn abs(&self) -> Self {
        Scalar(self.0.abs())
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        Scalar(self.0.recip())
    }

    pub fn pow(&self, e: i32) -> Self {
        if e >= 0 {
            let mut r = Scalar::one();
            for _ in 0..e {
                r = &r * self;
            }
            r
        } else {
            self.inv().pow(-e)
        }
    }

    /// The exact square root, if it is rational.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = exact_root(self.numer(), 2)?;
        let d = exact_root(self.denom(), 2)?;
        Some(Scalar::from_bigints(n, d))
    }

    /// The exact positive `n`-th root of a positive number, if it is rational.
    pub fn root(&self, n: u32) -> Option<Self> {
        if !self.is_positive() || n == 0 {
            return None;
        }
        let a = exact_root(self.numer(), n)?;
        let b = exact_root(self.denom(), n)?;
        Some(Scalar::from_bigints(a, b))
    }

    /// The exact real cube root, if it is rational.
    pub fn cbrt(&self) -> Option<Self> {
        let neg = self.is_negative();
        let n = exact_root(&self.numer().abs(), 3)?;
        let d = exact_root(self.denom(), 3)?;
        let r = Scalar::from_bigints(n, d);
        Some(if neg { -r } else { r })
    }

    pub fn as_bigrational(&self) -> &BigRational {
        &self.0
    }
}

fn exact_root(n: &BigInt, k: u32) -> Option<BigInt> {
    let r = n.nth_root(k);
    if r.pow(k) == *n {
        Some(r)
    } else {
        None
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<BigInt> for Scalar {
    fn from(n: BigInt) -> Self {
        Scalar(BigRational::from_integer(n))
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar(r)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Scalar {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || ParseError::Scalar(s.to_string());
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Scalar::from_bigints(n, d))
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A Gaussian rational `re + im·i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussScalar {
    pub re: Scalar,
    pub im: Scalar,
}

impl GaussScalar {
    pub fn new(re: Scalar, im: Scalar) -> Self {
        GaussScalar { re, im }
    }

    pub fn real(re: Scalar) -> Self {
        GaussScalar { re, im: Scalar::zero() }
    }

    pub fn imag(im: Scalar) -> Self {
        GaussScalar { re: Scalar::zero(), im }
    }

    /// Small-integer constructor, handy in tests and tables.
    pub fn ints(re: i64, im: i64) -> Self {
        GaussScalar::new(Scalar::int(re), Scalar::int(im))
    }

    pub fn i() -> Self {
        GaussScalar::ints(0, 1)
    }

    pub fn zero() -> Self {
        GaussScalar::ints(0, 0)
    }

    pub fn one() -> Self {
        GaussScalar::ints(1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_imaginary(&self) -> bool {
        self.re.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussScalar::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sq(&self) -> Scalar {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Self {
        let n = self.norm_sq();
        assert!(!n.is_zero(), "inverse of zero");
        GaussScalar::new(&self.re / &n, -(&self.im / &n))
    }

    /// `i^k` for any integer k.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => GaussScalar::ints(1, 0),
            1 => GaussScalar::ints(0, 1),
            2 => GaussScalar::ints(-1, 0),
            _ => GaussScalar::ints(0, -1),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        GaussScalar::new(&self.re * s, &self.im * s)
    }
}

impl PartialOrd for GaussScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GaussScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.re, &self.im).cmp(&(&other.re, &other.im))
    }
}

impl From<Scalar> for GaussScalar {
    fn from(s: Scalar) -> Self {
        GaussScalar::real(s)
    }
}

impl fmt::Display for GaussScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{} i", self.re, sign, self.im.abs())
    }
}

impl fmt::Debug for GaussScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{:?}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{:?}i", self.im)
        } else {
            write!(f, "({:?}{}{:?}i)", self.re, if self.im.is_negative() { "-" } else { "+" }, self.im.abs())
        }
    }
}

impl FromStr for GaussScalar {
    type Err = ParseError;

    /// Accepts `a+b i`, `a-b i`, `a+bi`, `b i`, `i`, `-i` and plain reals.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseError::Gauss(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(bad());
        }
        let Some(body) = t.strip_suffix('i') else {
            return Ok(GaussScalar::real(t.parse().map_err(|_| bad())?));
        };
        // split at the last sign that is not the leading one
        let split = body
            .char_indices()
            .filter(|&(k, c)| k > 0 && (c == '+' || c == '-'))
            .map(|(k, _)| k)
            .last();
        let (re, im) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => Scalar::one(),
            "-" => -Scalar::one(),
            other => other.trim_start_matches('+').parse().map_err(|_| bad())?,
        };
        let re: Scalar = re.parse().map_err(|_| bad())?;
        Ok(GaussScalar::new(re, im))
    }
}

impl Serialize for GaussScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GaussScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($t:ty, $tr:ident, $m:ident, $body:expr) => {
        impl<'a> $tr<&'a $t> for &'a $t {
            type Output = $t;
            fn $m(self, o: &'a $t) -> $t {
                let f: fn(&$t, &$t) -> $t = $body;
                f(self, o)
            }
        }
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, o: $t) -> $t {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a $t> for $t {
            type Output = $t;
            fn $m(self, o: &'a $t) -> $t {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<$t> for &'a $t {
            type Output = $t;
            fn $m(self, o: $t) -> $t {
                self.$m(&o)
            }
        }
    };
}

forward_binop!(Scalar, Add, add, |a, b| Scalar(&a.0 + &b.0));
forward_binop!(Scalar, Sub, sub, |a, b| Scalar(&a.0 - &b.0));
forward_binop!(Scalar, Mul, mul, |a, b| Scalar(&a.0 * &b.0));
forward_binop!(Scalar, Div, div, |a, b| {
    assert!(!b.is_zero(), "division by zero");
    Scalar(&a.0 / &b.0)
});

forward_binop!(GaussScalar, Add, add, |a, b| GaussScalar::new(&a.re + &b.re, &a.im + &b.im));
forward_binop!(GaussScalar, Sub, sub, |a, b| GaussScalar::new(&a.re - &b.re, &a.im - &b.im));
forward_binop!(GaussScalar, Mul, mul, |a, b| GaussScalar::new(
    &a.re * &b.re - &a.im * &b.im,
    &a.re * &b.im + &a.im * &b.re
));
forward_binop!(GaussScalar, Div, div, |a, b| a * &b.inv());

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-&self.0)
    }
}

impl Neg for GaussScalar {
    type Output = GaussScalar;
    fn neg(self) -> GaussScalar {
        GaussScalar::new(-self.re, -self.im)
    }
}

impl Neg for &GaussScalar {
    type Output = GaussScalar;
    fn neg(self) -> GaussScalar {
        GaussScalar::new(-&self.re, -&self.im)
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        self.0 += &o.0;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        self.0 -= &o.0;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        self.0 *= &o.0;
    }
}

impl AddAssign<&GaussScalar> for GaussScalar {
    fn add_assign(&mut self, o: &GaussScalar) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&GaussScalar> for GaussScalar {
    fn sub_assign(&mut self, o: &GaussScalar) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

/// The arithmetic the matrix routines need. Implemented for [`Scalar`] and
/// [`GaussScalar`].
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn conj(&self) -> Self;
    fn inv(&self) -> Self;
    fn from_scalar(s: Scalar) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
}

impl Field for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn inv(&self) -> Self {
        Scalar::inv(self)
    }
    fn from_scalar(s: Scalar) -> Self {
        s
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
}

impl Field for GaussScalar {
    fn zero() -> Self {
        GaussScalar::zero()
    }
    fn one() -> Self {
        GaussScalar::one()
    }
    fn is_zero(&self) -> bool {
        GaussScalar::is_zero(self)
    }
    fn conj(&self) -> Self {
        GaussScalar::conj(self)
    }
    fn inv(&self) -> Self {
        GaussScalar::inv(self)
    }
    fn from_scalar(s: Scalar) -> Self {
        GaussScalar::real(s)
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
}

/// Shorthand for `Scalar::new(n, d)`.
pub fn q(n: i64, d: i64) -> Scalar {
    Scalar::new(n, d)
}

/// Shorthand for an integer scalar.
pub fn qi(n: i64) -> Scalar {
    Scalar::int(n)
}
