//! Exact arithmetic on dyadic rationals and rationals with odd denominator.
//!
//! Every value handled here has the form `p / (2^e * b)` with `b` odd. The
//! general type [`Exact`] stores that decomposition directly, so membership in
//! a dyadic lattice `2^-(J+1) Z` is a pair of integer comparisons.
//! [`Dyadic`] (`b = 1`) and [`OddRational`] (`e = 0`) are the two special
//! cases that appear in inputs: grid points and sampling constants.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational `num / (2^exp * odd)` in canonical form.
///
/// Canonical means `odd > 0` is odd, `gcd(num, 2^exp * odd) = 1`, and zero is
/// stored as `0 / (2^0 * 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Exact {
    num: BigInt,
    exp: u32,
    odd: BigInt,
}

fn split_two_power(den: BigInt) -> (u32, BigInt) {
    match den.trailing_zeros() {
        Some(tz) if tz > 0 => (tz as u32, den >> tz),
        _ => (0, den),
    }
}

impl Exact {
    /// Builds `num / den`, reducing to canonical form.
    pub fn from_fraction(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(mut num: BigInt, mut den: BigInt) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        let g = num.gcd(&den);
        if !g.is_one() {
            num /= &g;
            den /= &g;
        }
        let (exp, odd) = split_two_power(den);
        Exact { num, exp, odd }
    }

    pub fn zero() -> Self {
        Exact {
            num: BigInt::zero(),
            exp: 0,
            odd: BigInt::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Exact {
            num: BigInt::from(n),
            exp: 0,
            odd: BigInt::one(),
        }
    }

    /// `num / den` for machine integers.
    pub fn ratio(num: i64, den: i64) -> Result<Self> {
        Self::from_fraction(BigInt::from(num), BigInt::from(den))
    }

    /// `num / 2^exp`.
    pub fn dyadic(num: i64, exp: u32) -> Self {
        Self::reduce(BigInt::from(num), BigInt::one() << exp)
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    /// The full denominator `2^exp * odd`.
    pub fn denominator(&self) -> BigInt {
        &self.odd << self.exp
    }

    /// Exponent of the power of two in the denominator.
    pub fn two_exponent(&self) -> u32 {
        self.exp
    }

    /// Odd part of the denominator.
    pub fn odd_part(&self) -> &BigInt {
        &self.odd
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.num.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.exp == 0 && self.odd.is_one()
    }

    pub fn is_dyadic(&self) -> bool {
        self.odd.is_one()
    }

    pub fn abs(&self) -> Self {
        Exact {
            num: self.num.abs(),
            exp: self.exp,
            odd: self.odd.clone(),
        }
    }

    /// Multiplies by `2^k` for any integer `k`.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        if k >= 0 {
            Self::reduce(&self.num << (k as u64), self.denominator())
        } else {
            Self::reduce(self.num.clone(), self.denominator() << ((-k) as u64))
        }
    }

    /// Exact division; fails on a zero divisor.
    pub fn checked_div(&self, rhs: &Exact) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::reduce(
            &self.num * rhs.denominator(),
            self.denominator() * &rhs.num,
        ))
    }

    /// Largest integer not above the value.
    pub fn floor(&self) -> BigInt {
        self.num.div_floor(&self.denominator())
    }

    /// Smallest integer not below the value.
    pub fn ceil(&self) -> BigInt {
        -((-&self.num).div_floor(&self.denominator()))
    }

    /// Nearest `f64`.
    pub fn to_f64(&self) -> f64 {
        let den = self.denominator();
        match (self.num.to_f64(), den.to_f64()) {
            (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
            _ => {
                let shift = self.num.bits().max(den.bits()).saturating_sub(1000);
                let n = (&self.num >> shift).to_f64().unwrap_or(0.0);
                let d = (den >> shift).to_f64().unwrap_or(1.0);
                n / d
            }
        }
    }
}

impl Default for Exact {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for Exact {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigInt> for Exact {
    fn from(n: BigInt) -> Self {
        Exact {
            num: n,
            exp: 0,
            odd: BigInt::one(),
        }
    }
}

impl<'a> Add<&'a Exact> for &'a Exact {
    type Output = Exact;
    fn add(self, rhs: &Exact) -> Exact {
        if self.exp == rhs.exp && self.odd == rhs.odd {
            return Exact::reduce(&self.num + &rhs.num, self.denominator());
        }
        let (da, db) = (self.denominator(), rhs.denominator());
        Exact::reduce(&self.num * &db + &rhs.num * &da, da * db)
    }
}

impl<'a> Sub<&'a Exact> for &'a Exact {
    type Output = Exact;
    fn sub(self, rhs: &Exact) -> Exact {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Exact> for &'a Exact {
    type Output = Exact;
    fn mul(self, rhs: &Exact) -> Exact {
        Exact::reduce(&self.num * &rhs.num, self.denominator() * rhs.denominator())
    }
}

impl Neg for &Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        Exact {
            num: -&self.num,
            exp: self.exp,
            odd: self.odd.clone(),
        }
    }
}

impl Neg for Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        -&self
    }
}

macro_rules! owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Exact> for Exact {
            type Output = Exact;
            fn $method(self, rhs: Exact) -> Exact {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Exact> for Exact {
            type Output = Exact;
            fn $method(self, rhs: &'a Exact) -> Exact {
                (&self).$method(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl PartialOrd for Exact {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Exact {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.num * other.denominator()).cmp(&(&other.num * self.denominator()))
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.denominator())
    }
}

impl FromStr for Exact {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse(s.to_string());
        let t = s.trim();
        match t.split_once('/') {
            Some((p, q)) => {
                let p: BigInt = p.trim().parse().map_err(|_| err())?;
                let q: BigInt = q.trim().parse().map_err(|_| err())?;
                Exact::from_fraction(p, q)
            }
            None => t.parse::<BigInt>().map(Exact::from).map_err(|_| err()),
        }
    }
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A dyadic rational `num / 2^exp`, canonical (`exp = 0` or `num` odd).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dyadic(Exact);

impl Dyadic {
    pub fn new(num: i64, exp: u32) -> Self {
        Dyadic(Exact::dyadic(num, exp))
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic(Exact::from_int(n))
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numerator()
    }

    pub fn exponent(&self) -> u32 {
        self.0.two_exponent()
    }

    pub fn as_exact(&self) -> &Exact {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        Dyadic(self.0.mul_pow2(k))
    }

    /// `floor(self * 2^level)`.
    pub fn floor_at(&self, level: u32) -> BigInt {
        self.0.mul_pow2(level as i64).floor()
    }
}

impl TryFrom<Exact> for Dyadic {
    type Error = Error;
    fn try_from(x: Exact) -> Result<Self> {
        if x.is_dyadic() {
            Ok(Dyadic(x))
        } else {
            Err(Error::InvalidArgument(format!("{x} is not dyadic")))
        }
    }
}

impl From<Dyadic> for Exact {
    fn from(d: Dyadic) -> Self {
        d.0
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        Dyadic(&self.0 + &rhs.0)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        Dyadic(&self.0 - &rhs.0)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic(&self.0 * &rhs.0)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic(-&self.0)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for Dyadic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Dyadic::try_from(s.parse::<Exact>()?)
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let x = Exact::deserialize(d)?;
        Dyadic::try_from(x).map_err(serde::de::Error::custom)
    }
}

/// A reduced rational `a / b` with `b` positive and odd.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OddRational(Exact);

impl OddRational {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        Self::try_from(Exact::ratio(a, b)?)
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numerator()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.odd_part()
    }

    pub fn as_exact(&self) -> &Exact {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
}

impl TryFrom<Exact> for OddRational {
    type Error = Error;
    fn try_from(x: Exact) -> Result<Self> {
        if x.two_exponent() == 0 {
            Ok(OddRational(x))
        } else {
            Err(Error::EvenDenominator(x.to_string()))
        }
    }
}

impl From<OddRational> for Exact {
    fn from(r: OddRational) -> Self {
        r.0
    }
}

impl fmt::Display for OddRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for OddRational {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        OddRational::try_from(s.parse::<Exact>()?)
    }
}

impl Serialize for OddRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for OddRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let x = Exact::deserialize(d)?;
        OddRational::try_from(x).map_err(serde::de::Error::custom)
    }
}

/// Whether `x` lies on the lattice `2^-(j+1) Z`.
///
/// ```
/// use shearcert::dyadic::{in_lattice, Exact};
/// assert!(in_lattice(&Exact::ratio(3, 8).unwrap(), 2));
/// assert!(!in_lattice(&Exact::ratio(1, 3).unwrap(), 5));
/// ```
pub fn in_lattice(x: &Exact, j: u32) -> bool {
    x.odd_part().is_one() && x.two_exponent() <= j + 1
}

/// First pair `(i, k)`, `i < k`, whose difference lies on `2^-(j+1) Z`.
pub fn lattice_collision(t: &[Exact], j: u32) -> Option<(usize, usize)> {
    for i in 0..t.len() {
        for k in i + 1..t.len() {
            if in_lattice(&(&t[i] - &t[k]), j) {
                return Some((i, k));
            }
        }
    }
    None
}

/// True iff no two entries of `t` differ by an element of `2^-(j+1) Z`.
pub fn pairwise_lattice_distinct(t: &[Exact], j: u32) -> bool {
    lattice_collision(t, j).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Exact {
        Exact::ratio(a, b).unwrap()
    }

    #[test]
    fn canonical_parts() {
        let x = q(6, 24);
        assert_eq!(x.numerator(), &BigInt::from(1));
        assert_eq!(x.two_exponent(), 2);
        assert!(x.odd_part().is_one());
        let y = q(-10, 12);
        assert_eq!(y.to_string(), "-5/6");
        assert_eq!(y.two_exponent(), 1);
        assert_eq!(y.odd_part(), &BigInt::from(3));
        assert_eq!(q(0, -7), Exact::zero());
    }

    #[test]
    fn lattice_examples() {
        assert!(in_lattice(&q(3, 8), 2));
        assert!(!in_lattice(&q(1, 3), 5));
        assert!(!in_lattice(&q(5, 4), 0));
        assert!(in_lattice(&q(5, 4), 1));
    }

    #[test]
    fn distinctness_examples() {
        assert!(pairwise_lattice_distinct(&[q(0, 1), q(1, 3), q(2, 3)], 3));
        assert!(!pairwise_lattice_distinct(&[q(0, 1), q(1, 4)], 1));
        let t = [Exact::zero(), &q(1, 2) + &q(1, 3)];
        assert!(pairwise_lattice_distinct(&t, 0));
    }

    #[test]
    fn floor_ceil() {
        assert_eq!(q(-7, 3).floor(), BigInt::from(-3));
        assert_eq!(q(-7, 3).ceil(), BigInt::from(-2));
        assert_eq!(q(8, 4).floor(), BigInt::from(2));
        assert_eq!(q(8, 4).ceil(), BigInt::from(2));
    }

    #[test]
    fn string_round_trip() {
        for s in ["1/3", "-5/12", "7/1", "0/1"] {
            let x: Exact = s.parse().unwrap();
            assert_eq!(x.to_string(), s);
        }
        assert_eq!("4".parse::<Exact>().unwrap(), Exact::from_int(4));
        assert!("1/0".parse::<Exact>().is_err());
        assert!("x".parse::<Exact>().is_err());
        assert!("1/2".parse::<OddRational>().is_err());
        assert!("3/9".parse::<OddRational>().is_ok());
        assert!("1/3".parse::<Dyadic>().is_err());
    }

    #[test]
    fn mul_pow2_and_div() {
        assert_eq!(q(3, 5).mul_pow2(3), q(24, 5));
        assert_eq!(q(3, 5).mul_pow2(-2), q(3, 20));
        assert_eq!(q(1, 3).checked_div(&q(2, 9)).unwrap(), q(3, 2));
        assert!(q(1, 3).checked_div(&Exact::zero()).is_err());
    }
}
