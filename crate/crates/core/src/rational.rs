//! Exact rational scalars.
//!
//! Almost every coefficient that shows up in the free-field computations is a
//! small fraction, so values are kept as reduced `i64` pairs and only promoted
//! to arbitrary precision when an operation would overflow.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug)]
pub enum Q {
    /// Reduced, denominator positive, numerator never `i64::MIN`.
    Small(i64, i64),
    Big(BigRational),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseQError(pub String);

impl Q {
    pub const ZERO: Q = Q::Small(0, 1);
    pub const ONE: Q = Q::Small(1, 1);

    pub fn int(n: i64) -> Q {
        Q::from_i128(n as i128, 1)
    }

    pub fn new(num: i64, den: i64) -> Q {
        assert!(den != 0, "zero denominator");
        Q::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Q {
        debug_assert!(den != 0);
        let g = num.gcd(&den);
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        if n > i64::MIN as i128 && n <= i64::MAX as i128 && d <= i64::MAX as i128 {
            Q::Small(n as i64, d as i64)
        } else {
            Q::Big(BigRational::new(BigInt::from(n), BigInt::from(d)))
        }
    }

    fn from_big(r: BigRational) -> Q {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN => Q::Small(n, d),
            _ => Q::Big(r),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Q::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Q::Big(r) => r.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Q::Small(n, _) => *n == 0,
            Q::Big(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Q::Small(1, 1))
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Q::Small(_, d) => *d == 1,
            Q::Big(r) => r.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Q::Small(n, _) => *n < 0,
            Q::Big(r) => r.is_negative(),
        }
    }

    /// The value as an `i64` when it is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Q::Small(n, 1) => Some(*n),
            _ => None,
        }
    }

    pub fn recip(&self) -> Q {
        assert!(!self.is_zero(), "reciprocal of zero");
        match self {
            Q::Small(n, d) => Q::from_i128(*d as i128, *n as i128),
            Q::Big(r) => Q::from_big(r.recip()),
        }
    }

    pub fn abs(&self) -> Q {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// `(-1)^k` as a rational.
    pub fn sign(odd: bool) -> Q {
        if odd {
            Q::int(-1)
        } else {
            Q::ONE
        }
    }

    /// Generalized binomial coefficient C(n, k) for any integer `n` and `k ≥ 0`.
    pub fn binomial(n: i64, k: i64) -> Q {
        if k < 0 {
            return Q::ZERO;
        }
        let mut acc = Q::ONE;
        for i in 0..k {
            acc = acc * Q::int(n - i) / Q::int(i + 1);
        }
        acc
    }

    pub fn factorial(k: u32) -> Q {
        (1..=k as i64).fold(Q::ONE, |acc, i| acc * Q::int(i))
    }
}

impl Default for Q {
    fn default() -> Self {
        Q::ZERO
    }
}

impl From<i64> for Q {
    fn from(n: i64) -> Self {
        Q::int(n)
    }
}

impl From<i32> for Q {
    fn from(n: i32) -> Self {
        Q::int(n as i64)
    }
}

impl PartialEq for Q {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Q::Small(a, b), Q::Small(c, d)) => a == c && b == d,
            // Values are normalized, so a big value never equals a small one.
            (Q::Big(a), Q::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Q {}

impl Hash for Q {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Q::Small(n, d) => {
                0u8.hash(state);
                n.hash(state);
                d.hash(state);
            }
            Q::Big(r) => {
                1u8.hash(state);
                r.hash(state);
            }
        }
    }
}

impl PartialOrd for Q {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Q {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Q::Small(a, b), Q::Small(c, d)) => ((*a as i128) * (*d as i128)).cmp(&((*c as i128) * (*b as i128))),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Q::Small(n, 1) => write!(f, "{n}"),
            Q::Small(n, d) => write!(f, "{n}/{d}"),
            Q::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Q::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl FromStr for Q {
    type Err = ParseQError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseQError(s.to_string());
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| err())?;
        let d: BigInt = d.parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        Ok(Q::from_big(BigRational::new(n, d)))
    }
}

impl serde::Serialize for Q {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Q {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
        }
        match Raw::deserialize(d)? {
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::Int(n) => Ok(Q::int(n)),
        }
    }
}

fn add_q(a: &Q, b: &Q) -> Q {
    if let (Q::Small(n1, d1), Q::Small(n2, d2)) = (a, b) {
        if *d1 == 1 && *d2 == 1 {
            return Q::from_i128(*n1 as i128 + *n2 as i128, 1);
        }
        let num = (*n1 as i128) * (*d2 as i128) + (*n2 as i128) * (*d1 as i128);
        return Q::from_i128(num, (*d1 as i128) * (*d2 as i128));
    }
    Q::from_big(a.to_big() + b.to_big())
}

fn mul_q(a: &Q, b: &Q) -> Q {
    if let (Q::Small(n1, d1), Q::Small(n2, d2)) = (a, b) {
        return Q::from_i128((*n1 as i128) * (*n2 as i128), (*d1 as i128) * (*d2 as i128));
    }
    Q::from_big(a.to_big() * b.to_big())
}

fn neg_q(a: &Q) -> Q {
    match a {
        Q::Small(n, d) => Q::Small(-n, *d),
        Q::Big(r) => Q::from_big(-r.clone()),
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:expr) => {
        impl $tr<&Q> for &Q {
            type Output = Q;
            fn $m(self, rhs: &Q) -> Q {
                $f(self, rhs)
            }
        }
        impl $tr<Q> for Q {
            type Output = Q;
            fn $m(self, rhs: Q) -> Q {
                $f(&self, &rhs)
            }
        }
        impl $tr<&Q> for Q {
            type Output = Q;
            fn $m(self, rhs: &Q) -> Q {
                $f(&self, rhs)
            }
        }
        impl $tr<Q> for &Q {
            type Output = Q;
            fn $m(self, rhs: Q) -> Q {
                $f(self, &rhs)
            }
        }
    };
}

binop!(Add, add, add_q);
binop!(Sub, sub, |a: &Q, b: &Q| add_q(a, &neg_q(b)));
binop!(Mul, mul, mul_q);
binop!(Div, div, |a: &Q, b: &Q| mul_q(a, &b.recip()));

impl Neg for Q {
    type Output = Q;
    fn neg(self) -> Q {
        neg_q(&self)
    }
}

impl Neg for &Q {
    type Output = Q;
    fn neg(self) -> Q {
        neg_q(self)
    }
}

impl AddAssign<&Q> for Q {
    fn add_assign(&mut self, rhs: &Q) {
        *self = add_q(self, rhs);
    }
}

impl AddAssign<Q> for Q {
    fn add_assign(&mut self, rhs: Q) {
        *self = add_q(self, &rhs);
    }
}

impl SubAssign<&Q> for Q {
    fn sub_assign(&mut self, rhs: &Q) {
        *self = add_q(self, &neg_q(rhs));
    }
}

impl SubAssign<Q> for Q {
    fn sub_assign(&mut self, rhs: Q) {
        *self = add_q(self, &neg_q(&rhs));
    }
}

impl MulAssign<&Q> for Q {
    fn mul_assign(&mut self, rhs: &Q) {
        *self = mul_q(self, rhs);
    }
}

impl Sum for Q {
    fn sum<I: Iterator<Item = Q>>(iter: I) -> Q {
        iter.fold(Q::ZERO, |a, b| a + b)
    }
}

impl Zero for Q {
    fn zero() -> Self {
        Q::ZERO
    }
    fn is_zero(&self) -> bool {
        Q::is_zero(self)
    }
}

impl One for Q {
    fn one() -> Self {
        Q::ONE
    }
}

/// Shorthand for literals in code and tests: `q(1, 2)` is one half.
pub fn q(num: i64, den: i64) -> Q {
    Q::new(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_reduces() {
        assert_eq!(q(1, 2) + q(1, 3), q(5, 6));
        assert_eq!(q(2, 4), q(1, 2));
        assert_eq!(q(1, -2), q(-1, 2));
        assert_eq!(q(3, 4) * q(4, 3), Q::ONE);
        assert_eq!(q(1, 2) - q(1, 2), Q::ZERO);
        assert_eq!(q(7, 3) / q(7, 6), Q::int(2));
    }

    #[test]
    fn promotes_on_overflow_and_demotes_back() {
        let big = Q::int(i64::MAX) * Q::int(4);
        assert!(matches!(big, Q::Big(_)));
        let back = big / Q::int(4);
        assert_eq!(back, Q::int(i64::MAX));
        assert!(matches!(back, Q::Small(..)));
        let m = Q::int(i64::MIN + 1) - Q::int(1);
        assert!(matches!(m, Q::Big(_)));
        assert_eq!(m + Q::int(1), Q::int(i64::MIN + 1));
    }

    #[test]
    fn parse_and_print() {
        assert_eq!("3/6".parse::<Q>().unwrap(), q(1, 2));
        assert_eq!("-4".parse::<Q>().unwrap(), Q::int(-4));
        assert!("1/0".parse::<Q>().is_err());
        assert!("x".parse::<Q>().is_err());
        assert_eq!(q(-1, 2).to_string(), "-1/2");
        assert_eq!(Q::int(5).to_string(), "5");
        let huge: Q = "123456789012345678901234567890/11".parse().unwrap();
        assert_eq!(huge.to_string(), "123456789012345678901234567890/11");
    }

    #[test]
    fn binomials() {
        assert_eq!(Q::binomial(5, 2), Q::int(10));
        assert_eq!(Q::binomial(2, 3), Q::ZERO);
        assert_eq!(Q::binomial(-1, 3), Q::int(-1));
        assert_eq!(Q::binomial(-3, 2), Q::int(6));
        assert_eq!(Q::factorial(4), Q::int(24));
    }

    #[test]
    fn ordering_matches_value() {
        assert!(q(1, 3) < q(1, 2));
        assert!(q(-1, 2) < Q::ZERO);
        assert!(Q::int(i64::MAX) * Q::int(2) > Q::int(i64::MAX));
    }
}
