//! Exact dyadic rationals `n / 2^e`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DyadicError {
    #[error("malformed number `{0}`")]
    Malformed(String),
    #[error("denominator of `{0}` is not a power of two")]
    NotDyadic(String),
    #[error("value {0} is not an integer")]
    NotInteger(String),
}

/// A rational number whose denominator is a power of two, kept in lowest terms
/// (`exp == 0` or `num` odd).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Dyadic {
    num: Num,
    exp: u32,
}

/// Numerator; `Big` only when the value does not fit in an i64, so the
/// derived equality is exact.
#[derive(Clone, PartialEq, Eq, Hash)]
enum Num {
    Small(i64),
    Big(BigInt),
}

impl Default for Num {
    fn default() -> Self {
        Num::Small(0)
    }
}

impl Num {
    fn from_big(b: BigInt) -> Num {
        match b.to_i64() {
            Some(v) => Num::Small(v),
            None => Num::Big(b),
        }
    }

    fn big(&self) -> BigInt {
        match self {
            Num::Small(v) => BigInt::from(*v),
            Num::Big(b) => b.clone(),
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, Num::Small(0))
    }

    fn is_odd(&self) -> bool {
        match self {
            Num::Small(v) => v & 1 == 1,
            Num::Big(b) => b.is_odd(),
        }
    }

    fn trailing_zeros(&self) -> u64 {
        match self {
            Num::Small(0) => 0,
            Num::Small(v) => v.trailing_zeros() as u64,
            Num::Big(b) => b.trailing_zeros().unwrap_or(0),
        }
    }
}

impl Dyadic {
    pub fn new(num: impl Into<BigInt>, exp: u32) -> Self {
        Dyadic::from_parts(Num::from_big(num.into()), exp)
    }

    fn from_parts(num: Num, exp: u32) -> Self {
        let mut d = Dyadic { num, exp };
        d.normalize();
        d
    }

    fn small(num: i64, exp: u32) -> Self {
        Dyadic::from_parts(Num::Small(num), exp)
    }

    pub fn zero() -> Self {
        Dyadic::default()
    }

    pub fn one() -> Self {
        Dyadic::from(1)
    }

    pub fn half() -> Self {
        Dyadic::small(1, 1)
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.exp = 0;
            return;
        }
        if self.exp == 0 {
            return;
        }
        let shift = self.num.trailing_zeros().min(self.exp as u64) as u32;
        if shift > 0 {
            self.num = match &self.num {
                Num::Small(v) => Num::Small(v >> shift),
                Num::Big(b) => Num::from_big(b >> shift),
            };
            self.exp -= shift;
        }
    }

    pub fn numerator(&self) -> BigInt {
        self.num.big()
    }

    /// Power of two in the denominator.
    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.exp == 0
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        (self.exp == 0).then(|| self.num.big())
    }

    pub fn to_i64(&self) -> Option<i64> {
        match (&self.num, self.exp) {
            (Num::Small(v), 0) => Some(*v),
            _ => None,
        }
    }

    pub fn is_even(&self) -> bool {
        self.exp == 0 && !self.num.is_odd()
    }

    /// Odd integer; half-integers and other fractions are not odd.
    pub fn is_odd(&self) -> bool {
        self.exp == 0 && self.num.is_odd()
    }

    /// Residue in `0..2^k` of an integer value.
    pub fn mod_pow2(&self, k: u32) -> Result<BigInt, DyadicError> {
        if self.exp != 0 {
            return Err(DyadicError::NotInteger(self.to_string()));
        }
        if let (Num::Small(v), true) = (&self.num, k < 63) {
            return Ok(BigInt::from(v.rem_euclid(1 << k)));
        }
        let m = BigInt::one() << k;
        Ok(self.num.big().mod_floor(&m))
    }

    pub fn halve(&self) -> Self {
        self.shr(1)
    }

    /// Divide by `2^k`.
    pub fn shr(&self, k: u32) -> Self {
        Dyadic::from_parts(self.num.clone(), self.exp + k)
    }

    pub fn twice(&self) -> Self {
        self.shl(1)
    }

    /// Multiply by `2^k`.
    pub fn shl(&self, k: u32) -> Self {
        if k <= self.exp {
            return Dyadic {
                num: self.num.clone(),
                exp: self.exp - k,
            };
        }
        let s = k - self.exp;
        if let Num::Small(v) = self.num {
            if s < 63 && v.unsigned_abs() < 1 << (62 - s) {
                return Dyadic::small(v << s, 0);
            }
        }
        Dyadic::new(self.num.big() << s, 0)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Dyadic::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn abs(&self) -> Self {
        let num = match &self.num {
            Num::Small(v) => match v.checked_abs() {
                Some(a) => Num::Small(a),
                None => Num::from_big(BigInt::from(*v).abs()),
            },
            Num::Big(b) => Num::from_big(b.abs()),
        };
        Dyadic { num, exp: self.exp }
    }

    /// Both numerators over the common denominator `2^e`, as i64 when possible.
    fn aligned_small(a: &Dyadic, b: &Dyadic) -> Option<(i64, i64, u32)> {
        let (Num::Small(x), Num::Small(y)) = (&a.num, &b.num) else {
            return None;
        };
        let lift = |v: i64, s: u32| -> Option<i64> {
            if s >= 63 {
                return (v == 0).then_some(0);
            }
            v.checked_mul(1 << s)
        };
        let e = a.exp.max(b.exp);
        Some((lift(*x, e - a.exp)?, lift(*y, e - b.exp)?, e))
    }

    fn aligned(a: &Dyadic, b: &Dyadic) -> (BigInt, BigInt, u32) {
        let e = a.exp.max(b.exp);
        (a.num.big() << (e - a.exp), b.num.big() << (e - b.exp), e)
    }

    fn combine(a: &Dyadic, b: &Dyadic, small: fn(i64, i64) -> Option<i64>, big: fn(BigInt, BigInt) -> BigInt) -> Dyadic {
        if let Some((x, y, e)) = Dyadic::aligned_small(a, b) {
            if let Some(r) = small(x, y) {
                return Dyadic::small(r, e);
            }
        }
        let (x, y, e) = Dyadic::aligned(a, b);
        Dyadic::new(big(x, y), e)
    }
}

impl From<i64> for Dyadic {
    fn from(v: i64) -> Self {
        Dyadic {
            num: Num::Small(v),
            exp: 0,
        }
    }
}

impl From<i32> for Dyadic {
    fn from(v: i32) -> Self {
        Dyadic::from(v as i64)
    }
}

impl From<BigInt> for Dyadic {
    fn from(v: BigInt) -> Self {
        Dyadic {
            num: Num::from_big(v),
            exp: 0,
        }
    }
}

impl<'a> Add<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::combine(self, rhs, i64::checked_add, |x, y| x + y)
    }
}

impl<'a> Sub<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::combine(self, rhs, i64::checked_sub, |x, y| x - y)
    }
}

impl<'a> Mul<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        let exp = self.exp + rhs.exp;
        if let (Num::Small(x), Num::Small(y)) = (&self.num, &rhs.num) {
            if let Some(r) = x.checked_mul(*y) {
                return Dyadic::small(r, exp);
            }
        }
        Dyadic::new(self.num.big() * rhs.num.big(), exp)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        &self - &rhs
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Dyadic) -> Dyadic {
        &self * &rhs
    }
}

impl AddAssign<&Dyadic> for Dyadic {
    fn add_assign(&mut self, rhs: &Dyadic) {
        if let (Num::Small(x), Num::Small(y), 0, 0) = (&mut self.num, &rhs.num, self.exp, rhs.exp) {
            if let Some(r) = x.checked_add(*y) {
                *x = r;
                return;
            }
        }
        *self = &*self + rhs;
    }
}

impl SubAssign<&Dyadic> for Dyadic {
    fn sub_assign(&mut self, rhs: &Dyadic) {
        if let (Num::Small(x), Num::Small(y), 0, 0) = (&mut self.num, &rhs.num, self.exp, rhs.exp) {
            if let Some(r) = x.checked_sub(*y) {
                *x = r;
                return;
            }
        }
        *self = &*self - rhs;
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        let num = match &self.num {
            Num::Small(v) => match v.checked_neg() {
                Some(n) => Num::Small(n),
                None => Num::from_big(-BigInt::from(*v)),
            },
            Num::Big(b) => Num::from_big(-b),
        };
        Dyadic { num, exp: self.exp }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        if let Some((a, b, _)) = Dyadic::aligned_small(self, other) {
            return a.cmp(&b);
        }
        let (a, b, _) = Dyadic::aligned(self, other);
        a.cmp(&b)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.num.big();
        if self.exp == 0 {
            write!(f, "{n}")
        } else {
            write!(f, "{n}/{}", BigInt::one() << self.exp)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Dyadic {
    type Err = DyadicError;

    /// Accepts `"3"`, `"-1"`, `"5/2"`, `"7/8"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let num: BigInt = n
            .parse()
            .map_err(|_| DyadicError::Malformed(s.to_string()))?;
        let den: BigInt = d
            .parse()
            .map_err(|_| DyadicError::Malformed(s.to_string()))?;
        if !den.is_positive() {
            return Err(DyadicError::Malformed(s.to_string()));
        }
        let tz = den.trailing_zeros().unwrap_or(0);
        if den != (BigInt::one() << tz) {
            return Err(DyadicError::NotDyadic(s.to_string()));
        }
        Ok(Dyadic::new(num, tz as u32))
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
