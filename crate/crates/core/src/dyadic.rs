//! Exact dyadic rationals and points of the circle `R/Z`.
//!
//! A [`Dyadic`] is `num / 2^exp` kept in lowest terms (`exp == 0` or `num`
//! odd), so structural equality is numeric equality. Numerators are
//! arbitrary precision: repeated composition of PL maps deepens exponents
//! without bound.
//!
//! A [`CirclePoint`] is the representative in `[0, 1)` of a coset `x + Z`.
//! Arcs are always read counterclockwise, i.e. in the direction of
//! increasing representatives.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigInt,
    exp: u32,
}

impl Dyadic {
    pub fn new(num: impl Into<BigInt>, exp: u32) -> Self {
        let mut d = Dyadic { num: num.into(), exp };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic { num: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { num: BigInt::one(), exp: 0 }
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic { num: BigInt::from(n), exp: 0 }
    }

    /// `num / den`; fails unless `den` is a positive power of two.
    pub fn frac(num: i64, den: u64) -> Result<Self> {
        if den == 0 || !den.is_power_of_two() {
            return Err(Error::parse(0, format!("denominator {den} is not a power of two")));
        }
        Ok(Dyadic::new(num, den.trailing_zeros()))
    }

    /// Panicking shorthand for literals in code and tests.
    pub fn q(num: i64, den: u64) -> Self {
        Dyadic::frac(num, den).expect("dyadic literal")
    }

    /// `2^k` for any integer `k`.
    pub fn pow2(k: i64) -> Self {
        if k >= 0 {
            Dyadic { num: BigInt::one() << (k as u64), exp: 0 }
        } else {
            Dyadic { num: BigInt::one(), exp: (-k) as u32 }
        }
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.exp = 0;
            return;
        }
        if self.exp == 0 {
            return;
        }
        let tz = self.num.trailing_zeros().unwrap_or(0);
        let shift = tz.min(self.exp as u64);
        if shift > 0 {
            self.num >>= shift;
            self.exp -= shift as u32;
        }
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    /// Exponent of the denominator.
    pub fn exp(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.num.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.exp == 0
    }

    pub fn floor(&self) -> BigInt {
        if self.exp == 0 {
            self.num.clone()
        } else {
            self.num.div_floor(&(BigInt::one() << self.exp))
        }
    }

    /// Fractional part, in `[0, 1)`.
    pub fn fract(&self) -> Dyadic {
        if self.exp == 0 {
            return Dyadic::zero();
        }
        let m = BigInt::one() << self.exp;
        Dyadic { num: self.num.mod_floor(&m), exp: self.exp }
    }

    /// `self * 2^k`.
    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        if k >= 0 {
            let k = k as u32;
            if k <= self.exp {
                Dyadic { num: self.num.clone(), exp: self.exp - k }
            } else {
                Dyadic { num: &self.num << (k - self.exp), exp: 0 }
            }
        } else {
            Dyadic::new(self.num.clone(), self.exp + (-k) as u32)
        }
    }

    pub fn half(&self) -> Dyadic {
        self.mul_pow2(-1)
    }

    /// Writes a nonzero value as `odd * 2^v`, returning `(odd, v)`.
    pub fn odd_part(&self) -> (BigInt, i64) {
        assert!(!self.is_zero(), "odd part of zero");
        let tz = self.num.trailing_zeros().unwrap_or(0);
        (&self.num >> tz, tz as i64 - self.exp as i64)
    }

    /// `floor(log2(self))` for a positive value.
    pub fn floor_log2(&self) -> i64 {
        assert!(self.is_positive(), "log of non-positive dyadic");
        self.num.bits() as i64 - 1 - self.exp as i64
    }

    /// If `self / other` is an integral power of two, its exponent.
    pub fn log2_ratio(&self, other: &Dyadic) -> Option<i64> {
        if self.is_zero() || other.is_zero() || self.is_negative() != other.is_negative() {
            return None;
        }
        let (a, va) = self.odd_part();
        let (b, vb) = other.odd_part();
        (a == b).then_some(va - vb)
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { num: self.num.abs(), exp: self.exp }
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.num.clone(), BigInt::one() << self.exp)
    }

    /// The dyadic equal to `r`, if its reduced denominator is a power of two.
    pub fn from_rational(r: &BigRational) -> Option<Dyadic> {
        let den = r.denom();
        let tz = den.trailing_zeros().unwrap_or(0);
        if (den >> tz).is_one() {
            Some(Dyadic::new(r.numer().clone(), tz as u32))
        } else {
            None
        }
    }

    /// Rendering as `num/2^exp`.
    pub fn to_pow2_string(&self) -> String {
        if self.exp == 0 {
            self.num.to_string()
        } else {
            format!("{}/2^{}", self.num, self.exp)
        }
    }

    /// The dyadic with the smallest denominator in the open interval `(lo, hi)`,
    /// choosing the smallest numerator on ties.
    pub fn simplest_between(lo: &BigRational, hi: &BigRational) -> Option<Dyadic> {
        if lo >= hi {
            return None;
        }
        let mut e = 0u32;
        loop {
            let scale = BigRational::from_integer(BigInt::one() << e);
            let k: BigInt = (lo * &scale).floor().to_integer() + 1;
            let cand = BigRational::new(k.clone(), BigInt::one() << e);
            if &cand < hi {
                return Some(Dyadic::new(k, e));
            }
            e += 1;
        }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.exp.cmp(&other.exp) {
            Ordering::Equal => self.num.cmp(&other.num),
            Ordering::Less => (&self.num << (other.exp - self.exp)).cmp(&other.num),
            Ordering::Greater => self.num.cmp(&(&other.num << (self.exp - other.exp))),
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        match self.exp.cmp(&rhs.exp) {
            Ordering::Equal => Dyadic::new(&self.num + &rhs.num, self.exp),
            Ordering::Less => Dyadic::new((&self.num << (rhs.exp - self.exp)) + &rhs.num, rhs.exp),
            Ordering::Greater => Dyadic::new(&self.num + (&rhs.num << (self.exp - rhs.exp)), self.exp),
        }
    }
}

impl<'a> Sub<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.num * &rhs.num, self.exp + rhs.exp)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { num: -&self.num, exp: self.exp }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { num: -self.num, exp: self.exp }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: Dyadic) -> Dyadic {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: &Dyadic) -> Dyadic {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Dyadic> for &'a Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: Dyadic) -> Dyadic {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&Dyadic> for Dyadic {
    fn add_assign(&mut self, rhs: &Dyadic) {
        *self = &*self + rhs;
    }
}

impl From<i64> for Dyadic {
    fn from(n: i64) -> Self {
        Dyadic::from_int(n)
    }
}

impl From<BigInt> for Dyadic {
    fn from(n: BigInt) -> Self {
        Dyadic { num: n, exp: 0 }
    }
}

/// Fraction form `a/b`, or the integer alone.
impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, BigInt::one() << self.exp)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `n`, `a/b` with `b` a power of two, and `a/2^e`.
impl FromStr for Dyadic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let parse_int = |part: &str, at: usize| -> Result<BigInt> {
            part.trim().parse::<BigInt>().map_err(|_| Error::parse(at, format!("expected an integer, found {part:?}")))
        };
        match t.split_once('/') {
            None => Ok(Dyadic::from(parse_int(t, 0)?)),
            Some((n, d)) => {
                let num = parse_int(n, 0)?;
                let at = n.len() + 1;
                let d = d.trim();
                if let Some(e) = d.strip_prefix("2^") {
                    let e: u32 = e.trim().parse().map_err(|_| Error::parse(at, format!("bad exponent in {d:?}")))?;
                    Ok(Dyadic::new(num, e))
                } else {
                    let den = parse_int(d, at)?;
                    let tz = den.trailing_zeros().unwrap_or(0);
                    if !den.is_positive() || !(&den >> tz).is_one() {
                        return Err(Error::parse(at, format!("denominator {den} is not a power of two")));
                    }
                    Ok(Dyadic::new(num, tz as u32))
                }
            }
        }
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A point of `S^1 = R/Z`, stored as its representative in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CirclePoint(Dyadic);

impl CirclePoint {
    pub fn new(x: &Dyadic) -> Self {
        CirclePoint(x.fract())
    }

    pub fn zero() -> Self {
        CirclePoint(Dyadic::zero())
    }

    pub fn pos(&self) -> &Dyadic {
        &self.0
    }

    pub fn into_inner(self) -> Dyadic {
        self.0
    }

    /// Counterclockwise distance from `self` to `other`, in `[0, 1)`.
    pub fn ccw_dist(&self, other: &CirclePoint) -> Dyadic {
        (&other.0 - &self.0).fract()
    }

    pub fn shift(&self, by: &Dyadic) -> CirclePoint {
        CirclePoint::new(&(&self.0 + by))
    }
}

impl From<Dyadic> for CirclePoint {
    fn from(d: Dyadic) -> Self {
        CirclePoint::new(&d)
    }
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// True iff walking counterclockwise from `a`, `b` is met strictly before `c`.
pub fn circ_between(a: &CirclePoint, b: &CirclePoint, c: &CirclePoint) -> Result<bool> {
    if a == c {
        return Err(Error::DegenerateArc(format!("arc endpoints coincide at {a}")));
    }
    let ab = a.ccw_dist(b);
    Ok(ab.is_positive() && ab < a.ccw_dist(c))
}

/// The point a fraction `t` of the way along the counterclockwise arc from `a` to `b`.
pub fn circ_interp(a: &CirclePoint, b: &CirclePoint, t: &Dyadic) -> Result<CirclePoint> {
    if a == b {
        return Err(Error::DegenerateArc(format!("arc endpoints coincide at {a}")));
    }
    if t.is_negative() || *t > Dyadic::one() {
        return Err(Error::precondition(format!("interpolation parameter {t} outside [0, 1]")));
    }
    Ok(a.shift(&(t * &a.ccw_dist(b))))
}

/// True iff the points are pairwise distinct and occur in this cyclic order
/// counterclockwise around the circle.
pub fn in_cyclic_order(points: &[CirclePoint]) -> bool {
    let n = points.len();
    if n < 2 {
        return true;
    }
    let mut total = Dyadic::zero();
    for i in 0..n {
        let d = points[i].ccw_dist(&points[(i + 1) % n]);
        if d.is_zero() {
            return false;
        }
        total += &d;
    }
    total == Dyadic::one()
}
