//! Numeric scalars: exact rationals and binary floats behind one trait, plus
//! the extended reals used by inefficiency values.

use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Exact-mode scalar.
pub type Exact = BigRational;

/// Arithmetic mode of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Float,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(Error::Parse(format!("unknown mode `{other}`"))),
        }
    }
}

/// A field element usable as a utility, probability or LP coefficient.
///
/// `Exact` is authoritative: every comparison is exact and [`Scalar::tolerance`]
/// is zero. `f64` compares with an absolute slack of `1e-9`.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(v: i64) -> Self;
    /// `num / den`; panics when `den == 0`.
    fn from_ratio(num: i64, den: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;

    /// Absolute slack used by [`Scalar::is_zero`] and friends.
    fn tolerance() -> Self;

    /// Parses a decimal (`0.9`, `-1.5e-3`) or fraction (`9/10`) literal.
    /// Float mode rejects fractions unless `coerce` is set.
    fn parse_literal(s: &str, coerce: bool) -> Result<Self, Error>;

    fn is_zero(&self) -> bool {
        self.abs() <= Self::tolerance()
    }

    fn is_positive(&self) -> bool {
        *self > Self::tolerance()
    }

    fn is_negative(&self) -> bool {
        *self < -Self::tolerance()
    }

    fn approx_eq(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).is_zero()
    }

    /// `self <= other` up to tolerance.
    fn le_tol(&self, other: &Self) -> bool {
        !(self.clone() - other.clone()).is_positive()
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }
}

impl Scalar for BigRational {
    const MODE: Mode = Mode::Exact;

    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn tolerance() -> Self {
        Zero::zero()
    }

    fn parse_literal(s: &str, _coerce: bool) -> Result<Self, Error> {
        parse_rational(s)
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }

    fn le_tol(&self, other: &Self) -> bool {
        self <= other
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn tolerance() -> Self {
        1e-9
    }

    fn parse_literal(s: &str, coerce: bool) -> Result<Self, Error> {
        let s = s.trim();
        if s.contains('/') {
            if !coerce {
                return Err(Error::Parse(format!(
                    "fraction `{s}` in float mode (pass --coerce to accept the rounding)"
                )));
            }
            return parse_rational(s).map(|q| Scalar::to_f64(&q));
        }
        s.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::Parse(format!("invalid number `{s}`")))
    }
}

/// Parses `p/q`, an integer, or a decimal with optional exponent, exactly.
pub fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid number `{s}`"));
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return Err(bad());
    }
    let joined = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(joined.parse::<BigInt>().map_err(|_| bad())?);
    let scale = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    let power = num_traits::pow(ten, scale.unsigned_abs() as usize);
    if scale >= 0 {
        value *= power;
    } else {
        value /= power;
    }
    Ok(if negative { -value } else { value })
}

/// A scalar extended with `+inf` and `-inf`.
///
/// Conventions: `0 * inf = 0`, `a * inf = inf` for `a > 0`, and a sum that
/// combines `+inf` with `-inf` is a program error (panics).
///
/// The derived order is the usual order on the extended reals.
#[derive(Debug, Clone, PartialEq, PartialOrd)]
pub enum Extended<S> {
    NegInf,
    Finite(S),
    PosInf,
}

impl<S: Scalar> Extended<S> {
    pub fn zero() -> Self {
        Extended::Finite(S::zero())
    }

    pub fn finite(&self) -> Option<&S> {
        match self {
            Extended::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn is_pos_inf(&self) -> bool {
        matches!(self, Extended::PosInf)
    }

    /// `num / den` with `0/0 = 0`, `neg/0 = -inf`, `pos/0 = +inf`.
    pub fn ratio(num: S, den: S) -> Self {
        if den.is_zero() {
            if num.is_zero() {
                Extended::zero()
            } else if num.is_negative() {
                Extended::NegInf
            } else {
                Extended::PosInf
            }
        } else {
            Extended::Finite(num / den)
        }
    }

    /// Sum; `None` for `+inf + -inf`.
    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        use Extended::*;
        match (self, other) {
            (PosInf, NegInf) | (NegInf, PosInf) => None,
            (PosInf, _) | (_, PosInf) => Some(PosInf),
            (NegInf, _) | (_, NegInf) => Some(NegInf),
            (Finite(a), Finite(b)) => Some(Finite(a.clone() + b.clone())),
        }
    }

    /// Difference; `None` for `inf - inf` of equal sign.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.checked_add(&other.clone().neg())
    }

    /// Multiplication by a finite scalar.
    pub fn scale(&self, factor: &S) -> Self {
        match self {
            Extended::Finite(v) => Extended::Finite(v.clone() * factor.clone()),
            _ if factor.is_zero() => Extended::zero(),
            Extended::PosInf if factor.is_positive() => Extended::PosInf,
            Extended::PosInf => Extended::NegInf,
            Extended::NegInf if factor.is_positive() => Extended::NegInf,
            Extended::NegInf => Extended::PosInf,
        }
    }

    /// Equality up to the scalar tolerance; infinities equal themselves.
    pub fn approx_eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => a.approx_eq(b),
            (a, b) => a == b,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Extended::NegInf => f64::NEG_INFINITY,
            Extended::Finite(v) => v.to_f64(),
            Extended::PosInf => f64::INFINITY,
        }
    }
}

impl<S: Scalar> Neg for Extended<S> {
    type Output = Self;

    fn neg(self) -> Self {
        match self {
            Extended::NegInf => Extended::PosInf,
            Extended::Finite(v) => Extended::Finite(-v),
            Extended::PosInf => Extended::NegInf,
        }
    }
}

impl<S: Scalar> Add for Extended<S> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        self.checked_add(&rhs)
            .expect("extended sum combines +inf and -inf")
    }
}

impl<S: Scalar> Sub for Extended<S> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<S: Scalar> From<S> for Extended<S> {
    fn from(v: S) -> Self {
        Extended::Finite(v)
    }
}

impl<S: Scalar> Display for Extended<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::NegInf => f.write_str("-inf"),
            Extended::Finite(v) => Display::fmt(v, f),
            Extended::PosInf => f.write_str("inf"),
        }
    }
}
