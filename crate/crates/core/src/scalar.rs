//! Time and angle scalars.
//!
//! Every computation on the circle is generic over [`Scalar`], which has two
//! implementations:
//!
//! - [`PiRational`]: exact rational multiples of π. All the interesting switching
//!   periods (π/2, 2π/5, 7π/4, ...) live here, and case boundaries are decided
//!   without rounding.
//! - `f64`: radians, with [`FLOAT_EPS`] used for merging and adjacency.
//!
//! The two are never mixed inside one computation.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational used for coefficients and for multiples of π.
pub type Rational = num_rational::Ratio<i128>;

/// Merge/adjacency tolerance for float-mode angles (radians).
pub const FLOAT_EPS: f64 = 1e-12;

/// Relative tolerance used when snapping a float ratio to an integer.
const RATIO_SNAP: f64 = 1e-10;

/// Scalar type for times and angles.
pub trait Scalar:
    Copy
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// `true` for exact arithmetic.
    const EXACT: bool;

    fn zero() -> Self;
    fn pi() -> Self;
    fn two_pi() -> Self {
        Self::pi() + Self::pi()
    }
    fn mul_ratio(self, r: Rational) -> Self;
    fn mul_int(self, k: i128) -> Self {
        self.mul_ratio(Rational::from_integer(k))
    }
    fn to_f64(self) -> f64;

    /// Equality up to the mode's tolerance (exact equality in exact mode).
    fn approx_eq(self, other: Self) -> bool;

    /// `self < other` and not [`approx_eq`](Scalar::approx_eq).
    fn definitely_lt(self, other: Self) -> bool {
        self < other && !self.approx_eq(other)
    }

    /// `self <= other` up to tolerance.
    fn approx_le(self, other: Self) -> bool {
        self < other || self.approx_eq(other)
    }

    /// Representative of `self` modulo 2π in `[0, 2π)`.
    fn rem_two_pi(self) -> Self;

    /// ⌊self / other⌋ for `other > 0`.
    fn div_floor(self, other: Self) -> i128;

    /// ⌈self / other⌉ for `other > 0`.
    fn div_ceil(self, other: Self) -> i128;

    /// `Some(n)` when `self / other` is the integer `n`.
    fn div_integer(self, other: Self) -> Option<i128>;

    /// Build from a rational multiple of π.
    fn from_pi_ratio(r: Rational) -> Self;

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Exact rendering (`"3/2 pi"`) when available.
    fn exact_string(self) -> Option<String>;

    /// Parse a time written for this mode.
    fn parse_time(input: &str) -> Result<Self>;
}

/// An exact value `r·π` with `r` rational.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PiRational(pub Rational);

impl PiRational {
    pub fn new(numer: i128, denom: i128) -> Self {
        Self(Rational::new(numer, denom))
    }

    pub fn from_integer(n: i128) -> Self {
        Self(Rational::from_integer(n))
    }

    /// Coefficient of π.
    pub fn coefficient(self) -> Rational {
        self.0
    }

    pub fn numer(self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(self) -> i128 {
        *self.0.denom()
    }
}

impl fmt::Debug for PiRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for PiRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = (self.numer(), self.denom());
        match (n, d) {
            (0, _) => write!(f, "0"),
            (1, 1) => write!(f, "pi"),
            (-1, 1) => write!(f, "-pi"),
            (n, 1) => write!(f, "{n} pi"),
            (n, d) => write!(f, "{n}/{d} pi"),
        }
    }
}

impl FromStr for PiRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_pi_rational(s)
    }
}

impl Serialize for PiRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PiRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_pi_rational(&s).map_err(serde::de::Error::custom)
    }
}

impl Add for PiRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl Sub for PiRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

impl Neg for PiRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl Scalar for PiRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Self(Rational::zero())
    }

    fn pi() -> Self {
        Self::from_integer(1)
    }

    fn mul_ratio(self, r: Rational) -> Self {
        Self(self.0 * r)
    }

    fn to_f64(self) -> f64 {
        self.numer() as f64 / self.denom() as f64 * std::f64::consts::PI
    }

    fn approx_eq(self, other: Self) -> bool {
        self == other
    }

    fn rem_two_pi(self) -> Self {
        let two = Rational::from_integer(2);
        let k = (self.0 / two).floor();
        Self(self.0 - k * two)
    }

    fn div_floor(self, other: Self) -> i128 {
        let q = self.0 / other.0;
        Integer::div_floor(q.numer(), q.denom())
    }

    fn div_ceil(self, other: Self) -> i128 {
        let q = self.0 / other.0;
        -Integer::div_floor(&-q.numer(), q.denom())
    }

    fn div_integer(self, other: Self) -> Option<i128> {
        let q = self.0 / other.0;
        q.is_integer().then(|| q.to_integer())
    }

    fn from_pi_ratio(r: Rational) -> Self {
        Self(r)
    }

    fn exact_string(self) -> Option<String> {
        Some(self.to_string())
    }

    fn parse_time(input: &str) -> Result<Self> {
        parse_pi_rational(input)
    }
}

fn snapped_ratio(a: f64, b: f64) -> (f64, Option<f64>) {
    let q = a / b;
    let r = q.round();
    if (q - r).abs() <= RATIO_SNAP * q.abs().max(1.0) {
        (q, Some(r))
    } else {
        (q, None)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }

    fn pi() -> Self {
        std::f64::consts::PI
    }

    fn two_pi() -> Self {
        std::f64::consts::TAU
    }

    fn mul_ratio(self, r: Rational) -> Self {
        self * r.to_f64().unwrap_or(f64::NAN)
    }

    fn to_f64(self) -> f64 {
        self
    }

    fn approx_eq(self, other: Self) -> bool {
        (self - other).abs() <= FLOAT_EPS * self.abs().max(other.abs()).max(1.0)
    }

    fn rem_two_pi(self) -> Self {
        let r = self.rem_euclid(std::f64::consts::TAU);
        if r.approx_eq(std::f64::consts::TAU) {
            0.0
        } else {
            r
        }
    }

    fn div_floor(self, other: Self) -> i128 {
        match snapped_ratio(self, other) {
            (_, Some(r)) => r as i128,
            (q, None) => q.floor() as i128,
        }
    }

    fn div_ceil(self, other: Self) -> i128 {
        match snapped_ratio(self, other) {
            (_, Some(r)) => r as i128,
            (q, None) => q.ceil() as i128,
        }
    }

    fn div_integer(self, other: Self) -> Option<i128> {
        snapped_ratio(self, other).1.map(|r| r as i128)
    }

    fn from_pi_ratio(r: Rational) -> Self {
        r.to_f64().unwrap_or(f64::NAN) * std::f64::consts::PI
    }

    fn exact_string(self) -> Option<String> {
        None
    }

    fn parse_time(input: &str) -> Result<Self> {
        parse_time_f64(input)
    }
}

/// Total order for scalars that are known not to be NaN.
pub fn total_cmp<S: Scalar>(a: &S, b: &S) -> Ordering {
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}

fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i128 = n.trim().parse().map_err(|_| bad())?;
            let d: i128 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Parse an exact multiple of π.
///
/// Accepted forms include `"0"`, `"pi"`, `"-pi"`, `"2 pi"`, `"3/2 pi"`,
/// `"3pi/2"`, `"pi/5"`, `"7*pi/4"` and the same with `π`.
pub fn parse_pi_rational(input: &str) -> Result<PiRational> {
    let s: String = input
        .replace('π', "pi")
        .chars()
        .filter(|c| !c.is_whitespace() && *c != '*')
        .collect();
    if s.is_empty() {
        return Err(Error::Parse("empty time value".into()));
    }
    let Some(pos) = s.find("pi") else {
        let r = parse_rational(&s)?;
        if r.is_zero() {
            return Ok(PiRational::zero());
        }
        return Err(Error::Parse(format!(
            "`{input}` is not a rational multiple of pi (exact mode)"
        )));
    };
    let (head, tail) = (&s[..pos], &s[pos + 2..]);
    let coef = match head {
        "" | "+" => Rational::from_integer(1),
        "-" => Rational::from_integer(-1),
        h => parse_rational(h)?,
    };
    let coef = match tail {
        "" => coef,
        t => {
            let d = t
                .strip_prefix('/')
                .ok_or_else(|| Error::Parse(format!("invalid time `{input}`")))?;
            let d = parse_rational(d)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{input}`")));
            }
            coef / d
        }
    };
    Ok(PiRational(coef))
}

/// Parse a float time in radians; π-forms are accepted and evaluated.
pub fn parse_time_f64(input: &str) -> Result<f64> {
    let t = input.trim();
    if let Ok(v) = t.parse::<f64>() {
        if v.is_finite() {
            return Ok(v);
        }
        return Err(Error::Parse(format!("non-finite time `{input}`")));
    }
    parse_pi_rational(t).map(|p| p.to_f64())
}
