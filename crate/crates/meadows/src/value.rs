//! Carrier values: ordinary numbers plus the peripheral elements.
//!
//! A value is either an ordinary number, the default peripheral `bot`, or
//! (in signed mode) one of the signed infinities. Ordinary numbers come in
//! two backends: exact arbitrary-precision rationals and `f64`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Semantic mode an operation is evaluated under.
///
/// * `Bottom` — division by zero and `log2` of non-positive arguments
///   produce the absorptive peripheral `bot`.
/// * `Signed` — extends `Bottom` with signed infinities; `log2 0 = -inf`.
/// * `SuppesOno` — every operation is totalised onto ordinary values
///   (`1/0 = 0`, `log2 x = 0` for `x <= 0`); no peripheral exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Bottom,
    Signed,
    SuppesOno,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Bottom => write!(f, "bot"),
            Mode::Signed => write!(f, "signed"),
            Mode::SuppesOno => write!(f, "suppes"),
        }
    }
}

/// Runtime selector between the two number backends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CarrierKind {
    Exact,
    Approx,
}

impl fmt::Display for CarrierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CarrierKind::Exact => write!(f, "exact"),
            CarrierKind::Approx => write!(f, "approx"),
        }
    }
}

/// Raised by exact `log2` when the argument is not a power of two.
///
/// The exact carrier only defines `log2` on rationals of the form `2^k`;
/// anything else signals the caller to switch to the approximate carrier.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("log2 of {0} is irrational; exact carrier supports powers of two only")]
pub struct Inexact(pub String);

/// Number backend for ordinary values.
///
/// Implementations must keep every produced number finite; `Value::ordinary`
/// maps anything non-finite to `bot`.
pub trait Carrier: Clone + PartialEq + fmt::Debug {
    const KIND: CarrierKind;

    fn from_rational(r: &BigRational) -> Self;
    fn from_int(i: i64) -> Self;
    fn is_zero(&self) -> bool;
    /// -1, 0 or 1.
    fn signum(&self) -> i8;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Multiplicative inverse; `None` exactly when `self` is zero.
    fn recip(&self) -> Option<Self>;
    /// Base-2 logarithm. Callers guarantee `self > 0`.
    fn log2(&self) -> Result<Self, Inexact>;
    /// Whether the representation is a finite number (always true for exact).
    fn is_finite_repr(&self) -> bool;
    fn render(&self) -> String;
}

impl Carrier for BigRational {
    const KIND: CarrierKind = CarrierKind::Exact;

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn from_int(i: i64) -> Self {
        BigRational::from_integer(BigInt::from(i))
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn signum(&self) -> i8 {
        if Zero::is_zero(self) {
            0
        } else if self.is_positive() {
            1
        } else {
            -1
        }
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn neg(&self) -> Self {
        -self
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn recip(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(BigRational::recip(self))
        }
    }

    fn log2(&self) -> Result<Self, Inexact> {
        debug_assert!(self.is_positive());
        match dyadic_exponent(self) {
            Some(k) => Ok(BigRational::from_integer(BigInt::from(k))),
            None => Err(Inexact(self.render())),
        }
    }

    fn is_finite_repr(&self) -> bool {
        true
    }

    fn render(&self) -> String {
        self.to_string()
    }
}

/// If `r = 2^k` for an integer `k`, returns `k`. The rational must be in
/// reduced form (num-rational keeps it that way), so at most one of
/// numerator and denominator carries a factor of two, and both must be
/// pure powers of two.
fn dyadic_exponent(r: &BigRational) -> Option<i64> {
    fn power_of_two(n: &BigInt) -> Option<i64> {
        if !n.is_positive() {
            return None;
        }
        let t = n.trailing_zeros()?;
        if (n >> t).is_one() {
            Some(t as i64)
        } else {
            None
        }
    }
    let a = power_of_two(r.numer())?;
    let b = power_of_two(r.denom())?;
    Some(a - b)
}

impl Carrier for f64 {
    const KIND: CarrierKind = CarrierKind::Approx;

    fn from_rational(r: &BigRational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }

    fn from_int(i: i64) -> Self {
        i as f64
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn signum(&self) -> i8 {
        if *self == 0.0 {
            0
        } else if *self > 0.0 {
            1
        } else {
            -1
        }
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn neg(&self) -> Self {
        -self
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn recip(&self) -> Option<Self> {
        if *self == 0.0 {
            None
        } else {
            Some(1.0 / self)
        }
    }

    fn log2(&self) -> Result<Self, Inexact> {
        debug_assert!(*self > 0.0);
        Ok(f64::log2(*self))
    }

    fn is_finite_repr(&self) -> bool {
        self.is_finite()
    }

    fn render(&self) -> String {
        format_significant(*self, 12)
    }
}

/// Formats with the given number of significant digits, trimming trailing
/// zeros, switching to scientific notation outside a comfortable range.
pub fn format_significant(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.*e}", sig - 1, x);
    let (mant, exp) = sci.split_once('e').expect("e-format");
    let exp: i32 = exp.parse().expect("exponent");
    if exp >= -4 && exp < sig as i32 {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_decimal(format!("{x:.decimals$}"))
    } else {
        format!("{}e{}", trim_decimal(mant.to_string()), exp)
    }
}

fn trim_decimal(mut s: String) -> String {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

/// An element of the carrier set of one of the three algebras.
#[derive(Debug, Clone, PartialEq)]
pub enum Value<N> {
    Ordinary(N),
    Bottom,
    PosInf,
    NegInf,
}

/// Value over exact rationals.
pub type ExactValue = Value<BigRational>;
/// Value over binary floating point.
pub type ApproxValue = Value<f64>;

impl<N: Carrier> Value<N> {
    /// Wraps a number, degrading anything non-finite (float overflow) to
    /// `bot`.
    pub fn ordinary(n: N) -> Self {
        if n.is_finite_repr() {
            Value::Ordinary(n)
        } else {
            Value::Bottom
        }
    }

    pub fn int(i: i64) -> Self {
        Value::Ordinary(N::from_int(i))
    }

    pub fn rational(r: &BigRational) -> Self {
        Value::ordinary(N::from_rational(r))
    }

    pub fn zero() -> Self {
        Value::Ordinary(N::from_int(0))
    }

    pub fn one() -> Self {
        Value::Ordinary(N::from_int(1))
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, Value::Bottom)
    }

    pub fn is_ordinary(&self) -> bool {
        matches!(self, Value::Ordinary(_))
    }

    pub fn is_peripheral(&self) -> bool {
        !self.is_ordinary()
    }

    pub fn as_ordinary(&self) -> Option<&N> {
        match self {
            Value::Ordinary(n) => Some(n),
            _ => None,
        }
    }

    /// Whether a value is admissible under the given mode.
    pub fn legal_for(&self, mode: Mode) -> bool {
        match self {
            Value::Ordinary(_) => true,
            Value::Bottom => mode != Mode::SuppesOno,
            Value::PosInf | Value::NegInf => mode == Mode::Signed,
        }
    }

    pub fn render(&self) -> String {
        match self {
            Value::Ordinary(n) => n.render(),
            Value::Bottom => "bot".to_string(),
            Value::PosInf => "+inf".to_string(),
            Value::NegInf => "-inf".to_string(),
        }
    }
}

impl<N: Carrier> fmt::Display for Value<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Error from parsing a textual value form.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid value `{0}`: expected a rational like 3, -1/2 or 0.25, or bot/+inf/-inf")]
pub struct ValueParseError(pub String);

/// Parses a rational from its textual forms: `a/b`, an integer, or a
/// terminating decimal, each with an optional leading sign.
pub fn parse_rational(text: &str) -> Result<BigRational, ValueParseError> {
    let t = text.trim();
    let err = || ValueParseError(text.to_string());
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, t.strip_prefix('+').unwrap_or(t)),
    };
    if body.is_empty() {
        return Err(err());
    }
    let magnitude = if let Some((n, d)) = body.split_once('/') {
        let n: BigInt = n.parse().map_err(|_| err())?;
        let d: BigInt = d.parse().map_err(|_| err())?;
        if !d.is_positive() || n.is_negative() {
            return Err(err());
        }
        BigRational::new(n, d)
    } else if let Some((whole, frac)) = body.split_once('.') {
        if whole.is_empty() || frac.is_empty() {
            return Err(err());
        }
        let whole: BigInt = whole.parse().map_err(|_| err())?;
        let digits: BigInt = frac.parse().map_err(|_| err())?;
        if whole.is_negative() || digits.is_negative() {
            return Err(err());
        }
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        BigRational::from_integer(whole) + BigRational::new(digits, scale)
    } else {
        let n: BigInt = body.parse().map_err(|_| err())?;
        if n.is_negative() {
            return Err(err());
        }
        BigRational::from_integer(n)
    };
    Ok(if sign < 0 { -magnitude } else { magnitude })
}

/// Parses the full textual value form: a rational or one of the
/// peripherals `bot`, `+inf`, `-inf`.
pub fn parse_value<N: Carrier>(text: &str) -> Result<Value<N>, ValueParseError> {
    match text.trim() {
        "bot" => Ok(Value::Bottom),
        "+inf" => Ok(Value::PosInf),
        "-inf" => Ok(Value::NegInf),
        other => Ok(Value::rational(&parse_rational(other)?)),
    }
}
