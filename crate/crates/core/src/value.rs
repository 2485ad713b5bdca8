//! Extended nonnegative reals with a choice of arithmetic backend.
//!
//! Two backends are supported: exact rationals (the default, so order
//! invariants and stabilization checks are exact) and 64-bit floats with a
//! fixed comparison tolerance for large sweeps.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Comparison tolerance for the float backend.
pub const FLOAT_TOL: f64 = 1e-12;

/// Arithmetic backend selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    #[default]
    Rational,
    Float,
}

/// A finite nonnegative scalar in one of the two backends.
#[derive(Debug, Clone)]
pub enum Scalar {
    Rational(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn zero(backend: Backend) -> Self {
        match backend {
            Backend::Rational => Scalar::Rational(BigRational::zero()),
            Backend::Float => Scalar::Float(0.0),
        }
    }

    pub fn from_int(n: i64, backend: Backend) -> Self {
        match backend {
            Backend::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            Backend::Float => Scalar::Float(n as f64),
        }
    }

    pub fn backend(&self) -> Backend {
        match self {
            Scalar::Rational(_) => Backend::Rational,
            Scalar::Float(_) => Backend::Float,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Float(f) => *f,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Float(f) => f.abs() <= FLOAT_TOL,
        }
    }

    fn cmp_scalar(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a.cmp(b),
            (Scalar::Float(a), Scalar::Float(b)) => {
                if (a - b).abs() <= FLOAT_TOL {
                    Ordering::Equal
                } else {
                    a.partial_cmp(b).expect("non-finite float scalar")
                }
            }
            (a, b) => Scalar::Float(a.to_f64()).cmp_scalar(&Scalar::Float(b.to_f64())),
        }
    }

    fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a + b),
            (a, b) => Scalar::Float(a.to_f64() + b.to_f64()),
        }
    }

    fn sub_abs(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational((a - b).abs()),
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float((a - b).abs()),
            (a, b) => Scalar::Float((a.to_f64() - b.to_f64()).abs()),
        }
    }

    fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a * b),
            (a, b) => Scalar::Float(a.to_f64() * b.to_f64()),
        }
    }

    fn div(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a / b),
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a / b),
            (a, b) => Scalar::Float(a.to_f64() / b.to_f64()),
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_scalar(other) == Ordering::Equal
    }
}

/// A nonnegative extended real: a finite scalar or a distinguished infinity.
///
/// Arithmetic conventions: `x + inf = inf`, `min(inf, x) = x`,
/// `c * inf = inf` for `c > 0`, and `0 * inf = 0` (so a zero-proportion
/// distributor of an infinite state pays zero).
#[derive(Debug, Clone, PartialEq)]
pub enum ExtReal {
    Finite(Scalar),
    Infinity,
}

impl ExtReal {
    pub fn zero(backend: Backend) -> Self {
        ExtReal::Finite(Scalar::zero(backend))
    }

    pub fn from_int(n: i64, backend: Backend) -> Self {
        ExtReal::Finite(Scalar::from_int(n, backend))
    }

    pub fn from_ratio(num: i64, den: i64, backend: Backend) -> Self {
        assert!(den != 0, "zero denominator");
        match backend {
            Backend::Rational => ExtReal::Finite(Scalar::Rational(BigRational::new(
                BigInt::from(num),
                BigInt::from(den),
            ))),
            Backend::Float => ExtReal::Finite(Scalar::Float(num as f64 / den as f64)),
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtReal::Infinity)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtReal::Finite(s) if s.is_zero())
    }

    pub fn backend(&self) -> Option<Backend> {
        match self {
            ExtReal::Finite(s) => Some(s.backend()),
            ExtReal::Infinity => None,
        }
    }

    pub fn compare(&self, other: &ExtReal) -> Ordering {
        match (self, other) {
            (ExtReal::Infinity, ExtReal::Infinity) => Ordering::Equal,
            (ExtReal::Infinity, _) => Ordering::Greater,
            (_, ExtReal::Infinity) => Ordering::Less,
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a.cmp_scalar(b),
        }
    }

    pub fn leq(&self, other: &ExtReal) -> bool {
        self.compare(other) != Ordering::Greater
    }

    pub fn min(&self, other: &ExtReal) -> ExtReal {
        if self.leq(other) {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn max(&self, other: &ExtReal) -> ExtReal {
        if self.leq(other) {
            other.clone()
        } else {
            self.clone()
        }
    }

    pub fn add(&self, other: &ExtReal) -> ExtReal {
        match (self, other) {
            (ExtReal::Infinity, _) | (_, ExtReal::Infinity) => ExtReal::Infinity,
            (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::Finite(a.add(b)),
        }
    }

    /// Absolute difference; infinite when exactly one argument is infinite.
    pub fn abs_diff(&self, other: &ExtReal) -> ExtReal {
        match (self, other) {
            (ExtReal::Infinity, ExtReal::Infinity) => {
                ExtReal::Finite(Scalar::Rational(BigRational::zero()))
            }
            (ExtReal::Infinity, _) | (_, ExtReal::Infinity) => ExtReal::Infinity,
            (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::Finite(a.sub_abs(b)),
        }
    }

    pub fn mul(&self, other: &ExtReal) -> ExtReal {
        match (self, other) {
            (ExtReal::Infinity, x) | (x, ExtReal::Infinity) => {
                if x.is_zero() {
                    x.clone()
                } else {
                    ExtReal::Infinity
                }
            }
            (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::Finite(a.mul(b)),
        }
    }

    /// Division by a finite nonzero scalar.
    pub fn div(&self, other: &ExtReal) -> ExtReal {
        match (self, other) {
            (_, ExtReal::Infinity) => panic!("division by infinity"),
            (ExtReal::Infinity, _) => ExtReal::Infinity,
            (ExtReal::Finite(a), ExtReal::Finite(b)) => {
                assert!(!b.is_zero(), "division by zero");
                ExtReal::Finite(a.div(b))
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtReal::Infinity => f64::INFINITY,
            ExtReal::Finite(s) => s.to_f64(),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseValueError {
    #[error("empty value literal")]
    Empty,
    #[error("invalid value literal `{0}`")]
    Invalid(String),
    #[error("negative value literal `{0}`")]
    Negative(String),
}

/// Parses a decimal string (`"10"`, `"2.5"`), a fraction (`"4/3"`), or
/// `"inf"` into an exact rational extended real.
pub fn parse_ext_real(s: &str, backend: Backend) -> Result<ExtReal, ParseValueError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseValueError::Empty);
    }
    if s == "inf" || s == "Inf" || s == "INF" {
        return Ok(ExtReal::Infinity);
    }
    let rat = parse_rational(s)?;
    if rat.is_negative() {
        return Err(ParseValueError::Negative(s.to_string()));
    }
    Ok(match backend {
        Backend::Rational => ExtReal::Finite(Scalar::Rational(rat)),
        Backend::Float => ExtReal::Finite(Scalar::Float(rat.to_f64().unwrap_or(f64::NAN))),
    })
}

fn parse_rational(s: &str) -> Result<BigRational, ParseValueError> {
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim())
            .map_err(|_| ParseValueError::Invalid(s.to_string()))?;
        let d = BigInt::from_str(den.trim())
            .map_err(|_| ParseValueError::Invalid(s.to_string()))?;
        if d.is_zero() {
            return Err(ParseValueError::Invalid(s.to_string()));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return Err(ParseValueError::Invalid(s.to_string()));
        }
        let int = if int_part.is_empty() || int_part == "-" {
            BigInt::zero()
        } else {
            BigInt::from_str(int_part).map_err(|_| ParseValueError::Invalid(s.to_string()))?
        };
        let negative = int_part.starts_with('-');
        let frac =
            BigInt::from_str(frac_part).map_err(|_| ParseValueError::Invalid(s.to_string()))?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let mut value = BigRational::new(int * &scale, scale.clone());
        let frac_value = BigRational::new(frac, scale);
        if negative {
            value -= frac_value;
        } else {
            value += frac_value;
        }
        return Ok(value);
    }
    BigInt::from_str(s)
        .map(BigRational::from_integer)
        .map_err(|_| ParseValueError::Invalid(s.to_string()))
}

/// Renders an extended real as a decimal string when the denominator divides
/// a power of ten, otherwise as `p/q`; floats print with full precision.
pub fn format_ext_real(v: &ExtReal) -> String {
    match v {
        ExtReal::Infinity => "inf".to_string(),
        ExtReal::Finite(Scalar::Float(f)) => {
            if f.fract() == 0.0 && f.abs() < 1e15 {
                format!("{}", *f as i64)
            } else {
                format!("{f}")
            }
        }
        ExtReal::Finite(Scalar::Rational(r)) => format_rational(r),
    }
}

fn format_rational(r: &BigRational) -> String {
    let r = r.reduced();
    let denom = r.denom();
    if denom.is_one() {
        return r.numer().to_string();
    }
    // Terminating decimal iff denom = 2^a * 5^b.
    let mut d = denom.clone();
    let two = BigInt::from(2u32);
    let five = BigInt::from(5u32);
    let mut a = 0u32;
    let mut b = 0u32;
    while (&d % &two).is_zero() {
        d /= &two;
        a += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        b += 1;
    }
    if !d.is_one() {
        return format!("{}/{}", r.numer(), r.denom());
    }
    let digits = a.max(b);
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = r.numer() * &scale / denom;
    let negative = scaled < BigInt::zero();
    let abs = scaled.magnitude().to_string();
    let abs = if abs.len() <= digits as usize {
        format!("{}{}", "0".repeat(digits as usize + 1 - abs.len()), abs)
    } else {
        abs
    };
    let (int_part, frac_part) = abs.split_at(abs.len() - digits as usize);
    let frac_part = frac_part.trim_end_matches('0');
    let sign = if negative { "-" } else { "" };
    if frac_part.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_ext_real(self))
    }
}
