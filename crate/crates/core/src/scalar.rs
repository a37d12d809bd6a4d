//! Coefficient fields shared by every module.
//!
//! Two fields are supported: exact rationals backed by arbitrary-precision
//! integers, and binary64 floats. Generic code is written against [`Coeff`];
//! values whose field is only known at runtime travel as [`Scalar`].

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Field operations needed by series, cohomology classes and the torsion engine.
pub trait Coeff:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// `true` for floating coefficients.
    const NUMERIC: bool;

    fn from_rational(q: &Rational) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(v)))
    }

    fn from_bigint(v: &BigInt) -> Self {
        Self::from_rational(&Rational::from_integer(v.clone()))
    }

    /// Absolute value as a float, used for tolerance checks.
    fn magnitude(&self) -> f64;

    fn into_scalar(self) -> Scalar;
}

impl Coeff for Rational {
    const NUMERIC: bool = false;

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn into_scalar(self) -> Scalar {
        Scalar::Exact(self)
    }
}

impl Coeff for f64 {
    const NUMERIC: bool = true;

    fn from_rational(q: &Rational) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }

    fn into_scalar(self) -> Scalar {
        Scalar::Float(self)
    }
}

/// A value in either coefficient field.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Float(f64),
}

impl Scalar {
    pub fn zero_like(numeric: bool) -> Scalar {
        if numeric {
            Scalar::Float(0.0)
        } else {
            Scalar::Exact(Rational::zero())
        }
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, Scalar::Float(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(q) => f64::from_rational(q),
            Scalar::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Scalar::Exact(q) => Some(q),
            Scalar::Float(_) => None,
        }
    }

    pub fn magnitude(&self) -> f64 {
        match self {
            Scalar::Exact(q) => q.magnitude(),
            Scalar::Float(x) => x.abs(),
        }
    }

    /// `self - other`, refusing to mix fields.
    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a - b)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a - b)),
            _ => Err(Error::MixedPrecision),
        }
    }

    /// Equality within `tol`; exact values compare exactly when `tol == 0`.
    pub fn approx_eq(&self, other: &Scalar, tol: f64) -> Result<bool> {
        let diff = self.checked_sub(other)?;
        Ok(match diff {
            Scalar::Exact(d) if tol == 0.0 => d.is_zero(),
            d => d.magnitude() <= tol,
        })
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) => write!(f, "{}", q),
            Scalar::Float(x) => f.write_str(&format_sig15(*x)),
        }
    }
}

/// Formats a float with 15 significant digits, `%.15g` style.
pub fn format_sig15(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{}", x);
    }
    let sci = format!("{:.14e}", x);
    // the rounded mantissa may carry into the next decade
    let (mantissa, e) = sci.split_once('e').expect("scientific format");
    let e: i32 = e.parse().expect("exponent");
    if (-5..15).contains(&e) {
        let decimals = (14 - e).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), e)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Binomial coefficient for nonnegative arguments, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `binom(n + k, n)` read as a polynomial in `k` of degree `n`, i.e.
/// `(k+1)(k+2)...(k+n)/n!`, valid for every integer `k`.
pub fn binomial_poly(n: u64, k: i64) -> Rational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 1..=n {
        num *= BigInt::from(k + i as i64);
        den *= BigInt::from(i);
    }
    Rational::new(num, den)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn sign(exp: i64) -> i64 {
    if exp.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}
