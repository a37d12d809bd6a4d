//! Truncated univariate power series.
//!
//! A [`Series`] stores the coefficients of `x^0 ..= x^order`. The order is
//! part of the value: binary operations require both operands to agree on it
//! and never truncate or extend silently.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{binomial, factorial, Coeff, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct Series<C> {
    coeffs: Vec<C>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Combine {
    Add,
    Mul,
    Div,
    Compose,
}

impl<C: Coeff> Series<C> {
    /// Builds a series of order `coeffs.len() - 1`. An empty list is rejected.
    pub fn from_coeffs(coeffs: Vec<C>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::OutOfRange(
                "a series needs at least one coefficient".into(),
            ));
        }
        Ok(Series { coeffs })
    }

    pub fn zero(order: usize) -> Self {
        Series {
            coeffs: vec![C::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(order, 0, C::one())
    }

    /// `c * x^degree` truncated at `order` (zero if `degree > order`).
    pub fn monomial(order: usize, degree: usize, c: C) -> Self {
        let mut s = Self::zero(order);
        if degree <= order {
            s.coeffs[degree] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_numeric(&self) -> bool {
        C::NUMERIC
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    /// Coefficient of `x^n`; zero beyond the order.
    pub fn coeff(&self, n: usize) -> C {
        self.coeffs.get(n).cloned().unwrap_or_else(C::zero)
    }

    /// Explicitly changes the order: truncates, or pads with zeros treating the
    /// value as a polynomial.
    pub fn with_order(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, C::zero());
        Series { coeffs }
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Series<D> {
        Series {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map(|a| a.clone() * c.clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|a| -a.clone())
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch(self.order(), other.order()));
        }
        Ok(())
    }

    pub fn combine(kind: Combine, f: &Self, g: &Self) -> Result<Self> {
        match kind {
            Combine::Add => f.add(g),
            Combine::Mul => f.mul(g),
            Combine::Div => f.div(g),
            Combine::Compose => f.compose(g),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(Series {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let n = self.order();
        let mut out = vec![C::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Ok(Series { coeffs: out })
    }

    /// `self / other` by long division; `other` needs a nonzero constant term.
    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let lead = other.coeffs[0].clone();
        if lead.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let n = self.order();
        let mut q: Vec<C> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = self.coeffs[k].clone();
            for j in 1..=k {
                acc = acc - other.coeffs[j].clone() * q[k - j].clone();
            }
            q.push(acc / lead.clone());
        }
        Ok(Series { coeffs: q })
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one(self.order()).div(self)
    }

    /// Formal substitution `self(inner(x))`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        self.check_order(inner)?;
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = self.order();
        let mut acc = Self::zero(n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner)?;
            acc.coeffs[0] = acc.coeffs[0].clone() + c.clone();
        }
        Ok(acc)
    }

    /// `self(-x)`.
    pub fn reflect(&self) -> Self {
        Series {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 0 { c.clone() } else { -c.clone() })
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::one(self.order());
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "({})x", c)?,
                _ => write!(f, "({})x^{}", c, i)?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(x^{})", self.order() + 1)
    }
}

/// Named generating functions.
#[derive(Clone, Debug, PartialEq)]
pub enum StandardSeries {
    Exp,
    ExpNeg,
    Todd,
    ToddInv,
    /// `e^{kx}`, the Chern character of a line bundle with first Chern class `kx`.
    ChLine(Rational),
}

impl FromStr for StandardSeries {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exp" => Ok(StandardSeries::Exp),
            "exp_neg" => Ok(StandardSeries::ExpNeg),
            "todd" => Ok(StandardSeries::Todd),
            "todd_inv" => Ok(StandardSeries::ToddInv),
            _ => match s.strip_prefix("ch_line:") {
                Some(k) => k
                    .parse::<Rational>()
                    .map(StandardSeries::ChLine)
                    .map_err(|_| Error::UnknownSeries(s.to_string())),
                None => Err(Error::UnknownSeries(s.to_string())),
            },
        }
    }
}

pub fn standard_series<C: Coeff>(name: &StandardSeries, order: usize) -> Series<C> {
    match name {
        StandardSeries::Exp => exp_scaled(&Rational::one(), order),
        StandardSeries::ExpNeg => exp_scaled(&-Rational::one(), order),
        StandardSeries::ChLine(k) => exp_scaled(k, order),
        StandardSeries::ToddInv => todd_inv(order),
        StandardSeries::Todd => todd_inv::<C>(order)
            .recip()
            .expect("todd_inv has constant term 1"),
    }
}

/// `e^{kx}` computed exactly and converted once.
fn exp_scaled<C: Coeff>(k: &Rational, order: usize) -> Series<C> {
    let mut term = Rational::one();
    let mut coeffs = Vec::with_capacity(order + 1);
    for n in 0..=order {
        if n > 0 {
            term = term * k / Rational::from_integer(BigInt::from(n));
        }
        coeffs.push(C::from_rational(&term));
    }
    Series { coeffs }
}

/// `(1 - e^{-x}) / x = sum (-1)^n x^n / (n+1)!`.
fn todd_inv<C: Coeff>(order: usize) -> Series<C> {
    let coeffs = (0..=order)
        .map(|n| {
            let q = Rational::new(BigInt::one(), factorial(n as u64 + 1));
            C::from_rational(&if n % 2 == 0 { q } else { -q })
        })
        .collect();
    Series { coeffs }
}

/// Bernoulli numbers `B_0..=B_m` with `x/(e^x - 1) = sum B_k x^k / k!`.
pub fn bernoulli_numbers(m: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(m + 1);
    b.push(Rational::one());
    for k in 1..=m {
        let mut acc = Rational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += Rational::from_integer(binomial(k as u64 + 1, j as u64)) * bj;
        }
        b.push(-acc / Rational::from_integer(BigInt::from(k + 1)));
    }
    b
}

pub fn bernoulli(m: usize) -> Rational {
    bernoulli_numbers(m).pop().expect("nonempty")
}
