//! Additive genera.
//!
//! An additive genus is determined by the power series `S(x) = sum a_n x^n`
//! it assigns to a line bundle with first Chern class `x`. Genera form a
//! vector space; there is deliberately no product.

pub mod zeta;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{Coeff, Rational, Scalar};
use crate::series::Series;

pub use zeta::{zeta_neg, zeta_numeric, zeta_prime_numeric};

/// An additive genus with exact or floating coefficients.
#[derive(Clone, Debug, PartialEq)]
pub enum Genus {
    Exact(Series<Rational>),
    Numeric(Series<f64>),
}

impl Genus {
    /// The zero genus of the given order.
    pub fn zero(order: usize) -> Genus {
        Genus::Exact(Series::zero(order))
    }

    pub fn exact(coeffs: Vec<Rational>) -> Result<Genus> {
        Series::from_coeffs(coeffs).map(Genus::Exact)
    }

    pub fn numeric(coeffs: Vec<f64>) -> Result<Genus> {
        Series::from_coeffs(coeffs).map(Genus::Numeric)
    }

    pub fn order(&self) -> usize {
        match self {
            Genus::Exact(s) => s.order(),
            Genus::Numeric(s) => s.order(),
        }
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, Genus::Numeric(_))
    }

    pub fn coeff(&self, n: usize) -> Scalar {
        match self {
            Genus::Exact(s) => Scalar::Exact(s.coeff(n)),
            Genus::Numeric(s) => Scalar::Float(s.coeff(n)),
        }
    }

    pub fn coeffs(&self) -> Vec<Scalar> {
        (0..=self.order()).map(|n| self.coeff(n)).collect()
    }

    pub fn with_order(&self, order: usize) -> Genus {
        match self {
            Genus::Exact(s) => Genus::Exact(s.with_order(order)),
            Genus::Numeric(s) => Genus::Numeric(s.with_order(order)),
        }
    }

    pub fn add(&self, other: &Genus) -> Result<Genus> {
        match (self, other) {
            (Genus::Exact(a), Genus::Exact(b)) => a.add(b).map(Genus::Exact),
            (Genus::Numeric(a), Genus::Numeric(b)) => a.add(b).map(Genus::Numeric),
            _ => Err(Error::MixedPrecision),
        }
    }

    /// Scalar multiple; the scalar must live in the genus' field.
    pub fn scale(&self, c: &Scalar) -> Result<Genus> {
        match (self, c) {
            (Genus::Exact(a), Scalar::Exact(c)) => Ok(Genus::Exact(a.scale(c))),
            (Genus::Numeric(a), Scalar::Float(c)) => Ok(Genus::Numeric(a.scale(c))),
            _ => Err(Error::MixedPrecision),
        }
    }

    /// Scaling by a rational works for either field.
    pub fn scale_rational(&self, c: &Rational) -> Genus {
        match self {
            Genus::Exact(a) => Genus::Exact(a.scale(c)),
            Genus::Numeric(a) => Genus::Numeric(a.scale(&f64::from_rational(c))),
        }
    }

    /// The genus of the dual theory, `S^sigma(x) = -S(-x)`.
    pub fn sigma_dual(&self) -> Genus {
        match self {
            Genus::Exact(s) => Genus::Exact(s.reflect().neg()),
            Genus::Numeric(s) => Genus::Numeric(s.reflect().neg()),
        }
    }

    /// Whether every even-index coefficient is at most `tol` in magnitude.
    /// Exact genera with `tol == 0` are compared exactly.
    pub fn is_self_dual(&self, tol: f64) -> bool {
        match self {
            Genus::Exact(s) if tol == 0.0 => s.coeffs().iter().step_by(2).all(Zero::is_zero),
            _ => self
                .coeffs()
                .iter()
                .step_by(2)
                .all(|c| c.magnitude() <= tol),
        }
    }
}

/// Coefficient of `x^m / m!` in the R-genus: `2 zeta'(-m) + H_m zeta(-m)` for
/// odd `m`, zero for even `m`.
pub fn r_coefficient(m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::OutOfRange(
            "R-genus coefficients start at m = 1".into(),
        ));
    }
    if m.is_multiple_of(2) {
        return Ok(0.0);
    }
    let harmonic: f64 = (1..=m).rev().map(|i| 1.0 / i as f64).sum();
    let zeta = f64::from_rational(&zeta_neg(m));
    Ok(2.0 * zeta::zeta_prime_neg_odd(m)? + harmonic * zeta)
}

fn r_series(order: usize, factor: f64) -> Genus {
    let mut coeffs = vec![0.0; order + 1];
    let mut factorial = 1.0;
    for (m, c) in coeffs.iter_mut().enumerate().skip(1) {
        factorial *= m as f64;
        if m % 2 == 1 {
            *c = factor * r_coefficient(m).expect("m >= 1") / factorial;
        }
    }
    Genus::Numeric(Series::from_coeffs(coeffs).expect("nonempty"))
}

/// The R-genus truncated at `order`.
pub fn r_genus(order: usize) -> Genus {
    r_series(order, 1.0)
}

/// The genus `-R/2` of the Bismut-Koehler theory.
pub fn bk_genus(order: usize) -> Genus {
    r_series(order, -0.5)
}
