//! Riemann zeta values used by the R-genus.
//!
//! Negative integers are exact through Bernoulli numbers. For real `s > 1`
//! the function and its derivative are evaluated with Euler-Maclaurin
//! summation; `zeta'(-m)` for odd `m` then follows from the logarithmic
//! derivative of the functional equation.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::scalar::{Coeff, Rational};
use crate::series::bernoulli_numbers;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Head length of the Euler-Maclaurin sum.
const HEAD: usize = 32;
/// Number of Bernoulli correction terms.
const CORRECTIONS: usize = 12;

/// `zeta(-m)` exactly: `(-1)^m B_{m+1} / (m+1)`.
pub fn zeta_neg(m: usize) -> Rational {
    let b = bernoulli_numbers(m + 1).pop().expect("nonempty");
    let v = b / Rational::from_integer(BigInt::from(m + 1));
    if m.is_multiple_of(2) {
        v
    } else {
        -v
    }
}

fn corrections() -> Vec<f64> {
    // B_{2k} / (2k)!
    let b = bernoulli_numbers(2 * CORRECTIONS);
    (1..=CORRECTIONS)
        .map(|k| {
            let fact = crate::scalar::factorial(2 * k as u64);
            f64::from_rational(&(b[2 * k].clone() / Rational::from_integer(fact)))
        })
        .collect()
}

/// Returns `(zeta(s), zeta'(s))` for real `s > 1`.
fn zeta_and_derivative(s: f64) -> (f64, f64) {
    let n = HEAD as f64;
    let ln_n = n.ln();
    let mut value = 0.0;
    let mut deriv = 0.0;
    for k in (1..HEAD).rev() {
        let kf = k as f64;
        let term = kf.powf(-s);
        value += term;
        deriv -= kf.ln() * term;
    }
    let n1 = n.powf(1.0 - s);
    value += n1 / (s - 1.0);
    deriv += -ln_n * n1 / (s - 1.0) - n1 / ((s - 1.0) * (s - 1.0));
    let ns = n.powf(-s);
    value += 0.5 * ns;
    deriv -= 0.5 * ln_n * ns;

    // sum_k B_2k/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
    let mut rising = s;
    let mut rising_log_deriv = 1.0 / s;
    for (k, c) in corrections().into_iter().enumerate() {
        let k = k + 1;
        if k > 1 {
            let a = s + (2 * k - 3) as f64;
            let b = s + (2 * k - 2) as f64;
            rising *= a * b;
            rising_log_deriv += 1.0 / a + 1.0 / b;
        }
        let power = n.powf(-s - (2 * k) as f64 + 1.0);
        value += c * rising * power;
        deriv += c * rising * power * (rising_log_deriv - ln_n);
    }
    (value, deriv)
}

fn check_domain(s: f64) -> Result<()> {
    if s.is_nan() || s <= 1.0 {
        return Err(Error::OutOfRange(format!("zeta needs s > 1, got {}", s)));
    }
    Ok(())
}

pub fn zeta_numeric(s: f64) -> Result<f64> {
    check_domain(s)?;
    Ok(zeta_and_derivative(s).0)
}

pub fn zeta_prime_numeric(s: f64) -> Result<f64> {
    check_domain(s)?;
    Ok(zeta_and_derivative(s).1)
}

fn harmonic(m: usize) -> f64 {
    (1..=m).rev().map(|i| 1.0 / i as f64).sum()
}

/// `zeta'(-m)` for odd `m >= 1`:
/// `zeta(-m) * (ln 2pi - psi(m+1) - zeta'(m+1)/zeta(m+1))`.
pub fn zeta_prime_neg_odd(m: usize) -> Result<f64> {
    if m.is_multiple_of(2) {
        return Err(Error::OutOfRange(format!(
            "zeta'(-m) is only provided for odd m, got {}",
            m
        )));
    }
    let (z, dz) = zeta_and_derivative((m + 1) as f64);
    let digamma = harmonic(m) - EULER_GAMMA;
    let log_deriv = (2.0 * PI).ln() - digamma - dz / z;
    Ok(f64::from_rational(&zeta_neg(m)) * log_deriv)
}

/// `zeta(-m)` read off the functional equation
/// `zeta(s) = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s) zeta(1-s)` at `s = -m`.
pub fn zeta_neg_functional(m: usize) -> f64 {
    let s = -(m as f64);
    let gamma = crate::scalar::factorial(m as u64)
        .to_f64()
        .unwrap_or(f64::INFINITY);
    let sin = match m % 4 {
        0 | 2 => 0.0,
        1 => -1.0,
        _ => 1.0,
    };
    2f64.powf(s) * PI.powf(s - 1.0) * sin * gamma * zeta_and_derivative((m + 1) as f64).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;
    use num_traits::Zero;

    #[test]
    fn negative_integers() {
        assert_eq!(zeta_neg(0), rational(-1, 2));
        assert_eq!(zeta_neg(1), rational(-1, 12));
        assert_eq!(zeta_neg(3), rational(1, 120));
        for k in 1..12 {
            assert!(zeta_neg(2 * k).is_zero());
        }
    }

    #[test]
    fn known_constants() {
        assert!((zeta_numeric(2.0).unwrap() - PI * PI / 6.0).abs() < 1e-12);
        assert!((zeta_numeric(4.0).unwrap() - PI.powi(4) / 90.0).abs() < 1e-12);
        assert!((zeta_numeric(1.5).unwrap() - 2.612_375_348_685_488).abs() < 1e-12);
        assert!(zeta_numeric(1.0).is_err());
        assert!(zeta_prime_numeric(0.5).is_err());
    }

    #[test]
    fn derivative_at_two_against_partial_sums() {
        // -sum ln n / n^2 up to N, plus the integral tail and the half end term
        let n_max = 10_000_000u64;
        let mut acc = 0.0f64;
        for n in (2..=n_max).rev() {
            let x = n as f64;
            acc -= x.ln() / (x * x);
        }
        let nf = n_max as f64;
        let tail = -(nf.ln() + 1.0) / nf + 0.5 * nf.ln() / (nf * nf);
        let oracle = acc + tail;
        assert!((zeta_prime_numeric(2.0).unwrap() - oracle).abs() < 1e-9);
        assert!((zeta_prime_numeric(2.0).unwrap() + 0.937_548_254_315_843_8).abs() < 1e-12);
    }

    #[test]
    fn functional_equation_reproduces_bernoulli_values() {
        for m in (1..24).step_by(2) {
            let exact = f64::from_rational(&zeta_neg(m));
            let fe = zeta_neg_functional(m);
            assert!(
                (exact - fe).abs() <= 1e-10 * exact.abs().max(1.0),
                "m = {}",
                m
            );
        }
    }

    #[test]
    fn zeta_prime_minus_one_glaisher() {
        // zeta'(-1) = 1/12 - ln A
        let ln_glaisher = 0.248_754_477_033_784_26;
        let expected = 1.0 / 12.0 - ln_glaisher;
        assert!((zeta_prime_neg_odd(1).unwrap() - expected).abs() < 1e-12);
        assert!(zeta_prime_neg_odd(2).is_err());
    }
}
