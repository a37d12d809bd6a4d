//! Characteristic numbers of torsion theories, measured against the
//! homogeneous theory.
//!
//! A theory attached to the additive genus `S` differs from the homogeneous
//! one on `(P^n -> pt, O(k))` by
//!
//! ```text
//! dt(n, k) = -pi_*( ch(O(k)) Td(T_pi) S(T_pi) )
//! ```
//!
//! Only these differences are computed; absolute values of the homogeneous
//! theory never enter. The main characteristic numbers are `k = -n..=0`,
//! i.e. `k = -i` with `i` in `0..=n`.

use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::cohomology::{lambda_q_dual_ch, CohClass, OddClass, RingSpec, VirtualBundle};
use crate::error::{Error, Result};
use crate::genera::{bk_genus, Genus};
use crate::scalar::{binomial, sign, Coeff, Rational, Scalar};
use crate::series::Series;

/// Tolerance for identities checked on floating genera.
pub const NUMERIC_TOL: f64 = 1e-10;

/// A table of differences for one genus and dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct TorsionDelta {
    pub genus: Genus,
    pub n: usize,
    pub entries: Vec<(i64, Scalar)>,
}

/// `pi_*(ch(O(k)) Td(T) S(T))` on `P^n`, as a class on the point.
fn integrand<C: Coeff>(s: &Series<C>, n: usize, k: i64) -> Result<CohClass<C>> {
    let ring = RingSpec::projective(n);
    let tangent = VirtualBundle::tangent_projective(&ring, 0)?;
    let ch: CohClass<C> = VirtualBundle::line(&ring, 0, k)?.ch()?;
    ch.mul(&tangent.todd()?)?.mul(&tangent.genus(s)?)
}

pub fn delta_t_series<C: Coeff>(s: &Series<C>, n: usize, k: i64) -> Result<C> {
    Ok(-integrand(s, n, k)?.pushforward(0)?.constant())
}

pub fn delta_t(s: &Genus, n: usize, k: i64) -> Result<Scalar> {
    match s {
        Genus::Exact(s) => delta_t_series(s, n, k).map(Scalar::Exact),
        Genus::Numeric(s) => delta_t_series(s, n, k).map(Scalar::Float),
    }
}

/// `dt(n, k)` for every `k` in `ks`, cells evaluated in parallel.
pub fn delta_table(s: &Genus, n: usize, ks: RangeInclusive<i64>) -> Result<TorsionDelta> {
    let entries = ks
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|k| delta_t(s, n, k).map(|v| (k, v)))
        .collect::<Result<Vec<_>>>()?;
    Ok(TorsionDelta {
        genus: s.clone(),
        n,
        entries,
    })
}

/// `dt` for the Bismut-Koehler genus `-R/2` truncated at `order`.
pub fn bk_delta_t(n: usize, k: i64, order: usize) -> Result<f64> {
    if order < n {
        return Err(Error::OrderTooLow {
            have: order,
            need: n,
        });
    }
    match bk_genus(order) {
        Genus::Numeric(s) => delta_t_series(&s, n, k),
        Genus::Exact(_) => unreachable!("the R-genus is numeric"),
    }
}

/// Differences for the dual theory, whose genus is `S^sigma`.
pub fn dual_theory_delta(s: &Genus, n: usize, k: i64) -> Result<Scalar> {
    delta_t(&s.sigma_dual(), n, k)
}

fn residual<C: Coeff>(values: impl Fn(i64) -> Result<C>, n: usize, k: i64) -> Result<C> {
    let mut acc = C::zero();
    for j in 0..=n + 1 {
        let c = C::from_bigint(&binomial(n as u64 + 1, j as u64));
        let term = c * values(k - j as i64)?;
        acc = if j % 2 == 0 { acc + term } else { acc - term };
    }
    Ok(acc)
}

/// `sum_{j=0}^{n+1} (-1)^j binom(n+1, j) dt(n, k-j)`, which vanishes because
/// the right-hand side of the recursion does not depend on the theory.
pub fn recursion_residual(s: &Genus, n: usize, k: i64) -> Result<Scalar> {
    match s {
        Genus::Exact(s) => residual(|k| delta_t_series(s, n, k), n, k).map(Scalar::Exact),
        Genus::Numeric(s) => residual(|k| delta_t_series(s, n, k), n, k).map(Scalar::Float),
    }
}

fn tolerance(s: &Genus) -> f64 {
    if s.is_numeric() {
        NUMERIC_TOL
    } else {
        0.0
    }
}

pub fn verify_homogeneous_recursion(s: &Genus, n: usize, ks: RangeInclusive<i64>) -> Result<bool> {
    let tol = tolerance(s);
    for k in ks {
        let r = recursion_residual(s, n, k)?;
        if !r.approx_eq(&Scalar::zero_like(s.is_numeric()), tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn classification_sum<C: Coeff>(s: &Series<C>, n: usize) -> Result<CohClass<C>> {
    let ring = RingSpec::projective(n);
    let mut acc = CohClass::zero(&ring);
    for i in 0..=n {
        let d = delta_t_series(s, n, -(i as i64))?;
        let term = lambda_q_dual_ch::<C>(n, i)?.scale(&d);
        acc = if i % 2 == 0 {
            acc.add(&term)?
        } else {
            acc.sub(&term)?
        };
    }
    Ok(acc)
}

/// Left side `sum_i (-1)^i dt(n, -i) ch(Lambda^i Q^dual)` and `-S(T_{P^n})`.
pub fn classification_sides<C: Coeff>(
    s: &Series<C>,
    n: usize,
) -> Result<(CohClass<C>, CohClass<C>)> {
    let ring = RingSpec::projective(n);
    let tangent = VirtualBundle::tangent_projective(&ring, 0)?;
    Ok((classification_sum(s, n)?, tangent.genus(s)?.neg()))
}

/// `sum_i (-1)^i dt(n, -i) ch(Lambda^i Q^dual) + S(T_{P^n}) = 0`, with
/// tolerance `tol` (0 for exact genera).
pub fn verify_classification_identity_tol(s: &Genus, n: usize, tol: f64) -> Result<bool> {
    match s {
        Genus::Exact(s) => {
            let (lhs, rhs) = classification_sides(s, n)?;
            Ok(lhs.approx_eq(&rhs, tol))
        }
        Genus::Numeric(s) => {
            let (lhs, rhs) = classification_sides(s, n)?;
            Ok(lhs.approx_eq(&rhs, tol))
        }
    }
}

pub fn verify_classification_identity(s: &Genus, n: usize) -> Result<bool> {
    verify_classification_identity_tol(s, n, tolerance(s))
}

/// Value at `k_target` of the order-`(n+1)` recurrence
/// `sum_j (-1)^j binom(n+1, j) t_{k-j} = rhs(k)` seeded with `t_{-n}..=t_0`
/// (`seed[i]` is `t_{i-n}`).
pub fn propagate_characteristic_numbers<C: Coeff>(
    seed: &[C],
    rhs: impl Fn(i64) -> C,
    k_target: i64,
) -> Result<C> {
    if seed.is_empty() {
        return Err(Error::OutOfRange("seed must hold n + 1 values".into()));
    }
    let n = seed.len() - 1;
    let ni = n as i64;
    let coeffs: Vec<C> = (0..=n + 1)
        .map(|j| C::from_bigint(&binomial(n as u64 + 1, j as u64)) * C::from_i64(sign(j as i64)))
        .collect();
    if (-ni..=0).contains(&k_target) {
        return Ok(seed[(k_target + ni) as usize].clone());
    }
    // window holds t_{lo}..t_{lo+n}
    let mut window: Vec<C> = seed.to_vec();
    if k_target > 0 {
        for k in 1..=k_target {
            // t_k = rhs(k) - sum_{j>=1} coeffs[j] t_{k-j}
            let mut v = rhs(k);
            for j in 1..=n + 1 {
                v = v - coeffs[j].clone() * window[n + 1 - j].clone();
            }
            window.remove(0);
            window.push(v);
        }
        Ok(window[n].clone())
    } else {
        for lo in (k_target..-ni).rev() {
            // equation at k = lo + n + 1 solved for t_lo
            let k = lo + ni + 1;
            let mut v = rhs(k);
            for j in 0..=n {
                v = v - coeffs[j].clone() * window[n - j].clone();
            }
            let t = v / coeffs[n + 1].clone();
            window.pop();
            window.insert(0, t);
        }
        Ok(window[0].clone())
    }
}

/// Main characteristic numbers `dt(n, -n)..=dt(n, 0)`.
pub fn main_numbers<C: Coeff>(s: &Series<C>, n: usize) -> Result<Vec<C>> {
    (-(n as i64)..=0).map(|k| delta_t_series(s, n, k)).collect()
}

/// Duality check through the odd-class sign operator. For
/// `X = ch(O(k)) Td(T) S(T) . 1_1` on `P^n` this returns the degree-0 values of
///
/// * `sigma pi_* X`,
/// * `(-1)^n pi_* sigma X`,
/// * `(-1)^n pi_* X'` where `X'` is the integrand of the dual genus `S^sigma`
///   at twist `-k-n-1`,
///
/// which agree when the sign operator is compatible with push-forward and
/// with dualization. In terms of differences this reads
/// `dt_S(n, k) = (-1)^{n+1} dt_{S^sigma}(n, -k-n-1)`.
pub fn duality_sides<C: Coeff>(s: &Series<C>, n: usize, k: i64) -> Result<[C; 3]> {
    let odd = OddClass::new(integrand(s, n, k)?);
    let fibre_sign = C::from_i64(sign(n as i64));
    let sigma_of_push = odd.pushforward(0)?.sigma().even_part.constant();
    let push_of_sigma = odd.sigma().pushforward(0)?.even_part.constant() * fibre_sign.clone();
    let dual = s.reflect().neg();
    let odd_dual = OddClass::new(integrand(&dual, n, -k - n as i64 - 1)?);
    let dual_push = odd_dual.pushforward(0)?.even_part.constant() * fibre_sign;
    Ok([sigma_of_push, push_of_sigma, dual_push])
}

pub fn verify_duality_symmetry(s: &Genus, n: usize, k: i64) -> Result<bool> {
    let tol = tolerance(s);
    let sides: [Scalar; 3] = match s {
        Genus::Exact(s) => duality_sides(s, n, k)?.map(Scalar::Exact),
        Genus::Numeric(s) => duality_sides(s, n, k)?.map(Scalar::Float),
    };
    Ok(sides[0].approx_eq(&sides[1], tol)? && sides[0].approx_eq(&sides[2], tol)?)
}

pub fn as_exact(g: &Genus) -> Option<&Series<Rational>> {
    match g {
        Genus::Exact(s) => Some(s),
        Genus::Numeric(_) => None,
    }
}
