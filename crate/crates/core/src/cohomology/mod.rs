//! Cohomology rings of products of projective spaces and of `P(L + O)`,
//! characteristic classes of split virtual bundles, the sign operator and
//! Todd-twisted push-forwards.
//!
//! Push-forwards use the algebraic normalization: the top class of a fibre
//! integrates to 1, so no `2 pi i` factors appear anywhere.

mod bundle;
mod ring;

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub use bundle::{
    ch_bundle, genus_eval, sigma_report, todd_eval, verify_sigma_identities, LineClass,
    SigmaReport, VirtualBundle,
};
pub use ring::{degree, CohClass, Monomial, OddClass, RingSpec};

use crate::error::{Error, Result};
use crate::scalar::{binomial, Coeff, Rational};

/// `ch(Lambda^i Q^dual)` on factor `factor` of `ring`, where that factor is
/// `P^n`: `sum_{j=0}^{i} (-1)^j binom(n+1, i-j) e^{j h}`.
pub fn lambda_q_dual_ch_on<C: Coeff>(
    ring: &Arc<RingSpec>,
    factor: usize,
    i: usize,
) -> Result<CohClass<C>> {
    let n = match ring.as_ref() {
        RingSpec::ProductProjective(dims) => {
            *dims.get(factor).ok_or(Error::InvalidFactor(factor))?
        }
        RingSpec::PlBundle(_) => return Err(Error::InvalidFactor(factor)),
    };
    if i > n {
        return Err(Error::OutOfRange(format!(
            "Lambda^{} of a rank-{} bundle",
            i, n
        )));
    }
    let mut out = CohClass::zero(ring);
    for j in 0..=i {
        let mult = binomial(n as u64 + 1, (i - j) as u64);
        let line: CohClass<C> = VirtualBundle::line(ring, factor, j as i64)?.ch()?;
        let c = C::from_bigint(&mult);
        let c = if j % 2 == 0 { c } else { -c };
        out = out.add(&line.scale(&c))?;
    }
    Ok(out)
}

/// `ch(Lambda^i Q^dual)` on `P^n`, for `0 <= i <= n`.
pub fn lambda_q_dual_ch<C: Coeff>(n: usize, i: usize) -> Result<CohClass<C>> {
    lambda_q_dual_ch_on(&RingSpec::projective(n), 0, i)
}

/// Integration over factor `factor`.
pub fn pushforward<C: Coeff>(c: &CohClass<C>, factor: usize) -> Result<CohClass<C>> {
    c.pushforward(factor)
}

/// `f_flat(c) = f_*(c * Td(T_f))`.
pub fn flat_pushforward<C: Coeff>(
    c: &CohClass<C>,
    tangent: &VirtualBundle,
    factor: usize,
) -> Result<CohClass<C>> {
    c.mul(&tangent.todd()?)?.pushforward(factor)
}

/// `chi(P^n, O(k))` as the degree-0 part of `pi_*(ch(O(k)) Td(T_pi))`.
pub fn grr_chi(n: usize, k: i64) -> Result<Rational> {
    let ring = RingSpec::projective(n);
    let ch: CohClass<Rational> = VirtualBundle::line(&ring, 0, k)?.ch()?;
    let tangent = VirtualBundle::tangent_projective(&ring, 0)?;
    Ok(flat_pushforward(&ch, &tangent, 0)?.constant())
}

/// `sum_{i=0}^{n+1} (-1)^i binom(n+1, i) e^{(k-i)h}` in `H*(P^n)`, the
/// alternating Chern character of the twisted Koszul complex. It vanishes.
pub fn koszul_alternating_ch(n: usize, k: i64) -> Result<CohClass<Rational>> {
    koszul_alternating_ch_with(n, k, binomial)
}

/// Same sum with a caller-supplied binomial, for fault-injection tests.
pub fn koszul_alternating_ch_with(
    n: usize,
    k: i64,
    binom: impl Fn(u64, u64) -> BigInt,
) -> Result<CohClass<Rational>> {
    let ring = RingSpec::projective(n);
    let mut out = CohClass::zero(&ring);
    for i in 0..=n + 1 {
        let ch: CohClass<Rational> = VirtualBundle::line(&ring, 0, k - i as i64)?.ch()?;
        let c = Rational::from_integer(binom(n as u64 + 1, i as u64));
        let c = if i % 2 == 0 { c } else { -c };
        out = out.add(&ch.scale(&c))?;
    }
    Ok(out)
}

/// Both routes of the closedness chain for `P^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosednessReport {
    /// `sum_i (-1)^i ch(Lambda^i Q^dual) chi(P^n, O(-i))`.
    pub per_term: CohClass<Rational>,
    /// The diagonal Koszul representative on `P^n x P^n` pushed along the
    /// second projection with the Todd class of the fibre.
    pub diagonal: CohClass<Rational>,
}

impl ClosednessReport {
    pub fn holds(&self) -> bool {
        let one = CohClass::one(self.per_term.ring());
        self.per_term == one && self.diagonal == one
    }
}

pub fn closedness_chain(n: usize) -> Result<ClosednessReport> {
    let ring = RingSpec::projective(n);
    let mut per_term = CohClass::zero(&ring);
    for i in 0..=n {
        let chi = grr_chi(n, -(i as i64))?;
        let term = lambda_q_dual_ch::<Rational>(n, i)?.scale(&chi);
        per_term = if i % 2 == 0 {
            per_term.add(&term)?
        } else {
            per_term.sub(&term)?
        };
    }

    // factor 0 is the fibre of p_2, factor 1 the base
    let square = RingSpec::product(&[n, n]);
    let fibre_tangent = VirtualBundle::tangent_projective(&square, 0)?;
    let mut koszul = CohClass::zero(&square);
    for i in 0..=n {
        let lam = lambda_q_dual_ch_on::<Rational>(&square, 1, i)?;
        let twist: CohClass<Rational> = VirtualBundle::line(&square, 0, -(i as i64))?.ch()?;
        let term = lam.mul(&twist)?;
        koszul = if i % 2 == 0 {
            koszul.add(&term)?
        } else {
            koszul.sub(&term)?
        };
    }
    let diagonal = flat_pushforward(&koszul, &fibre_tangent, 0)?;
    Ok(ClosednessReport { per_term, diagonal })
}

pub fn verify_closedness_chain(n: usize) -> Result<bool> {
    Ok(closedness_chain(n)?.holds())
}

/// `f_*(c_1(omega)^{d+1})` on `X = P(L + O)` over a `d`-dimensional base,
/// with `c_1(omega_{X/Y}) = -l - 2t`. For even `d` this is `-2 l^d`.
pub fn de_rham_pushforward(d: usize) -> Result<CohClass<Rational>> {
    if d % 2 == 1 {
        return Err(Error::OutOfRange(format!(
            "de Rham push-forward needs even d, got {}",
            d
        )));
    }
    let ring = RingSpec::pl_bundle(d);
    let omega = LineClass(vec![-1, -2]).to_class::<Rational>(&ring)?;
    omega.pow(d as u32 + 1).pushforward(1)
}

/// `M[p][i]` = coefficient of `h^p` in `ch(Lambda^i Q^dual)` on `P^n`.
pub fn lambda_basis_matrix(n: usize) -> Result<Vec<Vec<Rational>>> {
    let cols: Vec<CohClass<Rational>> = (0..=n)
        .map(|i| lambda_q_dual_ch(n, i))
        .collect::<Result<_>>()?;
    Ok((0..=n)
        .map(|p| cols.iter().map(|c| c.coeff(&[p as u32])).collect())
        .collect())
}

/// Determinant by fraction-exact Gaussian elimination.
pub fn determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        let (upper, lower) = m.split_at_mut(col + 1);
        let pivot_row = &upper[col];
        for row in lower.iter_mut() {
            let f = &row[col] / &p;
            if f.is_zero() {
                continue;
            }
            for (x, y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= y * &f;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{binomial_poly, integer, rational};

    type Q = CohClass<Rational>;

    fn h(n: usize) -> Q {
        Q::generator(&RingSpec::projective(n), 0).unwrap()
    }

    #[test]
    fn lambda_examples() {
        for n in 0..4 {
            assert_eq!(
                lambda_q_dual_ch::<Rational>(n, 0).unwrap(),
                Q::one(&RingSpec::projective(n))
            );
        }
        let one1 = Q::one(&RingSpec::projective(1));
        assert_eq!(
            lambda_q_dual_ch::<Rational>(1, 1).unwrap(),
            one1.sub(&h(1)).unwrap()
        );
        let r2 = RingSpec::projective(2);
        let expected = Q::one(&r2)
            .sub(&h(2))
            .unwrap()
            .add(&h(2).pow(2).scale(&rational(1, 2)))
            .unwrap();
        assert_eq!(lambda_q_dual_ch::<Rational>(2, 2).unwrap(), expected);
        assert!(lambda_q_dual_ch::<Rational>(2, 3).is_err());
    }

    #[test]
    fn lambda_top_is_canonical_twist() {
        // Lambda^n Q^dual = det Q^dual = O(-1)
        for n in 1..6 {
            let ch: Q = VirtualBundle::line(&RingSpec::projective(n), 0, -1)
                .unwrap()
                .ch()
                .unwrap();
            assert_eq!(lambda_q_dual_ch::<Rational>(n, n).unwrap(), ch);
        }
    }

    #[test]
    fn grr_examples() {
        assert_eq!(grr_chi(1, 1).unwrap(), integer(2));
        for n in 0..5 {
            assert_eq!(grr_chi(n, 0).unwrap(), integer(1));
        }
        assert_eq!(grr_chi(2, -3).unwrap(), integer(1));
        for n in 0..=4 {
            for k in -(n as i64) - 3..4 {
                assert_eq!(grr_chi(n, k).unwrap(), binomial_poly(n as u64, k));
            }
        }
    }

    #[test]
    fn koszul_vanishes() {
        for n in 0..=4 {
            for k in -3..=3 {
                assert!(koszul_alternating_ch(n, k).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn closedness() {
        for n in 0..=3 {
            let report = closedness_chain(n).unwrap();
            assert!(report.holds(), "n = {}", n);
        }
    }

    #[test]
    fn de_rham() {
        for d in [0usize, 2, 4, 6] {
            let expected = Q::generator(&RingSpec::projective(d), 0)
                .map(|l| l.pow(d as u32).scale(&integer(-2)))
                .unwrap_or_else(|_| Q::scalar(&RingSpec::projective(d), integer(-2)));
            assert_eq!(de_rham_pushforward(d).unwrap(), expected, "d = {}", d);
        }
        assert!(de_rham_pushforward(3).is_err());
    }

    #[test]
    fn basis_matrix_invertible() {
        for n in 0..=6 {
            assert!(!determinant(lambda_basis_matrix(n).unwrap()).is_zero());
        }
        assert!(determinant(vec![
            vec![integer(1), integer(2)],
            vec![integer(2), integer(4)]
        ])
        .is_zero());
        assert_eq!(
            determinant(vec![
                vec![integer(0), integer(1)],
                vec![integer(1), integer(0)]
            ]),
            integer(-1)
        );
    }

    #[test]
    fn flat_pushforward_p1() {
        let r = RingSpec::projective(1);
        let t = VirtualBundle::tangent_projective(&r, 0).unwrap();
        // Td(T_P1) = 1 + h, so f_flat(1) = 1
        let v = flat_pushforward(&Q::one(&r), &t, 0).unwrap();
        assert_eq!(v, Q::one(&RingSpec::point()));
    }
}
