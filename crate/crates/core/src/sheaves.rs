//! Split sheaves `sum m_i O(a_i)` on `P^n` over a point: cohomology
//! dimensions, Castelnuovo-Mumford regularity and the ranks of the canonical
//! resolution of a regular sheaf.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::cohomology::{grr_chi, koszul_alternating_ch, CohClass, RingSpec, VirtualBundle};
use crate::error::{Error, Result};
use crate::scalar::{binomial, Rational};

/// `h^q(P^n, O(a))`.
pub fn coh_dim(n: usize, a: i64, q: usize) -> Result<BigInt> {
    if q > n {
        return Err(Error::OutOfRange(format!("h^{} on P^{}", q, n)));
    }
    let n64 = n as i64;
    Ok(if q == 0 && a >= 0 {
        binomial((n64 + a) as u64, n as u64)
    } else if q == n && a < -n64 {
        binomial((-a - 1) as u64, n as u64)
    } else {
        BigInt::zero()
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitSheaf {
    n: usize,
    /// twist -> multiplicity, multiplicities positive
    terms: BTreeMap<i64, u64>,
}

impl SplitSheaf {
    pub fn zero(n: usize) -> Self {
        SplitSheaf {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// `O(a)` on `P^n`.
    pub fn line(n: usize, a: i64) -> Self {
        Self::new(n, [(a, 1)])
    }

    /// Builds a sheaf from `(twist, multiplicity)` pairs; zero multiplicities
    /// are dropped and repeated twists merged.
    pub fn new(n: usize, terms: impl IntoIterator<Item = (i64, u64)>) -> Self {
        let mut out = Self::zero(n);
        for (a, m) in terms {
            if m > 0 {
                *out.terms.entry(a).or_insert(0) += m;
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.terms.iter().map(|(&a, &m)| (a, m))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn rank(&self) -> u64 {
        self.terms.values().sum()
    }

    /// `F(k)`.
    pub fn twist(&self, k: i64) -> Self {
        Self::new(self.n, self.terms().map(|(a, m)| (a + k, m)))
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::RingMismatch);
        }
        Ok(Self::new(self.n, self.terms().chain(other.terms())))
    }

    /// `h^q(F)`.
    pub fn h(&self, q: usize) -> Result<BigInt> {
        self.terms()
            .map(|(a, m)| Ok(coh_dim(self.n, a, q)? * BigInt::from(m)))
            .sum()
    }

    /// `sum_q (-1)^q h^q(F)`.
    pub fn euler_characteristic(&self) -> BigInt {
        (0..=self.n)
            .map(|q| {
                let h = self.h(q).expect("q <= n");
                if q % 2 == 0 {
                    h
                } else {
                    -h
                }
            })
            .sum()
    }

    pub fn ch(&self) -> Result<CohClass<Rational>> {
        let ring = RingSpec::projective(self.n);
        let mut out = CohClass::zero(&ring);
        for (a, m) in self.terms() {
            let line: CohClass<Rational> = VirtualBundle::line(&ring, 0, a)?.ch()?;
            out = out.add(&line.scale(&Rational::from_integer(BigInt::from(m))))?;
        }
        Ok(out)
    }
}

/// `R^q pi_* F(-q) = 0` for every `q > 0`.
pub fn is_regular(f: &SplitSheaf) -> bool {
    f.terms()
        .all(|(a, _)| (1..=f.n).all(|q| coh_dim(f.n, a - q as i64, q).expect("q <= n").is_zero()))
}

/// The least `d` with `F(d)` regular. On `P^0` every twist is regular and the
/// value `-min twist` is returned by convention.
pub fn regularity_threshold(f: &SplitSheaf) -> Result<i64> {
    let min = *f.terms.keys().next().ok_or(Error::ZeroSheaf)?;
    if f.n == 0 {
        return Ok(-min);
    }
    // F(d) fails regularity once some twist drops below -1
    let mut d = -min - f.n as i64 - 2;
    while !is_regular(&f.twist(d)) {
        d += 1;
    }
    Ok(d)
}

/// The rank recursion read off the exact sequences
/// `0 -> G_k -> G_{k-1} (x) Sym^1 V^dual -> ... -> G_0 (x) Sym^k V^dual -> H^0(F(k)) -> 0`
/// for `k = 0..steps`, with `dim V = n + 1`. No sign or regularity checks.
pub fn rank_recursion(f: &SplitSheaf, steps: usize) -> Vec<BigInt> {
    let n = f.n as u64;
    let h0 = |k: i64| -> BigInt {
        f.terms()
            .map(|(a, m)| coh_dim(f.n, a + k, 0).expect("q = 0") * BigInt::from(m))
            .sum()
    };
    let mut ranks: Vec<BigInt> = Vec::with_capacity(steps);
    for k in 0..steps {
        let mut acc = if k % 2 == 0 {
            h0(k as i64)
        } else {
            -h0(k as i64)
        };
        for j in 1..=k {
            let term = &ranks[k - j] * binomial(n + j as u64, n);
            // move (-1)^j r_{k-j} binom(n+j, n) to the other side
            if j % 2 == 0 {
                acc -= term;
            } else {
                acc += term;
            }
        }
        ranks.push(acc);
    }
    ranks
}

/// Ranks `[r_0, ..., r_n]` of the canonical resolution of a regular sheaf.
pub fn canonical_resolution_ranks(f: &SplitSheaf) -> Result<Vec<BigInt>> {
    if !is_regular(f) {
        return Err(Error::NotRegular);
    }
    let ranks = rank_recursion(f, f.n + 1);
    if let Some((index, value)) = ranks.iter().enumerate().find(|(_, r)| r.is_negative()) {
        return Err(Error::NegativeRank {
            index,
            value: value.to_string(),
        });
    }
    Ok(ranks)
}

/// `ch(F) = sum_i (-1)^i r_i e^{-ih}` in `H*(P^n)`.
pub fn verify_resolution_ch(f: &SplitSheaf) -> Result<bool> {
    let ranks = canonical_resolution_ranks(f)?;
    let ring = RingSpec::projective(f.n);
    let mut rhs = CohClass::zero(&ring);
    for (i, r) in ranks.iter().enumerate() {
        let line: CohClass<Rational> = VirtualBundle::line(&ring, 0, -(i as i64))?.ch()?;
        let term = line.scale(&Rational::from_integer(r.clone()));
        rhs = if i % 2 == 0 {
            rhs.add(&term)?
        } else {
            rhs.sub(&term)?
        };
    }
    Ok(f.ch()? == rhs)
}

/// `chi(F)` through Riemann-Roch, one line at a time.
pub fn grr_euler_characteristic(f: &SplitSheaf) -> Result<Rational> {
    f.terms()
        .map(|(a, m)| Ok(grr_chi(f.n, a)? * Rational::from_integer(BigInt::from(m))))
        .sum()
}

/// Terms of the twisted Koszul complex `K(k)` on `P^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct KoszulComplex {
    /// `(binom(n+1, i), k - i)` for `i = 0..=n+1`.
    pub terms: Vec<(BigInt, i64)>,
    /// Whether the alternating Chern character sum vanishes in `H*(P^n)`.
    pub ch_sum_vanishes: bool,
}

pub fn koszul_complex(n: usize, k: i64) -> Result<KoszulComplex> {
    let terms = (0..=n + 1)
        .map(|i| (binomial(n as u64 + 1, i as u64), k - i as i64))
        .collect();
    Ok(KoszulComplex {
        terms,
        ch_sum_vanishes: koszul_alternating_ch(n, k)?.is_zero(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn cohomology_dimensions() {
        assert_eq!(coh_dim(2, 3, 0).unwrap(), BigInt::from(10));
        assert_eq!(coh_dim(1, -2, 1).unwrap(), BigInt::from(1));
        for a in -8..8 {
            assert!(coh_dim(3, a, 1).unwrap().is_zero());
        }
        assert!(coh_dim(2, 0, 3).is_err());
    }

    #[test]
    fn regularity() {
        for n in 0..5 {
            assert!(is_regular(&SplitSheaf::line(n, 0)));
        }
        assert!(!is_regular(&SplitSheaf::line(1, -1)));
        assert!(is_regular(&SplitSheaf::new(2, [(3, 1), (0, 1)])));
        assert!(is_regular(&SplitSheaf::zero(3)));
    }

    #[test]
    fn thresholds() {
        assert_eq!(regularity_threshold(&SplitSheaf::line(2, -5)).unwrap(), 5);
        assert_eq!(regularity_threshold(&SplitSheaf::line(3, 2)).unwrap(), -2);
        assert_eq!(regularity_threshold(&SplitSheaf::line(2, 0)).unwrap(), 0);
        assert_eq!(
            regularity_threshold(&SplitSheaf::new(2, [(4, 1), (-3, 2)])).unwrap(),
            3
        );
        assert_eq!(
            regularity_threshold(&SplitSheaf::zero(2)),
            Err(Error::ZeroSheaf)
        );
    }

    #[test]
    fn resolution_ranks() {
        assert_eq!(
            canonical_resolution_ranks(&SplitSheaf::line(2, 1)).unwrap(),
            big(&[3, 3, 1])
        );
        assert_eq!(
            canonical_resolution_ranks(&SplitSheaf::line(3, 0)).unwrap(),
            big(&[1, 0, 0, 0])
        );
        assert_eq!(
            canonical_resolution_ranks(&SplitSheaf::line(1, 2)).unwrap(),
            big(&[3, 2])
        );
        assert_eq!(
            canonical_resolution_ranks(&SplitSheaf::line(1, -1)),
            Err(Error::NotRegular)
        );
    }

    #[test]
    fn resolution_terminates() {
        for n in 1..5 {
            for a in 0..5 {
                let r = rank_recursion(&SplitSheaf::line(n, a), n + 2);
                assert!(r[n + 1].is_zero(), "n = {}, a = {}", n, a);
            }
        }
        // a non-regular input leaks past the last step
        let r = rank_recursion(&SplitSheaf::line(1, -1), 3);
        assert!(r.iter().any(|x| x.is_negative()) || !r[2].is_zero());
    }

    #[test]
    fn resolution_ch() {
        assert!(verify_resolution_ch(&SplitSheaf::line(1, 1)).unwrap());
        assert!(verify_resolution_ch(&SplitSheaf::line(4, 0)).unwrap());
        assert!(verify_resolution_ch(&SplitSheaf::line(1, 2)).unwrap());
        assert!(verify_resolution_ch(&SplitSheaf::new(3, [(1, 2), (4, 1)])).unwrap());
    }

    #[test]
    fn koszul_terms() {
        let k = koszul_complex(1, 0).unwrap();
        assert_eq!(
            k.terms,
            vec![
                (BigInt::from(1), 0),
                (BigInt::from(2), -1),
                (BigInt::from(1), -2)
            ]
        );
        assert!(k.ch_sum_vanishes);
        let k = koszul_complex(0, 5).unwrap();
        assert_eq!(k.terms, vec![(BigInt::from(1), 5), (BigInt::from(1), 4)]);
        let k = koszul_complex(2, 1).unwrap();
        assert_eq!(
            k.terms,
            vec![
                (BigInt::from(1), 1),
                (BigInt::from(3), 0),
                (BigInt::from(3), -1),
                (BigInt::from(1), -2)
            ]
        );
        assert!(k.ch_sum_vanishes);
    }

    #[test]
    fn euler_characteristic_matches_grr() {
        let f = SplitSheaf::new(3, [(-6, 1), (-1, 2), (2, 3)]);
        assert_eq!(
            Rational::from_integer(f.euler_characteristic()),
            grr_euler_characteristic(&f).unwrap()
        );
    }
}
