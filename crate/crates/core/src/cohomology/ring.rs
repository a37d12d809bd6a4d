use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{Coeff, Rational};
use crate::series::Series;

/// Exponent vector over the ring generators.
pub type Monomial = Vec<u32>;

/// The cohomology rings the crate computes in.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingSpec {
    /// `H*(P^{n_1} x ... x P^{n_k})`, generators `h_i` with `h_i^{n_i + 1} = 0`.
    /// The empty product is the point.
    ProductProjective(Vec<usize>),
    /// `H*(P(L + O))` over a `d`-dimensional base: generators `l` (base class)
    /// and `t = c_1(O(1))` with `l^{d+1} = 0` and `t^2 + l t = 0`.
    PlBundle(usize),
}

impl RingSpec {
    pub fn point() -> Arc<RingSpec> {
        Arc::new(RingSpec::ProductProjective(Vec::new()))
    }

    pub fn projective(n: usize) -> Arc<RingSpec> {
        Arc::new(RingSpec::ProductProjective(vec![n]))
    }

    pub fn product(dims: &[usize]) -> Arc<RingSpec> {
        Arc::new(RingSpec::ProductProjective(dims.to_vec()))
    }

    pub fn pl_bundle(d: usize) -> Arc<RingSpec> {
        Arc::new(RingSpec::PlBundle(d))
    }

    pub fn generators(&self) -> usize {
        match self {
            RingSpec::ProductProjective(dims) => dims.len(),
            RingSpec::PlBundle(_) => 2,
        }
    }

    /// Complex dimension of the underlying variety.
    pub fn top_degree(&self) -> usize {
        match self {
            RingSpec::ProductProjective(dims) => dims.iter().sum(),
            RingSpec::PlBundle(d) => d + 1,
        }
    }

    /// Rewrites a monomial to normal form: `None` if it vanishes, otherwise
    /// the sign picked up and the reduced monomial.
    pub fn reduce(&self, mut m: Monomial) -> Option<(i64, Monomial)> {
        match self {
            RingSpec::ProductProjective(dims) => {
                if m.iter().zip(dims).any(|(&e, &n)| e as usize > n) {
                    None
                } else {
                    Some((1, m))
                }
            }
            RingSpec::PlBundle(d) => {
                // t^j = (-l)^{j-1} t for j >= 1
                let (a, j) = (m[0], m[1]);
                let (sign, a, j) = if j >= 1 {
                    (if (j - 1) % 2 == 0 { 1 } else { -1 }, a + j - 1, 1)
                } else {
                    (1, a, 0)
                };
                if a as usize > *d {
                    return None;
                }
                m[0] = a;
                m[1] = j;
                Some((sign, m))
            }
        }
    }

    /// Normal-form monomials spanning the ring.
    pub fn basis(&self) -> Vec<Monomial> {
        match self {
            RingSpec::ProductProjective(dims) => {
                let mut out = vec![Vec::new()];
                for &n in dims {
                    out = out
                        .into_iter()
                        .flat_map(|m: Monomial| {
                            (0..=n as u32).map(move |e| {
                                let mut m = m.clone();
                                m.push(e);
                                m
                            })
                        })
                        .collect();
                }
                out
            }
            RingSpec::PlBundle(d) => (0..=*d as u32)
                .flat_map(|a| [vec![a, 0], vec![a, 1]])
                .collect(),
        }
    }

    fn generator_name(&self, i: usize) -> String {
        match self {
            RingSpec::ProductProjective(dims) if dims.len() == 1 => "h".to_string(),
            RingSpec::ProductProjective(_) => format!("h{}", i + 1),
            RingSpec::PlBundle(_) => ["l", "t"][i].to_string(),
        }
    }
}

pub fn degree(m: &Monomial) -> usize {
    m.iter().map(|&e| e as usize).sum()
}

/// An even cohomology class; the degree-`p` part has Deligne bidegree `(2p, p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CohClass<C> {
    ring: Arc<RingSpec>,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> CohClass<C> {
    pub fn zero(ring: &Arc<RingSpec>) -> Self {
        CohClass {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(ring: &Arc<RingSpec>, c: C) -> Self {
        let mut out = Self::zero(ring);
        out.push(vec![0; ring.generators()], c);
        out
    }

    pub fn one(ring: &Arc<RingSpec>) -> Self {
        Self::scalar(ring, C::one())
    }

    /// The generator `i` (`h_i`, or `l`/`t` on a bundle ring).
    pub fn generator(ring: &Arc<RingSpec>, i: usize) -> Result<Self> {
        if i >= ring.generators() {
            return Err(Error::InvalidFactor(i));
        }
        let mut m = vec![0; ring.generators()];
        m[i] = 1;
        Ok(Self::monomial(ring, m, C::one()))
    }

    /// `c * m`, reduced by the ring relations.
    pub fn monomial(ring: &Arc<RingSpec>, m: Monomial, c: C) -> Self {
        let mut out = Self::zero(ring);
        out.push(m, c);
        out
    }

    fn push(&mut self, m: Monomial, c: C) {
        assert_eq!(m.len(), self.ring.generators(), "monomial arity");
        let Some((sign, m)) = self.ring.reduce(m) else {
            return;
        };
        let c = if sign < 0 { -c } else { c };
        let sum = match self.terms.remove(&m) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(m, sum);
        }
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &[u32]) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree-0 coefficient.
    pub fn constant(&self) -> C {
        self.coeff(&vec![0; self.ring.generators()])
    }

    pub fn homogeneous_part(&self, p: usize) -> Self {
        CohClass {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| degree(m) == p)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn is_homogeneous(&self, p: usize) -> bool {
        self.terms.keys().all(|m| degree(m) == p)
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.push(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let mut out = Self::zero(&self.ring);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let m = a.iter().zip(b).map(|(i, j)| i + j).collect();
                out.push(m, x.clone() * y.clone());
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(&self.ring);
        for (m, x) in &self.terms {
            out.push(m.clone(), x.clone() * c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-C::one())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        for _ in 0..e {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    /// `sum_k a_k x^k` for a class `x` without constant term. The sum is finite
    /// because `x` is nilpotent; the series must reach the last nonzero power.
    pub fn eval_series(series: &Series<C>, x: &Self) -> Result<Self> {
        if !x.constant().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let mut acc = Self::zero(&x.ring);
        let mut power = Self::one(&x.ring);
        let mut k = 0;
        while !power.is_zero() {
            if k > series.order() {
                return Err(Error::OrderTooLow {
                    have: series.order(),
                    need: k,
                });
            }
            acc = acc.add(&power.scale(&series.coeff(k)))?;
            power = power.mul(x)?;
            k += 1;
        }
        Ok(acc)
    }

    /// Multiplicative inverse of a class with invertible constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.constant();
        if c0.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let inv0 = C::one() / c0.clone();
        // (c0 + N)^{-1} = c0^{-1} sum_k (-N/c0)^k
        let nil = self
            .sub(&Self::scalar(&self.ring, c0))?
            .scale(&-inv0.clone());
        let mut acc = Self::zero(&self.ring);
        let mut power = Self::one(&self.ring);
        while !power.is_zero() {
            acc = acc.add(&power)?;
            power = power.mul(&nil)?;
        }
        Ok(acc.scale(&inv0))
    }

    /// The sign operator: the degree-`p` part is scaled by `(-1)^p`.
    pub fn sigma(&self) -> Self {
        CohClass {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    (
                        m.clone(),
                        if degree(m).is_multiple_of(2) {
                            c.clone()
                        } else {
                            -c.clone()
                        },
                    )
                })
                .collect(),
        }
    }

    /// Integration along a fibre.
    ///
    /// On a product ring this integrates over factor `factor` (coefficient of
    /// `h_factor^{n_factor}`), landing in the product of the remaining factors.
    /// On a `P(L + O)` ring `factor` must be 1 and the result is the
    /// coefficient of `t`, a class on the base `P^d`-like ring in the variable
    /// `l`. The top class integrates to 1.
    pub fn pushforward(&self, factor: usize) -> Result<Self> {
        match self.ring.as_ref() {
            RingSpec::ProductProjective(dims) => {
                let &n = dims.get(factor).ok_or(Error::InvalidFactor(factor))?;
                let mut rest = dims.clone();
                rest.remove(factor);
                let target = Arc::new(RingSpec::ProductProjective(rest));
                let mut out = Self::zero(&target);
                for (m, c) in &self.terms {
                    if m[factor] as usize == n {
                        let mut m = m.clone();
                        m.remove(factor);
                        out.push(m, c.clone());
                    }
                }
                Ok(out)
            }
            RingSpec::PlBundle(d) => {
                if factor != 1 {
                    return Err(Error::InvalidFactor(factor));
                }
                let target = RingSpec::projective(*d);
                let mut out = Self::zero(&target);
                for (m, c) in &self.terms {
                    if m[1] == 1 {
                        out.push(vec![m[0]], c.clone());
                    }
                }
                Ok(out)
            }
        }
    }

    /// Pull-back along the projection forgetting factor `factor` of `target`.
    pub fn pullback(&self, target: &Arc<RingSpec>, factor: usize) -> Result<Self> {
        let RingSpec::ProductProjective(dims) = target.as_ref() else {
            return Err(Error::RingMismatch);
        };
        if factor >= dims.len() {
            return Err(Error::InvalidFactor(factor));
        }
        let mut rest = dims.clone();
        rest.remove(factor);
        if *self.ring != RingSpec::ProductProjective(rest) {
            return Err(Error::RingMismatch);
        }
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut m = m.clone();
            m.insert(factor, 0);
            out.push(m, c.clone());
        }
        Ok(out)
    }

    /// Coefficient-wise comparison within `tol` (exact when `tol == 0` and the
    /// field is exact).
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        match self.sub(other) {
            Ok(d) => d.terms.values().all(|c| c.magnitude() <= tol),
            Err(_) => false,
        }
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> CohClass<D> {
        let mut out = CohClass::zero(&self.ring);
        for (m, c) in &self.terms {
            out.push(m.clone(), f(c));
        }
        out
    }
}

impl CohClass<Rational> {
    pub fn to_numeric(&self) -> CohClass<f64> {
        self.map(f64::from_rational)
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for CohClass<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{}", c)?;
            for (g, &e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*{}", self.ring.generator_name(g))?,
                    _ => write!(f, "*{}^{}", self.ring.generator_name(g), e)?,
                }
            }
        }
        Ok(())
    }
}

/// An even class multiplied by the degree-(1,1) unit class; its degree-`q`
/// part sits in Deligne bidegree `(2q+1, q+1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct OddClass<C> {
    pub even_part: CohClass<C>,
}

impl<C: Coeff> OddClass<C> {
    pub fn new(even_part: CohClass<C>) -> Self {
        OddClass { even_part }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(OddClass::new(self.even_part.add(&other.even_part)?))
    }

    pub fn mul_even(&self, c: &CohClass<C>) -> Result<Self> {
        Ok(OddClass::new(self.even_part.mul(c)?))
    }

    /// Products of two odd classes are outside the modelled algebra.
    pub fn mul_odd(&self, _other: &Self) -> Result<Self> {
        Err(Error::OddTimesOdd)
    }

    /// `(-1)^{q+1}` on the degree-`q` part of the even factor.
    pub fn sigma(&self) -> Self {
        OddClass::new(self.even_part.sigma().neg())
    }

    /// The unit class is pulled back from the base, so integration acts on the
    /// even factor.
    pub fn pushforward(&self, factor: usize) -> Result<Self> {
        Ok(OddClass::new(self.even_part.pushforward(factor)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{integer, rational};

    type Q = CohClass<Rational>;

    #[test]
    fn truncation_on_p1() {
        let r = RingSpec::projective(1);
        let h = Q::generator(&r, 0).unwrap();
        assert!(h.mul(&h).unwrap().is_zero());
        assert_eq!(r.basis().len(), 2);
    }

    #[test]
    fn bundle_ring_relation() {
        let r = RingSpec::pl_bundle(2);
        let l = Q::generator(&r, 0).unwrap();
        let t = Q::generator(&r, 1).unwrap();
        let rel = t.mul(&t).unwrap().add(&l.mul(&t).unwrap()).unwrap();
        assert!(rel.is_zero());
        assert!(l.pow(3).is_zero());
        assert_eq!(r.basis().len(), 6);
        // (l + 2t)^2 = l^2 + 4lt + 4t^2 = l^2
        let s = l.add(&t.scale(&integer(2))).unwrap();
        assert_eq!(s.pow(2), l.pow(2));
    }

    #[test]
    fn pushforwards() {
        let r = RingSpec::projective(1);
        let h = Q::generator(&r, 0).unwrap();
        assert_eq!(h.pushforward(0).unwrap(), Q::one(&RingSpec::point()));
        assert!(Q::one(&r).pushforward(0).unwrap().is_zero());
        assert_eq!(h.pushforward(1), Err(Error::InvalidFactor(1)));

        let r2 = RingSpec::product(&[1, 1]);
        let h1 = Q::generator(&r2, 0).unwrap();
        let h2 = Q::generator(&r2, 1).unwrap();
        let down = h1.mul(&h2).unwrap().pushforward(0).unwrap();
        assert_eq!(down, Q::generator(&RingSpec::projective(1), 0).unwrap());
    }

    #[test]
    fn sigma_examples() {
        let r = RingSpec::projective(1);
        assert_eq!(Q::one(&r).sigma(), Q::one(&r));
        let h = Q::generator(&r, 0).unwrap();
        assert_eq!(h.sigma(), h.neg());
        let odd = OddClass::new(Q::one(&RingSpec::point()));
        assert_eq!(odd.sigma(), OddClass::new(Q::one(&RingSpec::point()).neg()));
        assert_eq!(odd.mul_odd(&odd), Err(Error::OddTimesOdd));
    }

    #[test]
    fn inverse_and_series() {
        let r = RingSpec::projective(3);
        let h = Q::generator(&r, 0).unwrap();
        let c = Q::one(&r).add(&h.scale(&rational(1, 2))).unwrap();
        let inv = c.inverse().unwrap();
        assert_eq!(c.mul(&inv).unwrap(), Q::one(&r));
        let short: Series<Rational> = Series::one(2);
        assert_eq!(
            Q::eval_series(&short, &h),
            Err(Error::OrderTooLow { have: 2, need: 3 })
        );
    }

    #[test]
    fn ring_mismatch() {
        let a = Q::one(&RingSpec::projective(1));
        let b = Q::one(&RingSpec::projective(2));
        assert_eq!(a.add(&b), Err(Error::RingMismatch));
    }

    #[test]
    fn display() {
        let r = RingSpec::projective(2);
        let h = Q::generator(&r, 0).unwrap();
        let c = Q::one(&r).sub(&h).unwrap();
        assert_eq!(c.to_string(), "1 + -1*h");
    }
}
