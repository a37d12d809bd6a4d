use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{sign, Coeff};
use crate::series::{standard_series, Series, StandardSeries};

use super::ring::{CohClass, RingSpec};

/// A degree-1 class with integer coefficients on the ring generators; the
/// first Chern class of a line bundle.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LineClass(pub Vec<i64>);

impl LineClass {
    pub fn zero(ring: &RingSpec) -> Self {
        LineClass(vec![0; ring.generators()])
    }

    /// `k * h_factor`.
    pub fn multiple(ring: &RingSpec, factor: usize, k: i64) -> Result<Self> {
        let mut v = vec![0; ring.generators()];
        *v.get_mut(factor).ok_or(Error::InvalidFactor(factor))? = k;
        Ok(LineClass(v))
    }

    pub fn neg(&self) -> Self {
        LineClass(self.0.iter().map(|c| -c).collect())
    }

    pub fn scaled(&self, k: i64) -> Self {
        LineClass(self.0.iter().map(|c| c * k).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        LineClass(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn to_class<C: Coeff>(&self, ring: &Arc<RingSpec>) -> Result<CohClass<C>> {
        if self.0.len() != ring.generators() {
            return Err(Error::NotALineClass);
        }
        let mut out = CohClass::zero(ring);
        for (i, &c) in self.0.iter().enumerate() {
            if c != 0 {
                let g = CohClass::generator(ring, i)?.scale(&C::from_i64(c));
                out = out.add(&g)?;
            }
        }
        Ok(out)
    }
}

/// A virtual bundle given by Chern roots: `(-1)^shift * sum mult_i * L_i`.
///
/// Non-split bundles such as the tangent bundle or the universal quotient
/// enter through their defining exact sequences. `shift` is a homological
/// degree offset; a determinant is concentrated in degree equal to the rank.
#[derive(Clone, Debug, PartialEq)]
pub struct VirtualBundle {
    ring: Arc<RingSpec>,
    terms: Vec<(i64, LineClass)>,
    shift: i64,
}

impl VirtualBundle {
    pub fn new(ring: &Arc<RingSpec>, terms: Vec<(i64, LineClass)>, shift: i64) -> Result<Self> {
        if terms.iter().any(|(_, r)| r.0.len() != ring.generators()) {
            return Err(Error::NotALineClass);
        }
        Ok(VirtualBundle {
            ring: ring.clone(),
            terms,
            shift,
        })
    }

    pub fn trivial(ring: &Arc<RingSpec>, rank: i64) -> Self {
        VirtualBundle {
            ring: ring.clone(),
            terms: vec![(rank, LineClass::zero(ring))],
            shift: 0,
        }
    }

    /// `O(k)` pulled back from factor `factor`.
    pub fn line(ring: &Arc<RingSpec>, factor: usize, k: i64) -> Result<Self> {
        Ok(VirtualBundle {
            ring: ring.clone(),
            terms: vec![(1, LineClass::multiple(ring, factor, k)?)],
            shift: 0,
        })
    }

    fn projective_dim(ring: &RingSpec, factor: usize) -> Result<i64> {
        match ring {
            RingSpec::ProductProjective(dims) => dims
                .get(factor)
                .map(|&n| n as i64)
                .ok_or(Error::InvalidFactor(factor)),
            RingSpec::PlBundle(_) => Err(Error::InvalidFactor(factor)),
        }
    }

    /// Tangent bundle of factor `factor`, from `0 -> O -> O(1)^{n+1} -> T -> 0`.
    pub fn tangent_projective(ring: &Arc<RingSpec>, factor: usize) -> Result<Self> {
        let n = Self::projective_dim(ring, factor)?;
        Ok(VirtualBundle {
            ring: ring.clone(),
            terms: vec![
                (n + 1, LineClass::multiple(ring, factor, 1)?),
                (-1, LineClass::zero(ring)),
            ],
            shift: 0,
        })
    }

    /// Universal quotient `Q = V (x) O / O(-1)` of factor `factor`.
    pub fn universal_quotient(ring: &Arc<RingSpec>, factor: usize) -> Result<Self> {
        let n = Self::projective_dim(ring, factor)?;
        Ok(VirtualBundle {
            ring: ring.clone(),
            terms: vec![
                (n + 1, LineClass::zero(ring)),
                (-1, LineClass::multiple(ring, factor, -1)?),
            ],
            shift: 0,
        })
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn terms(&self) -> &[(i64, LineClass)] {
        &self.terms
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// Rank including the sign of the shift.
    pub fn rank(&self) -> i64 {
        sign(self.shift) * self.terms.iter().map(|(m, _)| m).sum::<i64>()
    }

    pub fn shifted(&self, by: i64) -> Self {
        VirtualBundle {
            shift: self.shift + by,
            ..self.clone()
        }
    }

    pub fn dual(&self) -> Self {
        VirtualBundle {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, r)| (*m, r.neg())).collect(),
            shift: self.shift,
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        // a shift difference of one flips every multiplicity
        let flip = sign(other.shift - self.shift);
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().map(|(m, r)| (flip * m, r.clone())));
        Ok(VirtualBundle {
            ring: self.ring.clone(),
            terms,
            shift: self.shift,
        })
    }

    /// First Chern class as an integer combination of generators.
    pub fn c1(&self) -> LineClass {
        let s = sign(self.shift);
        self.terms
            .iter()
            .fold(LineClass::zero(&self.ring), |acc, (m, r)| {
                acc.add(&r.scaled(s * m))
            })
    }

    /// The determinant line, placed in homological degree `rank`.
    pub fn det(&self) -> Self {
        VirtualBundle {
            ring: self.ring.clone(),
            terms: vec![(1, self.c1())],
            shift: self.rank(),
        }
    }

    fn top_order(&self) -> usize {
        self.ring.top_degree()
    }

    /// `ch(B) = (-1)^shift sum mult * e^{root}`.
    pub fn ch<C: Coeff>(&self) -> Result<CohClass<C>> {
        let exp: Series<C> = standard_series(&StandardSeries::Exp, self.top_order());
        let s = C::from_i64(sign(self.shift));
        let mut out = CohClass::zero(&self.ring);
        for (m, root) in &self.terms {
            let e = CohClass::eval_series(&exp, &root.to_class(&self.ring)?)?;
            out = out.add(&e.scale(&(C::from_i64(*m) * s.clone())))?;
        }
        Ok(out)
    }

    /// `Td(B) = prod Td(root)^{(-1)^shift mult}`.
    pub fn todd<C: Coeff>(&self) -> Result<CohClass<C>> {
        let order = self.top_order();
        let td: Series<C> = standard_series(&StandardSeries::Todd, order);
        let td_inv: Series<C> = standard_series(&StandardSeries::ToddInv, order);
        let mut out = CohClass::one(&self.ring);
        for (m, root) in &self.terms {
            let e = sign(self.shift) * m;
            let x = root.to_class(&self.ring)?;
            let base = CohClass::eval_series(if e >= 0 { &td } else { &td_inv }, &x)?;
            out = out.mul(&base.pow(e.unsigned_abs() as u32))?;
        }
        Ok(out)
    }

    /// Additive genus `S(B) = (-1)^shift sum mult * S(root)`, constant term
    /// included once per line.
    pub fn genus<C: Coeff>(&self, s: &Series<C>) -> Result<CohClass<C>> {
        let sg = C::from_i64(sign(self.shift));
        let mut out = CohClass::zero(&self.ring);
        for (m, root) in &self.terms {
            let v = CohClass::eval_series(s, &root.to_class(&self.ring)?)?;
            out = out.add(&v.scale(&(C::from_i64(*m) * sg.clone())))?;
        }
        Ok(out)
    }
}

/// `ch(B)`.
pub fn ch_bundle<C: Coeff>(b: &VirtualBundle) -> Result<CohClass<C>> {
    b.ch()
}

pub fn todd_eval<C: Coeff>(b: &VirtualBundle) -> Result<CohClass<C>> {
    b.todd()
}

pub fn genus_eval<C: Coeff>(s: &Series<C>, b: &VirtualBundle) -> Result<CohClass<C>> {
    b.genus(s)
}

/// Result of checking the three sign-operator compatibilities on one bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaReport {
    /// `sigma ch(B) = ch(B^dual)`.
    pub ch_dual: bool,
    /// `sigma ch(det B) = ch(det B)^{-1}`.
    pub det_inverse: bool,
    /// `sigma Td(B) = (-1)^rk Td(B) ch(det B^dual)`.
    pub todd_twist: bool,
}

impl SigmaReport {
    pub fn all(&self) -> bool {
        self.ch_dual && self.det_inverse && self.todd_twist
    }
}

pub fn sigma_report<C: Coeff>(b: &VirtualBundle, tol: f64) -> Result<SigmaReport> {
    let ch: CohClass<C> = b.ch()?;
    let ch_dual = ch.sigma().approx_eq(&b.dual().ch()?, tol);

    let det = b.det();
    let ch_det: CohClass<C> = det.ch()?;
    let det_inverse = ch_det.sigma().approx_eq(&ch_det.inverse()?, tol);

    let td: CohClass<C> = b.todd()?;
    let rhs = td
        .mul(&det.dual().ch()?)?
        .scale(&C::from_i64(sign(b.rank())));
    let todd_twist = td.sigma().approx_eq(&rhs, tol);

    Ok(SigmaReport {
        ch_dual,
        det_inverse,
        todd_twist,
    })
}

/// Exact check of the three sign-operator compatibilities.
pub fn verify_sigma_identities(b: &VirtualBundle) -> Result<bool> {
    Ok(sigma_report::<crate::scalar::Rational>(b, 0.0)?.all())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{integer, rational, Rational};

    type Q = CohClass<Rational>;

    fn h(ring: &Arc<RingSpec>) -> Q {
        Q::generator(ring, 0).unwrap()
    }

    #[test]
    fn ch_of_lines() {
        let r = RingSpec::projective(1);
        for k in -3..=3 {
            let ch: Q = VirtualBundle::line(&r, 0, k).unwrap().ch().unwrap();
            assert_eq!(ch, Q::one(&r).add(&h(&r).scale(&integer(k))).unwrap());
        }
        let r3 = RingSpec::projective(3);
        let ch: Q = VirtualBundle::trivial(&r3, 4).ch().unwrap();
        assert_eq!(ch, Q::scalar(&r3, integer(4)));
    }

    #[test]
    fn genus_of_tangent_p1() {
        let r = RingSpec::projective(1);
        let t = VirtualBundle::tangent_projective(&r, 0).unwrap();
        let s = Series::from_coeffs(vec![integer(0), integer(1)]).unwrap();
        assert_eq!(t.genus(&s).unwrap(), h(&r).scale(&integer(2)));
        // trivial bundle: r * a0
        let s = Series::from_coeffs(vec![integer(3), integer(1), integer(5)]).unwrap();
        let triv = VirtualBundle::trivial(&r, 2);
        assert_eq!(triv.genus(&s).unwrap(), Q::scalar(&r, integer(6)));
    }

    #[test]
    fn todd_of_tangent_p2() {
        let r = RingSpec::projective(2);
        let td: Q = VirtualBundle::tangent_projective(&r, 0)
            .unwrap()
            .todd()
            .unwrap();
        let expected = Q::one(&r)
            .add(&h(&r).scale(&rational(3, 2)))
            .unwrap()
            .add(&h(&r).pow(2))
            .unwrap();
        assert_eq!(td, expected);
    }

    #[test]
    fn quotient_dual_on_p1() {
        let r = RingSpec::projective(1);
        let ch: Q = VirtualBundle::universal_quotient(&r, 0)
            .unwrap()
            .dual()
            .ch()
            .unwrap();
        assert_eq!(ch, Q::one(&r).sub(&h(&r)).unwrap());
    }

    #[test]
    fn det_shift_sign() {
        let r = RingSpec::projective(2);
        let t = VirtualBundle::tangent_projective(&r, 0).unwrap();
        assert_eq!(t.rank(), 2);
        let det = t.det();
        assert_eq!(det.shift(), 2);
        assert_eq!(det.c1(), LineClass(vec![3]));
        let shifted = t.shifted(1);
        assert_eq!(shifted.rank(), -2);
        let ch: Q = shifted.ch().unwrap();
        assert_eq!(ch, t.ch::<Rational>().unwrap().neg());
    }

    #[test]
    fn sigma_identities_examples() {
        for k in -3..=3 {
            let b = VirtualBundle::line(&RingSpec::projective(3), 0, k).unwrap();
            assert!(verify_sigma_identities(&b).unwrap());
        }
        let t = VirtualBundle::tangent_projective(&RingSpec::projective(2), 0).unwrap();
        assert!(verify_sigma_identities(&t).unwrap());
        assert!(verify_sigma_identities(&t.shifted(1)).unwrap());
    }

    #[test]
    fn dropping_det_shift_breaks_todd_identity() {
        // rank 1 line: without the (-1)^rk from the shifted determinant the
        // third identity fails
        let r = RingSpec::projective(2);
        let b = VirtualBundle::line(&r, 0, 1).unwrap();
        let td: Q = b.todd().unwrap();
        let unshifted = VirtualBundle::new(&r, vec![(1, b.c1().neg())], 0).unwrap();
        let rhs = td
            .mul(&unshifted.ch().unwrap())
            .unwrap()
            .scale(&integer(sign(b.rank())));
        assert!(!td.sigma().approx_eq(&rhs, 0.0));
    }

    #[test]
    fn direct_sum_rank() {
        let r = RingSpec::projective(2);
        let a = VirtualBundle::line(&r, 0, 1).unwrap();
        let b = VirtualBundle::line(&r, 0, -2).unwrap().shifted(1);
        let s = a.direct_sum(&b).unwrap();
        assert_eq!(s.rank(), 0);
        let lhs: Q = s.ch().unwrap();
        let rhs = a.ch::<Rational>().unwrap().add(&b.ch().unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
}
