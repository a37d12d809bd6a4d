//! The `log|w|` singularity of torsion for families of nodal curves.
//!
//! [`tdm_gamma_terms`] expands the integrand
//! `ch(F) Td(f) Td(eta) Td^{-1}(L0) [bracket]` over formal first Chern classes,
//! keeping terms of symbol degree at most one. [`logw_coefficient`] then
//! applies the local estimates near a fibre with `n_p` nodes, which replace
//! each `log|1| * c_1` product by a multiple of `n_p`.

pub mod quadrature;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{integer, rational, Rational};

/// Formal first Chern classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    /// `c_1(T_X)` and its pull-backs.
    CTX,
    /// `c_1(T_S)`, pulled back from the base.
    CTS,
    /// `c_1(L0)`.
    CL0,
    /// `c_1(U)`, the pulled-back universal bundle.
    CU,
    /// `c_1(O(E))` with the metric `|| ||_1`.
    COE,
}

impl Symbol {
    pub const ALL: [Symbol; 5] = [
        Symbol::CTX,
        Symbol::CTS,
        Symbol::CL0,
        Symbol::CU,
        Symbol::COE,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Symbol::CTX => "cTX",
            Symbol::CTS => "cTS",
            Symbol::CL0 => "cL0",
            Symbol::CU => "cU",
            Symbol::COE => "cOE",
        }
    }
}

/// Which non-closed factor multiplies a term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Marker {
    Plain,
    /// `log ||1||_1`.
    LogE,
    /// `b * d(log ||1||_1 dbar log ||1||_1)`; the constant `b` is implicit.
    Ddbar,
}

impl Marker {
    fn times(self, other: Marker) -> Option<Marker> {
        match (self, other) {
            (Marker::Plain, m) | (m, Marker::Plain) => Some(m),
            _ => None,
        }
    }
}

/// Monomial in the symbols, as a sorted multiset.
pub type SymbolMonomial = Vec<Symbol>;

/// Formal sum of `coefficient * monomial * marker`, truncated at symbol degree `max_degree`.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularTerm {
    max_degree: usize,
    terms: BTreeMap<(Marker, SymbolMonomial), Rational>,
}

impl SingularTerm {
    pub fn zero(max_degree: usize) -> Self {
        SingularTerm {
            max_degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(max_degree: usize, c: Rational) -> Self {
        Self::zero(max_degree).plus(Marker::Plain, vec![], c)
    }

    pub fn one(max_degree: usize) -> Self {
        Self::constant(max_degree, Rational::one())
    }

    /// Adds `c * monomial * marker`, dropping terms beyond the truncation degree.
    pub fn plus(mut self, marker: Marker, mut monomial: SymbolMonomial, c: Rational) -> Self {
        if monomial.len() > self.max_degree || c.is_zero() {
            return self;
        }
        monomial.sort();
        let key = (marker, monomial);
        let v = self.terms.remove(&key).unwrap_or_else(Rational::zero) + c;
        if !v.is_zero() {
            self.terms.insert(key, v);
        }
        self
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Marker, &[Symbol], &Rational)> {
        self.terms
            .iter()
            .map(|((m, mono), c)| (*m, mono.as_slice(), c))
    }

    pub fn coeff(&self, marker: Marker, monomial: &[Symbol]) -> Rational {
        let mut key = monomial.to_vec();
        key.sort();
        self.terms
            .get(&(marker, key))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((m, mono), c) in &other.terms {
            out = out.plus(*m, mono.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.max_degree);
        for ((m, mono), v) in &self.terms {
            out = out.plus(*m, mono.clone(), v * c);
        }
        out
    }

    /// Product; two non-plain markers never meet in the integrand.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zero(self.max_degree.min(other.max_degree));
        for ((ma, a), ca) in &self.terms {
            for ((mb, b), cb) in &other.terms {
                let marker = ma.times(*mb).ok_or_else(|| {
                    Error::Unreduced(format!("product of markers {:?} and {:?}", ma, mb))
                })?;
                let mono = a.iter().chain(b).copied().collect();
                out = out.plus(marker, mono, ca * cb);
            }
        }
        Ok(out)
    }

    /// `Td` of a line with first Chern class `sym`, raised to `power = +-1`.
    pub fn todd_line(max_degree: usize, sym: Symbol, power: i32) -> Self {
        // Td(x)^{+-1} = 1 +- x/2 + x^2/12 + ... ; degree one is all we keep
        assert!(
            max_degree <= 1,
            "line Todd classes are expanded to degree one"
        );
        let half = rational(power as i64, 2);
        Self::one(max_degree).plus(Marker::Plain, vec![sym], half)
    }

    /// The part that can reach the pushed-forward `(1,1)` component:
    /// `log ||1||` against a degree-one class, and the exact `ddbar` term.
    pub fn relevant_part(&self) -> Self {
        let mut out = Self::zero(self.max_degree);
        for ((m, mono), c) in &self.terms {
            let keep = match m {
                Marker::Plain => false,
                Marker::LogE => mono.len() == 1,
                Marker::Ddbar => mono.is_empty(),
            };
            if keep {
                out = out.plus(*m, mono.clone(), c.clone());
            }
        }
        out
    }
}

impl fmt::Display for SingularTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, ((m, mono), c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({})", c)?;
            match m {
                Marker::Plain => {}
                Marker::LogE => f.write_str("*logE")?,
                Marker::Ddbar => f.write_str("*b*ddbar")?,
            }
            for s in mono {
                write!(f, "*{}", s.name())?;
            }
        }
        Ok(())
    }
}

/// Readings of the factor `Td(eta)` in the integrand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TdEtaReading {
    /// `Td(U) Td(L0) Td(pi^* T_X)^{-1}`, the default.
    Balanced,
    /// `Td(U)`.
    SubBundle,
    /// `Td(L0)`.
    Quotient,
    /// `Td(U) Td(pi^* T_X)^{-1}`.
    Ratio,
    /// `Td(pi^* T_X)`.
    Ambient,
}

impl TdEtaReading {
    pub const ALL: [TdEtaReading; 5] = [
        TdEtaReading::Balanced,
        TdEtaReading::SubBundle,
        TdEtaReading::Quotient,
        TdEtaReading::Ratio,
        TdEtaReading::Ambient,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TdEtaReading::Balanced => "balanced",
            TdEtaReading::SubBundle => "sub-bundle",
            TdEtaReading::Quotient => "quotient",
            TdEtaReading::Ratio => "ratio",
            TdEtaReading::Ambient => "ambient",
        }
    }

    fn factors(self) -> &'static [(Symbol, i32)] {
        match self {
            TdEtaReading::Balanced => &[(Symbol::CU, 1), (Symbol::CL0, 1), (Symbol::CTX, -1)],
            TdEtaReading::SubBundle => &[(Symbol::CU, 1)],
            TdEtaReading::Quotient => &[(Symbol::CL0, 1)],
            TdEtaReading::Ratio => &[(Symbol::CU, 1), (Symbol::CTX, -1)],
            TdEtaReading::Ambient => &[(Symbol::CTX, 1)],
        }
    }
}

/// `-1/2 logE - 1/6 logE cL0 - 1/12 logE cOE + 1/3 b ddbar`.
pub fn bracket() -> SingularTerm {
    SingularTerm::zero(1)
        .plus(Marker::LogE, vec![], rational(-1, 2))
        .plus(Marker::LogE, vec![Symbol::CL0], rational(-1, 6))
        .plus(Marker::LogE, vec![Symbol::COE], rational(-1, 12))
        .plus(Marker::Ddbar, vec![], rational(1, 3))
}

pub fn tdm_gamma_terms_with(rank: u64, reading: TdEtaReading) -> SingularTerm {
    let d = 1;
    // ch(F) = rk F + (pull-back from X); the pull-back part has no log|w| term
    let mut factors = vec![
        SingularTerm::constant(d, integer(rank as i64)),
        // Td(T_f) = Td(T_X) / Td(T_S)
        SingularTerm::todd_line(d, Symbol::CTX, 1),
        SingularTerm::todd_line(d, Symbol::CTS, -1),
        SingularTerm::todd_line(d, Symbol::CL0, -1),
    ];
    factors.extend(
        reading
            .factors()
            .iter()
            .map(|&(s, p)| SingularTerm::todd_line(d, s, p)),
    );
    let mut acc = bracket();
    for f in &factors {
        acc = f.mul(&acc).expect("only the bracket carries markers");
    }
    acc.relevant_part()
}

/// The expanded integrand restricted to terms that survive push-forward to bidegree `(3,2)`.
pub fn tdm_gamma_terms(rank: u64) -> SingularTerm {
    tdm_gamma_terms_with(rank, TdEtaReading::Balanced)
}

/// Replacement of `logE * symbol` by `factor * n_p`; `None` removes the rule.
#[derive(Clone, Debug, PartialEq)]
pub struct RewriteRules {
    pub log_rules: BTreeMap<Symbol, Rational>,
    /// The fibre integral of the exact `ddbar` term.
    pub ddbar: Option<Rational>,
}

impl Default for RewriteRules {
    fn default() -> Self {
        let log_rules = [
            (Symbol::CTX, 0),
            (Symbol::CTS, 0),
            (Symbol::COE, -1),
            (Symbol::CL0, 1),
            (Symbol::CU, -1),
        ]
        .into_iter()
        .map(|(s, v)| (s, integer(v)))
        .collect();
        RewriteRules {
            log_rules,
            ddbar: Some(Rational::zero()),
        }
    }
}

impl RewriteRules {
    pub fn without(mut self, sym: Symbol) -> Self {
        self.log_rules.remove(&sym);
        self
    }

    /// Coefficient of `log|w|` after rewriting every relevant term.
    pub fn apply(&self, t: &SingularTerm, n_p: u64) -> Result<Rational> {
        let np = integer(n_p as i64);
        let mut total = Rational::zero();
        for (marker, mono, c) in t.terms() {
            let v = match (marker, mono) {
                (Marker::LogE, [sym]) => {
                    self.log_rules
                        .get(sym)
                        .ok_or_else(|| Error::Unreduced(format!("logE*{}", sym.name())))?
                        * &np
                }
                (Marker::Ddbar, []) => self
                    .ddbar
                    .clone()
                    .ok_or_else(|| Error::Unreduced("b*ddbar".into()))?,
                _ => {
                    return Err(Error::Unreduced(format!(
                        "{:?} term of degree {}",
                        marker,
                        mono.len()
                    )))
                }
            };
            total += c * v;
        }
        Ok(total)
    }
}

/// Coefficient of `log|w|` in the degree-two part of the pushed-forward integrand.
pub fn logw_coefficient(rank: u64, n_p: u64) -> Result<Rational> {
    logw_coefficient_with(rank, n_p, TdEtaReading::Balanced, &RewriteRules::default())
}

pub fn logw_coefficient_with(
    rank: u64,
    n_p: u64,
    reading: TdEtaReading,
    rules: &RewriteRules,
) -> Result<Rational> {
    if n_p == 0 {
        return Err(Error::OutOfRange("n_p must be positive".into()));
    }
    rules.apply(&tdm_gamma_terms_with(rank, reading), n_p)
}

/// Coefficient of `log|w|` in the `(1,1)` part of the torsion form.
pub fn torsion_singularity_coefficient(rank: u64, n_p: u64) -> Result<Rational> {
    Ok(-logw_coefficient(rank, n_p)?)
}

/// `(reading, coefficient for rank 1 and one node)` for every reading.
pub fn reading_diagnostics() -> Vec<(TdEtaReading, Rational)> {
    TdEtaReading::ALL
        .iter()
        .map(|&r| {
            let c = logw_coefficient_with(1, 1, r, &RewriteRules::default())
                .expect("default rules cover every symbol");
            (r, c)
        })
        .collect()
}
