//! Verification suites behind `torsion verify`.
//!
//! Each suite runs a family of exact (or tolerance-checked) identities up to a
//! dimension bound and stops at the first counterexample. Random inputs come
//! from a seeded ChaCha generator, so runs are reproducible.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cohomology::{
    closedness_chain, de_rham_pushforward, grr_chi, koszul_alternating_ch_with,
    verify_sigma_identities, CohClass, LineClass, RingSpec, VirtualBundle,
};
use crate::error::{Error, Result};
use crate::genera::{bk_genus, r_genus, Genus};
use crate::scalar::{binomial, integer, rational, sign, Rational};
use crate::sheaves::{
    canonical_resolution_ranks, regularity_threshold, verify_resolution_ch, SplitSheaf,
};
use crate::torsion::{
    delta_t, verify_classification_identity, verify_classification_identity_tol,
    verify_duality_symmetry, verify_homogeneous_recursion,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Recursion,
    Classification,
    Sigma,
    Grr,
    Koszul,
    Resolution,
    Closedness,
    Derham,
    Selfdual,
    All,
}

impl Suite {
    /// Every concrete suite, in execution order.
    pub const EACH: [Suite; 9] = [
        Suite::Recursion,
        Suite::Classification,
        Suite::Sigma,
        Suite::Grr,
        Suite::Koszul,
        Suite::Resolution,
        Suite::Closedness,
        Suite::Derham,
        Suite::Selfdual,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Recursion => "recursion",
            Suite::Classification => "classification",
            Suite::Sigma => "sigma",
            Suite::Grr => "grr",
            Suite::Koszul => "koszul",
            Suite::Resolution => "resolution",
            Suite::Closedness => "closedness",
            Suite::Derham => "derham",
            Suite::Selfdual => "selfdual",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .iter()
            .chain(&[Suite::All])
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| Error::OutOfRange(format!("unknown suite `{}`", s)))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub type BinomialFn = fn(u64, u64) -> BigInt;

/// A binomial that is off by one away from the edges of Pascal's triangle.
pub fn corrupted_binomial(n: u64, k: u64) -> BigInt {
    let b = binomial(n, k);
    if k > 0 && k < n {
        b + 1
    } else {
        b
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub max_n: usize,
    pub seed: u64,
    /// Binomial used by the Koszul, GRR and resolution checks.
    pub binomial: BinomialFn,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            max_n: 3,
            seed: 0x7072_6f6a,
            binomial,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckLine {
    pub suite: Suite,
    pub label: String,
    pub passed: bool,
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{} {} {}", tag, self.suite, self.label)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub lines: Vec<CheckLine>,
    /// Description of the first failing case.
    pub counterexample: Option<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

struct Runner<'a> {
    cfg: &'a SuiteConfig,
    rng: ChaCha8Rng,
    report: SuiteReport,
}

impl Runner<'_> {
    /// Records one check group; returns `false` once something has failed.
    fn check(
        &mut self,
        suite: Suite,
        label: String,
        cases: impl IntoIterator<Item = Result<Option<String>>>,
    ) -> Result<bool> {
        for case in cases {
            if let Some(bad) = case? {
                self.report.lines.push(CheckLine {
                    suite,
                    label: label.clone(),
                    passed: false,
                });
                self.report.counterexample = Some(format!("{} {}: {}", suite, label, bad));
                return Ok(false);
            }
        }
        self.report.lines.push(CheckLine {
            suite,
            label,
            passed: true,
        });
        Ok(true)
    }
}

fn fails(ok: bool, what: impl FnOnce() -> String) -> Option<String> {
    if ok {
        None
    } else {
        Some(what())
    }
}

/// A random exact genus of the given order with small rational coefficients.
pub fn random_genus(rng: &mut impl Rng, order: usize) -> Genus {
    let coeffs = (0..=order)
        .map(|_| rational(rng.gen_range(-5..=5), rng.gen_range(1..=6)))
        .collect();
    Genus::exact(coeffs).expect("nonempty")
}

/// A split virtual bundle of rank at most five on `P^n`.
pub fn random_bundle(rng: &mut impl Rng, n: usize) -> VirtualBundle {
    let ring = RingSpec::projective(n);
    let lines = rng.gen_range(1..=5);
    let terms = (0..lines)
        .map(|_| {
            let mult = if rng.gen_bool(0.2) { -1 } else { 1 };
            (mult, LineClass(vec![rng.gen_range(-3..=3)]))
        })
        .collect();
    VirtualBundle::new(&ring, terms, rng.gen_range(0..=1)).expect("terms match the ring")
}

/// A random split sheaf on `P^n`, twisted to its regularity threshold plus a
/// small nonnegative offset.
pub fn random_regular_sheaf(rng: &mut impl Rng, n: usize) -> SplitSheaf {
    let count = rng.gen_range(1..=3);
    let f = SplitSheaf::new(
        n,
        (0..count).map(|_| (rng.gen_range(-4..=4), rng.gen_range(1..=3))),
    );
    let d = regularity_threshold(&f).expect("nonzero sheaf");
    f.twist(d + rng.gen_range(0..=2))
}

/// `chi(P^n, O(k))` as a polynomial in `k`, through `binom`.
fn chi_closed_form(binom: BinomialFn, n: usize, k: i64) -> Rational {
    let nk = n as i64 + k;
    if nk >= 0 {
        Rational::from_integer(binom(nk as u64, n as u64))
    } else {
        // binom(n + k, n) = (-1)^n binom(-k - 1, n)
        Rational::from_integer(binom((-k - 1) as u64, n as u64) * sign(n as i64))
    }
}

fn run_one(r: &mut Runner<'_>, suite: Suite) -> Result<bool> {
    let max_n = r.cfg.max_n;
    let binom = r.cfg.binomial;
    match suite {
        Suite::Recursion => {
            for n in 0..=max_n {
                let g = random_genus(&mut r.rng, n + 2);
                let ks = -(n as i64) - 5..=5;
                let ok = verify_homogeneous_recursion(&g, n, ks.clone())?;
                if !r.check(
                    suite,
                    format!("n={} random genus", n),
                    [Ok(fails(ok, || format!("genus {:?}", g)))],
                )? {
                    return Ok(false);
                }
                let bk = bk_genus(n.max(1) + 2);
                let ok = verify_homogeneous_recursion(&bk, n, ks)?;
                if !r.check(
                    suite,
                    format!("n={} BK genus", n),
                    [Ok(fails(ok, String::new))],
                )? {
                    return Ok(false);
                }
            }
        }
        Suite::Classification => {
            for n in 0..=max_n.min(4) {
                let order = n + 1;
                let mut genera: Vec<(String, Genus)> = (1..=3)
                    .map(|p| {
                        let mut c = vec![integer(0); order.max(p) + 1];
                        c[p] = integer(1);
                        (format!("x^{}", p), Genus::exact(c).expect("nonempty"))
                    })
                    .collect();
                genera.push(("random".into(), random_genus(&mut r.rng, order)));
                let cases: Vec<_> = genera
                    .iter()
                    .map(|(name, g)| {
                        Ok(fails(verify_classification_identity(g, n)?, || {
                            name.clone()
                        }))
                    })
                    .collect();
                if !r.check(suite, format!("n={} exact genera", n), cases)? {
                    return Ok(false);
                }
                let ok = verify_classification_identity_tol(&bk_genus(9), n, 1e-9)?;
                if !r.check(
                    suite,
                    format!("n={} BK genus", n),
                    [Ok(fails(ok, String::new))],
                )? {
                    return Ok(false);
                }
            }
        }
        Suite::Sigma => {
            let bundles: Vec<VirtualBundle> = (0..100)
                .map(|i| {
                    let n = i % (max_n.min(4) + 1);
                    random_bundle(&mut r.rng, n)
                })
                .collect();
            let cases = bundles.iter().map(|b| {
                Ok(fails(verify_sigma_identities(b)?, || {
                    format!("bundle {:?}", b)
                }))
            });
            if !r.check(suite, "100 random bundles".into(), cases)? {
                return Ok(false);
            }
        }
        Suite::Grr => {
            for n in 0..=max_n {
                let cases = (-(n as i64) - 5..=6).map(|k| {
                    let got = grr_chi(n, k)?;
                    let want = chi_closed_form(binom, n, k);
                    Ok(fails(got == want, || {
                        format!("k={}: chi {} vs binom {}", k, got, want)
                    }))
                });
                if !r.check(suite, format!("n={}", n), cases)? {
                    return Ok(false);
                }
            }
        }
        Suite::Koszul => {
            for n in 0..=max_n {
                let cases = (-3..=3).map(|k| {
                    let c = koszul_alternating_ch_with(n, k, binom)?;
                    Ok(fails(c.is_zero(), || {
                        format!("k={}: alternating ch = {}", k, c)
                    }))
                });
                if !r.check(suite, format!("n={}", n), cases)? {
                    return Ok(false);
                }
            }
        }
        Suite::Resolution => {
            let cases = (1..=max_n).map(|n| {
                let ranks = canonical_resolution_ranks(&SplitSheaf::line(n, 1))?;
                let want: Vec<BigInt> =
                    (0..=n).map(|k| binom(n as u64 + 1, k as u64 + 1)).collect();
                Ok(fails(ranks == want, || {
                    format!("O(1) on P^{}: {:?} vs {:?}", n, ranks, want)
                }))
            });
            if !r.check(suite, "ranks of O(1)".into(), cases)? {
                return Ok(false);
            }
            let sheaves: Vec<SplitSheaf> = (0..50)
                .map(|i| random_regular_sheaf(&mut r.rng, 1 + i % max_n.max(1)))
                .collect();
            let cases = sheaves
                .iter()
                .map(|f| Ok(fails(verify_resolution_ch(f)?, || format!("sheaf {:?}", f))));
            if !r.check(suite, "50 random regular sheaves".into(), cases)? {
                return Ok(false);
            }
        }
        Suite::Closedness => {
            let cases = (0..=max_n.min(3)).map(|n| {
                let rep = closedness_chain(n)?;
                Ok(fails(rep.holds(), || {
                    format!("n={}: {} / {}", n, rep.per_term, rep.diagonal)
                }))
            });
            if !r.check(suite, "per-term and diagonal routes".into(), cases)? {
                return Ok(false);
            }
        }
        Suite::Derham => {
            let cases = (0..=2 * max_n.max(1)).step_by(2).map(|d| {
                let got = de_rham_pushforward(d)?;
                let ring = RingSpec::projective(d);
                let mut top = vec![0u32; ring.generators()];
                if let Some(e) = top.first_mut() {
                    *e = d as u32;
                }
                let want = CohClass::monomial(&ring, top, integer(-2));
                Ok(fails(got == want, || format!("d={}: {}", d, got)))
            });
            if !r.check(suite, "push-forward of c1(omega)^(d+1)".into(), cases)? {
                return Ok(false);
            }
        }
        Suite::Selfdual => {
            let order = 12;
            let cases = [("R", r_genus(order)), ("BK", bk_genus(order))]
                .into_iter()
                .map(|(name, g)| {
                    Ok(fails(g.is_self_dual(0.0), || {
                        format!("{} genus not self-dual", name)
                    }))
                });
            if !r.check(suite, "R and BK genera".into(), cases)? {
                return Ok(false);
            }
            let g = random_genus(&mut r.rng, max_n + 2);
            let involutive = g.sigma_dual().sigma_dual() == g;
            if !r.check(
                suite,
                "dual of dual".into(),
                [Ok(fails(involutive, || format!("{:?}", g)))],
            )? {
                return Ok(false);
            }
            for n in 0..=max_n {
                let mut cases = Vec::new();
                for k in -(n as i64) - 3..=3 {
                    cases.push(
                        verify_duality_symmetry(&g, n, k)
                            .map(|ok| fails(ok, || format!("k={}", k))),
                    );
                    // a self-dual theory satisfies dt(n, k) = (-1)^{n+1} dt(n, -n-1-k)
                    let bk = bk_genus(n + 2);
                    let a = delta_t(&bk, n, k)?.to_f64();
                    let b =
                        delta_t(&bk, n, -(n as i64) - 1 - k)?.to_f64() * sign(n as i64 + 1) as f64;
                    cases.push(Ok(fails((a - b).abs() < 1e-10, || {
                        format!("BK k={}: {} vs {}", k, a, b)
                    })));
                }
                if !r.check(suite, format!("n={} duality", n), cases)? {
                    return Ok(false);
                }
            }
        }
        Suite::All => {
            for s in Suite::EACH {
                if !run_one(r, s)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Runs `suite` and collects one line per check group.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<SuiteReport> {
    if cfg.max_n > 6 {
        return Err(Error::OutOfRange(format!("max-n {} exceeds 6", cfg.max_n)));
    }
    let mut runner = Runner {
        cfg,
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        report: SuiteReport::default(),
    };
    run_one(&mut runner, suite)?;
    Ok(runner.report)
}
