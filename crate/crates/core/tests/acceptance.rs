//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line
//! with its wall time; the test fails if any criterion fails or runs over.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use torsion_core::cohomology::{
    closedness_chain, de_rham_pushforward, grr_chi, verify_sigma_identities,
};
use torsion_core::degeneration::logw_coefficient;
use torsion_core::degeneration::quadrature::{quadrature_a, HPreset};
use torsion_core::genera::{bk_genus, r_genus};
use torsion_core::sheaves::{canonical_resolution_ranks, verify_resolution_ch};
use torsion_core::suite::{run_suite, Suite, SuiteConfig};
use torsion_core::torsion::{
    delta_t, main_numbers, propagate_characteristic_numbers, verify_classification_identity,
    verify_classification_identity_tol,
};
use torsion_core::{
    CohClass, Genus, LineClass, Rational, RingSpec, Scalar, Series, SplitSheaf, VirtualBundle,
};

/// Pascal's triangle, independent of the library's binomial.
fn pascal(rows: usize) -> Vec<Vec<BigInt>> {
    let mut t: Vec<Vec<BigInt>> = vec![vec![BigInt::from(1)]];
    for n in 1..=rows {
        let prev = &t[n - 1];
        let mut row = vec![BigInt::from(1); n + 1];
        for k in 1..n {
            row[k] = &prev[k - 1] + &prev[k];
        }
        t.push(row);
    }
    t
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// `(k+1)(k+2)...(k+n)/n!` in `i128`.
fn binom_poly_oracle(n: i64, k: i64) -> Rational {
    let num: i128 = (1..=n).map(|i| (k + i) as i128).product();
    let den: i128 = (1..=n).map(|i| i as i128).product();
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn random_exact_genus(rng: &mut ChaCha8Rng, order: usize) -> Genus {
    Genus::exact(
        (0..=order)
            .map(|_| q(rng.gen_range(-7..=7), rng.gen_range(1..=5)))
            .collect(),
    )
    .unwrap()
}

fn exact(s: Scalar) -> Rational {
    s.as_exact()
        .expect("exact genus gives exact values")
        .clone()
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    passed: bool,
    elapsed: Duration,
}

fn run(id: u32, name: &'static str, limit_s: f64, f: impl FnOnce() -> bool) -> Criterion {
    let start = Instant::now();
    let ok = f();
    let elapsed = start.elapsed();
    let limit = Duration::from_secs_f64(limit_s);
    let passed = ok && elapsed <= limit;
    println!(
        "{} {:>2}. {} ({:.3} s, limit {} s)",
        if passed { "PASS" } else { "FAIL" },
        id,
        name,
        elapsed.as_secs_f64(),
        limit_s
    );
    Criterion {
        id,
        name,
        limit,
        passed,
        elapsed,
    }
}

fn c1_quadrature() -> bool {
    ["rational1", "rational1_sq", "rational2"]
        .iter()
        .all(|name| {
            let start = Instant::now();
            let a = quadrature_a(&HPreset::by_name(name).unwrap(), 2048).unwrap();
            (a - 0.5).abs() < 1e-6 && start.elapsed() < Duration::from_secs(10)
        })
}

fn c2_degeneration() -> bool {
    (0..=5i64).all(|r| {
        (1..=5i64).all(|np| logw_coefficient(r as u64, np as u64).unwrap() == q(r * np, 6))
    })
}

fn c3_grr() -> bool {
    (0..=6i64)
        .all(|n| (-n - 5..=6).all(|k| grr_chi(n as usize, k).unwrap() == binom_poly_oracle(n, k)))
}

fn c4_recursion() -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let p = pascal(8);
    (0..=5usize).all(|n| {
        let g = random_exact_genus(&mut rng, n + 2);
        (-(n as i64) - 5..=5).all(|k| {
            let mut acc = Rational::zero();
            for (j, c) in p[n + 1].iter().enumerate() {
                let d = exact(delta_t(&g, n, k - j as i64).unwrap());
                let term = d * Rational::from_integer(c.clone());
                acc = if j % 2 == 0 { acc + term } else { acc - term };
            }
            acc.is_zero()
        })
    })
}

fn c5_classification() -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    (0..=4usize).all(|n| {
        let order = n.max(3);
        let mut genera: Vec<Genus> = (1..=3)
            .map(|p| {
                let mut c = vec![Rational::zero(); order + 1];
                c[p] = q(1, 1);
                Genus::exact(c).unwrap()
            })
            .collect();
        genera.push(random_exact_genus(&mut rng, order));
        genera
            .iter()
            .all(|g| verify_classification_identity(g, n).unwrap())
            && verify_classification_identity_tol(&bk_genus(9), n, 1e-9).unwrap()
    })
}

fn c6_sigma() -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    (0..100).all(|i| {
        let n = i % 5;
        let ring = RingSpec::projective(n);
        let roots: Vec<(i64, i64)> = (0..rng.gen_range(1..=5))
            .map(|_| {
                (
                    if rng.gen_bool(0.25) { -1 } else { 1 },
                    rng.gen_range(-4..=4),
                )
            })
            .collect();
        let b = VirtualBundle::new(
            &ring,
            roots
                .iter()
                .map(|&(m, a)| (m, LineClass(vec![a])))
                .collect(),
            0,
        )
        .unwrap();
        // sigma ch(B) against sum m (-a)^p / p! computed here
        let ch: CohClass<Rational> = b.ch().unwrap();
        let sig = ch.sigma();
        let direct = (0..=n).all(|p| {
            let fact: i64 = (1..=p as i64).product();
            let want: Rational = roots
                .iter()
                .map(|&(m, a)| q(m * (-a).pow(p as u32), fact))
                .fold(Rational::zero(), |x, y| x + y);
            sig.coeff(&[p as u32]) == want
        });
        direct
            && verify_sigma_identities(&b).unwrap()
            && verify_sigma_identities(&b.shifted(1)).unwrap()
    })
}

fn c7_r_genus() -> bool {
    // 2 zeta'(-1) + zeta(-1) = 1/12 - 2 log A with Glaisher's constant A
    let log_glaisher = 0.248_754_477_033_784_25_f64;
    let golden = 1.0 / 12.0 - 2.0 * log_glaisher;
    let r = r_genus(12);
    let evens_vanish = (0..=12).step_by(2).all(|i| r.coeff(i).to_f64() == 0.0);
    evens_vanish && (r.coeff(1).to_f64() - golden).abs() < 1e-8
}

fn c8_resolution() -> bool {
    let p = pascal(8);
    let line_ok = (1..=6usize).all(|n| {
        let ranks = canonical_resolution_ranks(&SplitSheaf::line(n, 1)).unwrap();
        ranks.iter().enumerate().all(|(k, r)| *r == p[n + 1][k + 1])
    });
    // a sum of O(a) with a >= 0 is regular
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let random_ok = (0..50).all(|i| {
        let n = 1 + i % 5;
        let terms: Vec<(i64, u64)> = (0..rng.gen_range(1..=4))
            .map(|_| (rng.gen_range(0..=4), rng.gen_range(1..=3)))
            .collect();
        verify_resolution_ch(&SplitSheaf::new(n, terms)).unwrap()
    });
    line_ok && random_ok
}

fn c9_closedness() -> bool {
    (0..=3).all(|n| {
        let rep = closedness_chain(n).unwrap();
        rep.holds() && rep.per_term == rep.diagonal
    })
}

fn c10_de_rham() -> bool {
    (0..=8usize).step_by(2).all(|d| {
        let got = de_rham_pushforward(d).unwrap();
        let ring = RingSpec::projective(d);
        let terms: Vec<_> = got.terms().collect();
        terms.len() == 1 && got.ring() == &ring && got.coeff(&[d as u32]) == q(-2, 1)
    })
}

fn c11_propagation() -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    (0..=4usize).all(|n| {
        let coeffs: Vec<Rational> = (0..=n + 1)
            .map(|_| q(rng.gen_range(-9..=9), rng.gen_range(1..=4)))
            .collect();
        let s = Series::from_coeffs(coeffs.clone()).unwrap();
        let g = Genus::exact(coeffs).unwrap();
        let seed = main_numbers(&s, n).unwrap();
        (-(n as i64) - 6..=6).all(|k| {
            let got = propagate_characteristic_numbers(&seed, |_| Rational::zero(), k).unwrap();
            got == exact(delta_t(&g, n, k).unwrap())
        })
    })
}

fn verify_all() -> bool {
    run_suite(Suite::All, &SuiteConfig::default())
        .unwrap()
        .passed()
}

#[test]
fn acceptance() {
    let results = vec![
        run(
            1,
            "quadrature constant a = 1/2 for three presets",
            30.0,
            c1_quadrature,
        ),
        run(2, "log|w| coefficient r n_p / 6", 1.0, c2_degeneration),
        run(3, "GRR table", 5.0, c3_grr),
        run(4, "homogeneous recursion", 5.0, c4_recursion),
        run(5, "classification identity", 5.0, c5_classification),
        run(6, "sign-operator identities on 100 bundles", 10.0, c6_sigma),
        run(7, "R-genus parity and golden coefficient", 5.0, c7_r_genus),
        run(8, "canonical resolutions", 5.0, c8_resolution),
        run(9, "closedness chain, both routes", 5.0, c9_closedness),
        run(10, "de Rham push-forward", 1.0, c10_de_rham),
        run(11, "propagation from main numbers", 2.0, c11_propagation),
        run(12, "verify all", 60.0, verify_all),
    ];
    let failed: Vec<String> = results
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{}. {} ({:?} / {:?})", c.id, c.name, c.elapsed, c.limit))
        .collect();
    assert!(failed.is_empty(), "failed criteria: {:?}", failed);
}
