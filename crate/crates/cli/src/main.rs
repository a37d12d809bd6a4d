mod genus_arg;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};
use torsion_core::degeneration::quadrature::{quadrature_a, quadrature_b, HPreset};
use torsion_core::degeneration::{
    logw_coefficient_with, torsion_singularity_coefficient, RewriteRules, TdEtaReading,
};
use torsion_core::scalar::format_sig15;
use torsion_core::suite::{corrupted_binomial, run_suite, Suite, SuiteConfig};
use torsion_core::torsion::delta_table;
use torsion_core::{Error, Rational, Scalar};

use genus_arg::{GenusSpec, ParseError};

#[derive(Parser)]
#[command(
    name = "torsion",
    version,
    about = "Characteristic numbers of torsion theories on projective spaces"
)]
struct Cli {
    /// Emit canonical JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for parallel sections.
    #[arg(long, global = true, env = "TORSION_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the coefficients of a genus.
    Genus {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Differences of characteristic numbers against the homogeneous theory.
    TorsionDelta {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["k_from", "k_to"])]
        k: Option<i64>,
        #[arg(long, allow_hyphen_values = true, requires = "k_to")]
        k_from: Option<i64>,
        #[arg(long, allow_hyphen_values = true, requires = "k_from")]
        k_to: Option<i64>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 3)]
        max_n: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, hide = true)]
        corrupt_binomial: bool,
    },
    /// Constants and coefficients of the nodal degeneration.
    #[command(subcommand)]
    Degeneration(Degeneration),
}

#[derive(Subcommand)]
enum Degeneration {
    /// The constant `a` for a cut-off preset.
    A(QuadArgs),
    /// The constant `b` for a cut-off preset.
    B(QuadArgs),
    /// Coefficient of `log|w|` in the torsion form.
    Coeff {
        #[arg(long)]
        rank: u64,
        #[arg(long)]
        np: u64,
        /// Also report the coefficient under each reading of `Td(eta)`.
        #[arg(long)]
        readings: bool,
    },
}

#[derive(Args)]
struct QuadArgs {
    #[arg(long, default_value = "rational1")]
    preset: String,
    #[arg(long, default_value_t = 2048)]
    grid: usize,
}

enum Failure {
    Usage(String),
    Core(Error),
    Verify(Output),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verify(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Core(e) => match e {
                Error::OrderTooLow { .. } | Error::OrderMismatch(..) | Error::MixedPrecision => 3,
                Error::NonConvergence { .. } => 4,
                _ => 2,
            },
        }
    }
}

/// Exact values as strings, floats as numbers rounded to 15 significant digits.
fn scalar_json(s: &Scalar) -> Value {
    match s {
        Scalar::Exact(q) => Value::String(q.to_string()),
        Scalar::Float(x) => float_json(*x),
    }
}

fn float_json(x: f64) -> Value {
    let rounded: f64 = format_sig15(x).parse().unwrap_or(x);
    serde_json::Number::from_f64(rounded)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

fn rational_json(q: &Rational) -> Value {
    Value::String(q.to_string())
}

struct Output {
    text: String,
    json: Value,
}

fn cmd_genus(spec: &str, order: Option<usize>) -> Result<Output, Failure> {
    let parsed: GenusSpec = spec.parse()?;
    let order = order.unwrap_or_else(|| parsed.default_order());
    let g = parsed.to_genus(order)?;
    let coeffs = g.coeffs();
    let text = coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| format!("{}\t{}\n", i, c))
        .collect();
    let json = json!({
        "genus": parsed.to_string(),
        "order": order,
        "coefficients": coeffs.iter().map(scalar_json).collect::<Vec<_>>(),
    });
    Ok(Output { text, json })
}

fn cmd_torsion_delta(
    spec: &str,
    n: usize,
    ks: std::ops::RangeInclusive<i64>,
) -> Result<Output, Failure> {
    let parsed: GenusSpec = spec.parse()?;
    let order = match parsed.native_order() {
        Some(o) => o,
        None => parsed.default_order().max(n),
    };
    let table = delta_table(&parsed.to_genus(order)?, n, ks)?;
    let text = table
        .entries
        .iter()
        .map(|(k, v)| format!("{}\t{}\n", k, v))
        .collect();
    let entries: Vec<Value> = table
        .entries
        .iter()
        .map(|(k, v)| json!({ "k": k, "value": scalar_json(v) }))
        .collect();
    Ok(Output {
        text,
        json: json!({ "genus": parsed.to_string(), "n": n, "entries": entries }),
    })
}

fn cmd_verify(
    suite: &str,
    max_n: usize,
    seed: Option<u64>,
    corrupt: bool,
) -> Result<Output, Failure> {
    let suite: Suite = suite
        .parse()
        .map_err(|e: Error| Failure::Usage(e.to_string()))?;
    let mut cfg = SuiteConfig {
        max_n,
        ..SuiteConfig::default()
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if corrupt {
        cfg.binomial = corrupted_binomial;
    }
    let report = run_suite(suite, &cfg).map_err(|e| match e {
        Error::OutOfRange(m) => Failure::Usage(m),
        e => Failure::Core(e),
    })?;
    let mut text: String = report.lines.iter().map(|l| format!("{}\n", l)).collect();
    if let Some(c) = &report.counterexample {
        text.push_str(&format!("counterexample: {}\n", c));
    }
    let checks: Vec<Value> = report
        .lines
        .iter()
        .map(|l| json!({ "suite": l.suite.name(), "label": l.label, "passed": l.passed }))
        .collect();
    let json = json!({
        "suite": suite.name(),
        "max_n": max_n,
        "passed": report.passed(),
        "checks": checks,
        "counterexample": report.counterexample,
    });
    let out = Output { text, json };
    if report.passed() {
        Ok(out)
    } else {
        Err(Failure::Verify(out))
    }
}

fn cmd_quadrature(which: &str, args: &QuadArgs) -> Result<Output, Failure> {
    let preset = HPreset::by_name(&args.preset).map_err(|e| Failure::Usage(e.to_string()))?;
    preset.validate()?;
    let v = if which == "a" {
        quadrature_a(&preset, args.grid)?
    } else {
        quadrature_b(&preset, args.grid)?
    };
    Ok(Output {
        text: format!("{}\n", format_sig15(v)),
        json: json!({ "quantity": which, "preset": args.preset, "grid": args.grid, "value": float_json(v) }),
    })
}

fn cmd_coeff(rank: u64, np: u64, readings: bool) -> Result<Output, Failure> {
    let c = torsion_singularity_coefficient(rank, np)?;
    let mut text = format!("{}\n", c);
    let mut json = Map::new();
    json.insert("rank".into(), json!(rank));
    json.insert("np".into(), json!(np));
    json.insert("value".into(), rational_json(&c));
    if readings {
        let mut r = Map::new();
        for reading in TdEtaReading::ALL {
            let v = -logw_coefficient_with(rank, np, reading, &RewriteRules::default())?;
            text.push_str(&format!("{}\t{}\n", reading.name(), v));
            r.insert(reading.name().into(), rational_json(&v));
        }
        json.insert("readings".into(), Value::Object(r));
    }
    Ok(Output {
        text,
        json: Value::Object(json),
    })
}

fn render(out: &Output, json: bool) -> String {
    if json {
        format!(
            "{}\n",
            serde_json::to_string(&out.json).expect("values serialize")
        )
    } else {
        out.text.clone()
    }
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.cmd {
        Command::Genus { spec, order } => cmd_genus(spec, *order),
        Command::TorsionDelta {
            spec,
            n,
            k,
            k_from,
            k_to,
        } => {
            let ks = match (k, k_from, k_to) {
                (Some(k), _, _) => *k..=*k,
                (None, Some(a), Some(b)) => *a..=*b,
                _ => {
                    return Err(Failure::Usage(
                        "pass --k or both --k-from and --k-to".into(),
                    ))
                }
            };
            cmd_torsion_delta(spec, *n, ks)
        }
        Command::Verify {
            suite,
            max_n,
            seed,
            corrupt_binomial,
        } => cmd_verify(suite, *max_n, *seed, *corrupt_binomial),
        Command::Degeneration(Degeneration::A(args)) => cmd_quadrature("a", args),
        Command::Degeneration(Degeneration::B(args)) => cmd_quadrature("b", args),
        Command::Degeneration(Degeneration::Coeff { rank, np, readings }) => {
            cmd_coeff(*rank, *np, *readings)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("error: {}", e);
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(out) => {
            print!("{}", render(&out, cli.json));
            ExitCode::SUCCESS
        }
        Err(f) => {
            match &f {
                Failure::Verify(report) => print!("{}", render(report, cli.json)),
                Failure::Usage(m) => eprintln!("error: {}", m),
                Failure::Core(e) => eprintln!("error: {}", e),
            }
            ExitCode::from(f.code())
        }
    }
}
