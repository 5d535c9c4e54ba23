//! Batch command-line surface for beta-shift analysis.
//!
//! Exit codes: 0 success, 1 oracle/formula cross-check failure, 2 invalid
//! input, 3 horizon or work budget exceeded, 4 precision exhausted.

use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use betashift::constructions::named_example;
use betashift::kneading::{
    greedy_expansion_with, kneading_from_beta_with, solve_beta, validate_kneading, BetaSpec,
    KneadingSequence, DEFAULT_PRECISION_BITS,
};
use betashift::language::{enumerate_language, is_admissible, subword_complexity};
use betashift::numeric::{parse_decimal, to_decimal_string};
use betashift::oracle::{
    builtin_predicate, predicate_from_kneading, stabilized_count, LegalityPredicate, SetKind,
    DEFAULT_WORK_BUDGET,
};
use betashift::report::{CountReport, Status};
use betashift::theorems::{
    extender_bounds, extender_count_formula, follower_count, predecessor_count,
};
use betashift::{Error, Result, Word};

#[derive(Parser)]
#[command(name = "betashift", version, about = "Beta-shift analysis toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// A kneading-sequence input: a JSON file path or inline JSON. Files written
/// by `construct` (recipe objects) are accepted as well.
#[derive(Args, Clone)]
struct KneadingArg {
    /// Kneading sequence: JSON file or inline JSON
    #[arg(long)]
    kneading: String,
    /// Treat a prefix-mode sequence as certified non-eventually-periodic
    #[arg(long)]
    assert_aperiodic: bool,
}

impl KneadingArg {
    fn load(&self) -> Result<KneadingSequence> {
        let text = read_arg(&self.kneading)?;
        let d = parse_kneading_json(&text)?;
        Ok(if self.assert_aperiodic {
            d.with_aperiodicity(true)
        } else {
            d
        })
    }
}

fn read_arg(value: &str) -> Result<String> {
    if Path::new(value).is_file() {
        std::fs::read_to_string(value)
            .map_err(|e| Error::InvalidInput(format!("cannot read `{value}`: {e}")))
    } else {
        Ok(value.to_string())
    }
}

fn parse_kneading_json(text: &str) -> Result<KneadingSequence> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| Error::InvalidInput(format!("bad kneading JSON: {e}")))?;
    // accept a construct recipe wholesale
    let node = value.get("output").cloned().unwrap_or(value);
    serde_json::from_value(node).map_err(|e| Error::InvalidInput(format!("bad kneading JSON: {e}")))
}

/// A beta input: a decimal or fraction literal, a JSON file, or inline JSON.
fn parse_beta(value: &str) -> Result<BetaSpec> {
    let text = read_arg(value)?;
    let trimmed = text.trim();
    if !trimmed.starts_with('{') {
        return BetaSpec::rational_str(trimmed);
    }
    serde_json::from_str(trimmed).map_err(|e| Error::InvalidInput(format!("bad beta JSON: {e}")))
}

/// Inclusive range `A..B`, or a single `N`.
fn parse_range(s: &str) -> Result<(usize, usize)> {
    let parse_end = |p: &str| {
        p.trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidInput(format!("bad length range `{s}`")))
    };
    if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (parse_end(a)?, parse_end(b)?);
        if a > b || a == 0 {
            return Err(Error::InvalidInput(format!("bad length range `{s}`")));
        }
        Ok((a, b))
    } else {
        let n = parse_end(s)?;
        Ok((n, n))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Greedy expansion digits of 1 under a given beta
    Expand {
        /// Beta: decimal/fraction literal, JSON file, or inline JSON
        #[arg(long)]
        beta: String,
        /// Number of digits to emit
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = DEFAULT_PRECISION_BITS)]
        precision_bits: u32,
    },
    /// Kneading sequence d*(1) of a given beta
    Kneading {
        #[arg(long)]
        beta: String,
        /// Digits to certify before giving up on termination
        #[arg(long)]
        horizon: usize,
        #[arg(long, default_value_t = DEFAULT_PRECISION_BITS)]
        precision_bits: u32,
    },
    /// Certified enclosure of the beta solving a kneading equation
    SolveBeta {
        #[command(flatten)]
        kneading: KneadingArg,
        /// Maximum enclosure width
        #[arg(long, default_value = "1e-9")]
        tolerance: String,
    },
    /// Shift-dominance validation of a kneading sequence
    Validate {
        #[command(flatten)]
        kneading: KneadingArg,
    },
    /// Test a word against the lexicographic admissibility criterion
    Admissible {
        #[command(flatten)]
        kneading: KneadingArg,
        /// Digit string, e.g. 0110
        #[arg(long)]
        word: String,
    },
    /// Enumerate all admissible words of one length
    Language {
        #[command(flatten)]
        kneading: KneadingArg,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Subword complexity of the kneading sequence
    Complexity {
        #[command(flatten)]
        kneading: KneadingArg,
        #[command(flatten)]
        range: RangeArgs,
    },
    /// Follower set counts (closed form)
    Followers {
        #[command(flatten)]
        kneading: KneadingArg,
        #[command(flatten)]
        range: RangeArgs,
        #[command(flatten)]
        check: CheckArgs,
    },
    /// Predecessor set counts (closed form)
    Predecessors {
        #[command(flatten)]
        kneading: KneadingArg,
        #[command(flatten)]
        range: RangeArgs,
        #[command(flatten)]
        check: CheckArgs,
    },
    /// Extender set counts (closed form; upper bound for sofic input)
    Extenders {
        #[command(flatten)]
        kneading: KneadingArg,
        #[command(flatten)]
        range: RangeArgs,
        #[command(flatten)]
        check: CheckArgs,
    },
    /// Complexity sandwich for non-sofic extender counts
    Bounds {
        #[command(flatten)]
        kneading: KneadingArg,
        #[command(flatten)]
        range: RangeArgs,
    },
    /// Brute-force truncated set counts for a predicate or kneading sequence
    Oracle {
        /// Built-in predicate: full(k), even_shift, or forbidden(w1,w2,...)
        #[arg(long, conflicts_with = "kneading")]
        predicate: Option<String>,
        /// Kneading sequence defining the predicate
        #[arg(long)]
        kneading: Option<String>,
        #[arg(long)]
        kind: String,
        #[arg(long, value_parser = |s: &str| parse_range(s).map_err(|e| e.to_string()))]
        n: (usize, usize),
        /// Maximum context depth (escalated from 1)
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_WORK_BUDGET)]
        work_budget: u64,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Emit a named example construction as JSON
    Construct {
        /// golden_mean, full_shift(k), beta_1_8_prefix(L), champernowne_tilde(b)
        name: String,
    },
}

#[derive(Args, Clone)]
struct RangeArgs {
    /// Length or inclusive range A..B
    #[arg(long, value_parser = |s: &str| parse_range(s).map_err(|e| e.to_string()))]
    n: (usize, usize),
    /// Output format; defaults to JSON for a single length, CSV for ranges
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Clone)]
struct CheckArgs {
    /// Cross-check against the truncated-set oracle
    #[arg(long)]
    check_oracle: bool,
    /// Oracle context depth for --check-oracle
    #[arg(long, default_value_t = 6)]
    depth: usize,
    #[arg(long, default_value_t = DEFAULT_WORK_BUDGET)]
    work_budget: u64,
}

fn print_json<T: serde::Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn emit_reports(reports: &[CountReport], range: &RangeArgs) -> String {
    let format = range.format.unwrap_or(if range.n.0 == range.n.1 {
        Format::Json
    } else {
        Format::Csv
    });
    match format {
        Format::Json => {
            if reports.len() == 1 {
                serde_json::to_string_pretty(&reports[0]).expect("serializable")
            } else {
                serde_json::to_string_pretty(&reports).expect("serializable")
            }
        }
        Format::Csv => {
            let mut out = String::new();
            for r in reports {
                let _ = writeln!(out, "{}", r.csv_row());
            }
            out.trim_end().to_string()
        }
    }
}

/// Compare each exact formula value with the oracle at the given depth; the
/// oracle is a lower bound, so exceeding an exact value is a hard failure.
fn cross_check(
    d: &KneadingSequence,
    kind: SetKind,
    reports: &[CountReport],
    check: &CheckArgs,
) -> Result<bool> {
    if !check.check_oracle {
        return Ok(true);
    }
    let pred = predicate_from_kneading(d);
    let mut ok = true;
    for r in reports {
        let oracle = stabilized_count(&pred, kind, r.n, check.depth, check.work_budget)?;
        if r.status == Status::Exact && oracle.value > r.value {
            eprintln!(
                "cross-check failed: {} oracle count {} exceeds exact formula {} at n={}",
                kind, oracle.value, r.value, r.n
            );
            ok = false;
        }
    }
    Ok(ok)
}

fn counting_command<F>(
    d: &KneadingSequence,
    range: &RangeArgs,
    check: &CheckArgs,
    kind: SetKind,
    f: F,
) -> Result<bool>
where
    F: Fn(&KneadingSequence, usize) -> Result<CountReport>,
{
    let reports = (range.n.0..=range.n.1)
        .map(|n| f(d, n))
        .collect::<Result<Vec<_>>>()?;
    println!("{}", emit_reports(&reports, range));
    cross_check(d, kind, &reports, check)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Expand {
            beta,
            count,
            precision_bits,
        } => {
            let spec = parse_beta(&beta)?;
            let digits = greedy_expansion_with(&spec, count, precision_bits)?;
            print_json(&json!({ "digits": digits }));
            Ok(true)
        }
        Command::Kneading {
            beta,
            horizon,
            precision_bits,
        } => {
            let spec = parse_beta(&beta)?;
            let d = kneading_from_beta_with(&spec, horizon, precision_bits)?;
            print_json(&d);
            Ok(true)
        }
        Command::SolveBeta { kneading, tolerance } => {
            let d = kneading.load()?;
            let tol = parse_decimal(&tolerance)?;
            let (lo, hi) = solve_beta(&d, &tol)?;
            print_json(&json!({
                "lo": to_decimal_string(&lo),
                "hi": to_decimal_string(&hi),
                "width": to_decimal_string(&(&hi - &lo)),
                "exact": lo == hi,
            }));
            Ok(true)
        }
        Command::Validate { kneading } => {
            let d = kneading.load()?;
            let report = validate_kneading(&d);
            print_json(&report);
            Ok(true)
        }
        Command::Admissible { kneading, word } => {
            let d = kneading.load()?;
            let w = Word::from_str(&word)?;
            let admissible = is_admissible(&w, &d)?;
            print_json(&json!({ "word": w.digit_string(), "admissible": admissible }));
            Ok(true)
        }
        Command::Language { kneading, n, format } => {
            let d = kneading.load()?;
            let words = enumerate_language(&d, n)?;
            let strings: Vec<String> = words.iter().map(Word::digit_string).collect();
            match format {
                Format::Json => print_json(&strings),
                Format::Csv => {
                    for s in &strings {
                        println!("{s}");
                    }
                }
            }
            Ok(true)
        }
        Command::Complexity { kneading, range } => {
            let d = kneading.load()?;
            let reports = (range.n.0..=range.n.1)
                .map(|n| subword_complexity(&d, n))
                .collect::<Result<Vec<_>>>()?;
            println!("{}", emit_reports(&reports, &range));
            Ok(true)
        }
        Command::Followers {
            kneading,
            range,
            check,
        } => {
            let d = kneading.load()?;
            counting_command(&d, &range, &check, SetKind::Follower, follower_count)
        }
        Command::Predecessors {
            kneading,
            range,
            check,
        } => {
            let d = kneading.load()?;
            counting_command(&d, &range, &check, SetKind::Predecessor, predecessor_count)
        }
        Command::Extenders {
            kneading,
            range,
            check,
        } => {
            let d = kneading.load()?;
            counting_command(&d, &range, &check, SetKind::Extender, extender_count_formula)
        }
        Command::Bounds { kneading, range } => {
            let d = kneading.load()?;
            let mut rows = Vec::new();
            for n in range.n.0..=range.n.1 {
                let (lo, hi) = extender_bounds(&d, n)?;
                rows.push((n, lo, hi));
            }
            match range.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    for (n, lo, hi) in rows {
                        println!("{n},{lo},{hi}");
                    }
                }
                Format::Json => {
                    let values: Vec<_> = rows
                        .iter()
                        .map(|(n, lo, hi)| json!({ "n": n, "low": lo, "high": hi }))
                        .collect();
                    print_json(&values);
                }
            }
            Ok(true)
        }
        Command::Oracle {
            predicate,
            kneading,
            kind,
            n,
            depth,
            work_budget,
            format,
        } => {
            let pred: LegalityPredicate = match (predicate, kneading) {
                (Some(name), None) => builtin_predicate(&name)?,
                (None, Some(k)) => {
                    let d = parse_kneading_json(&read_arg(&k)?)?;
                    predicate_from_kneading(&d)
                }
                _ => {
                    return Err(Error::InvalidInput(
                        "exactly one of --predicate and --kneading is required".into(),
                    ))
                }
            };
            let kind = SetKind::from_str(&kind)?;
            let reports = (n.0..=n.1)
                .map(|len| {
                    stabilized_count(&pred, kind, len, depth, work_budget).map(|c| c.to_report())
                })
                .collect::<Result<Vec<_>>>()?;
            let range = RangeArgs { n, format };
            println!("{}", emit_reports(&reports, &range));
            Ok(true)
        }
        Command::Construct { name } => {
            let recipe = named_example(&name)?;
            print_json(&recipe);
            Ok(true)
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::HorizonTooSmall
        | Error::HorizonExceeded { .. }
        | Error::IndexBeyondHorizon(_)
        | Error::WorkBudgetExceeded(_)
        | Error::ToleranceUnreachable(_) => 3,
        Error::PrecisionExhausted(_) => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
