//! `valforge`: evaluate, convert and verify MacLane–Vaquié chains.
//!
//! Exit codes: 0 pass, 1 findings, 2 parse error, 3 invalid structure,
//! 4 stabilization budget exhausted.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use valforge::convert::{abkps_from_chain, chain_from_abkps};
use valforge::json;
use valforge::suite::{exit_code, verify, Subject, SuiteConfig};
use valforge::{CorpusSpec, Error, QPoly, Report, DEFAULT_BUDGET};

#[derive(Parser)]
#[command(
    name = "valforge",
    version,
    about = "Exact MacLane-Vaquie chains over (Q, v_p)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print w(f) for the last valuation of a chain.
    Eval {
        chain: PathBuf,
        poly: String,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Convert between chain and complete-set documents.
    Convert {
        direction: Direction,
        input: PathBuf,
        output: Option<PathBuf>,
        #[arg(long = "out", conflicts_with = "output")]
        out: Option<PathBuf>,
    },
    /// Run the verification suite on a chain or a complete set.
    Verify {
        input: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        /// Exhaustive corpus with integer coefficients `lo..hi` (inclusive).
        #[arg(long, allow_hyphen_values = true, conflicts_with = "random")]
        coeffs: Option<String>,
        /// Random corpus of N polynomials.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 50)]
        height: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    ToChain,
    ToAbkp,
}

/// Error from a command, carrying the exit code and, for structural
/// failures, the report to print.
struct Failure {
    code: u8,
    message: String,
    report: Option<Box<Report>>,
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = exit_code(&err) as u8;
        match err {
            Error::Structure(report) => Failure {
                code,
                message: String::new(),
                report: Some(report),
            },
            other => Failure {
                code,
                message: other.to_string(),
                report: None,
            },
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
        report: None,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Eval {
            chain,
            poly,
            budget,
        } => cmd_eval(&chain, &poly, budget),
        Command::Convert {
            direction,
            input,
            output,
            out,
        } => cmd_convert(direction, &input, output.or(out).as_deref()),
        Command::Verify {
            input,
            max_degree,
            coeffs,
            random,
            height,
            seed,
            budget,
            out,
        } => corpus_from_flags(max_degree, coeffs.as_deref(), random, height, seed).and_then(
            |corpus| {
                let cfg = SuiteConfig {
                    corpus,
                    budget: resolve_budget(budget)?,
                    seed,
                    ..SuiteConfig::default()
                };
                cmd_verify(&input, &cfg, out.as_deref())
            },
        ),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            if let Some(report) = f.report {
                println!("{}", report.to_json());
            } else {
                eprintln!("valforge: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}

fn resolve_budget(flag: Option<usize>) -> Result<usize, Failure> {
    let budget = match flag {
        Some(b) => b,
        None => match std::env::var("VALFORGE_BUDGET") {
            Ok(text) => text
                .trim()
                .parse()
                .map_err(|_| usage(format!("VALFORGE_BUDGET is not a count: `{text}`")))?,
            Err(_) => DEFAULT_BUDGET,
        },
    };
    if budget < 2 {
        return Err(usage("budget must be at least 2"));
    }
    Ok(budget)
}

fn corpus_from_flags(
    max_degree: usize,
    coeffs: Option<&str>,
    random: Option<usize>,
    height: u64,
    seed: u64,
) -> Result<CorpusSpec, Failure> {
    if let Some(count) = random {
        return Ok(CorpusSpec::random(max_degree, count, height, seed)?);
    }
    let (lo, hi) = match coeffs {
        None => (-2, 2),
        Some(text) => {
            let (lo, hi) = text
                .split_once("..")
                .ok_or_else(|| usage(format!("--coeffs expects lo..hi, got `{text}`")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<i64>()
                    .map_err(|_| usage(format!("bad bound `{s}` in --coeffs")))
            };
            (parse(lo)?, parse(hi)?)
        }
    };
    if lo > hi {
        return Err(usage("--coeffs needs lo <= hi"));
    }
    Ok(CorpusSpec::range(max_degree, lo, hi)?)
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, format!("{text}\n")).map_err(|e| Failure {
        code: 1,
        message: format!("{}: {e}", path.display()),
        report: None,
    })
}

fn cmd_eval(chain: &Path, poly: &str, budget: Option<usize>) -> Result<u8, Failure> {
    let chain = json::chain_from_json(&read(chain)?)?;
    let f: QPoly = poly.parse()?;
    let chain = chain.with_budget(resolve_budget(budget)?).validated()?;
    println!("{}", chain.eval(&f)?);
    Ok(0)
}

fn cmd_convert(direction: Direction, input: &Path, output: Option<&Path>) -> Result<u8, Failure> {
    let text = read(input)?;
    let (document, name) = match direction {
        Direction::ToChain => (
            json::chain_to_json(&chain_from_abkps(&json::abkp_from_json(&text)?)?),
            "to-chain",
        ),
        Direction::ToAbkp => (
            json::abkp_to_json(&abkps_from_chain(&json::chain_from_json(&text)?)?),
            "to-abkp",
        ),
    };
    let mut report = Report::new("convert").fingerprint("direction", name);
    report.set_info("input", input.display());
    match output {
        Some(path) => {
            write(path, &document)?;
            report.set_info("output", path.display());
            println!("{}", report.to_json());
        }
        None => println!("{document}"),
    }
    Ok(0)
}

fn cmd_verify(input: &Path, cfg: &SuiteConfig, out: Option<&Path>) -> Result<u8, Failure> {
    let text = read(input)?;
    let probe: serde_json::Value = serde_json::from_str(&text).map_err(Error::from)?;
    let subject = if probe.get("groups").is_some() {
        Subject::Set(json::abkp_from_json(&text)?)
    } else {
        Subject::Chain(json::chain_from_json(&text)?)
    };
    let report = verify(&subject, cfg)?;
    match out {
        Some(path) => write(path, &report.to_json())?,
        None => println!("{}", report.to_json()),
    }
    Ok(if report.is_pass() { 0 } else { 1 })
}
