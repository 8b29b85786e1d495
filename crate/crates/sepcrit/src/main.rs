use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use sepcrit::criteria::{ccn_check, lur_detect, ppt_check};
use sepcrit::demo::run_demo;
use sepcrit::io::{CheckDocument, Meta, ScanDocument, StateFile};
use sepcrit::scan::{bisect_threshold, ScanCriterion};
use sepcrit::states::family_by_name;
use sepcrit::{Error, Tolerances, TOL_DETECT};

#[derive(Parser)]
#[command(
    name = "sepcrit",
    version,
    about = "Bipartite entanglement detection: PPT, CCN/realignment, local uncertainty relations"
)]
struct Cli {
    /// Seed for the random corpora used by `demo`
    #[arg(long, global = true, default_value_t = 20240901)]
    seed: u64,

    /// Detection margin: a criterion fires only beyond its threshold by
    /// more than this
    #[arg(long, global = true, default_value_t = TOL_DETECT)]
    tol_detect: f64,

    /// Omit the provenance block from JSON output
    #[arg(long, global = true)]
    no_meta: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate criteria on a state loaded from a JSON file
    Check(CheckArgs),
    /// Bisect the detection threshold of a criterion over a state family
    Scan(ScanArgs),
    /// Reproduce the reference thresholds and cross-checks, with a
    /// pass/fail table
    Demo(DemoArgs),
}

#[derive(Args)]
struct CheckArgs {
    /// Path to a state file: {"dim_a": .., "dim_b": .., "matrix": [[[re, im], ..], ..]}
    #[arg(long)]
    state: PathBuf,

    /// Comma-separated criteria to run: ppt, ccn, lur
    #[arg(long, default_value = "ppt,ccn,lur")]
    criteria: String,
}

#[derive(Args)]
struct ScanArgs {
    /// Family name: noisy_singlet or tiles
    #[arg(long)]
    family: String,

    /// Criterion: ppt, ccn, lur or lur_fixed
    #[arg(long)]
    criterion: String,

    /// Bracket [lo, hi]; the criterion must be quiet at lo and firing at hi
    #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
    bracket: Option<Vec<f64>>,

    /// Bisection tolerance on the parameter
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
}

#[derive(Args)]
struct DemoArgs {
    /// Emit the table as JSON instead of text
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

/// 2 for input problems, 1 for computation failures.
fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::NoConvergence => 1,
        _ => 2,
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    let tol = Tolerances::default();
    let meta = if cli.no_meta {
        None
    } else {
        Some(Meta::new(cli.seed, cli.tol_detect, &tol))
    };

    match &cli.command {
        Command::Check(args) => {
            let raw = fs::read_to_string(&args.state).map_err(|e| {
                Error::InvalidParameter(format!("cannot read {}: {e}", args.state.display()))
            })?;
            let file: StateFile = serde_json::from_str(&raw)
                .map_err(|e| Error::InvalidParameter(format!("state file parse error: {e}")))?;
            let rho = file.to_density(&tol)?;
            let mut reports = Vec::new();
            for name in args.criteria.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let report = match name {
                    "ppt" => ppt_check(&rho, cli.tol_detect)?,
                    "ccn" => ccn_check(&rho, cli.tol_detect)?,
                    "lur" => lur_detect(&rho, cli.tol_detect)?,
                    other => {
                        return Err(Error::InvalidParameter(format!(
                            "unknown criterion '{other}' (expected ppt, ccn or lur)"
                        )))
                    }
                };
                reports.push(report);
            }
            let doc = CheckDocument { reports, meta };
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            Ok(ExitCode::SUCCESS)
        }
        Command::Scan(args) => {
            let family = family_by_name(&args.family)?;
            let criterion = ScanCriterion::from_str(&args.criterion)?;
            let bracket = match &args.bracket {
                Some(b) => (b[0], b[1]),
                None => family.p_range(),
            };
            let scan =
                bisect_threshold(&family, criterion, bracket, args.tol, None, cli.tol_detect)?;
            let doc = ScanDocument { scan, meta };
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            Ok(ExitCode::SUCCESS)
        }
        Command::Demo(args) => {
            let doc = run_demo(cli.seed, cli.tol_detect)?;
            if args.json {
                println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            } else {
                println!(
                    "{:<42} {:>14} {:>14} {:>14}  result",
                    "row", "observed", "low", "high"
                );
                for row in &doc.rows {
                    println!(
                        "{:<42} {:>14.8} {:>14.6e} {:>14.6e}  {}",
                        row.name,
                        row.observed,
                        row.low,
                        row.high,
                        if row.pass { "PASS" } else { "FAIL" }
                    );
                }
                println!("overall: {}", if doc.passed { "PASS" } else { "FAIL" });
            }
            if doc.passed {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
    }
}
