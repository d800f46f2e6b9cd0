//! `pid` — bivariate partial information decompositions on finite
//! discrete distributions.

use clap::{Parser, Subcommand};
use pid_cli::{
    load_file, load_fixture, parse_direction, render_json, render_plain, run_blackwell,
    run_decompose, run_extract, run_table, run_verify_counterexample, CliError, LoadedInput,
    PlainRender, RunConfig, RunReport,
};
use pid_core::SolverConfig;
use serde::Serialize;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "pid",
    version,
    about = "Bivariate partial information decompositions, extraction and garbling checks"
)]
struct Cli {
    /// Solver objective tolerance, in bits.
    #[arg(long, global = true, value_name = "EPS")]
    tol: Option<f64>,

    /// Number of solver restarts from different feasible points.
    #[arg(long, global = true, value_name = "N")]
    restarts: Option<u32>,

    /// Seed for randomized solver restarts and probe directions.
    #[arg(long, global = true, value_name = "SEED")]
    seed: Option<u64>,

    /// Report information quantities in nats instead of bits.
    #[arg(long, global = true)]
    nats: bool,

    /// Include the full per-partition table in extraction output.
    #[arg(long = "full-table", global = true)]
    full_table: bool,

    /// Emit machine-readable JSON (the default).
    #[arg(long, global = true, overrides_with = "plain")]
    json: bool,

    /// Emit human-readable text instead of JSON.
    #[arg(long, global = true, overrides_with = "json")]
    plain: bool,

    /// Include wall-clock timing in the report (non-reproducible output).
    #[arg(long, global = true)]
    timings: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose I(S;X1,X2) into shared, unique and complementary parts.
    Decompose {
        /// Distribution file: one `s x1 x2 probability` outcome per line.
        #[arg(long, value_name = "FILE", conflicts_with = "fixture")]
        dist: Option<PathBuf>,
        /// Built-in distribution (copy, and, or, xor, sum, x1, f1,
        /// counterexample).
        #[arg(long, value_name = "NAME")]
        fixture: Option<String>,
        /// imin | broja | ext-imin | ext-broja
        #[arg(long, value_name = "MEASURE")]
        measure: String,
    },
    /// Maximize a measure over deterministic coarsenings of the target.
    Extract {
        #[arg(long, value_name = "FILE", conflicts_with = "fixture")]
        dist: Option<PathBuf>,
        #[arg(long, value_name = "NAME")]
        fixture: Option<String>,
        /// imin-si | broja-si | broja-ui1 | broja-ui2 | coinformation |
        /// mutual-information | target-entropy
        #[arg(long, value_name = "MEASURE")]
        measure: String,
    },
    /// Decide whether one predictor's channel is a garbling of the other's.
    Blackwell {
        #[arg(long, value_name = "FILE", conflicts_with = "fixture")]
        dist: Option<PathBuf>,
        #[arg(long, value_name = "NAME")]
        fixture: Option<String>,
        /// Coarsen the target first, e.g. `0,0,1` or `{0,1}{2}`.
        #[arg(long = "target-map", value_name = "PARTITION")]
        target_map: Option<String>,
        /// 1of2 (is the channel to X1 a garbling of the channel to X2?)
        /// or 2of1.
        #[arg(long, value_name = "DIR")]
        direction: String,
    },
    /// Recompute the reference table of shared-information values and
    /// flag mismatches.
    Table,
    /// Check every claim of the worked counterexample.
    VerifyCounterexample,
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(cli));
}

fn run(cli: Cli) -> i32 {
    let mut solver = SolverConfig::default();
    if let Some(tol) = cli.tol {
        solver.objective_tolerance = tol;
    }
    if let Some(restarts) = cli.restarts {
        solver.restarts = restarts;
    }
    if let Some(seed) = cli.seed {
        solver.seed = seed;
    }
    let cfg = RunConfig {
        solver,
        nats: cli.nats,
        full_table: cli.full_table,
        timings: cli.timings,
    };
    let plain = cli.plain;

    let outcome = match &cli.command {
        Command::Decompose {
            dist,
            fixture,
            measure,
        } => load(dist.as_deref(), fixture.as_deref())
            .and_then(|input| run_decompose(&input, measure, &cfg))
            .map(|report| emit(&report, plain)),
        Command::Extract {
            dist,
            fixture,
            measure,
        } => load(dist.as_deref(), fixture.as_deref())
            .and_then(|input| run_extract(&input, measure, &cfg))
            .map(|report| emit(&report, plain)),
        Command::Blackwell {
            dist,
            fixture,
            target_map,
            direction,
        } => parse_direction(direction)
            .and_then(|_| load(dist.as_deref(), fixture.as_deref()))
            .and_then(|input| run_blackwell(&input, target_map.as_deref(), direction, &cfg))
            .map(|report| emit(&report, plain)),
        Command::Table => run_table(&cfg).map(|report| emit(&report, plain)),
        Command::VerifyCounterexample => {
            run_verify_counterexample(&cfg).map(|report| emit(&report, plain))
        }
    };

    match outcome {
        Ok((text, ok)) => {
            print!("{text}");
            if ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn load(dist: Option<&std::path::Path>, fixture: Option<&str>) -> Result<LoadedInput, CliError> {
    match (dist, fixture) {
        (Some(path), None) => load_file(path),
        (None, Some(name)) => load_fixture(name),
        (None, None) => Err(CliError::Input(
            "no input: pass --dist <file> or --fixture <name>".into(),
        )),
        (Some(_), Some(_)) => unreachable!("clap rejects --dist with --fixture"),
    }
}

fn emit<P: Serialize + PlainRender>(report: &RunReport<P>, plain: bool) -> (String, bool) {
    let text = if plain {
        render_plain(report)
    } else {
        render_json(report)
    };
    (text, report.ok)
}
