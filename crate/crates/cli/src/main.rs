//! `selfsim`: validate, render, analyze and compare zipper specs.
//!
//! Exit codes: 0 on success or a passing verdict, 2 when a verdict fails
//! (Jordan violation, non-isomorphic pair, broken Hölder bound or sharpness
//! equality), 1 on input errors. Every run writes a JSON report.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use selfsim::io::{InputDigest, ReportFile};
use selfsim::{Config, KnotRule};

#[derive(Debug, Parser)]
#[command(name = "selfsim", version, about = "Self-similar zipper analysis")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Report file; defaults to `selfsim-<command>.json` in the working directory.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Seed for every random sampler.
    #[arg(long, global = true, env = "SELFSIM_SEED", default_value_t = 0)]
    seed: u64,
    /// Worker threads; rayon's default when unset.
    #[arg(long, global = true, env = "SELFSIM_THREADS")]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a spec's vertex conditions.
    Validate { spec: PathBuf },
    /// Write the depth-k polyline as SVG or CSV, chosen by extension.
    Render {
        spec: PathBuf,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Jordan check, diameter and bounded-turning constant at depth k.
    Analyze {
        spec: PathBuf,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        /// Run the branch and bound for a certified upper bound on M.
        #[arg(long)]
        certify_turning: bool,
        /// Random parameter pairs added to the vertex-pair scan.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Decide the pair's isomorphism class and scan the Hölder bound.
    Compare {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        pairs: usize,
        /// Depth of the cylinder endpoints among the sampled pairs.
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Knots::Proportional)]
        knots: Knots,
    },
    /// Sharpness pairs S_i^k(z_0), S_i^k(z_m) and their images.
    Witness {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value_t = 25)]
        k_max: usize,
        /// One-based map index; defaults to the lowest index attaining the
        /// exponent as log q_i / log p_i.
        #[arg(long)]
        index: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Knots {
    Proportional,
    Uniform,
}

impl From<Knots> for KnotRule {
    fn from(k: Knots) -> Self {
        match k {
            Knots::Proportional => KnotRule::Proportional,
            Knots::Uniform => KnotRule::Uniform,
        }
    }
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Render { .. } => "render",
            Command::Analyze { .. } => "analyze",
            Command::Compare { .. } => "compare",
            Command::Witness { .. } => "witness",
        }
    }

    fn inputs(&self) -> Vec<&PathBuf> {
        match self {
            Command::Validate { spec } | Command::Render { spec, .. } | Command::Analyze { spec, .. } => vec![spec],
            Command::Compare { first, second, .. } | Command::Witness { first, second, .. } => vec![first, second],
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = Config { seed: cli.global.seed, threads: cli.global.threads, ..Config::default() };
    let report_path =
        cli.global.report.clone().unwrap_or_else(|| PathBuf::from(format!("selfsim-{}.json", cli.command.name())));
    let inputs: Vec<InputDigest> = cli.command.inputs().into_iter().filter_map(|p| InputDigest::of(p).ok()).collect();

    let (code, results) = match commands::run(&cli.command, &config) {
        Ok(outcome) => {
            println!("{}", outcome.summary);
            (outcome.code, outcome.results)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            (1, serde_json::json!({ "error": format!("{e:#}") }))
        }
    };
    let command: Vec<String> = std::env::args().skip(1).collect();
    if let Err(e) = ReportFile::new(command, inputs, code, results).write(&report_path) {
        eprintln!("error: cannot write report {}: {e}", report_path.display());
        return ExitCode::from(1);
    }
    ExitCode::from(code as u8)
}
