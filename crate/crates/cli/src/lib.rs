//! Experiment harness: loads a support graph and a stream of instances, runs
//! one algorithm over the stream, validates every run, optionally compares
//! with an exact oracle, and writes a CSV or JSON report.

pub mod commands;
pub mod config;
pub mod fixtures;
pub mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use config::{FileConfig, Settings};
use std::path::PathBuf;

/// Environment variable naming the directory that relative graph, instance
/// and spec paths fall back to.
pub const FIXTURE_ENV: &str = "RECURRENT_FIXTURES";

#[derive(Debug, Parser)]
#[command(name = "recurrent", version, about = "Run recurrent distributed graph algorithms over instance streams")]
pub struct Cli {
    /// JSON or TOML settings file; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Support graph (JSON or edge list).
    #[arg(long, global = true)]
    pub graph: Option<PathBuf>,
    /// Instance stream, one JSON object per line.
    #[arg(long, global = true)]
    pub instances: Option<PathBuf>,
    /// Report file; `.json` writes JSON, anything else CSV. Defaults to CSV on stdout.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Round cap per instance; defaults to the algorithm's own bound.
    #[arg(long, global = true)]
    pub round_cap: Option<usize>,
    /// Compare each run with an exact oracle.
    #[arg(long, global = true)]
    pub oracle: bool,
    /// Skip validation; the exit code is then 0 whenever the runs finish.
    #[arg(long, global = true)]
    pub no_validate: bool,
    /// Run instances one after another instead of on the thread pool.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[arg(long, global = true, env = FIXTURE_ENV)]
    pub fixtures: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Client dominating set on a tree with the k-decomposition algorithm.
    CdsTree {
        /// Decomposition depth, 5, 9, 13, ...
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        root: Option<usize>,
    },
    /// Client dominating set on a planar graph.
    CdsPlanar {
        #[arg(long, value_enum)]
        algo: Option<PlanarAlgo>,
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Color completion of precolorings.
    Cc {
        #[arg(long, value_enum)]
        scheme: Option<CcScheme>,
        #[arg(long)]
        k: Option<u32>,
    },
    /// Locally checkable labellings on paths.
    Lcl {
        #[command(subcommand)]
        action: LclAction,
    },
    /// Maximal matching on edge-subset instances.
    Mm {
        #[arg(long, value_enum)]
        mode: Option<MmMode>,
        #[arg(long)]
        root: Option<usize>,
        /// Forest budget for the arboricity mode.
        #[arg(long)]
        forests: Option<usize>,
    },
    /// Maximal independent set on edge-subset instances.
    Mis {
        #[arg(long, value_enum)]
        colors: Option<MisColors>,
        /// Split the vertices into this many parts of small induced degree first.
        #[arg(long)]
        split: Option<usize>,
    },
    /// Exact optima for every instance.
    Oracle {
        #[arg(long, value_enum)]
        problem: Option<OracleProblem>,
        /// Largest graph the exponential searches accept.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Write graph, instance and spec fixtures.
    Gen(fixtures::GenArgs),
}

#[derive(Debug, Subcommand)]
pub enum LclAction {
    /// Decide Theta(1) versus Theta(n) and print the witness summary.
    Classify {
        #[command(flatten)]
        spec: SpecArg,
        /// Walk length cap; defaults to 2 alpha^2.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Run the synthesized constant-round solver on a path.
    Solve {
        #[command(flatten)]
        spec: SpecArg,
    },
}

#[derive(Debug, Clone, Args)]
pub struct SpecArg {
    /// Spec file in JSON.
    #[arg(long, conflicts_with = "bundled")]
    pub spec: Option<PathBuf>,
    /// Name of a bundled spec, e.g. `mis`.
    #[arg(long)]
    pub bundled: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlanarAlgo {
    Approx39,
    Ctas,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CcScheme {
    Single,
    KRounds,
    Priority,
    Family,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MmMode {
    Tree,
    Arboricity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MisColors {
    Greedy,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleProblem {
    Cds,
    Chromatic,
    CcNew,
    CcAll,
}

/// Merges the settings file into the common flags.
pub fn settings(cli: &Cli, file: &FileConfig) -> Settings {
    let c = &cli.common;
    Settings {
        graph: c.graph.clone().or_else(|| file.graph.clone()),
        instances: c.instances.clone().or_else(|| file.instances.clone()),
        report: c.report.clone().or_else(|| file.report.clone()),
        seed: config::pick(c.seed, file.seed, 0),
        round_cap: c.round_cap.or(file.round_cap),
        oracle: c.oracle || file.oracle.unwrap_or(false),
        validate: !(c.no_validate || file.no_validate.unwrap_or(false)),
        sequential: c.sequential || file.sequential.unwrap_or(false),
        fixtures: c.fixtures.clone(),
    }
}

/// Runs the command and returns the process exit code: 0 when every
/// instance is valid (or validation is off), 1 otherwise.
pub fn run(cli: Cli) -> anyhow::Result<i32> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let s = settings(&cli, &file);
    let report = match &cli.command {
        Command::CdsTree { k, root } => commands::cds_tree(&s, &file, *k, *root)?,
        Command::CdsPlanar { algo, eps } => commands::cds_planar(&s, &file, *algo, *eps)?,
        Command::Cc { scheme, k } => commands::cc(&s, &file, *scheme, *k)?,
        Command::Lcl { action: LclAction::Classify { spec, cap } } => {
            commands::lcl_classify(&s, &file, spec, *cap)?;
            return Ok(0);
        }
        Command::Lcl { action: LclAction::Solve { spec } } => commands::lcl_solve(&s, &file, spec)?,
        Command::Mm { mode, root, forests } => commands::mm(&s, &file, *mode, *root, *forests)?,
        Command::Mis { colors, split } => commands::mis(&s, &file, *colors, *split)?,
        Command::Oracle { problem, cap } => commands::oracle(&s, &file, *problem, *cap)?,
        Command::Gen(args) => {
            fixtures::generate(args, s.seed)?;
            return Ok(0);
        }
    };
    report.write(s.report.as_deref())?;
    log::info!(
        "{}: {} instances, {} invalid, max rounds {}",
        report.summary.algorithm,
        report.summary.instances,
        report.summary.invalid,
        report.summary.max_rounds
    );
    Ok(if !s.validate || report.summary.all_valid { 0 } else { 1 })
}
