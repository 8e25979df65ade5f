//! Command-line surface: configuration, run directories, pipeline stages
//! and report emission.

pub mod config;
pub mod error;
pub mod report;
pub mod run_dir;
pub mod stages;
pub mod svg;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use emocirc_core::{baseline_report, fmt3, state_grid, vector_to_angle, LabelMap, RussellTermTable};
use emocirc_eval::PromptMode;

pub use config::LoadedConfig;
pub use error::{CliError, ErrorKind};
pub use run_dir::{RunDir, RunManifest};
use stages::Outcome;

#[derive(Debug, Parser)]
#[command(name = "emocirc", version, about = "Emotion-conditioned generation and circumplex scoring")]
pub struct Cli {
    /// Run configuration (TOML).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Existing run id under the configured output directory.
    #[arg(long, global = true)]
    pub run: Option<String>,
    /// Prompt mode for a new run.
    #[arg(long, global = true)]
    pub mode: Option<PromptMode>,
    /// Comma-separated provider ids for a new run.
    #[arg(long, global = true, value_delimiter = ',')]
    pub models: Vec<String>,
    /// Only cached answers, in-process providers and the stub classifier.
    #[arg(long, global = true)]
    pub offline: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the state grid as `angle_deg,valence,arousal` rows.
    States { n: usize },
    /// Generate answers for every cell of the plan.
    Gen,
    /// Classify the generated answers.
    Classify,
    /// Compute similarity tables, angle series and word-count statistics.
    Score,
    /// Print every candidate reading of the label baseline.
    Baseline,
    /// Evaluate the classifier on a labeled split.
    ClassifierEval,
    /// Write report.md and plots from the run's artifacts.
    Report,
    /// gen, classify, score and report in one go.
    Full,
}

/// `states n` output.
pub fn states_csv(n: usize) -> Result<String, CliError> {
    let grid = state_grid(n).map_err(|e| CliError::config("states", e.to_string()))?;
    let mut out = String::new();
    for v in grid {
        let deg = vector_to_angle(&v).map_err(|e| CliError::failure("states", e.to_string()))?;
        // grid angles are whole or fractional degrees; print the shortest exact form
        let a = (deg.degrees() * 1e6).round() / 1e6;
        let a = if a >= 360.0 { 0.0 } else { a };
        out.push_str(&format!("{a},{},{}\n", fmt3(v.valence()), fmt3(v.arousal())));
    }
    Ok(out)
}

fn load_config(cli: &Cli, stage: &'static str) -> Result<LoadedConfig, CliError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::config(stage, "--config is required"))?;
    LoadedConfig::load(path)
}

fn open_run(cli: &Cli, stage: &'static str) -> Result<RunDir, CliError> {
    let cfg = load_config(cli, stage)?;
    let id = cli
        .run
        .as_ref()
        .ok_or_else(|| CliError::config(stage, "--run is required for this command"))?;
    let run = RunDir::open(&cfg.output_dir(), id)?;
    if let Some(mode) = cli.mode {
        if mode != run.manifest.mode {
            return Err(CliError::config(stage, format!("run {id} uses {} mode", run.manifest.mode)));
        }
    }
    Ok(run)
}

fn open_or_create(cli: &Cli, stage: &'static str) -> Result<RunDir, CliError> {
    if cli.run.is_some() {
        return open_run(cli, stage);
    }
    let cfg = load_config(cli, stage)?;
    let mode = cli.mode.unwrap_or(cfg.config.experiment.mode);
    // fail on a bad plan before creating a directory
    cfg.plan(mode, &cli.models)?;
    RunDir::create(cfg, mode, cli.models.clone(), cli.offline)
}

fn say(out: &mut dyn Write, stage: &str, outcome: Outcome) {
    let _ = match outcome {
        Outcome::Done(msg) => writeln!(out, "{stage}: {msg}"),
        Outcome::AlreadyComplete => writeln!(out, "{stage}: already complete"),
    };
}

fn emit_report(run: &mut RunDir, out: &mut dyn Write) -> Result<(), CliError> {
    let files = report::emit(&run.path, &run.manifest.run_id)?;
    run.record(
        "report",
        run_dir::StageRecord {
            complete: true,
            count: files.len(),
            details: Default::default(),
        },
    )?;
    let _ = writeln!(out, "report: {}", run.file(report::REPORT).display());
    Ok(())
}

/// Executes one command, writing progress to `out`.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::States { n } => {
            let _ = out.write_all(states_csv(*n)?.as_bytes());
        }
        Command::Baseline => {
            let (map, table) = match &cli.config {
                Some(_) => {
                    let cfg = load_config(cli, "baseline")?;
                    (cfg.label_map()?, cfg.term_table()?)
                }
                None => (LabelMap::shipped(), RussellTermTable::shipped()),
            };
            let report = baseline_report(&map, &table).map_err(|e| CliError::failure("baseline", e.to_string()))?;
            let _ = write!(out, "{report}");
        }
        Command::Gen => {
            let mut run = open_or_create(cli, "gen")?;
            let _ = writeln!(out, "run: {}", run.manifest.run_id);
            say(out, "gen", stages::gen(&mut run)?);
        }
        Command::Classify => {
            let mut run = open_run(cli, "classify")?;
            say(out, "classify", stages::classify(&mut run)?);
        }
        Command::Score => {
            let mut run = open_run(cli, "score")?;
            say(out, "score", stages::score(&mut run)?);
        }
        Command::ClassifierEval => {
            let mut run = open_or_create(cli, "classifier-eval")?;
            let _ = writeln!(out, "run: {}", run.manifest.run_id);
            say(out, "classifier-eval", stages::classifier_eval(&mut run)?);
        }
        Command::Report => {
            let mut run = open_run(cli, "report")?;
            emit_report(&mut run, out)?;
        }
        Command::Full => {
            let mut run = open_or_create(cli, "full")?;
            let _ = writeln!(out, "run: {}", run.manifest.run_id);
            say(out, "gen", stages::gen(&mut run)?);
            say(out, "classify", stages::classify(&mut run)?);
            say(out, "score", stages::score(&mut run)?);
            if run.config.config.classifier.test_split.is_some() {
                say(out, "classifier-eval", stages::classifier_eval(&mut run)?);
            }
            emit_report(&mut run, out)?;
        }
    }
    Ok(())
}
