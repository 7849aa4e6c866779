//! Command-line workbench tying the pipeline together: analyze a hierarchy,
//! embed it into the Poincare ball, evaluate distortion, restructure it
//! (deterministic heuristics or a validated LLM loop), compare before/after,
//! sweep recommendation subsets, and export visualizations.
//!
//! Every command that writes files does so under a caller-provided output
//! directory and drops a `manifest.json` recording the exact inputs and
//! configuration, so any produced artifact can be regenerated from its
//! manifest alone.

#![forbid(unsafe_code)]

use clap::{Parser, Subcommand};

pub mod commands;
pub mod input;
pub mod manifest;

pub use manifest::RunManifest;

/// Process exit codes: success, validation failure, input error,
/// external-service failure.
#[derive(Debug)]
pub enum CommandError {
    /// The inputs or flags are unusable (parse errors, missing files,
    /// capacity violations, missing credentials). Exit code 2.
    Input(String),
    /// A hierarchy failed the validation gate (including giving up after
    /// every repair attempt). Exit code 1.
    Validation(String),
    /// The completion service failed underneath a well-formed request.
    /// Exit code 3.
    External(String),
}

impl CommandError {
    /// The process exit code this error maps to.
    pub fn exit_code(&self) -> i32 {
        match self {
            CommandError::Validation(_) => 1,
            CommandError::Input(_) => 2,
            CommandError::External(_) => 3,
        }
    }
}

impl std::fmt::Display for CommandError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CommandError::Input(msg)
            | CommandError::Validation(msg)
            | CommandError::External(msg) => f.write_str(msg),
        }
    }
}

impl std::error::Error for CommandError {}

/// Hierarchy embedding workbench.
#[derive(Debug, Parser)]
#[command(name = "workbench", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report structural properties plus the recommended embedding settings.
    Analyze(commands::analyze::AnalyzeArgs),
    /// Embed a hierarchy into the Poincare ball.
    Embed(commands::embed::EmbedArgs),
    /// Measure distortion of an embedding against its hierarchy.
    Evaluate(commands::evaluate::EvaluateArgs),
    /// Produce a restructured hierarchy via heuristics or an LLM session.
    Restructure(commands::restructure::RestructureArgs),
    /// Run the four-criterion validation gate on a candidate hierarchy.
    Validate(commands::validate::ValidateArgs),
    /// Embed original and restructured trees under one configuration and
    /// report both distortion rows plus the structural diff.
    Compare(commands::compare::CompareArgs),
    /// Sweep recommendation subsets and report one distortion row per
    /// subset per strategy.
    Ablate(commands::ablate::AblateArgs),
    /// Export a hierarchy as a DOT graph.
    ExportViz(commands::export_viz::ExportVizArgs),
}

/// Runs one parsed command. Returns the primary stdout text on success.
pub fn run(cli: Cli) -> Result<String, CommandError> {
    match cli.command {
        Command::Analyze(args) => commands::analyze::run(&args),
        Command::Embed(args) => commands::embed::run(&args),
        Command::Evaluate(args) => commands::evaluate::run(&args),
        Command::Restructure(args) => commands::restructure::run(&args),
        Command::Validate(args) => commands::validate::run(&args),
        Command::Compare(args) => commands::compare::run(&args),
        Command::Ablate(args) => commands::ablate::run(&args),
        Command::ExportViz(args) => commands::export_viz::run(&args),
    }
}
