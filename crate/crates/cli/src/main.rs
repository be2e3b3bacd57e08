// SPDX-License-Identifier: Apache-2.0

//! `astkit` command-line front end.
//!
//! Exit codes: 0 on success, 1 when the toolkit reports an error, 2 on a
//! usage error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "astkit", about = "HLS-C AST toolkit: parse, serialize, build datasets, score runs")]
#[command(arg_required_else_help = true, propagate_version = true)]
pub struct Cli {
    /// Toolkit config (TOML). `ASTKIT_*` environment variables override it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// More log output; repeat for debug.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse an HLS-C file and print its syntax tree.
    Parse(TreeArgs),
    /// Parse, then drop redundant nodes and collapse wrappers.
    Optimize(TreeArgs),
    /// Control-flow graph of the top function.
    Cfg {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = CfgFormat::Dot)]
        format: CfgFormat,
    },
    /// Serialized AST of the top function, as used in training prompts.
    Serialize {
        #[command(flatten)]
        input: Input,
        /// Indent nested blocks.
        #[arg(long)]
        indent: bool,
        /// Append the control-flow graph in DOT form.
        #[arg(long)]
        with_cfg: bool,
    },
    /// Training-set assembly.
    #[command(subcommand)]
    Dataset(DatasetCommand),
    /// Scoring of generated designs.
    #[command(subcommand)]
    Eval(EvalCommand),
    /// Port one Verilog module to HLS-C through the configured LLM.
    Port {
        verilog: PathBuf,
        /// LLM adapter name; the first LLM adapter when omitted.
        #[arg(long)]
        adapter: Option<String>,
    },
}

#[derive(Args, Debug)]
pub struct Input {
    pub file: PathBuf,
    /// Top function; defaults to the configured `top`.
    #[arg(long)]
    pub top: Option<String>,
}

#[derive(Args, Debug)]
pub struct TreeArgs {
    pub file: PathBuf,
    /// Restrict output to this function.
    #[arg(long)]
    pub top: Option<String>,
    /// Print the tree as JSON instead of an outline.
    #[arg(long)]
    pub dump_json: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfgFormat {
    Dot,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum DatasetCommand {
    /// Port, check and serialize every Verilog file under a directory.
    Build {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Evaluation instructions (JSON lines) for the leakage filter.
        #[arg(long)]
        eval_instructions: Option<PathBuf>,
    },
    /// Recompute leakage scores and `kept` flags of an existing dataset.
    Filter {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        eval_instructions: PathBuf,
        /// Records scoring at or above this are dropped; defaults to the config.
        #[arg(long)]
        threshold: Option<f64>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Table,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum EstimatorArg {
    FirstK,
    Unbiased,
}

#[derive(Subcommand, Debug)]
pub enum EvalCommand {
    /// synth@k / pass@k per model, overall and per difficulty tier.
    Report {
        /// Attempt outcomes, JSON lines.
        #[arg(long)]
        outcomes: PathBuf,
        /// Problems with `problem_id` and `reference_verilog_chars`, JSON lines.
        #[arg(long)]
        problems: PathBuf,
        /// Comma-separated k values; defaults to the config.
        #[arg(long, value_delimiter = ',')]
        k: Vec<u32>,
        /// Explicit tier boundaries `b1,b2` in characters.
        #[arg(long, value_delimiter = ',', num_args = 1)]
        tiers: Vec<u64>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
        /// Models to report; all models present when omitted.
        #[arg(long)]
        model: Vec<String>,
        #[arg(long, value_enum, default_value_t = EstimatorArg::FirstK)]
        estimator: EstimatorArg,
    },
    /// Per-problem pass/fail marks at each k for one model.
    Matrix {
        #[arg(long)]
        outcomes: PathBuf,
        #[arg(long, default_value = astkit::eval::DEFAULT_MODEL)]
        model: String,
        #[arg(long, value_delimiter = ',')]
        k: Vec<u32>,
    },
    /// Count constraint verdicts in a simulation log.
    SimLog {
        log: PathBuf,
        /// Reject lines outside the constraint protocol.
        #[arg(long)]
        strict: bool,
    },
}

fn version() -> String {
    format!(
        "{} (templates {})",
        astkit::VERSION,
        astkit::templates::TEMPLATE_VERSION
    )
}

/// Help text of the deepest subcommand named on the command line.
fn help_for(args: &[String]) -> String {
    let mut cmd = Cli::command().version(version());
    cmd.build();
    for arg in args.iter().skip(1) {
        match cmd.find_subcommand(arg) {
            Some(sub) => cmd = sub.clone(),
            None if arg.starts_with('-') => continue,
            None => break,
        }
    }
    cmd.render_help().to_string()
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let matches = match Cli::command().version(version()).try_get_matches_from(&args) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() && e.kind() != clap::error::ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                eprintln!("\n{}", help_for(&args));
            }
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(2);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
