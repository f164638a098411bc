use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod check;
mod dump;
mod eval;
mod load;
mod style;

/// Exit statuses shared by the subcommands.
pub mod status {
    pub const OK: u8 = 0;
    pub const INPUT: u8 = 1;
    pub const INCONSISTENT: u8 = 2;
    pub const UNDEFINED: u8 = 3;
    pub const NO_MODEL: u8 = 4;
}

#[derive(Parser)]
#[command(name = "refclass", version, about = "Reference-class direct inference over a knowledge base")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Point,
    Interval,
}

impl From<ModeArg> for refclass::Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Point => refclass::Mode::Point,
            ModeArg::Interval => refclass::Mode::Interval,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the probability of a sentence (every named sentence by default)
    Eval {
        /// Knowledge base file, or `-` for stdin
        file: PathBuf,
        /// Sentence label such as `S14`, or an inline form such as `heads(t14)`
        #[arg(short, long)]
        query: Option<String>,
        #[arg(short, long, value_enum, default_value_t = ModeArg::Interval)]
        mode: ModeArg,
        /// One JSON object per query, one per line
        #[arg(long)]
        json: bool,
        /// Show the candidate table, deletions and survivors
        #[arg(long)]
        trace: bool,
    },
    /// Run the sanity check and optionally search for a finite model
    Check {
        file: PathBuf,
        /// Search populations of up to N elements
        #[arg(long, value_name = "N")]
        model: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// List the closure: memberships, subsets, fused statistics, sentence groups
    Dump {
        file: PathBuf,
        /// Print the knowledge base itself in canonical source form instead
        #[arg(long)]
        source: bool,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Eval {
            file,
            query,
            mode,
            json,
            trace,
        } => eval::run(&file, query.as_deref(), mode.into(), json, trace),
        Command::Check { file, model, json } => check::run(&file, model, json),
        Command::Dump { file, source, json } => dump::run(&file, source, json),
    };
    ExitCode::from(code)
}
