use std::path::PathBuf;

use clap::{ArgAction, Parser, ValueEnum};
use seqtok::{Action, ScanStrategy, StatsFormat};

#[derive(Debug, Parser)]
#[command(name = "seqtok", version, about = "Tokenize text, keeping IPv4 addresses, emails, URLs and dates as single tokens")]
pub struct CliArgs {
    /// Input documents (UTF-8).
    #[arg(long, short, required = true, num_args = 1.., value_name = "PATH")]
    pub input: Vec<PathBuf>,

    /// XML configuration file; flags override its values.
    #[arg(long, short, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Recognize IPv4 addresses. Any kind flag enables only the flagged kinds.
    #[arg(long)]
    pub ip: bool,
    #[arg(long)]
    pub email: bool,
    #[arg(long)]
    pub url: bool,
    #[arg(long)]
    pub date: bool,

    /// Action for every enabled kind, overriding per-kind config actions.
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,

    /// Output file, or directory when several inputs are given.
    #[arg(long, short, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Print statistics to standard output.
    #[arg(long, overrides_with = "no_stats")]
    pub stats: bool,
    #[arg(long, overrides_with = "stats")]
    pub no_stats: bool,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub stats_format: Format,

    /// Prefix special tokens with `<KIND> ` in the token file.
    #[arg(long, action = ArgAction::SetTrue)]
    pub tag: bool,

    /// Emit punctuation runs as tokens instead of discarding them.
    #[arg(long)]
    pub keep_punctuation: bool,

    /// Write the filtered text instead of the token list (needs a remove rule).
    #[arg(long)]
    pub emit_text: bool,

    #[arg(long, value_enum, default_value_t = Strategy::Anchored)]
    pub strategy: Strategy,

    /// Files larger than this are processed line by line.
    #[arg(long, value_name = "BYTES", default_value_t = 64 * 1024 * 1024)]
    pub max_in_memory: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Mode {
    Preserve,
    Remove,
}

impl From<Mode> for Action {
    fn from(m: Mode) -> Action {
        match m {
            Mode::Preserve => Action::Preserve,
            Mode::Remove => Action::Remove,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

impl From<Format> for StatsFormat {
    fn from(f: Format) -> StatsFormat {
        match f {
            Format::Text => StatsFormat::Text,
            Format::Json => StatsFormat::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Strategy {
    Direct,
    Anchored,
}

impl From<Strategy> for ScanStrategy {
    fn from(s: Strategy) -> ScanStrategy {
        match s {
            Strategy::Direct => ScanStrategy::Direct,
            Strategy::Anchored => ScanStrategy::Anchored,
        }
    }
}
