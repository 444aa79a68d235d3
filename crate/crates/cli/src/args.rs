use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "rmc", version, about = "Safety checks for regular transition systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether Ind_1 or Ind_b is disjoint from an unsafe set.
    Check(CheckArgs),
    /// Check invariant-language certificates against an unsafe set.
    Certify(CertifyArgs),
    /// Run the Ind_1 check on every model/property pair and write a CSV table.
    Table(TableArgs),
    /// Dump reachability and Ind_1..Ind_B membership of every word of one length.
    Oracle(OracleArgs),
    /// Print an automaton in the text format.
    Dfa(DfaArgs),
    /// Write the built-in models as model files.
    Gen(GenArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Ind1,
    Indb,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    /// Complement of the box-guessing automaton.
    Boxes,
    /// The separation-table automaton A_1.
    A1,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum What {
    /// Minimal DFA of Ind_1.
    Ind1,
    /// The reachable part of A_1 as an NFA.
    A1Raw,
}

/// Where the unsafe configurations come from.
#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct UnsafeArgs {
    /// Name of an unsafe set declared in the model.
    #[arg(long = "unsafe")]
    pub name: Option<String>,
    /// File holding one `nfa` block over the model alphabet.
    #[arg(long = "unsafe-file")]
    pub file: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// Model file, or the name of a built-in model.
    #[arg(long)]
    pub model: String,
    #[command(flatten)]
    pub unsafe_set: UnsafeArgs,
    #[arg(long, value_enum, default_value = "ind1")]
    pub method: Method,
    /// Engine for `--method ind1`.
    #[arg(long, value_enum, default_value = "boxes")]
    pub engine: Engine,
    /// Clause bound b for `--method indb`.
    #[arg(long, default_value_t = 1)]
    pub bound: usize,
    #[arg(long)]
    pub budget_states: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    #[arg(long)]
    pub model: String,
    /// Certificate file; repeat to conjoin several.
    #[arg(long = "certificate", required = true)]
    pub certificates: Vec<PathBuf>,
    /// Expected clause count of every certificate.
    #[arg(long)]
    pub bound: Option<usize>,
    #[command(flatten)]
    pub unsafe_set: UnsafeArgs,
    #[arg(long)]
    pub budget_states: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    /// Directory of `.rts` model files; the built-in catalog when absent.
    #[arg(long)]
    pub catalog: Option<PathBuf>,
    /// Output CSV; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long)]
    pub budget_states: Option<usize>,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(long)]
    pub model: String,
    #[arg(long)]
    pub length: usize,
    /// Largest clause bound; columns ind1..indB are emitted.
    #[arg(long, default_value_t = 1)]
    pub bound: usize,
    #[arg(long)]
    pub budget_states: Option<usize>,
}

#[derive(Args, Debug)]
pub struct DfaArgs {
    #[arg(long)]
    pub model: String,
    #[arg(long, value_enum, default_value = "ind1")]
    pub what: What,
    #[arg(long, value_enum, default_value = "boxes")]
    pub engine: Engine,
    /// State budget of the constructions.
    #[arg(long)]
    pub budget: Option<usize>,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    /// Directory receiving one `NAME.rts` per built-in model.
    #[arg(long, conflicts_with_all = ["name", "ladder"])]
    pub out: Option<PathBuf>,
    /// Print a single built-in model.
    #[arg(long)]
    pub name: Option<String>,
    /// Print the ladder system for this bound.
    #[arg(long)]
    pub ladder: Option<usize>,
}
