//! `raf`: solve, translate, generate, decompose and encode rejection-augmented
//! argumentation frameworks.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use raf_core::encode::Fragment;
use raf_core::td::Heuristic;
use raf_core::{Caps, Config, RcClass, Semantics};

/// Exit status for a positive answer.
pub const YES: u8 = 10;
/// Exit status for a negative answer.
pub const NO: u8 = 20;

#[derive(Parser, Debug)]
#[command(name = "raf", version, about = "Rejection-augmented argumentation frameworks")]
struct Cli {
    #[command(flatten)]
    limits: Limits,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
struct Limits {
    /// Largest framework enumerated by brute force.
    #[arg(long, global = true, default_value_t = Caps::default().arguments, value_parser = positive)]
    max_args: usize,
    /// Largest number of free atoms in a consistency check.
    #[arg(long, global = true, default_value_t = Caps::default().atoms, value_parser = positive)]
    max_atoms: usize,
    /// Largest QBF handed to the built-in evaluator.
    #[arg(long, global = true, default_value_t = Caps::default().qbf_vars, value_parser = positive)]
    max_qbf_vars: usize,
    /// Run brute-force loops on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

impl Limits {
    fn config(&self) -> Config {
        let mut cfg = if self.sequential { Config::sequential() } else { Config::default() };
        cfg.caps = Caps { arguments: self.max_args, atoms: self.max_atoms, qbf_vars: self.max_qbf_vars };
        cfg
    }
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Decide or enumerate extensions.
    Solve(SolveArgs),
    /// Emit a decomposition-guided QBF encoding of stable consistency.
    Encode(EncodeArgs),
    /// Compute or check a tree decomposition of the primal graph.
    Decompose(DecomposeArgs),
    /// Rewrite a framework, constrained framework or twofold query as a RAF.
    Translate(TranslateArgs),
    /// Build a hardness instance from a QBF.
    Generate(GenerateArgs),
    /// Evaluate a QDIMACS or QCIR file.
    QbfEval(QbfEvalArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Task {
    Cons,
    Enum,
    Cred,
    Skept,
    Count,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum InputKind {
    Auto,
    Af,
    Raf,
    Caf,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum MaxReading {
    /// Maximal among sets of the underlying framework.
    Base,
    /// Maximal among the framework's own extensions.
    Rejected,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long = "sem", value_parser = parse_semantics)]
    sem: Semantics,
    #[arg(long, value_enum, default_value_t = Task::Enum)]
    task: Task,
    /// Query argument for `cred` and `skept`.
    #[arg(long)]
    arg: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, value_enum, default_value_t = InputKind::Auto)]
    input: InputKind,
    #[arg(long, value_enum, default_value_t = MaxReading::Base)]
    maximality: MaxReading,
    file: PathBuf,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum QbfFormat {
    Qdimacs,
    Qcir,
}

#[derive(Args, Debug)]
struct EncodeArgs {
    /// Encoding to use; defaults to the one matching the framework's class.
    #[arg(long, value_parser = parse_fragment)]
    fragment: Option<Fragment>,
    #[arg(long, value_enum, default_value_t = QbfFormat::Qdimacs)]
    format: QbfFormat,
    /// PACE decomposition of the primal graph; min-fill when absent.
    #[arg(long)]
    td: Option<PathBuf>,
    /// Output path prefix; the input file stem when absent.
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Also evaluate the encoding and exit 10/20.
    #[arg(long)]
    eval: bool,
    file: PathBuf,
}

#[derive(Args, Debug)]
struct DecomposeArgs {
    #[arg(long, value_parser = parse_heuristic, default_value = "min-fill")]
    heuristic: Heuristic,
    /// Validate this PACE decomposition instead of computing one.
    #[arg(long)]
    check: Option<PathBuf>,
    /// Print vertex names instead of numbers.
    #[arg(long)]
    names: bool,
    #[arg(short, long)]
    out: Option<PathBuf>,
    file: PathBuf,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum From {
    Af,
    Caf,
    Twofold,
}

#[derive(Args, Debug)]
struct TranslateArgs {
    #[arg(long, value_enum)]
    from: From,
    /// Semantics of the constrained framework.
    #[arg(long = "sem", value_parser = parse_semantics)]
    sem: Option<Semantics>,
    /// Comma-separated shrinking for twofold queries.
    #[arg(long, value_delimiter = ',')]
    shrinking: Vec<String>,
    #[arg(short, long)]
    out: Option<PathBuf>,
    file: PathBuf,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    SatSimple,
    Qsat2Prop,
    Qsat2Tight,
    Qsat3Disj,
    DwCred,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    /// Class of the credulous instance (simple, propositional, disjunctive).
    #[arg(long, value_parser = parse_class, default_value = "propositional")]
    class: RcClass,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Variables per quantifier block of a random input.
    #[arg(long, default_value_t = 2, value_parser = positive)]
    block: usize,
    /// Clauses or terms of a random input.
    #[arg(long, default_value_t = 4, value_parser = positive)]
    parts: usize,
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Input QBF in QDIMACS; a random one when absent.
    file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct QbfEvalArgs {
    file: PathBuf,
}

fn parse_semantics(s: &str) -> Result<Semantics, String> {
    s.parse().map_err(|e: raf_core::Error| e.to_string())
}

fn parse_fragment(s: &str) -> Result<Fragment, String> {
    s.parse().map_err(|e: raf_core::Error| e.to_string())
}

fn parse_heuristic(s: &str) -> Result<Heuristic, String> {
    s.parse().map_err(|e: raf_core::Error| e.to_string())
}

fn parse_class(s: &str) -> Result<RcClass, String> {
    s.parse().map_err(|e: raf_core::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cfg = cli.limits.config();
    let run = match &cli.cmd {
        Cmd::Solve(a) => commands::solve(a, &cfg),
        Cmd::Encode(a) => commands::encode(a, &cfg),
        Cmd::Decompose(a) => commands::decompose(a),
        Cmd::Translate(a) => commands::translate(a),
        Cmd::Generate(a) => commands::generate(a),
        Cmd::QbfEval(a) => commands::qbf_eval(a, &cfg),
    };
    match run {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("raf: {f}");
            ExitCode::from(f.code())
        }
    }
}
