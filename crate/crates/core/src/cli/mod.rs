//! Batch command-line front end.

mod commands;

use crate::syntax::Language;
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::Value;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable or malformed input: exit code 2.
    #[error("{0}")]
    Input(String),
    /// Well-formed input the semantics rejects: exit code 1.
    #[error("{0}")]
    Semantic(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Semantic(_) => 1,
        }
    }
}

pub(crate) fn input(e: impl ToString) -> CliError {
    CliError::Input(e.to_string())
}

pub(crate) fn semantic(e: impl ToString) -> CliError {
    CliError::Semantic(e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "gensem", version)]
#[command(about = "Evaluate formulas under standard and generalized (Henkin-style) semantics")]
pub struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub output: OutputFormat,

    /// JSON config with the symbolic bound and enumeration caps
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Search bound for the symbolic finite/cofinite frame
    #[arg(long, global = true)]
    pub bound: Option<u64>,

    /// Seed for randomized suites
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Lang {
    Modal,
    Fol,
    Mso,
    #[value(name = "two_sorted")]
    TwoSorted,
}

impl From<Lang> for Language {
    fn from(l: Lang) -> Self {
        match l {
            Lang::Modal => Language::Modal,
            Lang::Fol => Language::Fol,
            Lang::Mso => Language::Mso,
            Lang::TwoSorted => Language::TwoSorted,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SemanticsArg {
    Standard,
    General,
}

#[derive(Args, Debug, Clone)]
pub struct FormulaArg {
    /// Formula text
    #[arg(long, conflicts_with = "formula_file")]
    pub formula: Option<String>,

    /// File holding the formula text
    #[arg(long)]
    pub formula_file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a formula in a model
    Eval {
        #[arg(long, value_enum)]
        lang: Lang,
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        formula: FormulaArg,
        #[arg(long, value_enum, default_value_t = SemanticsArg::General)]
        semantics: SemanticsArg,
        /// Variable binding `x=a`, `X={a,b}` or `P=point`; repeatable
        #[arg(long = "bind")]
        bindings: Vec<String>,
        /// Assignment for first-order models, comma separated in variable order
        #[arg(long)]
        assignment: Option<String>,
    },
    /// Least fixed point of `mu X. ...` under both semantics, or the
    /// transitive closure of a relation
    Lfp {
        #[arg(long, required_unless_present = "relation")]
        model: Option<PathBuf>,
        #[command(flatten)]
        formula: FormulaArg,
        /// Only this semantics
        #[arg(long, value_enum)]
        semantics: Option<SemanticsArg>,
        /// Relation JSON for the transitive-closure functional
        #[arg(long, conflicts_with = "model")]
        relation: Option<PathBuf>,
    },
    /// Ultrafilter frame of an algebra, or the algebra of a general frame
    Represent {
        #[arg(long, required_unless_present = "model")]
        algebra: Option<PathBuf>,
        #[arg(long, conflicts_with = "algebra")]
        model: Option<PathBuf>,
    },
    /// Translate a formula: `mso` to two-sorted, `fol` to the guarded fragment
    /// or the extension embedding
    Translate {
        #[arg(long, value_enum)]
        lang: Lang,
        #[command(flatten)]
        formula: FormulaArg,
        #[arg(long, value_enum, default_value_t = Target::Guarded)]
        target: Target,
        /// Variable universe for the guard, comma separated
        #[arg(long, value_delimiter = ',')]
        vars: Vec<String>,
    },
    /// Structural checks on frames, algebras, models and formulas
    Check(CheckArgs),
    /// Run one correspondence suite, or `all`
    Experiment { name: String },
    /// Run a named demo suite
    Demo { name: String },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Guarded,
    Ext,
}

#[derive(Args, Debug)]
#[group(skip)]
#[command(group(ArgGroup::new("subject").required(true).multiple(false)))]
pub struct CheckArgs {
    /// Abstract assignment frame JSON
    #[arg(long, group = "subject")]
    pub confluence: Option<PathBuf>,
    /// Modal algebra JSON
    #[arg(long, group = "subject")]
    pub algebra: Option<PathBuf>,
    /// Modal model JSON: closure of the family and descriptiveness
    #[arg(long, group = "subject")]
    pub frame: Option<PathBuf>,
    /// Henkin model JSON: EXT, individuality, fullness, comprehension
    #[arg(long, group = "subject")]
    pub henkin: Option<PathBuf>,
    /// Relation JSON: fixpoint closure against path search
    #[arg(long, group = "subject")]
    pub relation: Option<PathBuf>,
    /// Positivity of a modal formula
    #[arg(long, group = "subject")]
    pub positivity: Option<String>,
    /// Guardedness of a first-order formula
    #[arg(long, group = "subject")]
    pub guarded: Option<String>,
    /// Transition labels compared by `--confluence`
    #[arg(long, value_delimiter = ',', requires = "confluence")]
    pub relations: Vec<String>,
    /// Guard predicates for `--guarded`
    #[arg(long, value_delimiter = ',', default_value = "G")]
    pub guards: Vec<String>,
    /// Comprehension instances for `--henkin`, with free object variable `y`
    #[arg(long = "comprehension", requires = "henkin")]
    pub comprehension: Vec<String>,
}

/// Config file contents; every field is optional and flags win.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub bound: Option<u64>,
    pub seed: Option<u64>,
    pub max_worlds: Option<usize>,
    pub max_atoms: Option<usize>,
    pub max_states: Option<usize>,
    pub depth: Option<usize>,
    pub ext_depth: Option<usize>,
    pub max_family: Option<usize>,
    pub random: Option<usize>,
    pub max_nodes: Option<usize>,
}

impl Config {
    fn load(path: &Path) -> Result<Self, CliError> {
        serde_json::from_str(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
    }
}

pub(crate) fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

/// A command result in both renderings.
pub struct Rendered {
    pub text: String,
    pub json: Value,
    /// Exit status for a result that is well-formed but reports failure.
    pub code: i32,
}

impl Rendered {
    pub(crate) fn new(text: impl Into<String>, json: Value) -> Self {
        Rendered {
            text: text.into(),
            json,
            code: 0,
        }
    }
}

pub fn execute(cli: &Cli) -> Result<Rendered, CliError> {
    let mut config = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    config.bound = cli.bound.or(config.bound);
    config.seed = cli.seed.or(config.seed);
    commands::dispatch(&cli.command, &config)
}

/// Parses `args`, runs the command and writes its output. Returns the exit
/// status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok(r) => {
            let written = match cli.output {
                OutputFormat::Text => writeln!(out, "{}", r.text),
                OutputFormat::Json => writeln!(out, "{}", r.json),
            };
            if written.is_err() {
                return 2;
            }
            r.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
