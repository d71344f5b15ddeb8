//! Command-line interface.
//!
//! Exit codes: 0 success or verdict computed, 1 hypothesis not satisfied,
//! 2 input error, 3 search guard exceeded, 4 internal consistency failure.

mod commands;
mod report;

use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

pub use report::{InputHash, Inputs, Report, Stats, SCHEMA};

use crate::error::Error;
use crate::search::{SearchConfig, DEFAULT_GUARD};

pub const EXIT_OK: i32 = 0;
pub const EXIT_HYPOTHESIS: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_GUARD: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Syntax { .. }
        | Error::ArityMismatch { .. }
        | Error::OutOfRange { .. }
        | Error::UnknownSymbol(_)
        | Error::VariableOutOfRange { .. }
        | Error::SignatureMismatch(_)
        | Error::ConstantOutsideSubset(_)
        | Error::NotComposable { .. }
        | Error::InvalidCategory(_)
        | Error::InvalidExpansion(_)
        | Error::RestrictionNotUnique(_)
        | Error::Invalid(_)
        | Error::Io(_) => EXIT_INPUT,
        Error::GuardExceeded { .. } => EXIT_GUARD,
        Error::Internal(_) => EXIT_INTERNAL,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "ramdeg",
    version,
    about = "Exact Ramsey degree computations on finite categories of embeddings"
)]
pub struct Cli {
    /// Write a JSON report to this path (`-` for standard output, replacing the text output).
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<String>,
    /// Largest number of search items before giving up.
    #[arg(long, global = true, default_value_t = DEFAULT_GUARD)]
    pub guard: u64,
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Quotient coloring searches by the automorphisms of the host.
    #[arg(long, global = true)]
    pub prune: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a structure and print its canonical form.
    Parse { input: String },
    /// List the embeddings of one structure into another.
    Embeddings {
        #[arg(long = "A")]
        a: String,
        #[arg(long = "B")]
        b: String,
    },
    /// List the automorphisms of a structure.
    Aut { input: String },
    /// Apply a reduct definition to a structure.
    Reduct {
        #[arg(long)]
        phi: String,
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Decide an arrow relation C -> (B)^A_{k,t}.
    Arrow(ArrowArgs),
    /// Big and small degrees.
    Degree {
        #[command(subcommand)]
        which: DegreeCommand,
    },
    /// Build and check expansions.
    Expansion {
        #[command(subcommand)]
        which: ExpansionCommand,
    },
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Enumerate a family of small structures up to isomorphism.
    Corpus {
        #[arg(long)]
        family: String,
        #[arg(long)]
        size: usize,
        /// Directory for one structure file per type plus `pool.txt`.
        #[arg(long)]
        out: Option<String>,
    },
    /// Summarize a pool as a category and report its predicates.
    Category {
        #[arg(long)]
        pool: String,
    },
}

#[derive(Debug, Args)]
pub struct ArrowArgs {
    #[arg(long)]
    pub cat: Option<String>,
    #[arg(long = "C")]
    pub c: String,
    #[arg(long = "B")]
    pub b: String,
    #[arg(long = "A")]
    pub a: String,
    #[arg(short = 'k')]
    pub k: usize,
    #[arg(short = 't')]
    pub t: usize,
    /// Color embeddings instead of copies.
    #[arg(long)]
    pub mor: bool,
    /// Report the least refuting coloring as the main result.
    #[arg(long = "find-bad")]
    pub find_bad: bool,
    /// Run with and without symmetry pruning and compare.
    #[arg(long = "cross-check")]
    pub cross_check: bool,
}

#[derive(Debug, Subcommand)]
pub enum DegreeCommand {
    /// Exact big degree of A in S.
    Big {
        #[arg(long)]
        cat: Option<String>,
        #[arg(long = "S")]
        s: String,
        #[arg(long = "A")]
        a: String,
        #[arg(long)]
        mor: bool,
    },
    /// Small degree of A over a pool, with bounds and certificates.
    Small {
        #[arg(long)]
        cat: Option<String>,
        #[arg(long = "A")]
        a: String,
        /// Restrict B to these objects.
        #[arg(long = "B")]
        b: Vec<String>,
        #[arg(long = "k-max")]
        k_max: Option<usize>,
        #[arg(long = "t-max")]
        t_max: Option<usize>,
        #[arg(long)]
        mor: bool,
    },
    /// Check one identity on one instance.
    Verify(IdentityArgs),
}

#[derive(Debug, Args)]
pub struct IdentityArgs {
    /// One of mult, sub, additivity, monotonicity, smaller, cocone.
    #[arg(long)]
    pub identity: String,
    #[arg(long)]
    pub cat: Option<String>,
    #[arg(long = "A")]
    pub a: Option<String>,
    #[arg(long = "B")]
    pub b: Option<String>,
    #[arg(long = "C")]
    pub c: Option<String>,
    #[arg(long = "S")]
    pub s: Option<String>,
    /// Expansion file for `additivity`.
    #[arg(long)]
    pub expansion: Option<String>,
    /// Objects of the pool for `smaller`, comma separated; all by default.
    #[arg(long, value_delimiter = ',')]
    pub pool_objects: Vec<String>,
    /// Constant-free objects added to the ambient category for `cocone`.
    #[arg(long)]
    pub extra: Option<String>,
    /// Largest number of tops in the path-shaped diagrams for `cocone`.
    #[arg(long, default_value_t = 2)]
    pub tops: usize,
}

#[derive(Debug, Subcommand)]
pub enum ExpansionCommand {
    /// Write the age expansion of a host: ordered by default, or over a reduct.
    Generate {
        #[arg(long)]
        host: String,
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        reduct: Option<String>,
        #[arg(long)]
        out: String,
    },
    /// Validate an expansion file and report its properties.
    Check {
        file: String,
        /// Expanded object to test for self-similarity.
        #[arg(long = "self-similar")]
        self_similar: Option<String>,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// A suite name, or `all`.
    #[arg(long)]
    pub identity: String,
    /// Replace the default pool of the suite.
    #[arg(long)]
    pub pool: Option<String>,
}

/// What a command produced.
pub struct Output {
    pub text: String,
    pub result: serde_json::Value,
    pub nodes: u64,
    pub code: i32,
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Parse { .. } => "parse",
        Command::Embeddings { .. } => "embeddings",
        Command::Aut { .. } => "aut",
        Command::Reduct { .. } => "reduct",
        Command::Arrow(_) => "arrow",
        Command::Degree { which } => match which {
            DegreeCommand::Big { .. } => "degree big",
            DegreeCommand::Small { .. } => "degree small",
            DegreeCommand::Verify(_) => "degree verify",
        },
        Command::Expansion { which } => match which {
            ExpansionCommand::Generate { .. } => "expansion generate",
            ExpansionCommand::Check { .. } => "expansion check",
        },
        Command::Verify(_) => "verify",
        Command::Corpus { .. } => "corpus",
        Command::Category { .. } => "category",
    }
}

/// Runs the tool on `argv` (including the program name) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    if cli.guard == 0 {
        eprintln!("error: --guard must be positive");
        return EXIT_INPUT;
    }
    let cfg = SearchConfig::default()
        .with_guard(cli.guard)
        .with_jobs(cli.jobs)
        .with_pruning(cli.prune);
    let mut inputs = Inputs::new(cfg);
    let start = Instant::now();
    let (output, error) = match commands::execute(&cli.command, &mut inputs) {
        Ok(o) => (o, None),
        Err(e) => {
            let code = exit_code(&e);
            let output = Output {
                text: String::new(),
                result: serde_json::json!({ "error": e.to_string() }),
                nodes: 0,
                code,
            };
            (output, Some(e))
        }
    };
    let to_stdout = cli.json.as_deref() == Some("-");
    if let Some(e) = &error {
        eprintln!("error: {e}");
    } else if !to_stdout {
        let _ = std::io::stdout().lock().write_all(output.text.as_bytes());
    }
    if let Some(path) = &cli.json {
        let report = Report {
            schema: SCHEMA,
            version: env!("CARGO_PKG_VERSION"),
            command: command_name(&cli.command),
            inputs: &inputs.list,
            config: cfg,
            exit_code: output.code,
            result: &output.result,
            stats: Stats {
                nodes: output.nodes,
                elapsed_ms: start.elapsed().as_millis(),
            },
        };
        let text = match serde_json::to_string_pretty(&report) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_INTERNAL;
            }
        };
        if to_stdout {
            let _ = writeln!(std::io::stdout().lock(), "{text}");
        } else if let Err(e) = std::fs::write(path, text + "\n") {
            eprintln!("error: {path}: {e}");
            return EXIT_INPUT;
        }
    }
    output.code
}
