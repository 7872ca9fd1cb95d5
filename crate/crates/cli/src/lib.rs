//! The `alr` command line front end: input documents, commands, reports.

pub mod commands;
pub mod report;
pub mod workspace;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::commands::Options;
use crate::report::{Format, Report, Status};
use crate::workspace::Workspace;

#[derive(Parser, Debug)]
#[command(name = "alr", version, about = "Exact almost cohomology of Lie rings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Input document; standard input when omitted.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Object the command applies to, in place of the first argument.
    #[arg(long, global = true)]
    pub object: Option<String>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Seed for the falsification sampler.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest carrier the enumeration oracles will walk.
    #[arg(long = "oracle-bound", global = true, default_value_t = alr_core::oracle::DEFAULT_BOUND)]
    pub oracle_bound: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and validate the document.
    Validate,
    /// Print the document in canonical form.
    Print,
    /// Series, centres, characteristic and Cartan queries of a ring.
    Invariants { ring: Option<String> },
    /// contained | commensurable | centraliser | module-centraliser |
    /// normaliser | stabiliser | center | chain | cartan | bound
    Almost { query: String, args: Vec<String> },
    /// H~0, H~1 and the classical comparator of a module.
    Cohomology { module: Option<String> },
    /// Six-term sequence, exactness and connecting map of a sequence.
    Sequence { sequence: Option<String> },
    /// finite-index-isogeny | finite-quotient-embedding | quo-almost-central |
    /// res-injective | res-image-central | five-term | cartan-supplement |
    /// nested-quotient
    Check { check: String, args: Vec<String> },
    /// enumerate | solve | classical | field | sample
    Oracle { query: String, args: Vec<String> },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Print => "print",
            Command::Invariants { .. } => "invariants",
            Command::Almost { .. } => "almost",
            Command::Cohomology { .. } => "cohomology",
            Command::Sequence { .. } => "sequence",
            Command::Check { .. } => "check",
            Command::Oracle { .. } => "oracle",
        }
    }
}

/// What a run writes to standard output, and its exit code.
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn report(r: Report, format: Format) -> Self {
        Outcome {
            code: r.status.exit_code(),
            stdout: r.render(format),
        }
    }
}

fn with_object(object: &Option<String>, args: &[String]) -> Vec<String> {
    object.iter().cloned().chain(args.iter().cloned()).collect()
}

/// Runs a parsed command line against the given document text.
pub fn run(cli: &Cli, source: &str) -> Outcome {
    let name = cli.command.name();
    let ws = match Workspace::parse(source) {
        Ok(ws) => ws,
        Err(errors) => {
            let r = Report::error(
                name,
                None,
                Status::Fail,
                json!({ "message": "document failed validation", "errors": errors }),
            );
            return Outcome::report(r, cli.format);
        }
    };
    let opts = Options {
        seed: cli.seed,
        oracle_bound: cli.oracle_bound,
    };
    let object = |positional: &Option<String>| positional.clone().or_else(|| cli.object.clone());
    let missing = || Report::usage(name, None, "no object given");
    let report = match &cli.command {
        Command::Validate => commands::validate(&ws),
        Command::Print => {
            return Outcome {
                stdout: ws.print() + "\n",
                code: 0,
            }
        }
        Command::Invariants { ring } => match object(ring) {
            Some(r) => commands::invariants(&ws, &r),
            None => missing(),
        },
        Command::Cohomology { module } => match object(module) {
            Some(m) => commands::cohomology(&ws, &m),
            None => missing(),
        },
        Command::Sequence { sequence } => match object(sequence) {
            Some(s) => commands::sequence(&ws, &s),
            None => missing(),
        },
        Command::Almost { query, args } => commands::almost(&ws, query, &with_object(&cli.object, args)),
        Command::Check { check, args } => commands::check(&ws, check, &with_object(&cli.object, args)),
        Command::Oracle { query, args } => commands::oracle(&ws, query, &with_object(&cli.object, args), &opts),
    };
    Outcome::report(report, cli.format)
}
