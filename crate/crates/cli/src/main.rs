use std::io::{Read, Write};
use std::process::ExitCode;

use alr_cli::report::Report;
use alr_cli::{run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let source = match &cli.input {
        Some(path) => std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map(|_| s).map_err(|e| e.to_string())
        }
    };
    let outcome = match source {
        Ok(s) => run(&cli, &s),
        Err(msg) => {
            let r = Report::usage("input", None, format!("cannot read input: {msg}"));
            alr_cli::Outcome {
                code: r.status.exit_code(),
                stdout: r.render(cli.format),
            }
        }
    };
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(outcome.stdout.as_bytes());
    ExitCode::from(outcome.code as u8)
}
