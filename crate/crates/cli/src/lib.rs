//! The `dirac3t` command line: argument handling, dispatch into
//! `dirac3t-core`, and deterministic JSON or CSV output.
//!
//! Exit status is 0 on success, 1 when a computation rejects its input
//! (the output is then `{"error": …, "module": …}`), and 2 for malformed
//! invocations.

pub mod args;
mod commands;
pub mod parse;

use std::ffi::OsString;

use clap::Parser;

pub use commands::render;

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    if let Some(n) = cli.threads {
        // the global pool can be configured once per process; later calls keep it
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let (code, body) = match commands::execute(&cli) {
        Ok(body) => (0, body),
        Err(commands::Failure::Domain(e)) => (1, commands::error_json(e.module(), &e.to_string())),
        Err(commands::Failure::Usage(msg)) => {
            return Outcome { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") };
        }
    };
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &body) {
            return Outcome { code: 1, stdout: commands::error_json("cli", &format!("cannot write {}: {e}", path.display())), stderr: String::new() };
        }
        return Outcome { code, stdout: String::new(), stderr: String::new() };
    }
    Outcome { code, stdout: body, stderr: String::new() }
}
