//! `lctl` — train, apply, and evaluate transform-learning classifiers from
//! the command line.
//!
//! Every command is deterministic given its flags, seed, and input files;
//! artifact-producing commands also write a `.manifest.json` next to their
//! output recording the resolved flags, input digests, and wall time.
//!
//! Exit codes are a stable scripting contract: `0` success, `1` usage
//! error, `2` data or validation error, `3` numerical failure.

mod commands;
mod data_args;
mod manifest;

use clap::Parser;

use commands::{Cli, CliError};

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    env_logger::Builder::from_env(env_logger::Env::new().filter("LCTL_LOG")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help / --version print to stdout and are successes; real
            // usage errors go to stderr with exit code 1
            let code = i32::from(err.use_stderr());
            let _ = err.print();
            return code;
        }
    };
    match commands::dispatch(cli) {
        Ok(()) => 0,
        Err(err) => {
            match &err {
                CliError::Usage(message) => eprintln!("error: {message}"),
                CliError::Core(core) => eprintln!("error: {core}"),
            }
            error_exit_code(&err)
        }
    }
}

/// The scripting contract: 1 usage, 2 data/validation, 3 numerical.
fn error_exit_code(err: &CliError) -> i32 {
    match err {
        CliError::Usage(_) => 1,
        CliError::Core(core) if core.is_numerical() => 3,
        CliError::Core(_) => 2,
    }
}
