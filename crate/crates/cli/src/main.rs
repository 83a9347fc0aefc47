//! `gbgen`: generate, check, profile and benchmark Groebner basis datasets.

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::Outcome;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let fmt = cli.format;
    let result = match &cli.command {
        Command::Generate {
            gen,
            out,
            verify_fraction,
        } => commands::generate(gen, out, *verify_fraction, fmt),
        Command::Verify {
            input,
            oracle,
            timeout,
            failures_only,
        } => commands::verify(input, &oracle.options(*timeout), *failures_only, fmt),
        Command::Profile { input } => commands::profile(input, fmt),
        Command::Bench {
            gen,
            also_n,
            timeout,
            oracle,
        } => commands::bench(gen, also_n, &oracle.options(*timeout), fmt),
        Command::Tokenize { input, out } => commands::tokenize(input, out.as_deref(), fmt),
        Command::Fglm { input, from, to, out } => commands::fglm(input, *from, *to, out.as_deref(), fmt),
        Command::Solve { input } => commands::solve(input, fmt),
    };
    match result {
        Ok(Outcome::Passed) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
