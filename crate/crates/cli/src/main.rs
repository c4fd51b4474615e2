mod args;
mod run;

use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let args = args::CliArgs::parse();
    ExitCode::from(run::run(args))
}
