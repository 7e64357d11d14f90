use std::process::ExitCode;

use clap::Parser;
use koszulcalc::args::Cli;

fn main() -> ExitCode {
    let job = match Cli::parse().into_job() {
        Ok(job) => job,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match koszulcalc::run(&job) {
        Ok(doc) => {
            print!("{doc}");
            ExitCode::from(doc.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
