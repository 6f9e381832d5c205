use std::process::ExitCode;

use clap::Parser;
use phasewig_cli::{run, Cli, RunOptions};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = RunOptions { seed: cli.seed, stride: cli.stride };
    match run(cli.command, cli.config.as_deref(), &cli.out, opts) {
        Ok(report) => {
            print!("{}", report.summary);
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
        Err(e) => {
            eprintln!("phasewig: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
