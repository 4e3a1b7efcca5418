//! `spanner-lab`: generate instances, run spanner algorithms, verify
//! results and tabulate benchmarks.

mod bench;
mod gen;
mod run;
mod util;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use util::{Failure, EXIT_PARAM};

#[derive(Parser, Debug)]
#[command(name = "spanner-lab", version, about = "Light spanner experiments with exact arithmetic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a generated instance as an edge list.
    Gen(gen::GenArgs),
    /// Run an algorithm on a graph file, emitting a spanner file and a JSON report.
    Run(run::RunArgs),
    /// Recompute the stretch and weight of a spanner file.
    Verify(verify::VerifyArgs),
    /// Run every row of a manifest and print a CSV table.
    Bench {
        manifest: PathBuf,
        /// CSV destination; standard output when absent.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_PARAM)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Gen(args) => gen::cmd_gen(&args),
        Command::Run(args) => run::cmd_run(&args),
        Command::Verify(args) => verify::cmd_verify(&args),
        Command::Bench { manifest, out } => bench::cmd_bench(&manifest, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let failure = Failure::from(err);
            eprintln!("error: {:#}", failure.error);
            ExitCode::from(failure.code)
        }
    }
}
