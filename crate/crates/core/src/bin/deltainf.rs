use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use deltainf::cli::{emit_report, run, Command, RunConfig};

/// Verifies the A-infinity operations of an algebra file and prints a report.
#[derive(Debug, Parser)]
#[command(name = "deltainf", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Algebra definition file.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 6)]
    max_arity: usize,
    #[arg(long, default_value_t = 4)]
    max_word: usize,
    #[arg(long, default_value_t = 4)]
    max_cochain: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write the report to this file.
    #[arg(long)]
    report: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let config = RunConfig {
        command: args.command,
        input_path: args.input,
        max_arity: args.max_arity,
        max_word: args.max_word,
        max_cochain: args.max_cochain,
        seed: args.seed,
        report_path: args.report,
    };
    match run(&config) {
        Ok(report) => {
            print!("{}", emit_report(&report));
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("deltainf: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
