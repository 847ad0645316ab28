use std::io::Write;
use std::process::ExitCode;

use anchorhom_cli::report::ErrorReport;
use anchorhom_cli::{run, summary, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    match run(cli, argv.clone()) {
        Ok(report) => {
            emit(&serde_json::to_string_pretty(&report).expect("report serializes"));
            eprintln!("{}", summary(&report));
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let out = ErrorReport {
                command: argv,
                error: e.body(),
            };
            emit(&serde_json::to_string_pretty(&out).expect("error serializes"));
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Writes to stdout; a closed pipe on the reading side is not an error here.
fn emit(json: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{json}").and_then(|()| out.flush());
}
