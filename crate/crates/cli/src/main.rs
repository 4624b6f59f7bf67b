use std::process::ExitCode;

use clap::Parser;

use cycletrace_cli::args::Format;
use cycletrace_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = execute(&cli);
    match cli.format {
        Format::Text => print!("{}", report.to_text()),
        Format::Machine => print!("{}", report.to_machine()),
    }
    for e in report.records_of("error") {
        eprintln!("{}", e.text);
    }
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, report.to_machine()) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::from(report.exit as u8)
}
