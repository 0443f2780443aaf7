use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use tlsym_cli::{run, RunConfig, RunError};

fn main() -> ExitCode {
    let cfg = match RunConfig::try_parse() {
        Ok(cfg) => cfg,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = RunError { kind: "InvalidConfig".into(), message: e.to_string(), exit: 2 };
            eprintln!("{}", err.to_json());
            return ExitCode::from(2);
        }
    };
    match run(&cfg) {
        Ok(report) => {
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let mut text = report.render(cfg.format);
            if !text.ends_with('\n') {
                text.push('\n');
            }
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::from(report.exit as u8)
        }
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit as u8)
        }
    }
}
