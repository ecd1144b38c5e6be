use std::process::ExitCode;

use clap::Parser;
use molvqe_cli::args::Cli;
use molvqe_cli::error::CliError;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version.
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            let err = CliError::usage(e.kind().to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.kind.exit_code() as u8);
        }
    };
    match molvqe_cli::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("molvqe: {}", err.message);
            if err.kind == molvqe_cli::error::ErrorKind::Usage {
                eprintln!("Usage: molvqe {} [OPTIONS]  (see `molvqe help`)", subcommand_name());
            }
            eprintln!("{}", err.to_json());
            ExitCode::from(err.kind.exit_code() as u8)
        }
    }
}

fn subcommand_name() -> String {
    std::env::args()
        .skip(1)
        .find(|a| !a.starts_with('-'))
        .unwrap_or_else(|| "<COMMAND>".into())
}
