//! Command-line front end for the molvqe pipeline.

pub mod args;
pub mod commands;
pub mod error;
pub mod input;
pub mod report;

use args::{Cli, Command, Format};
use error::{CliError, CliResult};

/// Runs one parsed command line and writes its output. An `Err` return
/// means nothing or only a partial result was written.
pub fn run(cli: &Cli) -> CliResult<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::usage("--threads must be at least 1"));
        }
        // Fails only if a pool already exists, as in repeated in-process runs.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let lib = input::library(cli.basis_override.as_deref())?;
    let format = |default: Format| cli.format.unwrap_or(default);
    let out = match &cli.command {
        Command::Hf(g) => commands::hf(g, &lib, format(Format::Json))?,
        Command::Energy(a) => commands::energy(a, &lib, format(Format::Json))?,
        Command::Scan(a) => commands::scan_cmd(a, &lib, format(Format::Csv))?,
        Command::Sweep(a) => commands::sweep(a, &lib, format(Format::Csv))?,
        Command::Optimize(a) => commands::optimize(a, &lib, format(Format::Json))?,
        Command::Fit(a) => commands::fit(a, format(Format::Json))?,
        Command::Fcidump(c) => commands::fcidump(c, &lib, format(Format::Json))?,
        Command::Program(g) => commands::program(g, &lib)?,
        Command::Benchmark(a) => commands::benchmark(a, &lib, format(Format::Csv))?,
    };
    commands::emit(cli.output.as_deref(), &out.text)?;
    match out.deferred {
        Some(e) => Err(e),
        None => Ok(()),
    }
}
