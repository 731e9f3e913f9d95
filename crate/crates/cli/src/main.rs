use std::fs;
use std::process::ExitCode;

use clap::Parser;
use sumset_cli::args::Cli;
use sumset_cli::run::run_on_pool;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = match run_on_pool(&cli, cli.threads) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("sumset: {e:#}");
            return ExitCode::from(2);
        }
    };
    match &cli.output {
        Some(path) => {
            if let Err(e) = fs::write(path, &outcome.body) {
                eprintln!("sumset: writing {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{}", outcome.body),
    }
    ExitCode::from(outcome.code as u8)
}
