use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = irrseq_cli::Cli::parse();
    ExitCode::from(irrseq_cli::run(cli, &mut std::io::stdout()))
}
