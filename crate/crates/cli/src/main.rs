use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = adlin_cli::Cli::parse();
    let mut stdout = std::io::stdout().lock();
    let code = adlin_cli::run(cli, &mut stdout);
    ExitCode::from(code as u8)
}
