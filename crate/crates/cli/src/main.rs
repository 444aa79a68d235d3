use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = rmc_cli::Cli::parse();
    let mut stdout = std::io::stdout().lock();
    match rmc_cli::run(cli, &mut stdout) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
