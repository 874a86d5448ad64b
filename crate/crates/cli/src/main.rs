use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use dvn_cli::commands::{execute, Cli};
use dvn_cli::input::Inputs;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command, &mut Inputs::default()) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            // A closed pipe downstream is not an error worth reporting.
            let _ = stdout.write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
