use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = cdist_cli::Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = cdist_cli::run(&cli, &mut out);
    let _ = out.flush();
    ExitCode::from(code)
}
