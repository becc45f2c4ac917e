use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use hgpadic_cli::{metadata, run, Cli};

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let status = match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                1
            } else {
                0
            }
        }
        Err(failure) => {
            eprintln!("{failure}");
            failure.exit_code()
        }
    };
    if let Some(path) = &cli.meta {
        let record = serde_json::to_string_pretty(&metadata(&args, status)).expect("serializable");
        if let Err(e) = std::fs::write(path, record + "\n") {
            eprintln!("error: cannot write {}: {e}", path.display());
        }
    }
    ExitCode::from(status)
}
