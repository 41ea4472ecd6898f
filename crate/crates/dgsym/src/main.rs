use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use dgsym::commands::dispatch;
use dgsym::config::Cli;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("DGSYM_LOG", "warn")).init();
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match dispatch(&cli) {
        Ok(outcome) => {
            for report in &outcome.reports {
                // A closed pipe is not worth a panic.
                if writeln!(out, "{report}").is_err() {
                    break;
                }
            }
            for line in &outcome.summary {
                eprintln!("{line}");
            }
            outcome.exit_code()
        }
        Err(e) => {
            let _ = writeln!(out, "{}", serde_json::json!({ "error": e.to_string(), "exit_code": e.exit_code() }));
            eprintln!("dgsym: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
