use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use twistloop_cli::{execute, Cli};

fn print(v: &serde_json::Value) {
    let text = serde_json::to_string_pretty(v).expect("JSON output");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(out) => {
            print(&out);
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let Some(report) = e.report() {
                print(report);
            }
            let text = serde_json::to_string_pretty(&e.to_json()).expect("JSON output");
            let _ = writeln!(std::io::stderr().lock(), "{text}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
