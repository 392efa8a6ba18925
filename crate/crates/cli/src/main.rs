//! Command-line front end: load a session (ring, ideal, named items), run a
//! named check, print a deterministic report.

mod session;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use hskernel_core::KernelError;

use crate::session::{CliError, Session};

#[derive(Parser)]
#[command(name = "hskernel", version, about = "Hasse-Schmidt derivation kernel")]
enum Cli {
    /// Run a command against a session file.
    Run {
        /// Path to the JSON session file.
        session: PathBuf,
        /// Command and its item arguments; defaults to the session's own
        /// command list.
        command: Vec<String>,
        /// Seed for randomized suites.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Case count for randomized suites.
        #[arg(long, default_value_t = 200)]
        cases: usize,
        /// Target length for step-integrate.
        #[arg(long, default_value_t = 4)]
        target: usize,
        /// Also write the report as JSON to this path.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let Cli::Run {
        session,
        command,
        seed,
        cases,
        target,
        json,
    } = Cli::parse();
    let text = match std::fs::read_to_string(&session) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", session.display());
            return ExitCode::from(2);
        }
    };
    let sess = match Session::parse(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let commands: Vec<Vec<String>> = if command.is_empty() {
        sess.commands()
            .iter()
            .map(|c| c.split_whitespace().map(String::from).collect())
            .collect()
    } else {
        vec![command]
    };
    let mut all_lines = Vec::new();
    let mut code = 0u8;
    for cmd in &commands {
        match sess.run(cmd, seed, cases, target) {
            Ok((lines, negative)) => {
                all_lines.extend(lines);
                if negative {
                    code = code.max(1);
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(exit_for(&e));
            }
        }
    }
    for line in &all_lines {
        println!("{line}");
    }
    if let Some(path) = json {
        let doc = serde_json::json!({
            "session": session.display().to_string(),
            "commands": commands.iter().map(|c| c.join(" ")).collect::<Vec<_>>(),
            "lines": all_lines,
            "exit": code,
        });
        if let Err(e) = std::fs::write(&path, format!("{doc:#}\n")) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code)
}

fn exit_for(e: &CliError) -> u8 {
    match e {
        CliError::Usage(_) => 2,
        CliError::Kernel(KernelError::DeskScaleExceeded(_) | KernelError::OrderCap(_)) => 3,
        CliError::Kernel(_) => 2,
    }
}
