use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use ksix::cli::{run, Flags, EXIT_INPUT};

#[derive(Parser, Debug)]
#[command(name = "ksix", version, about = "Exact computations with unital K-theoretic invariants")]
struct Cli {
    /// One of: ext, hom, pointed-ext, ext-class, baer-sum, gamma, gamma-member,
    /// congruent, shift-unit, cuntz-sum, conditions, uct-assemble, uct-verify, iso, iso-tilde
    command: String,
    /// JSON input document
    input: PathBuf,
    /// Search budget for decisions that may return unknown
    #[arg(long)]
    bound: Option<u64>,
    /// Write the result here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    /// Name of the query to run when several use the same command
    #[arg(long)]
    query: Option<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let flags = Flags {
        bound: cli.bound,
        query: cli.query,
    };
    let outcome = run(&cli.command, &cli.input, &flags);
    let text = outcome.to_json();
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_INPUT as u8);
            }
        }
        None => print!("{text}"),
    }
    if outcome.exit_code >= EXIT_INPUT {
        if let Some(msg) = outcome.document.result.get("error") {
            eprintln!("error: {}", msg.as_str().unwrap_or_default());
        }
    }
    ExitCode::from(outcome.exit_code as u8)
}
