//! Command-line client for an armordb server.

use std::io::{self, IsTerminal, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use armordb::client::{exit, parse_script, run, Options, DEFAULT_ADDR};
use clap::Parser;

/// Send commands to an armordb server.
///
/// Without a COMMAND or --script, commands are read from stdin.
#[derive(Parser)]
#[command(name = "armordb-cli", version)]
struct Args {
    /// Client name the server identifies this caller by.
    #[arg(long)]
    client: String,
    /// Target ontology reference.
    #[arg(long = "ref")]
    reference: String,
    #[arg(long, default_value = DEFAULT_ADDR)]
    addr: String,
    /// Script file (.armorscript) with one command per line.
    #[arg(long, conflicts_with = "command")]
    script: Option<PathBuf>,
    /// Print raw wire responses, one per line.
    #[arg(long)]
    porcelain: bool,
    /// Write the request/response transcript to this file.
    #[arg(long)]
    record: Option<PathBuf>,
    /// A single command, e.g. "ADD CLASS Sphere".
    command: Option<String>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE as u8 } else { 0 });
        }
    };
    let text = match (&args.command, &args.script) {
        (Some(c), _) => Ok(c.clone()),
        (None, Some(p)) => std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display())),
        (None, None) => {
            let mut s = String::new();
            if io::stdin().is_terminal() {
                eprintln!("armordb-cli: reading commands from stdin");
            }
            io::stdin()
                .read_to_string(&mut s)
                .map(|_| s)
                .map_err(|e| format!("stdin: {e}"))
        }
    };
    let script = match text.and_then(|t| parse_script(&t)) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("armordb-cli: {e}");
            return ExitCode::from(exit::USAGE as u8);
        }
    };
    let opts = Options {
        client: args.client,
        reference: args.reference,
        addr: args.addr,
        porcelain: args.porcelain,
        record: args.record,
    };
    let code = run(
        &opts,
        &script,
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    let _ = io::stdout().flush();
    ExitCode::from(code as u8)
}
