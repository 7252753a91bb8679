use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use ttk::cli::{run, Invocation};

fn main() -> ExitCode {
    let invocation = Invocation::parse();
    let outcome = run(&invocation);
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    std::io::stdout().flush().ok();
    ExitCode::from(outcome.code as u8)
}
