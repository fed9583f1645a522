use std::io::Write;

use clap::Parser;
use tedk_cli::{run, Cli, EXIT_USAGE};

/// Prints lines, stopping quietly if the reader has gone away.
fn emit(lines: &[String]) {
    let mut out = std::io::stdout().lock();
    for l in lines {
        if writeln!(out, "{l}").is_err() {
            return;
        }
    }
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter("TEDK_LOG")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(lines) => emit(&lines),
        Err(f) => {
            emit(&f.output);
            eprintln!("tedk: {}", f.message);
            std::process::exit(f.code);
        }
    }
}
