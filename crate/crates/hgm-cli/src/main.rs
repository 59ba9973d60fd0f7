//! `hgm`: point counts, character sums, hypergeometric sums, local zeta
//! factors and identity suites, emitted as line-delimited JSON records.

mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use commands::{CommandError, Record};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let out_path = cli.common().out.clone();
    let (records, status) = match commands::run(&cli) {
        Ok((records, verified)) => (records, if verified { 0 } else { 3 }),
        Err(CommandError { record, code }) => {
            log::error!("{}", record.error_message().unwrap_or_default());
            (vec![record], code)
        }
    };
    if let Err(e) = emit(&records, out_path.as_deref()) {
        eprintln!("hgm: cannot write output: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(status)
}

fn emit(records: &[Record], path: Option<&str>) -> std::io::Result<()> {
    let mut buf = Vec::new();
    for r in records {
        serde_json::to_writer(&mut buf, r)?;
        buf.push(b'\n');
    }
    match path {
        Some(p) => std::fs::write(p, buf),
        None => std::io::stdout().lock().write_all(&buf),
    }
}
