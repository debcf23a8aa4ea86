mod args;
mod commands;
mod config;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;
use crate::config::{error_record, RunConfig};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let name = commands::name(&cli.command);
    let result = RunConfig::from_global(&cli.global).and_then(|cfg| {
        let text = commands::run(&cli.command, &cfg)?;
        cfg.emit(&text)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let line = error_record(name, &err);
            let _ = writeln!(std::io::stderr(), "{line}");
            ExitCode::FAILURE
        }
    }
}
