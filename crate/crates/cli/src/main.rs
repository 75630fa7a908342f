mod args;
mod commands;
mod error;
mod settings;
mod verify;

use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};
use crate::commands::Context;
use crate::error::CliResult;

fn run(cli: &Cli) -> CliResult<()> {
    let ctx = Context::resolve(&cli.common)?;
    log::debug!("resolved {ctx:?}");
    match &cli.command {
        Command::Rates => commands::cmd_rates(&ctx),
        Command::Surface => commands::cmd_surface(&ctx),
        Command::Region(a) => commands::cmd_region(&ctx, a),
        Command::Asymptotics(a) => commands::cmd_asymptotics(&ctx, a),
        Command::Optimize(a) => commands::cmd_optimize(&ctx, a),
        Command::Verify(a) => verify::cmd_verify(&ctx, a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("BOSONIC_MAC_LOG", "warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
