mod config;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::{Cli, RunConfig};
use run::CliError;

fn load(cli: &Cli) -> Result<RunConfig, CliError> {
    match (&cli.config, &cli.command) {
        (Some(_), Some(_)) => Err(CliError::Invalid("--config: give either a config file or a subcommand".into())),
        (None, None) => Err(CliError::Invalid("no subcommand given (see --help)".into())),
        (None, Some(cmd)) => Ok(RunConfig { command: cmd.clone(), output: cli.output.clone(), threads: cli.threads }),
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Invalid(format!("--config: {}: {e}", path.display())))?;
            let mut cfg: RunConfig =
                serde_json::from_str(&text).map_err(|e| CliError::Invalid(format!("--config: {e}")))?;
            if cli.output.is_some() {
                cfg.output = cli.output.clone();
            }
            if cli.threads != 0 {
                cfg.threads = cli.threads;
            }
            Ok(cfg)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out_dir = cli.out_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    let result = load(&cli).and_then(|cfg| run::run(&cfg, &out_dir, cli.resume));
    match result {
        Ok(o) if o.counterexample => ExitCode::from(3),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qcflc: {e}");
            ExitCode::from(e.code() as u8)
        }
    }
}
