use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Command, FromArgMatches};

mod config;
mod experiments;
mod report;

use config::{ConfigError, ExperimentConfig, Flags};
use report::Status;

fn command() -> Command {
    let mut cmd = Command::new("zetalab")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Numerical experiments on the mean-square integral equation of zeta")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for exp in experiments::registry() {
        cmd = cmd.subcommand(Flags::augment_args(
            Command::new(exp.name()).about(exp.about()),
        ));
    }
    cmd
}

fn run(args: impl IntoIterator<Item = String>) -> Result<Status, ConfigError> {
    let matches = match command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return Ok(Status::Ok);
        }
        Err(e) => return Err(ConfigError(e.to_string().trim_end().to_string())),
    };
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    let flags = Flags::from_arg_matches(sub).map_err(|e| ConfigError(e.to_string()))?;
    let cfg = ExperimentConfig::resolve(&flags)?;
    let exp =
        experiments::find(name).ok_or_else(|| ConfigError(format!("unknown command {name}")))?;

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cfg.threads {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| ConfigError(e.to_string()))?;
    let report = pool.install(|| exp.run(&cfg))?;

    let text = report.render(cfg.format);
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, &text)
                .map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
            for f in &report.failures {
                eprintln!("FAIL: {f}");
            }
        }
        None => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            if cfg.format != config::Format::Table {
                for f in &report.failures {
                    eprintln!("FAIL: {f}");
                }
            }
        }
    }
    Ok(report.status)
}

fn main() -> ExitCode {
    match run(std::env::args()) {
        Ok(status) => ExitCode::from(status.exit_code()),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(Status::ConfigError.exit_code())
        }
    }
}
