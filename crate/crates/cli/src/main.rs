//! `ewlab <scenario> --config path [--out dir] [--seed n]`

mod config;
mod output;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::{RunConfig, Scenario};
use run::Failure;

#[derive(Parser, Debug)]
#[command(name = "ewlab", version, about = "Two-phase interface laboratory: scenarios and data emission")]
struct Cli {
    scenario: Scenario,
    /// RunConfig JSON (see schema/run_config.schema.json).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides the config's `out`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Random seed; overrides the config's `seed`.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cfg = match RunConfig::load(&cli.config) {
        Ok(c) => c,
        Err(e) => return report(Failure::Usage(e)),
    };
    if let Some(out) = cli.out {
        cfg.out = out;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Err(e) = cfg.validate(cli.scenario) {
        return report(Failure::Usage(e));
    }
    match run::run(cli.scenario, &cfg) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(f) => report(f),
    }
}

fn report(f: Failure) -> ExitCode {
    eprintln!("ewlab: {}: {:#}", f.label(), f.error());
    ExitCode::from(f.code())
}
