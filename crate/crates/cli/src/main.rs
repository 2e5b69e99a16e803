//! Command-line front end for the massive-MIMO ELM receiver simulator.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use elm_mimo::harness::{
    load_config_over, run_adaptive_with, run_bias_ablation_with, run_selftest, run_ser_sweep_with,
    to_csv_string, write_csv, ExperimentConfig, Preset, ReceiverKind, SerRecord,
};

#[derive(Parser)]
#[command(
    name = "elm-mimo",
    version,
    about = "Massive-MIMO uplink ELM receiver simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// SER versus SNR for every configured receiver on a static channel.
    SerSweep(RunArgs),
    /// Bias and quantization ablation with trained linear read-outs.
    BiasAblation(RunArgs),
    /// Per-frame SER of the adaptive receiver on a time-varying channel.
    Adaptive(RunArgs),
    /// Quick internal consistency checks.
    Selftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    Desk,
    Paper,
}

#[derive(Args)]
struct RunArgs {
    /// JSON file whose fields override the preset.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed (overrides the config).
    #[arg(long)]
    seed: Option<u64>,
    /// CSV output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "desk")]
    preset: PresetArg,
    /// Comma-separated receiver list for the sweep.
    #[arg(long, value_delimiter = ',')]
    receivers: Option<Vec<ReceiverKind>>,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    parallel: Option<usize>,
}

impl RunArgs {
    fn config(&self) -> elm_mimo::Result<ExperimentConfig> {
        let base = ExperimentConfig::preset(match self.preset {
            PresetArg::Desk => Preset::Desk,
            PresetArg::Paper => Preset::Paper,
        });
        let mut cfg = match &self.config {
            Some(path) => load_config_over(&base, path)?,
            None => base,
        };
        if let Some(seed) = self.seed {
            cfg.master_seed = seed;
        }
        if let Some(list) = &self.receivers {
            cfg.receivers = list.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn emit(&self, records: &[SerRecord]) -> elm_mimo::Result<()> {
        match &self.out {
            Some(path) => write_csv(records, path),
            None => {
                print!("{}", to_csv_string(records));
                Ok(())
            }
        }
    }
}

fn run(
    args: &RunArgs,
    experiment: fn(&ExperimentConfig, Option<usize>) -> elm_mimo::Result<Vec<SerRecord>>,
) -> elm_mimo::Result<()> {
    if args.parallel == Some(0) {
        return Err(elm_mimo::Error::InvalidArgument(
            "--parallel must be at least 1".into(),
        ));
    }
    let cfg = args.config()?;
    let records = experiment(&cfg, args.parallel)?;
    args.emit(&records)
}

fn selftest() -> bool {
    let mut ok = true;
    for c in run_selftest() {
        println!(
            "{} {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
        ok &= c.passed;
    }
    ok
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::SerSweep(a) => run(a, run_ser_sweep_with),
        Command::BiasAblation(a) => run(a, run_bias_ablation_with),
        Command::Adaptive(a) => run(a, run_adaptive_with),
        Command::Selftest => {
            return if selftest() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
