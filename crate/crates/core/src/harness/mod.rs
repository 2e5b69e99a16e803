//! Experiment orchestration: configs, seeded Monte Carlo runs and CSV output.
//!
//! Every (trial, SNR) pair is an independent task seeded from
//! `(master_seed, trial)`, so records are identical for any degree of
//! parallelism.

mod adaptive;
mod config;
mod records;
mod runner;
mod scenario;
pub mod seed;
mod selftest;
mod sweep;

pub use adaptive::{run_adaptive, run_adaptive_with, ADAPTIVE_EXPERIMENT, ADAPTIVE_RECEIVERS};
pub use config::{
    load_config, load_config_over, AdaptiveSpec, AdcSpec, BorrowedElmSpec, ExperimentConfig,
    GammaSpec, Preset, ReceiverKind, SnrReference,
};
pub use records::{significantly_lower, to_csv_string, write_csv, SerRecord, CSV_HEADER};
pub use selftest::{run_selftest, SelfCheck};
pub use sweep::{
    run_bias_ablation, run_bias_ablation_with, run_ser_sweep, run_ser_sweep_with, StaticSystem,
    ABLATION_EXPERIMENT, ABLATION_SYSTEMS, SWEEP_EXPERIMENT,
};

/// Look up the record for `receiver` at `snr_db` (and `frame`).
pub fn find_record<'a>(
    records: &'a [SerRecord],
    receiver: &str,
    snr_db: f64,
    frame: i64,
) -> Option<&'a SerRecord> {
    records
        .iter()
        .find(|r| r.receiver == receiver && r.snr_db == snr_db && r.frame == frame)
}
