//! Quasi-static experiments: the receiver comparison sweep and the
//! bias/quantization ablation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::{ExperimentConfig, ReceiverKind};
use super::records::SerRecord;
use super::runner::{run_tasks, Tally};
use super::scenario::{count_errors, observe, BiasPattern, FrontEnds, StaticLink, SymbolBlock};
use super::seed::{derive_seed, stream};
use crate::channel::{ChannelConfig, ChannelProcess};
use crate::error::Result;
use crate::frontend::QamConstellation;
use crate::numeric::ComplexMatrix;
use crate::receivers::{
    mmse_weights, train_natural_elm, train_zf_direct, zf_weights, BorrowedElmModel, SoftDetector,
};

pub const SWEEP_EXPERIMENT: &str = "ser-sweep";
pub const ABLATION_EXPERIMENT: &str = "bias-ablation";

/// Receiver/front-end pairings evaluated on a static channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StaticSystem {
    Receiver(ReceiverKind),
    /// Trained read-out on the unquantized, unbiased signal.
    TrainedZfUnquantized,
    /// Trained read-out on the unquantized signal plus bias.
    TrainedZfUnquantizedBiased,
}

impl StaticSystem {
    pub fn label(&self) -> &'static str {
        match self {
            StaticSystem::Receiver(k) => k.label(),
            StaticSystem::TrainedZfUnquantized => "trained-zf-noquant",
            StaticSystem::TrainedZfUnquantizedBiased => "trained-zf-noquant-bias",
        }
    }
}

/// The four systems compared by the ablation, in output order.
pub const ABLATION_SYSTEMS: [StaticSystem; 4] = [
    StaticSystem::TrainedZfUnquantized,
    StaticSystem::TrainedZfUnquantizedBiased,
    StaticSystem::Receiver(ReceiverKind::TrainedZf),
    StaticSystem::Receiver(ReceiverKind::NaturalElm),
];

fn quasi_static(channel: &ChannelConfig) -> ChannelConfig {
    ChannelConfig {
        velocity_mps: 0.0,
        ..channel.clone()
    }
}

/// Trial `trial` at SNR index `snr_idx`: fresh channel, calibration,
/// training and payload, then every requested system is trained and scored.
pub(crate) fn static_trial(
    cfg: &ExperimentConfig,
    systems: &[StaticSystem],
    trial: usize,
    snr_idx: usize,
) -> Result<Tally> {
    let constellation = QamConstellation::qam16();
    let snr_db = cfg.snr_db_list[snr_idx];
    let trial_seed = derive_seed(cfg.master_seed, trial as u64);
    let chan_cfg = quasi_static(&cfg.channel);
    let process = ChannelProcess::draw(&chan_cfg, derive_seed(trial_seed, stream::CHANNEL))?;
    let h = process.realize(0);
    let n = chan_cfg.n_antennas;
    let k = chan_cfg.n_users;

    let bias = BiasPattern::draw(
        n,
        &mut ChaCha8Rng::seed_from_u64(derive_seed(trial_seed, stream::BIAS)),
    );
    let mut rng =
        ChaCha8Rng::seed_from_u64(derive_seed(trial_seed, stream::SNR_BASE + snr_idx as u64));
    let link = StaticLink::new(&h, cfg, snr_db);

    let preamble = SymbolBlock::random(cfg.preamble_len, k, &constellation, &mut rng);
    let fe = FrontEnds::calibrate(&link.send(&preamble, &mut rng)?, &cfg.adc, &bias)?;
    let train = SymbolBlock::random(cfg.training_len, k, &constellation, &mut rng);
    let y_train = link.send(&train, &mut rng)?;
    let payload = SymbolBlock::random(cfg.payload_len, k, &constellation, &mut rng);
    let y_payload = link.send(&payload, &mut rng)?;

    let mut tally = Tally::new(cfg.payload_len as u64);
    for system in systems {
        let est = estimate_static(
            cfg, *system, &fe, &h, snr_db, trial_seed, &train, &y_train, &y_payload,
        )?;
        tally.push(system.label(), count_errors(&est, &payload, &constellation));
    }
    Ok(tally)
}

#[allow(clippy::too_many_arguments)]
fn estimate_static(
    cfg: &ExperimentConfig,
    system: StaticSystem,
    fe: &FrontEnds,
    h: &ComplexMatrix,
    snr_db: f64,
    trial_seed: u64,
    train: &SymbolBlock,
    y_train: &ComplexMatrix,
    y_payload: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    let g = &cfg.gamma;
    let fit_readout = |adc, gamma| -> Result<ComplexMatrix> {
        let w = train_zf_direct(&observe(y_train, adc)?, &train.x, gamma)?;
        Ok(w.estimate_rows(&observe(y_payload, adc)?))
    };
    match system {
        StaticSystem::Receiver(ReceiverKind::NaturalElm) => {
            let w = train_natural_elm(&observe(y_train, &fe.biased)?, &train.x, g.natural_elm)?;
            Ok(w.estimate_rows(&observe(y_payload, &fe.biased)?))
        }
        StaticSystem::Receiver(ReceiverKind::TrainedZf) => fit_readout(&fe.plain, g.trained_zf),
        StaticSystem::TrainedZfUnquantized => fit_readout(&fe.ideal_plain, g.trained_zf),
        StaticSystem::TrainedZfUnquantizedBiased => fit_readout(&fe.ideal_biased, g.trained_zf),
        StaticSystem::Receiver(ReceiverKind::BorrowedElm) => {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(trial_seed, stream::BORROWED));
            let model = BorrowedElmModel::train(
                &observe(y_train, &fe.plain)?,
                &train.x,
                g.borrowed_elm,
                cfg.borrowed_elm.hidden,
                cfg.borrowed_elm.input_range,
                &mut rng,
            )?;
            Ok(model.estimate_rows(&observe(y_payload, &fe.plain)?))
        }
        StaticSystem::Receiver(ReceiverKind::Zf) => {
            Ok(zf_weights(h)?.estimate_rows(&observe(y_payload, &fe.plain)?))
        }
        StaticSystem::Receiver(ReceiverKind::Mmse) => {
            let snr = 10f64.powf(snr_db / 10.0);
            Ok(mmse_weights(h, snr)?.estimate_rows(&observe(y_payload, &fe.plain)?))
        }
    }
}

fn run_static(
    cfg: &ExperimentConfig,
    experiment: &str,
    systems: &[StaticSystem],
    parallel: Option<usize>,
) -> Result<Vec<SerRecord>> {
    cfg.validate()?;
    let n_snr = cfg.snr_db_list.len();
    let tallies = run_tasks(n_snr * cfg.trials, parallel, |task| {
        static_trial(cfg, systems, task % cfg.trials, task / cfg.trials)
    })?;
    let mut out = Vec::new();
    for (snr_idx, chunk) in tallies.chunks(cfg.trials).enumerate() {
        let mut total = Tally::default();
        for t in chunk {
            total.merge(t);
        }
        out.extend(total.records(
            experiment,
            cfg.snr_db_list[snr_idx],
            -1,
            cfg.master_seed,
            cfg.per_user,
        ));
    }
    Ok(out)
}

/// Pooled SER of every configured receiver at every SNR point.
pub fn run_ser_sweep(cfg: &ExperimentConfig) -> Result<Vec<SerRecord>> {
    run_ser_sweep_with(cfg, None)
}

pub fn run_ser_sweep_with(
    cfg: &ExperimentConfig,
    parallel: Option<usize>,
) -> Result<Vec<SerRecord>> {
    let systems: Vec<StaticSystem> = cfg
        .receivers
        .iter()
        .map(|&k| StaticSystem::Receiver(k))
        .collect();
    run_static(cfg, SWEEP_EXPERIMENT, &systems, parallel)
}

/// Trained read-outs with and without bias, with and without quantization.
pub fn run_bias_ablation(cfg: &ExperimentConfig) -> Result<Vec<SerRecord>> {
    run_bias_ablation_with(cfg, None)
}

pub fn run_bias_ablation_with(
    cfg: &ExperimentConfig,
    parallel: Option<usize>,
) -> Result<Vec<SerRecord>> {
    run_static(cfg, ABLATION_EXPERIMENT, &ABLATION_SYSTEMS, parallel)
}
