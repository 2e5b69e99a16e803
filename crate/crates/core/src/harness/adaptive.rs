//! Tracking experiment on a time-varying channel.
//!
//! Slot layout per trial: calibration preamble, initialization block, then
//! `n_frames` frames of `frame_training_len` training slots followed by
//! `frame_data_len` payload slots. Three receivers are scored on every
//! payload:
//!
//! * `oselm`: initialized once, then RLS-updated on each frame's training.
//! * `frozen`: the initial weights, never updated.
//! * `retrained`: batch natural ELM refit every frame on the
//!   `benchmark_len` slots immediately preceding the payload, all of them
//!   treated as known training symbols.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::ExperimentConfig;
use super::records::SerRecord;
use super::runner::{run_tasks, Tally};
use super::scenario::{
    count_errors, observe, send_time_varying, BiasPattern, FrontEnds, SymbolBlock,
};
use super::seed::{derive_seed, stream};
use crate::channel::ChannelProcess;
use crate::error::Result;
use crate::frontend::QamConstellation;
use crate::receivers::{train_natural_elm, AdaptiveElmReceiver, SoftDetector};

pub const ADAPTIVE_EXPERIMENT: &str = "adaptive";
pub const ADAPTIVE_RECEIVERS: [&str; 3] = ["oselm", "frozen", "retrained"];

/// Per-frame tallies for one (trial, SNR) task.
pub(crate) fn adaptive_trial(
    cfg: &ExperimentConfig,
    trial: usize,
    snr_idx: usize,
) -> Result<Vec<Tally>> {
    let constellation = QamConstellation::qam16();
    let a = &cfg.adaptive;
    let snr_db = cfg.snr_db_list[snr_idx];
    let trial_seed = derive_seed(cfg.master_seed, trial as u64);
    let process = ChannelProcess::draw(&cfg.channel, derive_seed(trial_seed, stream::CHANNEL))?;
    let n = cfg.channel.n_antennas;
    let k = cfg.channel.n_users;
    let bias = BiasPattern::draw(
        n,
        &mut ChaCha8Rng::seed_from_u64(derive_seed(trial_seed, stream::BIAS)),
    );
    let mut rng =
        ChaCha8Rng::seed_from_u64(derive_seed(trial_seed, stream::SNR_BASE + snr_idx as u64));

    let frame_len = a.frame_training_len + a.frame_data_len;
    let first_frame = cfg.preamble_len + a.init_len;
    let total = first_frame + a.n_frames * frame_len;
    let sigma2 = cfg.noise_variance(snr_db);

    let symbols = SymbolBlock::random(total, k, &constellation, &mut rng);
    let y = send_time_varying(&process, 0, &symbols, &cfg.pa, sigma2, &mut rng)?;
    let fe = FrontEnds::calibrate(&y.rows(0, cfg.preamble_len).into_owned(), &cfg.adc, &bias)?;
    let r = observe(&y, &fe.biased)?;

    let init_rows = r.rows(cfg.preamble_len, a.init_len).into_owned();
    let init_x = symbols.x.rows(cfg.preamble_len, a.init_len).into_owned();
    let mut oselm =
        AdaptiveElmReceiver::init(&init_rows, &init_x, cfg.gamma.natural_elm, a.lambda)?;
    let frozen = oselm.weights();

    let mut frames = Vec::with_capacity(a.n_frames);
    for f in 0..a.n_frames {
        let t0 = first_frame + f * frame_len;
        let d0 = t0 + a.frame_training_len;
        oselm.update(
            &r.rows(t0, a.frame_training_len).into_owned(),
            &symbols.x.rows(t0, a.frame_training_len).into_owned(),
        )?;

        let w_start = d0.saturating_sub(a.benchmark_len).max(cfg.preamble_len);
        let retrained = train_natural_elm(
            &r.rows(w_start, d0 - w_start).into_owned(),
            &symbols.x.rows(w_start, d0 - w_start).into_owned(),
            cfg.gamma.natural_elm,
        )?;

        let data = r.rows(d0, a.frame_data_len).into_owned();
        let sent = symbols.slice(d0, a.frame_data_len);
        let mut tally = Tally::new(a.frame_data_len as u64);
        let detectors: [&dyn SoftDetector; 3] = [&oselm, &frozen, &retrained];
        for (label, det) in ADAPTIVE_RECEIVERS.iter().zip(detectors) {
            tally.push(
                *label,
                count_errors(&det.estimate_rows(&data), &sent, &constellation),
            );
        }
        frames.push(tally);
    }
    Ok(frames)
}

/// Per-frame pooled SER of the adaptive, frozen and retrained receivers.
pub fn run_adaptive(cfg: &ExperimentConfig) -> Result<Vec<SerRecord>> {
    run_adaptive_with(cfg, None)
}

pub fn run_adaptive_with(
    cfg: &ExperimentConfig,
    parallel: Option<usize>,
) -> Result<Vec<SerRecord>> {
    cfg.validate()?;
    let n_snr = cfg.snr_db_list.len();
    let per_task = run_tasks(n_snr * cfg.trials, parallel, |task| {
        adaptive_trial(cfg, task % cfg.trials, task / cfg.trials)
    })?;
    let mut out = Vec::new();
    for (snr_idx, chunk) in per_task.chunks(cfg.trials).enumerate() {
        for f in 0..cfg.adaptive.n_frames {
            let mut total = Tally::default();
            for frames in chunk {
                total.merge(&frames[f]);
            }
            out.extend(total.records(
                ADAPTIVE_EXPERIMENT,
                cfg.snr_db_list[snr_idx],
                f as i64,
                cfg.master_seed,
                cfg.per_user,
            ));
        }
    }
    Ok(out)
}
