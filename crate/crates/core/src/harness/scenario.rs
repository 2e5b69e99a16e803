//! Per-trial link plumbing shared by the experiments.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::config::{AdcSpec, ExperimentConfig};
use crate::channel::ChannelProcess;
use crate::error::Result;
use crate::frontend::{
    bias_quantize_rows, calibrate_adc, transmit, transmit_block, AdcConfig, PowerAmplifier,
    QamConstellation, Quantizer,
};
use crate::numeric::{real_stack_rows, ComplexMatrix, RealMatrix, RealVector};

/// Symbols sent over a block of consecutive symbol slots.
pub(crate) struct SymbolBlock {
    /// Row-major labels, `rows × K`.
    pub labels: Vec<u8>,
    pub x: ComplexMatrix,
}

impl SymbolBlock {
    /// Uniform i.i.d. symbols.
    pub fn random<R: Rng + ?Sized>(
        rows: usize,
        users: usize,
        constellation: &QamConstellation,
        rng: &mut R,
    ) -> Self {
        let labels: Vec<u8> = (0..rows * users)
            .map(|_| rng.random_range(0..16u8))
            .collect();
        let x = ComplexMatrix::from_fn(rows, users, |i, k| {
            constellation.point(labels[i * users + k])
        });
        Self { labels, x }
    }

    pub fn rows(&self) -> usize {
        self.x.nrows()
    }

    pub fn slice(&self, start: usize, len: usize) -> SymbolBlock {
        let k = self.x.ncols();
        SymbolBlock {
            labels: self.labels[start * k..(start + len) * k].to_vec(),
            x: self.x.rows(start, len).into_owned(),
        }
    }
}

/// Uniform random signs-and-magnitudes shared by every SNR point of a trial;
/// scaled to the measured RMS at calibration time.
pub(crate) struct BiasPattern {
    pub re: RealVector,
    pub im: RealVector,
}

impl BiasPattern {
    pub fn draw<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut u = || 2.0 * rng.random::<f64>() - 1.0;
        let re = RealVector::from_fn(n, |_, _| u());
        let im = RealVector::from_fn(n, |_, _| u());
        Self { re, im }
    }
}

/// Receive front ends derived from one calibration preamble.
pub(crate) struct FrontEnds {
    /// Quantized with bias (natural ELM).
    pub biased: AdcConfig,
    /// Quantized, no bias (conventional chain).
    pub plain: AdcConfig,
    /// Unquantized, biased.
    pub ideal_biased: AdcConfig,
    /// Unquantized, no bias.
    pub ideal_plain: AdcConfig,
}

impl FrontEnds {
    pub fn calibrate(preamble: &ComplexMatrix, spec: &AdcSpec, bias: &BiasPattern) -> Result<Self> {
        let samples: Vec<f64> = real_stack_rows(preamble).iter().copied().collect();
        let rms = (samples.iter().map(|s| s * s).sum::<f64>() / samples.len() as f64).sqrt();
        let quantizer = if spec.ideal {
            // still enforce the calibration preconditions
            calibrate_adc(&samples, 1, spec.headroom)?;
            Quantizer::Ideal
        } else {
            calibrate_adc(&samples, spec.bits, spec.headroom)?
        };
        let amp = spec.bias_scale * rms;
        let n = preamble.ncols();
        let biased = AdcConfig::new(quantizer, &bias.re * amp, &bias.im * amp)?;
        let plain = AdcConfig::unbiased(quantizer, n);
        Ok(Self {
            ideal_biased: biased.with_quantizer(Quantizer::Ideal),
            ideal_plain: AdcConfig::unbiased(Quantizer::Ideal, n),
            biased,
            plain,
        })
    }
}

/// Static link at one SNR.
pub(crate) struct StaticLink<'a> {
    pub h: &'a ComplexMatrix,
    pub pa: PowerAmplifier,
    pub sigma2: f64,
}

impl<'a> StaticLink<'a> {
    pub fn new(h: &'a ComplexMatrix, cfg: &ExperimentConfig, snr_db: f64) -> Self {
        Self {
            h,
            pa: cfg.pa,
            sigma2: cfg.noise_variance(snr_db),
        }
    }

    pub fn send(&self, block: &SymbolBlock, rng: &mut ChaCha8Rng) -> Result<ComplexMatrix> {
        transmit_block(self.h, &block.x, self.sigma2, &self.pa, rng)
    }
}

/// Time-varying link: row `i` of a block starting at slot `start` sees `H(start + i)`.
pub(crate) fn send_time_varying(
    process: &ChannelProcess,
    start: u64,
    block: &SymbolBlock,
    pa: &PowerAmplifier,
    sigma2: f64,
    rng: &mut ChaCha8Rng,
) -> Result<ComplexMatrix> {
    let mut h = ComplexMatrix::zeros(process.n_antennas(), process.n_users());
    let mut out = ComplexMatrix::zeros(block.rows(), process.n_antennas());
    for i in 0..block.rows() {
        process.realize_into(start + i as u64, &mut h);
        let y = transmit(&h, &block.x.row(i).transpose(), sigma2, pa, rng)?;
        out.row_mut(i).tr_copy_from(&y);
    }
    Ok(out)
}

/// Front-end output for a received block.
pub(crate) fn observe(y: &ComplexMatrix, adc: &AdcConfig) -> Result<RealMatrix> {
    bias_quantize_rows(y, adc)
}

/// Per-user symbol error counts of hard decisions against the sent block.
pub(crate) fn count_errors(
    estimates: &ComplexMatrix,
    block: &SymbolBlock,
    constellation: &QamConstellation,
) -> Vec<u64> {
    let k = block.x.ncols();
    let mut errs = vec![0u64; k];
    for i in 0..estimates.nrows() {
        for (u, e) in errs.iter_mut().enumerate() {
            let d = constellation.demap(estimates[(i, u)]);
            if d != block.labels[i * k + u] {
                *e += 1;
            }
        }
    }
    errs
}
