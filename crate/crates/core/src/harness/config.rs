use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::channel::ChannelConfig;
use crate::error::{Error, Result};
use crate::frontend::{noise_variance, PowerAmplifier, QamConstellation};

/// Receivers the harness knows how to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReceiverKind {
    /// Read-out trained on biased ADC outputs.
    NaturalElm,
    /// Sigmoid ELM on unbiased ADC outputs.
    BorrowedElm,
    /// Read-out trained on unbiased ADC outputs.
    TrainedZf,
    /// Zero forcing with the true channel.
    Zf,
    /// Linear MMSE with the true channel and SNR.
    Mmse,
}

impl ReceiverKind {
    pub const ALL: [ReceiverKind; 5] = [
        ReceiverKind::NaturalElm,
        ReceiverKind::BorrowedElm,
        ReceiverKind::TrainedZf,
        ReceiverKind::Zf,
        ReceiverKind::Mmse,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            ReceiverKind::NaturalElm => "natural-elm",
            ReceiverKind::BorrowedElm => "borrowed-elm",
            ReceiverKind::TrainedZf => "trained-zf",
            ReceiverKind::Zf => "zf",
            ReceiverKind::Mmse => "mmse",
        }
    }
}

impl FromStr for ReceiverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ReceiverKind::ALL
            .into_iter()
            .find(|k| k.label() == s.trim())
            .ok_or_else(|| {
                Error::config(
                    "receivers",
                    format!(
                        "unknown receiver `{s}` (expected one of natural-elm, borrowed-elm, trained-zf, zf, mmse)"
                    ),
                )
            })
    }
}

/// Which transmit power defines the SNR.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SnrReference {
    /// Mean power radiated after the PA.
    #[default]
    PostPa,
    /// Mean constellation power before the PA.
    PrePa,
}

/// Front-end ADC description. Bias amplitudes are relative to the RMS of the
/// received signal per real branch, measured on the calibration preamble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdcSpec {
    pub bits: u32,
    /// Full scale as a multiple of the preamble RMS.
    pub headroom: f64,
    /// Biases are uniform on `[−bias_scale, bias_scale] × RMS`.
    pub bias_scale: f64,
    /// Infinite resolution (no quantization, no clipping).
    #[serde(default)]
    pub ideal: bool,
}

impl Default for AdcSpec {
    fn default() -> Self {
        Self {
            bits: 6,
            headroom: 3.0,
            bias_scale: 0.1,
            ideal: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaSpec {
    pub natural_elm: f64,
    pub trained_zf: f64,
    pub borrowed_elm: f64,
}

impl Default for GammaSpec {
    fn default() -> Self {
        Self {
            natural_elm: 1.0,
            trained_zf: 1.0,
            borrowed_elm: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BorrowedElmSpec {
    pub hidden: usize,
    pub input_range: f64,
}

impl Default for BorrowedElmSpec {
    fn default() -> Self {
        Self {
            hidden: crate::receivers::DEFAULT_HIDDEN,
            input_range: crate::receivers::DEFAULT_INPUT_RANGE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdaptiveSpec {
    pub init_len: usize,
    pub frame_training_len: usize,
    /// Payload slots per frame. Keep frames short next to the channel
    /// coherence time (about `0.42 / f_d`), or every receiver goes stale
    /// within a single payload.
    pub frame_data_len: usize,
    pub lambda: f64,
    pub n_frames: usize,
    /// Training symbols available to the per-frame retrained benchmark.
    pub benchmark_len: usize,
}

impl Default for AdaptiveSpec {
    fn default() -> Self {
        Self {
            init_len: 3000,
            frame_training_len: 300,
            frame_data_len: 200,
            lambda: 0.98,
            n_frames: 10,
            benchmark_len: 3000,
        }
    }
}

/// Everything that defines an experiment run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub channel: ChannelConfig,
    pub pa: PowerAmplifier,
    pub adc: AdcSpec,
    pub snr_db_list: Vec<f64>,
    /// Batch training length `M`.
    pub training_len: usize,
    /// Payload symbol vectors per trial and SNR point.
    pub payload_len: usize,
    /// Symbol vectors used to size the ADC.
    pub preamble_len: usize,
    pub receivers: Vec<ReceiverKind>,
    pub gamma: GammaSpec,
    pub borrowed_elm: BorrowedElmSpec,
    pub adaptive: AdaptiveSpec,
    pub trials: usize,
    pub master_seed: u64,
    /// Power reference for `snr_db_list`.
    #[serde(default)]
    pub snr_reference: SnrReference,
    /// Emit one extra record per user alongside the pooled one.
    #[serde(default)]
    pub per_user: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// `N = 64` array, sized for quick runs.
    Desk,
    /// Full-size `N = 256` array.
    Paper,
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "desk" => Ok(Preset::Desk),
            "paper" => Ok(Preset::Paper),
            other => Err(Error::config(
                "preset",
                format!("unknown preset `{other}` (expected desk or paper)"),
            )),
        }
    }
}

impl ExperimentConfig {
    pub fn preset(p: Preset) -> Self {
        let n_antennas = match p {
            Preset::Desk => 64,
            Preset::Paper => 256,
        };
        Self {
            channel: ChannelConfig {
                n_antennas,
                n_users: 10,
                velocity_mps: 100.0 / 3.6,
                ..ChannelConfig::default()
            },
            pa: PowerAmplifier::default(),
            adc: AdcSpec::default(),
            snr_db_list: vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0],
            training_len: 3000,
            payload_len: 1000,
            preamble_len: 256,
            receivers: ReceiverKind::ALL.to_vec(),
            gamma: GammaSpec::default(),
            borrowed_elm: BorrowedElmSpec::default(),
            adaptive: AdaptiveSpec::default(),
            trials: 20,
            master_seed: 1,
            snr_reference: SnrReference::PostPa,
            per_user: false,
        }
    }

    /// Noise variance for `snr_db` under the configured power reference.
    pub fn noise_variance(&self, snr_db: f64) -> f64 {
        let constellation = QamConstellation::qam16();
        let ps = match self.snr_reference {
            SnrReference::PostPa => self.pa.mean_output_power(&constellation),
            SnrReference::PrePa => constellation.average_power(),
        };
        noise_variance(ps, snr_db)
    }

    pub fn desk() -> Self {
        Self::preset(Preset::Desk)
    }

    pub fn paper() -> Self {
        Self::preset(Preset::Paper)
    }

    pub fn validate(&self) -> Result<()> {
        self.channel.validate()?;
        if let PowerAmplifier::Saleh(p) = &self.pa {
            if !p.validate() {
                return Err(Error::config(
                    "pa.saleh",
                    "eps_a and eps_phi must be positive and all coefficients finite",
                ));
            }
        }
        let adc = &self.adc;
        if !adc.ideal && !(1..=24).contains(&adc.bits) {
            return Err(Error::config("adc.bits", "must be in 1..=24"));
        }
        if adc.headroom.is_nan() || adc.headroom <= 0.0 {
            return Err(Error::config("adc.headroom", "must be positive"));
        }
        if adc.bias_scale.is_nan() || adc.bias_scale < 0.0 {
            return Err(Error::config("adc.bias_scale", "must be non-negative"));
        }
        if self.snr_db_list.is_empty() {
            return Err(Error::config("snr_db_list", "must not be empty"));
        }
        if self.snr_db_list.iter().any(|s| !s.is_finite()) {
            return Err(Error::config("snr_db_list", "entries must be finite"));
        }
        for (field, v) in [
            ("training_len", self.training_len),
            ("payload_len", self.payload_len),
            ("trials", self.trials),
            ("borrowed_elm.hidden", self.borrowed_elm.hidden),
            ("adaptive.init_len", self.adaptive.init_len),
            (
                "adaptive.frame_training_len",
                self.adaptive.frame_training_len,
            ),
            ("adaptive.frame_data_len", self.adaptive.frame_data_len),
            ("adaptive.n_frames", self.adaptive.n_frames),
            ("adaptive.benchmark_len", self.adaptive.benchmark_len),
        ] {
            if v == 0 {
                return Err(Error::config(field, "must be at least 1"));
            }
        }
        if self.preamble_len * 2 * self.channel.n_antennas
            < crate::frontend::MIN_CALIBRATION_SAMPLES
        {
            return Err(Error::config(
                "preamble_len",
                "too short to calibrate the ADC (needs 100 real samples)",
            ));
        }
        if self.receivers.is_empty() {
            return Err(Error::config("receivers", "must not be empty"));
        }
        for (field, g) in [
            ("gamma.natural_elm", self.gamma.natural_elm),
            ("gamma.trained_zf", self.gamma.trained_zf),
            ("gamma.borrowed_elm", self.gamma.borrowed_elm),
        ] {
            if !(g >= 0.0 && g.is_finite()) {
                return Err(Error::config(field, "must be finite and non-negative"));
            }
        }
        if self.borrowed_elm.input_range.is_nan() || self.borrowed_elm.input_range < 0.0 {
            return Err(Error::config(
                "borrowed_elm.input_range",
                "must be non-negative",
            ));
        }
        let l = self.adaptive.lambda;
        if !(l > 0.0 && l <= 1.0) {
            return Err(Error::config("adaptive.lambda", "must lie in (0, 1]"));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Apply a partial JSON document on top of `self`. Objects merge key by
    /// key; any other value replaces the base entry. Unknown keys are
    /// rejected.
    pub fn overlay_json(&self, text: &str) -> Result<Self> {
        let patch: Value = serde_json::from_str(text)?;
        let mut base = serde_json::to_value(self)?;
        merge_value(&mut base, patch);
        let cfg: Self = serde_json::from_value(base)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

fn merge_value(base: &mut Value, patch: Value) {
    match (base, patch) {
        (Value::Object(b), Value::Object(p)) => {
            for (key, v) in p {
                merge_value(b.entry(key).or_insert(Value::Null), v);
            }
        }
        (b, p) => *b = p,
    }
}

/// Read and validate a complete JSON config file.
pub fn load_config(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)?;
    ExperimentConfig::from_json(&text)
}

/// Read a partial JSON config file and layer it over `base`.
pub fn load_config_over(
    base: &ExperimentConfig,
    path: impl AsRef<Path>,
) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)?;
    base.overlay_json(&text)
}
