use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{ComplexMatrix, ComplexVector, RealMatrix, RealVector};

/// Minimum preamble length accepted by [`calibrate_adc`].
pub const MIN_CALIBRATION_SAMPLES: usize = 100;

/// Per-branch ADC transfer function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Quantizer {
    /// Uniform mid-rise quantizer with `2^bits` levels `Δ(ℓ + ½)` over `[−F, F]`.
    MidRise {
        bits: u32,
        step: f64,
        full_scale: f64,
    },
    /// Infinite resolution, no clipping.
    Ideal,
}

impl Quantizer {
    pub fn mid_rise(bits: u32, full_scale: f64) -> Result<Self> {
        if bits == 0 || bits > 24 {
            return Err(Error::InvalidArgument(format!(
                "ADC bit width must be in 1..=24, got {bits}"
            )));
        }
        if !(full_scale > 0.0 && full_scale.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "ADC full scale must be positive, got {full_scale}"
            )));
        }
        Ok(Quantizer::MidRise {
            bits,
            step: 2.0 * full_scale / (1u64 << bits) as f64,
            full_scale,
        })
    }

    pub fn apply(&self, c: f64) -> f64 {
        match *self {
            Quantizer::MidRise { bits, step, .. } => {
                let half = (1i64 << (bits - 1)) as f64;
                // clamping the cell index is the same as clamping c to [−F, F − ε]
                let cell = (c / step).floor().clamp(-half, half - 1.0);
                step * (cell + 0.5)
            }
            Quantizer::Ideal => c,
        }
    }

    /// All output levels in increasing order; empty for [`Quantizer::Ideal`].
    pub fn levels(&self) -> Vec<f64> {
        match *self {
            Quantizer::MidRise { bits, step, .. } => {
                let half = 1i64 << (bits - 1);
                (-half..half).map(|l| step * (l as f64 + 0.5)).collect()
            }
            Quantizer::Ideal => Vec::new(),
        }
    }

    pub fn step(&self) -> Option<f64> {
        match *self {
            Quantizer::MidRise { step, .. } => Some(step),
            Quantizer::Ideal => None,
        }
    }

    pub fn full_scale(&self) -> Option<f64> {
        match *self {
            Quantizer::MidRise { full_scale, .. } => Some(full_scale),
            Quantizer::Ideal => None,
        }
    }
}

/// Scalar mid-rise quantization with saturation at full scale.
pub fn quantize(c: f64, adc: &AdcConfig) -> f64 {
    adc.quantizer.apply(c)
}

/// Size an ADC from a preamble: `F = headroom · RMS(samples)`, `Δ = 2F / 2^bits`.
pub fn calibrate_adc(samples: &[f64], bits: u32, headroom: f64) -> Result<Quantizer> {
    if samples.len() < MIN_CALIBRATION_SAMPLES {
        return Err(Error::TooFewSamples {
            needed: MIN_CALIBRATION_SAMPLES,
            got: samples.len(),
        });
    }
    if headroom.is_nan() || headroom <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "headroom must be positive, got {headroom}"
        )));
    }
    let rms = (samples.iter().map(|s| s * s).sum::<f64>() / samples.len() as f64).sqrt();
    if rms == 0.0 {
        return Err(Error::AllZeroSamples);
    }
    Quantizer::mid_rise(bits, headroom * rms)
}

/// A front end of `N` receive chains: one quantizer plus a frozen bias per branch.
#[derive(Debug, Clone, PartialEq)]
pub struct AdcConfig {
    pub quantizer: Quantizer,
    pub bias_re: RealVector,
    pub bias_im: RealVector,
}

impl AdcConfig {
    pub fn new(quantizer: Quantizer, bias_re: RealVector, bias_im: RealVector) -> Result<Self> {
        if bias_re.len() != bias_im.len() {
            return Err(Error::DimensionMismatch {
                context: "ADC bias vectors",
                expected: bias_re.len(),
                got: bias_im.len(),
            });
        }
        Ok(Self {
            quantizer,
            bias_re,
            bias_im,
        })
    }

    /// Zero bias on `n` branches.
    pub fn unbiased(quantizer: Quantizer, n: usize) -> Self {
        Self {
            quantizer,
            bias_re: RealVector::zeros(n),
            bias_im: RealVector::zeros(n),
        }
    }

    /// Biases drawn i.i.d. uniform on `[−amplitude, amplitude]`, real branches first.
    pub fn with_uniform_bias<R: Rng + ?Sized>(
        quantizer: Quantizer,
        n: usize,
        amplitude: f64,
        rng: &mut R,
    ) -> Self {
        let mut draw = || amplitude * (2.0 * rng.random::<f64>() - 1.0);
        let bias_re = RealVector::from_fn(n, |_, _| draw());
        let bias_im = RealVector::from_fn(n, |_, _| draw());
        Self {
            quantizer,
            bias_re,
            bias_im,
        }
    }

    pub fn n_branches(&self) -> usize {
        self.bias_re.len()
    }

    /// Same bias with a different quantizer.
    pub fn with_quantizer(&self, quantizer: Quantizer) -> Self {
        Self {
            quantizer,
            ..self.clone()
        }
    }

    /// Same quantizer, biases removed.
    pub fn without_bias(&self) -> Self {
        Self::unbiased(self.quantizer, self.n_branches())
    }
}

/// `Q([Re y; Im y] + [b_re; b_im])`: the hidden-layer output of the natural ELM.
pub fn bias_quantize(y: &ComplexVector, adc: &AdcConfig) -> Result<RealVector> {
    let n = adc.n_branches();
    if y.len() != n {
        return Err(Error::DimensionMismatch {
            context: "bias_quantize input",
            expected: n,
            got: y.len(),
        });
    }
    let q = &adc.quantizer;
    Ok(RealVector::from_fn(2 * n, |i, _| {
        if i < n {
            q.apply(y[i].re + adc.bias_re[i])
        } else {
            q.apply(y[i - n].im + adc.bias_im[i - n])
        }
    }))
}

/// Row-wise [`bias_quantize`]: `M×N` complex in, `M×2N` real out.
pub fn bias_quantize_rows(y: &ComplexMatrix, adc: &AdcConfig) -> Result<RealMatrix> {
    let (m, n) = y.shape();
    if n != adc.n_branches() {
        return Err(Error::DimensionMismatch {
            context: "bias_quantize input",
            expected: adc.n_branches(),
            got: n,
        });
    }
    let q = &adc.quantizer;
    Ok(RealMatrix::from_fn(m, 2 * n, |i, j| {
        if j < n {
            q.apply(y[(i, j)].re + adc.bias_re[j])
        } else {
            q.apply(y[(i, j - n)].im + adc.bias_im[j - n])
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn adc(bits: u32, full_scale: f64) -> AdcConfig {
        AdcConfig::unbiased(Quantizer::mid_rise(bits, full_scale).unwrap(), 1)
    }

    #[test]
    fn mid_rise_straddles_zero() {
        // Δ = 0.5
        let a = adc(3, 1.0);
        assert_eq!(a.quantizer.step(), Some(0.25));
        let a = adc(2, 1.0);
        assert_eq!(a.quantizer.step(), Some(0.5));
        assert_eq!(quantize(0.0, &a), 0.25);
        assert_eq!(quantize(-0.1, &a), -0.25);
    }

    #[test]
    fn saturates_at_top_level() {
        let a = adc(2, 1.0);
        assert_eq!(a.quantizer.levels(), vec![-0.75, -0.25, 0.25, 0.75]);
        assert_eq!(quantize(5.0, &a), 0.75);
        assert_eq!(quantize(1.0, &a), 0.75);
        assert_eq!(quantize(-1.0, &a), -0.75);
        assert_eq!(quantize(-7.0, &a), -0.75);
    }

    #[test]
    fn calibration_formula() {
        let samples: Vec<f64> = (0..200)
            .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        let q = calibrate_adc(&samples, 6, 3.0).unwrap();
        assert_eq!(q.full_scale(), Some(3.0));
        assert_eq!(q.step(), Some(0.09375));
        let doubled: Vec<f64> = samples.iter().map(|s| 2.0 * s).collect();
        let q2 = calibrate_adc(&doubled, 6, 3.0).unwrap();
        assert_eq!(q2.full_scale(), Some(6.0));
        assert_eq!(q2.step(), Some(0.1875));
    }

    #[test]
    fn calibration_errors() {
        assert!(matches!(
            calibrate_adc(&[0.0; 128], 6, 3.0),
            Err(Error::AllZeroSamples)
        ));
        assert!(matches!(
            calibrate_adc(&[1.0; 10], 6, 3.0),
            Err(Error::TooFewSamples { .. })
        ));
    }

    #[test]
    fn ideal_unbiased_is_passthrough() {
        let a = AdcConfig::unbiased(Quantizer::Ideal, 3);
        let y = ComplexVector::from_vec(vec![
            Complex64::new(0.1, -2.0),
            Complex64::new(3.5, 0.0),
            Complex64::new(-1.25, 7.0),
        ]);
        let r = bias_quantize(&y, &a).unwrap();
        assert_eq!(r.as_slice(), &[0.1, 3.5, -1.25, -2.0, 0.0, 7.0]);
    }

    #[test]
    fn biased_rows_agree_with_vector_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let q = Quantizer::mid_rise(4, 2.0).unwrap();
        let a = AdcConfig::with_uniform_bias(q, 5, 0.3, &mut rng);
        assert!(a
            .bias_re
            .iter()
            .chain(a.bias_im.iter())
            .all(|b| b.abs() <= 0.3));
        let y = ComplexMatrix::from_fn(7, 5, |i, j| {
            Complex64::new((i as f64 - 3.0) * 0.4, (j as f64 - 2.0) * 0.7)
        });
        let rows = bias_quantize_rows(&y, &a).unwrap();
        for i in 0..7 {
            let v = bias_quantize(&y.row(i).transpose(), &a).unwrap();
            assert_eq!(rows.row(i).transpose(), v);
        }
        // frozen bias: repeated calls agree
        assert_eq!(rows, bias_quantize_rows(&y, &a).unwrap());
    }

    #[test]
    fn length_mismatch() {
        let a = AdcConfig::unbiased(Quantizer::Ideal, 2);
        assert!(bias_quantize(&ComplexVector::zeros(3), &a).is_err());
    }
}
