use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::PowerAmplifier;
use crate::error::{Error, Result};
use crate::numeric::{ComplexMatrix, ComplexVector};

/// Noise variance `σ² = P_s / 10^(snr_db/10)` per receive antenna.
pub fn noise_variance(signal_power: f64, snr_db: f64) -> f64 {
    signal_power / 10f64.powf(snr_db / 10.0)
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, std_per_dim: f64) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * std_per_dim, im * std_per_dim)
}

/// `y = H f(x) + n` with `n ~ CN(0, σ² I)`.
pub fn transmit<R: Rng + ?Sized>(
    h: &ComplexMatrix,
    x: &ComplexVector,
    sigma2: f64,
    pa: &PowerAmplifier,
    rng: &mut R,
) -> Result<ComplexVector> {
    if x.len() != h.ncols() {
        return Err(Error::DimensionMismatch {
            context: "transmit symbols",
            expected: h.ncols(),
            got: x.len(),
        });
    }
    let s = x.map(|v| pa.apply(v));
    let mut y = h * s;
    if sigma2 > 0.0 {
        let std = (0.5 * sigma2).sqrt();
        for v in y.iter_mut() {
            *v += complex_gaussian(rng, std);
        }
    }
    Ok(y)
}

/// Block transmission over a fixed channel: row `m` of `x_rows` (`M×K`) is
/// sent at time `m`, row `m` of the result (`M×N`) is what the array sees.
pub fn transmit_block<R: Rng + ?Sized>(
    h: &ComplexMatrix,
    x_rows: &ComplexMatrix,
    sigma2: f64,
    pa: &PowerAmplifier,
    rng: &mut R,
) -> Result<ComplexMatrix> {
    transmit_block_with(|_| h, x_rows, sigma2, pa, rng)
}

/// Like [`transmit_block`] but the channel for row `m` is `channel_at(m)`.
pub fn transmit_block_with<'a, F, R>(
    mut channel_at: F,
    x_rows: &ComplexMatrix,
    sigma2: f64,
    pa: &PowerAmplifier,
    rng: &mut R,
) -> Result<ComplexMatrix>
where
    F: FnMut(usize) -> &'a ComplexMatrix,
    R: Rng + ?Sized,
{
    let (m, k) = x_rows.shape();
    let std = (0.5 * sigma2.max(0.0)).sqrt();
    let s_rows = x_rows.map(|v| pa.apply(v));
    let mut out: Option<ComplexMatrix> = None;
    for i in 0..m {
        let h = channel_at(i);
        if h.ncols() != k {
            return Err(Error::DimensionMismatch {
                context: "transmit symbols",
                expected: h.ncols(),
                got: k,
            });
        }
        let y = out.get_or_insert_with(|| ComplexMatrix::zeros(m, h.nrows()));
        let s = s_rows.row(i).transpose();
        let col = h * s;
        for (j, v) in col.iter().enumerate() {
            y[(i, j)] = if sigma2 > 0.0 {
                v + complex_gaussian(rng, std)
            } else {
                *v
            };
        }
    }
    Ok(out.unwrap_or_else(|| ComplexMatrix::zeros(0, 0)))
}
