use nalgebra::Cholesky;
use num_complex::Complex64;

use super::{RealReadout, SoftDetector};
use crate::error::{Error, Result};
use crate::numeric::{ComplexMatrix, RealMatrix, RealVector};

const RANK_PIVOT_RATIO: f64 = 1e-13;

/// Linear combiner: `x̃ = W r` with complex rows `w_k`, or a trained
/// real-composite read-out.
#[derive(Debug, Clone, PartialEq)]
pub enum LinearCombinerWeights {
    /// `K×N` complex combiner applied to `r = r_re + j r_im`.
    Complex(ComplexMatrix),
    /// Real and imaginary parts fitted separately on `[Re r; Im r]`.
    RealComposite(RealReadout),
}

impl LinearCombinerWeights {
    pub fn as_complex(&self) -> Option<&ComplexMatrix> {
        match self {
            LinearCombinerWeights::Complex(w) => Some(w),
            LinearCombinerWeights::RealComposite(_) => None,
        }
    }

    pub fn as_real_composite(&self) -> Option<&RealReadout> {
        match self {
            LinearCombinerWeights::Complex(_) => None,
            LinearCombinerWeights::RealComposite(r) => Some(r),
        }
    }
}

fn combiner(h: &ComplexMatrix, loading: f64) -> Result<ComplexMatrix> {
    let mut gram = h.ad_mul(h);
    for i in 0..gram.nrows() {
        gram[(i, i)] += Complex64::new(loading, 0.0);
    }
    let chol = Cholesky::new(gram).ok_or(Error::RankDeficient)?;
    if loading == 0.0 {
        let diag: Vec<f64> = chol.l_dirty().diagonal().iter().map(|v| v.re).collect();
        let max = diag.iter().cloned().fold(f64::MIN, f64::max);
        let min = diag.iter().cloned().fold(f64::MAX, f64::min);
        if min.is_nan() || min <= 0.0 || (min * min) / (max * max) < RANK_PIVOT_RATIO {
            return Err(Error::RankDeficient);
        }
    }
    Ok(chol.solve(&h.adjoint()))
}

/// Zero forcing from the true channel: `W = (HᴴH)⁻¹Hᴴ`.
pub fn zf_weights(h: &ComplexMatrix) -> Result<LinearCombinerWeights> {
    Ok(LinearCombinerWeights::Complex(combiner(h, 0.0)?))
}

/// Linear MMSE from the true channel: `W = (HᴴH + I/SNR)⁻¹Hᴴ`, `snr` linear.
pub fn mmse_weights(h: &ComplexMatrix, snr: f64) -> Result<LinearCombinerWeights> {
    if snr.is_nan() || snr <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "SNR must be positive, got {snr}"
        )));
    }
    Ok(LinearCombinerWeights::Complex(combiner(h, 1.0 / snr)?))
}

/// Regularized LS fit from (unbiased) front-end outputs `R` (`M×2N`) to the
/// training symbols, real and imaginary parts separated.
pub fn train_zf_direct(
    r: &RealMatrix,
    x_train: &ComplexMatrix,
    gamma: f64,
) -> Result<LinearCombinerWeights> {
    Ok(LinearCombinerWeights::RealComposite(RealReadout::fit(
        r, x_train, gamma,
    )?))
}

impl SoftDetector for LinearCombinerWeights {
    fn n_users(&self) -> usize {
        match self {
            LinearCombinerWeights::Complex(w) => w.nrows(),
            LinearCombinerWeights::RealComposite(r) => r.n_users(),
        }
    }

    fn input_len(&self) -> usize {
        match self {
            LinearCombinerWeights::Complex(w) => 2 * w.ncols(),
            LinearCombinerWeights::RealComposite(r) => r.input_len(),
        }
    }

    fn estimate(&self, r: &RealVector) -> Vec<Complex64> {
        match self {
            LinearCombinerWeights::Complex(w) => {
                let n = w.ncols();
                let rc = nalgebra::DVector::from_fn(n, |i, _| Complex64::new(r[i], r[i + n]));
                (w * rc).iter().copied().collect()
            }
            LinearCombinerWeights::RealComposite(ro) => ro.apply(r),
        }
    }

    fn estimate_rows(&self, r_rows: &RealMatrix) -> ComplexMatrix {
        match self {
            LinearCombinerWeights::Complex(w) => {
                let n = w.ncols();
                let rc = ComplexMatrix::from_fn(r_rows.nrows(), n, |i, j| {
                    Complex64::new(r_rows[(i, j)], r_rows[(i, j + n)])
                });
                rc * w.transpose()
            }
            LinearCombinerWeights::RealComposite(ro) => ro.apply_rows(r_rows),
        }
    }

    fn detection_macs(&self) -> usize {
        match self {
            // one complex MAC = 4 real MACs
            LinearCombinerWeights::Complex(w) => 4 * w.nrows() * w.ncols(),
            LinearCombinerWeights::RealComposite(r) => r.detection_macs(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn orthonormal_columns_give_adjoint() {
        let s = 0.5f64.sqrt();
        let h = ComplexMatrix::from_row_slice(
            3,
            2,
            &[
                c(s, 0.0),
                c(0.0, 0.0),
                c(0.0, s),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 1.0),
            ],
        );
        let w = zf_weights(&h).unwrap();
        let w = w.as_complex().unwrap();
        assert!((w - h.adjoint()).norm() < 1e-14);
        assert!((w * &h - ComplexMatrix::identity(2, 2)).norm() < 1e-14);
    }

    #[test]
    fn mmse_scalar_case() {
        let h = ComplexMatrix::identity(3, 3);
        let w = mmse_weights(&h, 1.0).unwrap();
        assert!(
            (w.as_complex().unwrap() - ComplexMatrix::identity(3, 3) * c(0.5, 0.0)).norm() < 1e-15
        );
    }

    #[test]
    fn rank_deficient_zf_fails() {
        let h = ComplexMatrix::from_row_slice(
            3,
            2,
            &[
                c(1.0, 0.0),
                c(2.0, 0.0),
                c(1.0, 1.0),
                c(2.0, 2.0),
                c(0.0, 1.0),
                c(0.0, 2.0),
            ],
        );
        assert!(matches!(zf_weights(&h), Err(Error::RankDeficient)));
        // MMSE stays defined
        assert!(mmse_weights(&h, 10.0).is_ok());
        assert!(mmse_weights(&h, 0.0).is_err());
    }

    #[test]
    fn complex_combiner_row_and_vector_paths_agree() {
        let h = ComplexMatrix::from_fn(4, 2, |i, j| c(i as f64 + 1.0, (j as f64) - i as f64 * 0.5));
        let w = zf_weights(&h).unwrap();
        let rows = RealMatrix::from_fn(5, 8, |i, j| (i as f64 * 0.3) - j as f64 * 0.1);
        let all = w.estimate_rows(&rows);
        for i in 0..5 {
            let v = w.estimate(&rows.row(i).transpose());
            for k in 0..2 {
                assert!((v[k] - all[(i, k)]).norm() < 1e-12);
            }
        }
    }
}
