//! Uplink detectors.
//!
//! Every receiver maps one `2N` real front-end vector (`[Re r; Im r]`) to `K`
//! soft symbol estimates, which are then hard-demapped to the nearest
//! constellation point. Which front end feeds a receiver (biased or plain
//! quantization, or none) is decided by the caller.

mod adaptive;
mod borrowed;
mod linear;
mod readout;

pub use adaptive::AdaptiveElmReceiver;
pub use borrowed::{sigmoid, BorrowedElmModel, DEFAULT_HIDDEN, DEFAULT_INPUT_RANGE};
pub use linear::{mmse_weights, train_zf_direct, zf_weights, LinearCombinerWeights};
pub use readout::{stack_targets, train_natural_elm, ElmReceiverWeights, RealReadout};

use num_complex::Complex64;

use crate::frontend::QamConstellation;
use crate::numeric::{ComplexMatrix, RealMatrix, RealVector};

/// A trained detector producing soft estimates from front-end outputs.
pub trait SoftDetector {
    /// Number of users `K`.
    fn n_users(&self) -> usize;

    /// Length of the expected input vector (`2N`).
    fn input_len(&self) -> usize;

    /// Soft estimates for one received vector.
    fn estimate(&self, r: &RealVector) -> Vec<Complex64>;

    /// Soft estimates for every row of `r_rows` (`M×2N` in, `M×K` out).
    fn estimate_rows(&self, r_rows: &RealMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(r_rows.nrows(), self.n_users());
        for i in 0..r_rows.nrows() {
            let est = self.estimate(&r_rows.row(i).transpose());
            for (k, v) in est.into_iter().enumerate() {
                out[(i, k)] = v;
            }
        }
        out
    }

    /// Hard decisions (constellation labels) for one received vector.
    fn detect(&self, r: &RealVector, constellation: &QamConstellation) -> Vec<u8> {
        self.estimate(r)
            .into_iter()
            .map(|x| constellation.demap(x))
            .collect()
    }

    /// Multiply-accumulates spent per detected symbol vector.
    fn detection_macs(&self) -> usize;
}

/// Demap every entry of an estimate matrix, row-major.
pub fn demap_rows(estimates: &ComplexMatrix, constellation: &QamConstellation) -> Vec<u8> {
    let (m, k) = estimates.shape();
    let mut out = Vec::with_capacity(m * k);
    for i in 0..m {
        for j in 0..k {
            out.push(constellation.demap(estimates[(i, j)]));
        }
    }
    out
}

/// Count positions where decided labels differ from transmitted ones.
pub fn count_symbol_errors(decided: &[u8], sent: &[u8]) -> u64 {
    decided.iter().zip(sent).filter(|(a, b)| a != b).count() as u64
}
