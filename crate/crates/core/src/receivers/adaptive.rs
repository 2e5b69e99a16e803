use num_complex::Complex64;

use super::{stack_targets, RealReadout, SoftDetector};
use crate::error::{Error, Result};
use crate::numeric::{ComplexMatrix, RealMatrix, RealVector, RlsState};

/// Online-sequential natural ELM: batch initialization followed by
/// exponentially weighted RLS updates of the `2K` read-out columns.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptiveElmReceiver {
    rls: RlsState,
    gamma: f64,
}

impl AdaptiveElmReceiver {
    /// Initialize from `M0` biased front-end outputs and their symbols.
    pub fn init(r0: &RealMatrix, x0: &ComplexMatrix, gamma: f64, lambda: f64) -> Result<Self> {
        if r0.nrows() != x0.nrows() {
            return Err(Error::DimensionMismatch {
                context: "oselm_init targets",
                expected: r0.nrows(),
                got: x0.nrows(),
            });
        }
        let rls = RlsState::init(r0, &stack_targets(x0), gamma, lambda)?;
        Ok(Self { rls, gamma })
    }

    /// Sequential update over a chunk, one RLS step per row in arrival order.
    pub fn update(&mut self, r_chunk: &RealMatrix, x_chunk: &ComplexMatrix) -> Result<()> {
        if r_chunk.nrows() != x_chunk.nrows() {
            return Err(Error::DimensionMismatch {
                context: "oselm_update targets",
                expected: r_chunk.nrows(),
                got: x_chunk.nrows(),
            });
        }
        if r_chunk.nrows() == 0 {
            return Ok(());
        }
        // work on a copy so a failed chunk leaves the receiver as it was
        let mut next = self.rls.clone();
        next.step_rows(r_chunk, &stack_targets(x_chunk))?;
        self.rls = next;
        Ok(())
    }

    pub fn rls(&self) -> &RlsState {
        &self.rls
    }

    pub fn lambda(&self) -> f64 {
        self.rls.lambda()
    }

    /// Current output weights as a read-out.
    pub fn weights(&self) -> RealReadout {
        RealReadout::from_stacked(self.rls.beta(), self.gamma)
    }

    fn beta_split(
        &self,
    ) -> (
        nalgebra::DMatrixView<'_, f64>,
        nalgebra::DMatrixView<'_, f64>,
    ) {
        let k = self.rls.outputs() / 2;
        (self.rls.beta().columns(0, k), self.rls.beta().columns(k, k))
    }
}

impl SoftDetector for AdaptiveElmReceiver {
    fn n_users(&self) -> usize {
        self.rls.outputs() / 2
    }

    fn input_len(&self) -> usize {
        self.rls.hidden()
    }

    fn estimate(&self, r: &RealVector) -> Vec<Complex64> {
        let (re, im) = self.beta_split();
        let a = re.tr_mul(r);
        let b = im.tr_mul(r);
        a.iter()
            .zip(b.iter())
            .map(|(&x, &y)| Complex64::new(x, y))
            .collect()
    }

    fn estimate_rows(&self, r_rows: &RealMatrix) -> ComplexMatrix {
        let s = r_rows * self.rls.beta();
        let k = self.n_users();
        ComplexMatrix::from_fn(s.nrows(), k, |i, j| {
            Complex64::new(s[(i, j)], s[(i, j + k)])
        })
    }

    fn detection_macs(&self) -> usize {
        2 * self.input_len() * self.n_users()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::receivers::train_natural_elm;

    fn data(m: usize, offset: usize) -> (RealMatrix, ComplexMatrix) {
        let r = RealMatrix::from_fn(m, 6, |i, j| {
            (((i + offset) * 37 + j * 11) % 19) as f64 / 19.0 - 0.5
        });
        let x = ComplexMatrix::from_fn(m, 2, |i, j| {
            Complex64::new(
                ((i + offset + j) % 4) as f64 - 1.5,
                ((i + offset) % 3) as f64 - 1.0,
            )
        });
        (r, x)
    }

    #[test]
    fn init_matches_batch_training() {
        let (r, x) = data(40, 0);
        let a = AdaptiveElmReceiver::init(&r, &x, 0.1, 0.98).unwrap();
        let b = train_natural_elm(&r, &x, 0.1).unwrap();
        let w = a.weights();
        assert!((w.beta_re - b.beta_re).norm() < 1e-10);
        assert!((w.beta_im - b.beta_im).norm() < 1e-10);
    }

    #[test]
    fn empty_chunk_is_a_no_op() {
        let (r, x) = data(40, 0);
        let mut a = AdaptiveElmReceiver::init(&r, &x, 0.1, 0.98).unwrap();
        let before = a.clone();
        a.update(&RealMatrix::zeros(0, 6), &ComplexMatrix::zeros(0, 2))
            .unwrap();
        assert_eq!(a, before);
    }

    #[test]
    fn estimate_paths_agree() {
        let (r, x) = data(40, 0);
        let mut a = AdaptiveElmReceiver::init(&r, &x, 0.1, 0.98).unwrap();
        let (r2, x2) = data(10, 40);
        a.update(&r2, &x2).unwrap();
        let all = a.estimate_rows(&r2);
        let w = a.weights();
        for i in 0..10 {
            let v = a.estimate(&r2.row(i).transpose());
            let u = w.estimate(&r2.row(i).transpose());
            for k in 0..2 {
                assert!((v[k] - all[(i, k)]).norm() < 1e-12);
                assert!((v[k] - u[k]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn mismatched_chunk_rejected() {
        let (r, x) = data(40, 0);
        let mut a = AdaptiveElmReceiver::init(&r, &x, 0.1, 0.98).unwrap();
        assert!(a
            .update(&RealMatrix::zeros(3, 6), &ComplexMatrix::zeros(2, 2))
            .is_err());
    }
}
