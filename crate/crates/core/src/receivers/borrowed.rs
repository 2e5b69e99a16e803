use num_complex::Complex64;
use rand::Rng;

use super::{RealReadout, SoftDetector};
use crate::error::{Error, Result};
use crate::numeric::{ComplexMatrix, RealMatrix, RealVector};

pub const DEFAULT_HIDDEN: usize = 512;
/// Input weights and biases are drawn uniform on `[−range, range]`.
pub const DEFAULT_INPUT_RANGE: f64 = 0.1;

pub fn sigmoid(u: f64) -> f64 {
    1.0 / (1.0 + (-u).exp())
}

/// Conventional sigmoid ELM placed after the ADCs.
///
/// Unlike the natural ELM, detection pays for an explicit `L×2N`
/// matrix-vector product before the read-out.
#[derive(Debug, Clone, PartialEq)]
pub struct BorrowedElmModel {
    pub input_weights: RealMatrix,
    pub biases: RealVector,
    pub readout: RealReadout,
}

impl BorrowedElmModel {
    /// Draw the frozen hidden layer and fit the read-out on `r` (`M×2N`).
    pub fn train<R: Rng + ?Sized>(
        r: &RealMatrix,
        x_train: &ComplexMatrix,
        gamma: f64,
        hidden: usize,
        input_range: f64,
        rng: &mut R,
    ) -> Result<Self> {
        if hidden == 0 {
            return Err(Error::InvalidArgument(
                "hidden layer size must be >= 1".into(),
            ));
        }
        let d = r.ncols();
        let mut draw = || input_range * (2.0 * rng.random::<f64>() - 1.0);
        let input_weights = RealMatrix::from_fn(hidden, d, |_, _| draw());
        let biases = RealVector::from_fn(hidden, |_, _| draw());
        Self::fit(input_weights, biases, r, x_train, gamma)
    }

    /// Fit the read-out for a given hidden layer.
    pub fn fit(
        input_weights: RealMatrix,
        biases: RealVector,
        r: &RealMatrix,
        x_train: &ComplexMatrix,
        gamma: f64,
    ) -> Result<Self> {
        if input_weights.ncols() != r.ncols() {
            return Err(Error::DimensionMismatch {
                context: "borrowed ELM input",
                expected: input_weights.ncols(),
                got: r.ncols(),
            });
        }
        if biases.len() != input_weights.nrows() {
            return Err(Error::DimensionMismatch {
                context: "borrowed ELM biases",
                expected: input_weights.nrows(),
                got: biases.len(),
            });
        }
        let z = hidden_rows(&input_weights, &biases, r);
        let readout = RealReadout::fit(&z, x_train, gamma)?;
        Ok(Self {
            input_weights,
            biases,
            readout,
        })
    }

    pub fn hidden_size(&self) -> usize {
        self.biases.len()
    }

    /// `sigmoid(W_in r + b)`.
    pub fn hidden(&self, r: &RealVector) -> RealVector {
        let mut z = &self.input_weights * r;
        z += &self.biases;
        z.apply(|v| *v = sigmoid(*v));
        z
    }
}

fn hidden_rows(w: &RealMatrix, b: &RealVector, r: &RealMatrix) -> RealMatrix {
    let mut z = r * w.transpose();
    for mut row in z.row_iter_mut() {
        for (v, bias) in row.iter_mut().zip(b.iter()) {
            *v = sigmoid(*v + bias);
        }
    }
    z
}

impl SoftDetector for BorrowedElmModel {
    fn n_users(&self) -> usize {
        self.readout.n_users()
    }

    fn input_len(&self) -> usize {
        self.input_weights.ncols()
    }

    fn estimate(&self, r: &RealVector) -> Vec<Complex64> {
        self.readout.apply(&self.hidden(r))
    }

    fn estimate_rows(&self, r_rows: &RealMatrix) -> ComplexMatrix {
        let z = hidden_rows(&self.input_weights, &self.biases, r_rows);
        self.readout.apply_rows(&z)
    }

    fn detection_macs(&self) -> usize {
        self.input_weights.nrows() * self.input_weights.ncols() + self.readout.detection_macs()
    }
}
