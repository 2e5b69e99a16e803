use num_complex::Complex64;

use super::SoftDetector;
use crate::error::{Error, Result};
use crate::numeric::{real_stack_rows, ComplexMatrix, GramFactor, RealMatrix, RealVector};

/// Real-valued linear read-out: `x̃_k = β_k^reᵀ r + j β_k^imᵀ r`.
///
/// Columns of `beta_re` / `beta_im` are per-user weight vectors over the
/// `2N` hidden nodes (ADC outputs).
#[derive(Debug, Clone, PartialEq)]
pub struct RealReadout {
    pub beta_re: RealMatrix,
    pub beta_im: RealMatrix,
    pub gamma: f64,
}

/// Output weights of the natural ELM.
pub type ElmReceiverWeights = RealReadout;

/// `[Re X | Im X]`: training targets for the real and imaginary read-outs.
pub fn stack_targets(x: &ComplexMatrix) -> RealMatrix {
    real_stack_rows(x)
}

impl RealReadout {
    /// Ridge fit of `[Re X | Im X]` on `features`, sharing one factorization.
    pub fn fit(features: &RealMatrix, x_train: &ComplexMatrix, gamma: f64) -> Result<Self> {
        if features.nrows() != x_train.nrows() {
            return Err(Error::DimensionMismatch {
                context: "training targets",
                expected: features.nrows(),
                got: x_train.nrows(),
            });
        }
        let factor = GramFactor::new(features, gamma)?;
        let b = factor.solve(&features.tr_mul(&stack_targets(x_train)));
        Ok(Self::from_stacked(&b, gamma))
    }

    /// Split an `L×2K` weight matrix laid out as `[β^re | β^im]`.
    pub fn from_stacked(b: &RealMatrix, gamma: f64) -> Self {
        let k = b.ncols() / 2;
        Self {
            beta_re: b.columns(0, k).into_owned(),
            beta_im: b.columns(k, k).into_owned(),
            gamma,
        }
    }

    pub fn hidden(&self) -> usize {
        self.beta_re.nrows()
    }

    /// Soft estimates for all rows: `M×L` features in, `M×K` symbols out.
    pub fn apply_rows(&self, features: &RealMatrix) -> ComplexMatrix {
        let re = features * &self.beta_re;
        let im = features * &self.beta_im;
        ComplexMatrix::from_fn(re.nrows(), re.ncols(), |i, j| {
            Complex64::new(re[(i, j)], im[(i, j)])
        })
    }

    pub fn apply(&self, features: &RealVector) -> Vec<Complex64> {
        let re = self.beta_re.tr_mul(features);
        let im = self.beta_im.tr_mul(features);
        re.iter()
            .zip(im.iter())
            .map(|(&a, &b)| Complex64::new(a, b))
            .collect()
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self {
            beta_re: &self.beta_re * a,
            beta_im: &self.beta_im * a,
            gamma: self.gamma,
        }
    }
}

impl SoftDetector for RealReadout {
    fn n_users(&self) -> usize {
        self.beta_re.ncols()
    }

    fn input_len(&self) -> usize {
        self.beta_re.nrows()
    }

    fn estimate(&self, r: &RealVector) -> Vec<Complex64> {
        self.apply(r)
    }

    fn estimate_rows(&self, r_rows: &RealMatrix) -> ComplexMatrix {
        self.apply_rows(r_rows)
    }

    fn detection_macs(&self) -> usize {
        2 * self.hidden() * self.n_users()
    }
}

/// Train the natural-ELM read-out on biased ADC outputs `R′` (`M×2N`).
pub fn train_natural_elm(
    r_prime: &RealMatrix,
    x_train: &ComplexMatrix,
    gamma: f64,
) -> Result<ElmReceiverWeights> {
    RealReadout::fit(r_prime, x_train, gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::QamConstellation;

    #[test]
    fn unit_vector_weights_pick_entries() {
        let mut beta_re = RealMatrix::zeros(4, 1);
        let mut beta_im = RealMatrix::zeros(4, 1);
        beta_re[(0, 0)] = 1.0;
        beta_im[(1, 0)] = 1.0;
        let w = RealReadout {
            beta_re,
            beta_im,
            gamma: 0.0,
        };
        let r = RealVector::from_column_slice(&[0.3, -0.7, 2.0, 5.0]);
        assert_eq!(w.estimate(&r), vec![Complex64::new(0.3, -0.7)]);
        assert_eq!(w.detection_macs(), 8);
    }

    #[test]
    fn zero_weights_demap_to_tie_break_symbol() {
        let w = RealReadout {
            beta_re: RealMatrix::zeros(6, 2),
            beta_im: RealMatrix::zeros(6, 2),
            gamma: 1.0,
        };
        let c = QamConstellation::qam16();
        let r = RealVector::from_element(6, 1.0);
        let est = w.estimate(&r);
        assert!(est.iter().all(|v| *v == Complex64::new(0.0, 0.0)));
        let d = w.detect(&r, &c);
        assert_eq!(d, vec![c.demap(Complex64::new(0.0, 0.0)); 2]);
    }

    #[test]
    fn targets_scale_linearly() {
        let r = RealMatrix::from_fn(20, 6, |i, j| ((i * 7 + j * 3) % 11) as f64 - 5.0);
        let x =
            ComplexMatrix::from_fn(20, 2, |i, j| Complex64::new(i as f64 * 0.1, j as f64 - 0.5));
        let w = train_natural_elm(&r, &x, 0.5).unwrap();
        let w3 = train_natural_elm(&r, &(x.map(|v| v * 3.0)), 0.5).unwrap();
        assert!((w3.beta_re - &w.beta_re * 3.0).norm() < 1e-10 * w.beta_re.norm().max(1.0));
        assert!((w3.beta_im - &w.beta_im * 3.0).norm() < 1e-10 * w.beta_im.norm().max(1.0));
    }

    #[test]
    fn row_and_vector_paths_agree() {
        let r = RealMatrix::from_fn(30, 8, |i, j| ((i * 5 + j * 13) % 17) as f64 / 17.0 - 0.5);
        let x = ComplexMatrix::from_fn(30, 3, |i, j| Complex64::new((i % 3) as f64, j as f64));
        let w = train_natural_elm(&r, &x, 0.1).unwrap();
        let all = w.estimate_rows(&r);
        for i in 0..30 {
            let v = w.estimate(&r.row(i).transpose());
            for k in 0..3 {
                assert!((v[k] - all[(i, k)]).norm() < 1e-12);
            }
        }
    }
}
