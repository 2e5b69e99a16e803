use nalgebra::Cholesky;

use super::RealMatrix;
use crate::error::{Error, Result};

/// Pivot ratio below which an unregularized Gram matrix is treated as singular.
const SINGULAR_PIVOT_RATIO: f64 = 1e-13;

/// Cholesky factor of `ZᵀZ + γI`, reusable across several right-hand sides.
#[derive(Debug, Clone)]
pub struct GramFactor {
    chol: Cholesky<f64, nalgebra::Dyn>,
    gamma: f64,
}

impl GramFactor {
    pub fn new(z: &RealMatrix, gamma: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "gamma must be a finite non-negative number, got {gamma}"
            )));
        }
        if z.nrows() == 0 || z.ncols() == 0 {
            return Err(Error::InvalidArgument("empty design matrix".into()));
        }
        let mut gram = z.tr_mul(z);
        for i in 0..gram.nrows() {
            gram[(i, i)] += gamma;
        }
        Self::from_gram(gram, gamma)
    }

    /// Factor an already-formed `ZᵀZ + γI`.
    pub(crate) fn from_gram(gram: RealMatrix, gamma: f64) -> Result<Self> {
        let chol = Cholesky::new(gram).ok_or(Error::SingularNormalEquations { gamma })?;
        if gamma == 0.0 {
            let diag = chol.l_dirty().diagonal();
            let max = diag.max();
            let min = diag.min();
            if min.is_nan() || min <= 0.0 || (min * min) / (max * max) < SINGULAR_PIVOT_RATIO {
                return Err(Error::SingularNormalEquations { gamma });
            }
        }
        Ok(Self { chol, gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn dim(&self) -> usize {
        self.chol.l_dirty().nrows()
    }

    /// Solve `(ZᵀZ + γI) B = rhs`.
    pub fn solve(&self, rhs: &RealMatrix) -> RealMatrix {
        self.chol.solve(rhs)
    }

    /// `(ZᵀZ + γI)⁻¹`.
    pub fn inverse(&self) -> RealMatrix {
        self.chol.inverse()
    }
}

/// Ridge regression `B = (ZᵀZ + γI)⁻¹ZᵀT`, one column of `B` per column of `T`.
///
/// With `gamma == 0` a rank-deficient `Z` is reported as
/// [`Error::SingularNormalEquations`]; no pseudo-inverse fallback is attempted.
pub fn ridge_solve(z: &RealMatrix, t: &RealMatrix, gamma: f64) -> Result<RealMatrix> {
    if t.nrows() != z.nrows() {
        return Err(Error::DimensionMismatch {
            context: "ridge_solve targets",
            expected: z.nrows(),
            got: t.nrows(),
        });
    }
    let factor = GramFactor::new(z, gamma)?;
    Ok(factor.solve(&z.tr_mul(t)))
}
