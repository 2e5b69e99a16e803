use super::{GramFactor, RealMatrix, RealVector};
use crate::error::{Error, Result};

/// Recursive least-squares state for a multi-output linear read-out.
///
/// `p` is the inverse correlation estimate (`L×L`), `beta` holds one column
/// of output weights per target (`L×V`).
#[derive(Debug, Clone, PartialEq)]
pub struct RlsState {
    p: RealMatrix,
    beta: RealMatrix,
    lambda: f64,
    steps: u64,
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "forgetting factor must lie in (0, 1], got {lambda}"
        )))
    }
}

impl RlsState {
    /// Batch initialization: `P = (R0ᵀR0 + γI)⁻¹` and `beta` the ridge fit on `(R0, T0)`.
    pub fn init(r0: &RealMatrix, t0: &RealMatrix, gamma: f64, lambda: f64) -> Result<Self> {
        check_lambda(lambda)?;
        if r0.nrows() != t0.nrows() {
            return Err(Error::DimensionMismatch {
                context: "rls_init targets",
                expected: r0.nrows(),
                got: t0.nrows(),
            });
        }
        let factor = GramFactor::new(r0, gamma)?;
        let beta = factor.solve(&r0.tr_mul(t0));
        let mut p = factor.inverse();
        symmetrize(&mut p);
        Ok(Self {
            p,
            beta,
            lambda,
            steps: 0,
        })
    }

    /// Build a state from explicit parts; `p` must be square and match `beta`'s rows.
    pub fn from_parts(p: RealMatrix, beta: RealMatrix, lambda: f64) -> Result<Self> {
        check_lambda(lambda)?;
        if !p.is_square() || p.nrows() != beta.nrows() {
            return Err(Error::DimensionMismatch {
                context: "rls state",
                expected: beta.nrows(),
                got: p.nrows(),
            });
        }
        Ok(Self {
            p,
            beta,
            lambda,
            steps: 0,
        })
    }

    pub fn p(&self) -> &RealMatrix {
        &self.p
    }

    pub fn beta(&self) -> &RealMatrix {
        &self.beta
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn set_lambda(&mut self, lambda: f64) -> Result<()> {
        check_lambda(lambda)?;
        self.lambda = lambda;
        Ok(())
    }

    /// Hidden-layer width `L`.
    pub fn hidden(&self) -> usize {
        self.beta.nrows()
    }

    /// Number of outputs `V`.
    pub fn outputs(&self) -> usize {
        self.beta.ncols()
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// One exponentially weighted RLS update with regressor `r` and target `t`.
    ///
    /// On error the state is left untouched.
    pub fn step(&mut self, r: &RealVector, t: &RealVector) -> Result<()> {
        if r.len() != self.hidden() {
            return Err(Error::DimensionMismatch {
                context: "rls_step regressor",
                expected: self.hidden(),
                got: r.len(),
            });
        }
        if t.len() != self.outputs() {
            return Err(Error::DimensionMismatch {
                context: "rls_step target",
                expected: self.outputs(),
                got: t.len(),
            });
        }
        let step = self.steps + 1;
        let pr = &self.p * r;
        let denom = self.lambda + r.dot(&pr);
        if !denom.is_finite() || denom <= 0.0 {
            return Err(Error::NumericalBlowUp {
                step,
                what: "gain denominator",
            });
        }
        let q = &pr / denom;
        if q.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericalBlowUp { step, what: "gain" });
        }
        // e_v = t_v − β_vᵀ r
        let err = t - self.beta.tr_mul(r);
        let mut beta = self.beta.clone();
        beta.ger(1.0, &q, &err, 1.0);
        // P is symmetric, so rᵀP = (P r)ᵀ
        let mut p = self.p.clone();
        p.ger(-1.0, &q, &pr, 1.0);
        p /= self.lambda;
        symmetrize(&mut p);
        if p.iter().any(|v| !v.is_finite()) || beta.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericalBlowUp {
                step,
                what: "inverse correlation",
            });
        }
        self.p = p;
        self.beta = beta;
        self.steps = step;
        Ok(())
    }

    /// Apply [`RlsState::step`] to every row of `(r_rows, t_rows)` in order.
    pub fn step_rows(&mut self, r_rows: &RealMatrix, t_rows: &RealMatrix) -> Result<()> {
        if r_rows.nrows() != t_rows.nrows() {
            return Err(Error::DimensionMismatch {
                context: "rls chunk",
                expected: r_rows.nrows(),
                got: t_rows.nrows(),
            });
        }
        for i in 0..r_rows.nrows() {
            let r = r_rows.row(i).transpose();
            let t = t_rows.row(i).transpose();
            self.step(&r, &t)?;
        }
        Ok(())
    }
}

fn symmetrize(p: &mut RealMatrix) {
    let n = p.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (p[(i, j)] + p[(j, i)]);
            p[(i, j)] = avg;
            p[(j, i)] = avg;
        }
    }
}
