//! Dense linear algebra shared by every receiver.
//!
//! Storage is [`nalgebra`]'s column-major dynamic matrices. The solvers here
//! are the regularized least-squares fit used for batch training and the
//! recursive least-squares engine used by the adaptive receiver.

mod composite;
mod ridge;
mod rls;

pub use composite::{real_composite, real_stack, real_stack_rows};
pub use ridge::{ridge_solve, GramFactor};
pub use rls::RlsState;

use num_complex::Complex64;

pub type RealMatrix = nalgebra::DMatrix<f64>;
pub type RealVector = nalgebra::DVector<f64>;
pub type ComplexMatrix = nalgebra::DMatrix<Complex64>;
pub type ComplexVector = nalgebra::DVector<Complex64>;

/// Frobenius-norm relative difference `‖a − b‖ / max(‖b‖, tiny)`.
pub fn relative_error(a: &RealMatrix, b: &RealMatrix) -> f64 {
    let denom = b.norm().max(f64::MIN_POSITIVE);
    (a - b).norm() / denom
}
