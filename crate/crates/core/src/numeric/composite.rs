use super::{ComplexMatrix, ComplexVector, RealMatrix, RealVector};

/// Real-composite form `[[Re H, −Im H], [Im H, Re H]]` of a complex matrix.
///
/// With [`real_stack`] this turns `y = H s` into the real system
/// `y′ = H′ s′` of twice the dimension.
pub fn real_composite(h: &ComplexMatrix) -> RealMatrix {
    let (n, k) = h.shape();
    RealMatrix::from_fn(2 * n, 2 * k, |i, j| {
        let v = h[(i % n, j % k)];
        match (i < n, j < k) {
            (true, true) | (false, false) => v.re,
            (true, false) => -v.im,
            (false, true) => v.im,
        }
    })
}

/// `[Re v; Im v]`.
pub fn real_stack(v: &ComplexVector) -> RealVector {
    let n = v.len();
    RealVector::from_fn(2 * n, |i, _| if i < n { v[i].re } else { v[i - n].im })
}

/// Row-wise [`real_stack`]: an `M×N` complex matrix becomes `M×2N` real,
/// real parts in the first `N` columns.
pub fn real_stack_rows(m: &ComplexMatrix) -> RealMatrix {
    let (rows, n) = m.shape();
    RealMatrix::from_fn(rows, 2 * n, |i, j| {
        if j < n {
            m[(i, j)].re
        } else {
            m[(i, j - n)].im
        }
    })
}
