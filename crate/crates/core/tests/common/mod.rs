//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use elm_mimo::numeric::RealMatrix;

/// Dense Gauss-Jordan solve with partial pivoting on plain vectors.
pub fn gauss_jordan(a: Vec<Vec<f64>>, b: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut aug: Vec<Vec<f64>> = a
        .into_iter()
        .zip(b)
        .map(|(mut r, rb)| {
            r.extend(rb);
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| aug[i][col].abs().partial_cmp(&aug[j][col].abs()).unwrap())
            .unwrap();
        aug.swap(col, piv);
        let d = aug[col][col];
        for x in aug[col].iter_mut() {
            *x /= d;
        }
        for i in 0..n {
            if i != col {
                let f = aug[i][col];
                if f != 0.0 {
                    let pivot_row = aug[col].clone();
                    for (a, p) in aug[i].iter_mut().zip(&pivot_row) {
                        *a -= f * p;
                    }
                }
            }
        }
    }
    aug.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// `(ZᵀZ + γI)⁻¹ZᵀT` assembled with explicit loops.
pub fn ridge_oracle(z: &RealMatrix, t: &RealMatrix, gamma: f64) -> RealMatrix {
    let (m, l) = z.shape();
    let v = t.ncols();
    let gram: Vec<Vec<f64>> = (0..l)
        .map(|i| {
            (0..l)
                .map(|j| {
                    (0..m).map(|r| z[(r, i)] * z[(r, j)]).sum::<f64>()
                        + if i == j { gamma } else { 0.0 }
                })
                .collect()
        })
        .collect();
    let rhs: Vec<Vec<f64>> = (0..l)
        .map(|i| {
            (0..v)
                .map(|c| (0..m).map(|r| z[(r, i)] * t[(r, c)]).sum())
                .collect()
        })
        .collect();
    let sol = gauss_jordan(gram, rhs);
    RealMatrix::from_fn(l, v, |i, j| sol[i][j])
}

/// Mid-rise output found by scanning the `2^bits` cells of `[−F, F)`.
pub fn quantizer_oracle(c: f64, bits: u32, full_scale: f64) -> f64 {
    let n = 2f64.powi(bits as i32);
    let step = 2.0 * full_scale / n;
    let clamped = c.max(-full_scale).min(full_scale - step * 1e-9);
    let mut best = f64::NAN;
    let mut best_dist = f64::INFINITY;
    for l in 0..n as i64 {
        let lo = -full_scale + l as f64 * step;
        let d = if clamped >= lo && clamped < lo + step {
            0.0
        } else {
            (clamped - lo).abs()
        };
        if d < best_dist {
            best_dist = d;
            best = lo + 0.5 * step;
        }
    }
    best
}

/// True when `c` sits within `tol` (in cells) of a cell edge of step `step`.
pub fn near_cell_edge(c: f64, step: f64, tol: f64) -> bool {
    let frac = (c / step).rem_euclid(1.0);
    frac < tol || frac > 1.0 - tol
}
