//! Whittaker smoother with a second-order difference penalty.
//!
//! Solves `(I + lambda * D'D) z = y` where `D` is the `(n-2) x n` second
//! difference matrix. The system matrix is symmetric positive definite and
//! pentadiagonal, so it is factored once per length as a banded Cholesky.

/// Banded Cholesky factor of `I + lambda * D'D` for a fixed length.
#[derive(Clone, Debug)]
pub struct Whittaker {
    n: usize,
    // L[i][k] holds the entry at row i, column i - k (k = 0, 1, 2).
    l: Vec<[f64; 3]>,
}

/// Band of `D'D` for length `n`: (diagonal, first off-diagonal, second off-diagonal).
pub(crate) fn second_difference_gram(n: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let mut d0 = vec![0.0; n];
    let mut d1 = vec![0.0; n.saturating_sub(1)];
    let mut d2 = vec![0.0; n.saturating_sub(2)];
    // each difference row [1, -2, 1] at columns (r, r+1, r+2) adds its outer product
    for r in 0..n.saturating_sub(2) {
        let row = [1.0, -2.0, 1.0];
        for i in 0..3 {
            d0[r + i] += row[i] * row[i];
        }
        for i in 0..2 {
            d1[r + i] += row[i] * row[i + 1];
        }
        d2[r] += row[0] * row[2];
    }
    (d0, d1, d2)
}

impl Whittaker {
    pub fn new(n: usize, lambda: f64) -> Self {
        assert!(lambda >= 0.0, "smoothing penalty must be non-negative");
        let (g0, g1, g2) = second_difference_gram(n);
        let mut l = vec![[0.0f64; 3]; n];
        for i in 0..n {
            let a0 = 1.0 + lambda * g0[i];
            let a1 = if i >= 1 { lambda * g1[i - 1] } else { 0.0 };
            let a2 = if i >= 2 { lambda * g2[i - 2] } else { 0.0 };
            // L[i][2] = A[i][i-2] / L[i-2][0]
            let l2 = if i >= 2 { a2 / l[i - 2][0] } else { 0.0 };
            // L[i][1] = (A[i][i-1] - L[i][2] * L[i-1][1]) / L[i-1][0]
            let l1 = if i >= 1 {
                let cross = if i >= 2 { l2 * l[i - 1][1] } else { 0.0 };
                (a1 - cross) / l[i - 1][0]
            } else {
                0.0
            };
            let diag = (a0 - l1 * l1 - l2 * l2).sqrt();
            l[i] = [diag, l1, l2];
        }
        Self { n, l }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Smooth `y` in place.
    pub fn solve_in_place(&self, y: &mut [f64]) {
        assert_eq!(y.len(), self.n);
        let l = &self.l;
        // forward: L w = y
        for i in 0..self.n {
            let mut s = y[i];
            if i >= 1 {
                s -= l[i][1] * y[i - 1];
            }
            if i >= 2 {
                s -= l[i][2] * y[i - 2];
            }
            y[i] = s / l[i][0];
        }
        // backward: L' z = w
        for i in (0..self.n).rev() {
            let mut s = y[i];
            if i + 1 < self.n {
                s -= l[i + 1][1] * y[i + 1];
            }
            if i + 2 < self.n {
                s -= l[i + 2][2] * y[i + 2];
            }
            y[i] = s / l[i][0];
        }
    }
}

/// Separable 2D smoothing of a row-major `rows x cols` grid: every row first,
/// then every column of the result. `lambda == 0` returns the input untouched.
pub fn smooth_grid(values: &[f64], rows: usize, cols: usize, lambda: f64) -> Vec<f64> {
    assert_eq!(values.len(), rows * cols);
    let mut out = values.to_vec();
    if lambda == 0.0 {
        return out;
    }
    let along_row = Whittaker::new(cols, lambda);
    for row in out.chunks_exact_mut(cols) {
        along_row.solve_in_place(row);
    }
    let along_col = Whittaker::new(rows, lambda);
    let mut column = vec![0.0; rows];
    for c in 0..cols {
        for r in 0..rows {
            column[r] = out[r * cols + c];
        }
        along_col.solve_in_place(&mut column);
        for r in 0..rows {
            out[r * cols + c] = column[r];
        }
    }
    out
}
