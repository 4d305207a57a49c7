//! Small dense linear algebra kernels used by the centrality operators and
//! the stationary-moment solves.
//!
//! Everything here targets the matrix sizes the rankings run at (tens to a
//! few hundred types). Solves use direct LU factorization; above roughly
//! M = 10^3 an iterative scheme would be preferable, but that regime is out
//! of range for the intended workloads.

use crate::error::HawkesError;

/// Dense square matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Zero matrix of size `dim` x `dim`.
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    /// Identity matrix.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Build from nested rows; all rows must have the same length as the
    /// outer vector.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, HawkesError> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(HawkesError::DimensionMismatch(format!(
                    "expected {} columns, got {}",
                    dim,
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Ok(Self { dim, data })
    }

    /// Matrix dimension (rows == columns).
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.data[row * self.dim + col] = value;
    }

    /// Raw row-major entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Transposed copy.
    pub fn transposed(&self) -> Self {
        let mut t = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Multiply every entry by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    /// y = A x.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim);
        let mut y = vec![0.0; self.dim];
        for i in 0..self.dim {
            let row = &self.data[i * self.dim..(i + 1) * self.dim];
            y[i] = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
        y
    }

    /// y = A^T x.
    pub fn tr_matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim);
        let mut y = vec![0.0; self.dim];
        for j in 0..self.dim {
            let row = &self.data[j * self.dim..(j + 1) * self.dim];
            let xj = x[j];
            for (yi, a) in y.iter_mut().zip(row) {
                *yi += a * xj;
            }
        }
        y
    }

    /// C = A B.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut c = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.get(i, k);
                if aik == 0.0 {
                    continue;
                }
                for j in 0..n {
                    c.data[i * n + j] += aik * other.data[k * n + j];
                }
            }
        }
        c
    }

    /// Frobenius norm.
    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// Maximum absolute row sum (infinity norm).
    pub fn inf_norm(&self) -> f64 {
        (0..self.dim)
            .map(|i| {
                self.data[i * self.dim..(i + 1) * self.dim]
                    .iter()
                    .map(|v| v.abs())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    /// Spectral radius: largest eigenvalue modulus.
    ///
    /// Computed from the limit `rho = lim ||A^m||^(1/m)` evaluated by
    /// normalized repeated squaring, which reaches machine precision in
    /// ~60 matrix products regardless of eigenvalue gaps, defectiveness,
    /// or periodic structure. Nilpotent matrices return exactly 0.
    pub fn spectral_radius(&self) -> f64 {
        let first_norm = self.max_abs();
        if first_norm == 0.0 || !first_norm.is_finite() {
            return if first_norm == 0.0 { 0.0 } else { f64::NAN };
        }
        let mut b = self.scaled(1.0 / first_norm);
        // A^(2^k) = B_k * exp(log_scale); power = 2^k
        let mut log_scale = first_norm.ln();
        let mut power = 1.0_f64;
        let mut estimate = first_norm;
        for _ in 0..64 {
            let norm = b.max_abs();
            if norm == 0.0 {
                return 0.0; // nilpotent: an exact zero power
            }
            let bs = b.scaled(1.0 / norm);
            b = bs.matmul(&bs);
            log_scale = 2.0 * (log_scale + norm.ln());
            power *= 2.0;
            let next = ((log_scale + b.max_abs().ln()) / power).exp();
            if (next - estimate).abs() <= 1e-15 * estimate.abs() {
                return next;
            }
            estimate = next;
        }
        estimate
    }

    /// Solve A x = b by LU factorization with partial pivoting.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>, HawkesError> {
        if b.len() != self.dim {
            return Err(HawkesError::DimensionMismatch(format!(
                "matrix dim {} vs rhs len {}",
                self.dim,
                b.len()
            )));
        }
        let n = self.dim;
        let mut lu = self.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();

        for col in 0..n {
            // Pivot: largest magnitude in the column at or below the diagonal.
            let mut pivot_row = col;
            let mut pivot_val = lu[perm[col] * n + col].abs();
            for row in (col + 1)..n {
                let v = lu[perm[row] * n + col].abs();
                if v > pivot_val {
                    pivot_val = v;
                    pivot_row = row;
                }
            }
            if pivot_val < f64::MIN_POSITIVE {
                return Err(HawkesError::InvalidInput(
                    "singular linear system".to_string(),
                ));
            }
            perm.swap(col, pivot_row);
            let p = perm[col];
            let pivot = lu[p * n + col];
            for row in (col + 1)..n {
                let r = perm[row];
                let factor = lu[r * n + col] / pivot;
                lu[r * n + col] = factor;
                for k in (col + 1)..n {
                    lu[r * n + k] -= factor * lu[p * n + k];
                }
            }
        }

        // Forward substitution (L has implicit unit diagonal).
        let mut y = vec![0.0; n];
        for i in 0..n {
            let r = perm[i];
            let mut sum = b[r];
            for (j, yj) in y.iter().enumerate().take(i) {
                sum -= lu[r * n + j] * yj;
            }
            y[i] = sum;
        }
        // Back substitution.
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let r = perm[i];
            let mut sum = y[i];
            for j in (i + 1)..n {
                sum -= lu[r * n + j] * x[j];
            }
            x[i] = sum / lu[r * n + i];
        }
        Ok(x)
    }
}

/// Outcome of a power iteration run.
#[derive(Debug, Clone)]
pub struct PowerIteration {
    /// L1-normalized nonnegative eigenvector estimate.
    pub vector: Vec<f64>,
    /// Dominant eigenvalue estimate of the original (unshifted) matrix.
    pub eigenvalue: f64,
    /// Iterations spent.
    pub iterations: usize,
}

/// Leading (right) eigenvector of a nonnegative matrix by power iteration.
///
/// Iterates on the shifted matrix A + sI so that periodic structures
/// (e.g. pure cycles) still converge: shifting leaves eigenvectors
/// untouched and makes the Perron root strictly dominant in modulus.
/// Starts from the uniform vector; converges when the L1-normalized
/// iterate moves less than `tol` in the max norm.
pub fn power_iteration(
    a: &Matrix,
    tol: f64,
    max_iterations: usize,
) -> Result<PowerIteration, HawkesError> {
    let n = a.dim();
    if n == 0 {
        return Err(HawkesError::InvalidInput("empty matrix".to_string()));
    }
    let scale = a.inf_norm();
    if scale == 0.0 {
        return Err(HawkesError::InvalidInput(
            "zero matrix has no leading eigenvector".to_string(),
        ));
    }
    let shift = 0.5 * scale;
    let mut x = vec![1.0 / n as f64; n];
    let mut eigenvalue = 0.0;
    for iter in 1..=max_iterations {
        let mut y = a.matvec(&x);
        for (yi, xi) in y.iter_mut().zip(&x) {
            *yi += shift * xi;
        }
        let norm: f64 = y.iter().map(|v| v.abs()).sum();
        if norm == 0.0 || !norm.is_finite() {
            return Err(HawkesError::NonFinite("power iteration".to_string()));
        }
        for yi in y.iter_mut() {
            *yi /= norm;
        }
        let delta = y
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        x = y;
        eigenvalue = norm - shift;
        if delta < tol {
            return Ok(PowerIteration {
                vector: x,
                eigenvalue,
                iterations: iter,
            });
        }
    }
    Err(HawkesError::NoConvergence {
        what: format!(
            "power iteration (last eigenvalue estimate {:.6e})",
            eigenvalue
        ),
        iterations: max_iterations,
    })
}

/// True when the directed graph of the nonzero pattern is strongly
/// connected (the matrix is irreducible).
pub fn is_irreducible(a: &Matrix) -> bool {
    let n = a.dim();
    if n == 0 {
        return false;
    }
    let reaches = |transpose: bool| -> bool {
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for v in 0..n {
                let w = if transpose { a.get(v, u) } else { a.get(u, v) };
                if w != 0.0 && !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == n
    };
    reaches(false) && reaches(true)
}
