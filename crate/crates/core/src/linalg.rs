//! Dense row-major matrices sized for bordered-Hessian work (n ≤ ~10).
//!
//! Determinants use LU with partial pivoting; the symmetric eigenvalue
//! routine is a classical Jacobi sweep. Both avoid pulling a linear-algebra
//! dependency for matrices this small.

use crate::error::{EsError, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(EsError::Dimension("matrix needs at least one row".into()));
        }
        let cols = rows[0].len();
        if cols == 0 || rows.iter().any(|r| r.len() != cols) {
            return Err(EsError::Dimension("ragged or empty matrix rows".into()));
        }
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Ok(Matrix { rows: rows.len(), cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(EsError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.set(i, j, out.get(i, j) + a * other.get(k, j));
                }
            }
        }
        Ok(out)
    }

    /// y = M x for a vector x.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if self.cols != x.len() {
            return Err(EsError::Dimension(format!(
                "matvec: matrix has {} cols, vector has {}",
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * x[j]).sum())
            .collect())
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if (self.get(i, j) - self.get(j, i)).abs() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// (M + Mᵀ)/2 for a square matrix.
    pub fn symmetrized(&self) -> Matrix {
        debug_assert!(self.is_square());
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, 0.5 * (self.get(i, j) + self.get(j, i)));
            }
        }
        out
    }

    /// Copy with row `i` and column `j` removed.
    pub fn delete_row_col(&self, i: usize, j: usize) -> Matrix {
        let mut out = Matrix::zeros(self.rows - 1, self.cols - 1);
        let mut r = 0;
        for src_r in 0..self.rows {
            if src_r == i {
                continue;
            }
            let mut c = 0;
            for src_c in 0..self.cols {
                if src_c == j {
                    continue;
                }
                out.set(r, c, self.get(src_r, src_c));
                c += 1;
            }
            r += 1;
        }
        out
    }

    /// Product of row ∞-norms. Used as the scale in zero-determinant tests.
    pub fn row_inf_norm_product(&self) -> f64 {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j).abs())
                    .fold(0.0_f64, f64::max)
            })
            .product()
    }

    /// Determinant by LU with partial pivoting.
    pub fn det(&self) -> f64 {
        debug_assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return 1.0;
        }
        let mut a = self.data.clone();
        let mut sign = 1.0;
        for k in 0..n {
            // pivot search
            let mut p = k;
            let mut best = a[k * n + k].abs();
            for r in (k + 1)..n {
                let v = a[r * n + k].abs();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if best == 0.0 {
                return 0.0;
            }
            if p != k {
                for c in 0..n {
                    a.swap(k * n + c, p * n + c);
                }
                sign = -sign;
            }
            let pivot = a[k * n + k];
            for r in (k + 1)..n {
                let factor = a[r * n + k] / pivot;
                if factor == 0.0 {
                    continue;
                }
                for c in k..n {
                    a[r * n + c] -= factor * a[k * n + c];
                }
            }
        }
        sign * (0..n).map(|i| a[i * n + i]).product::<f64>()
    }

    /// Solve M X = B for X with multiple right-hand-side columns.
    pub fn solve(&self, rhs: &Matrix) -> Result<Matrix> {
        if !self.is_square() {
            return Err(EsError::Dimension("solve needs a square matrix".into()));
        }
        if self.rows != rhs.rows {
            return Err(EsError::Dimension("solve: rhs row count mismatch".into()));
        }
        let n = self.rows;
        let m = rhs.cols;
        let mut a = self.data.clone();
        let mut b = rhs.data.clone();
        for k in 0..n {
            let mut p = k;
            let mut best = a[k * n + k].abs();
            for r in (k + 1)..n {
                let v = a[r * n + k].abs();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if best < f64::EPSILON * self.row_inf_norm_product().max(1.0) {
                return Err(EsError::SingularQ(format!(
                    "pivot {:.3e} at column {} below tolerance",
                    best, k
                )));
            }
            if p != k {
                for c in 0..n {
                    a.swap(k * n + c, p * n + c);
                }
                for c in 0..m {
                    b.swap(k * m + c, p * m + c);
                }
            }
            let pivot = a[k * n + k];
            for r in (k + 1)..n {
                let factor = a[r * n + k] / pivot;
                if factor == 0.0 {
                    continue;
                }
                for c in k..n {
                    a[r * n + c] -= factor * a[k * n + c];
                }
                for c in 0..m {
                    b[r * m + c] -= factor * b[k * m + c];
                }
            }
        }
        // back substitution
        for k in (0..n).rev() {
            let pivot = a[k * n + k];
            for c in 0..m {
                let mut v = b[k * m + c];
                for j in (k + 1)..n {
                    v -= a[k * n + j] * b[j * m + c];
                }
                b[k * m + c] = v / pivot;
            }
        }
        Ok(Matrix { rows: n, cols: m, data: b })
    }

    pub fn inverse(&self) -> Result<Matrix> {
        self.solve(&Matrix::identity(self.rows))
    }

    /// Eigenvalues of a symmetric matrix via cyclic Jacobi rotations,
    /// sorted descending. Small n only.
    pub fn sym_eigenvalues(&self) -> Result<Vec<f64>> {
        if !self.is_square() {
            return Err(EsError::Dimension("eigenvalues need a square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(vec![]);
        }
        let mut a = self.symmetrized();
        let scale = a.row_inf_norm_product().max(1.0);
        let tol = 1e-14 * scale.powf(1.0 / n as f64).max(1.0);
        for _sweep in 0..100 {
            let mut off = 0.0_f64;
            for i in 0..n {
                for j in (i + 1)..n {
                    off = off.max(a.get(i, j).abs());
                }
            }
            if off < tol {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a.get(p, q);
                    if apq.abs() < tol * 1e-2 {
                        continue;
                    }
                    let app = a.get(p, p);
                    let aqq = a.get(q, q);
                    let theta = if (app - aqq).abs() < f64::MIN_POSITIVE.sqrt() {
                        std::f64::consts::FRAC_PI_4 * apq.signum()
                    } else {
                        0.5 * (2.0 * apq / (app - aqq)).atan()
                    };
                    let (s, c) = theta.sin_cos();
                    for i in 0..n {
                        if i == p || i == q {
                            continue;
                        }
                        let aip = a.get(i, p);
                        let aiq = a.get(i, q);
                        a.set(i, p, c * aip + s * aiq);
                        a.set(p, i, c * aip + s * aiq);
                        a.set(i, q, -s * aip + c * aiq);
                        a.set(q, i, -s * aip + c * aiq);
                    }
                    a.set(p, p, c * c * app + 2.0 * c * s * apq + s * s * aqq);
                    a.set(q, q, s * s * app - 2.0 * c * s * apq + c * c * aqq);
                    a.set(p, q, 0.0);
                    a.set(q, p, 0.0);
                }
            }
        }
        let mut ev: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
        ev.sort_by(|x, y| y.partial_cmp(x).unwrap_or(std::cmp::Ordering::Equal));
        Ok(ev)
    }
}

/// Aligned fixed-point rendering of a matrix for text reports.
pub fn format_matrix(m: &Matrix) -> String {
    let cells: Vec<Vec<String>> = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| format!("{:.6}", m.get(i, j))).collect())
        .collect();
    let width = cells
        .iter()
        .flat_map(|r| r.iter().map(|s| s.len()))
        .max()
        .unwrap_or(0);
    cells
        .iter()
        .map(|r| {
            let row = r
                .iter()
                .map(|s| format!("{:>width$}", s, width = width))
                .collect::<Vec<_>>()
                .join("  ");
            format!("[ {} ]", row)
        })
        .collect::<Vec<_>>()
        .join("\n")
}
