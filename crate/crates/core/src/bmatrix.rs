//! Bordered-matrix algebra: construction, determinant F, cofactors Fᵢⱼ,
//! leading principal minors, multi-constraint borders, and the border-scaling
//! and block-product identities used by the sensitivity machinery.
//!
//! Index convention: rows/columns 0..m-1 are the border, so with a single
//! border the factor i (1-based) lives at matrix index i. Cofactors are
//! addressed with these bordered indices throughout.

use crate::error::{EsError, Result};
use crate::linalg::Matrix;
use crate::prodfn::DiffBundle;

/// An (m+n)×(m+n) matrix with m border rows/columns over an n×n base block:
/// zero m×m block top-left, constraint gradients top-right, their transpose
/// bottom-left, base block bottom-right.
#[derive(Clone, Debug)]
pub struct BorderedMatrix {
    mat: Matrix,
    border: usize,
}

/// Scale-aware zero test for determinants: |F| at or below
/// 1e-9 × (product of row ∞-norms) counts as singular.
pub const SINGULARITY_RTOL: f64 = 1e-9;

impl BorderedMatrix {
    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    /// Number of border rows m.
    pub fn border_count(&self) -> usize {
        self.border
    }

    /// Base-block dimension n.
    pub fn base_dim(&self) -> usize {
        self.mat.rows() - self.border
    }

    pub fn size(&self) -> usize {
        self.mat.rows()
    }

    pub fn singularity_threshold(&self) -> f64 {
        SINGULARITY_RTOL * self.mat.row_inf_norm_product()
    }

    pub fn is_singular(&self) -> bool {
        determinant(self).abs() <= self.singularity_threshold()
    }
}

/// The (n+1)×(n+1) single-border matrix [[0, ∇f], [∇fᵀ, H]].
pub fn bordered_hessian(d: &DiffBundle) -> BorderedMatrix {
    let n = d.dim();
    let mut mat = Matrix::zeros(n + 1, n + 1);
    for i in 0..n {
        mat.set(0, i + 1, d.gradient[i]);
        mat.set(i + 1, 0, d.gradient[i]);
        for j in 0..n {
            mat.set(i + 1, j + 1, d.hessian.get(i, j));
        }
    }
    BorderedMatrix { mat, border: 1 }
}

/// The (m+n)×(m+n) matrix with m constraint-gradient border rows over `base`.
pub fn multi_bordered(grads: &[Vec<f64>], base: &Matrix) -> Result<BorderedMatrix> {
    if grads.is_empty() {
        return Err(EsError::Dimension("multi_bordered needs at least one border row".into()));
    }
    let n = base.rows();
    if !base.is_square() {
        return Err(EsError::Dimension("base block must be square".into()));
    }
    if grads.iter().any(|g| g.len() != n) {
        return Err(EsError::Dimension(format!("border rows must have length {n}")));
    }
    let m = grads.len();
    let mut mat = Matrix::zeros(m + n, m + n);
    for (r, g) in grads.iter().enumerate() {
        for (c, &v) in g.iter().enumerate() {
            mat.set(r, m + c, v);
            mat.set(m + c, r, v);
        }
    }
    for i in 0..n {
        for j in 0..n {
            mat.set(m + i, m + j, base.get(i, j));
        }
    }
    Ok(BorderedMatrix { mat, border: m })
}

/// Determinant F of the bordered matrix (LU with partial pivoting).
pub fn determinant(m: &BorderedMatrix) -> f64 {
    m.mat.det()
}

/// Cofactor Fᵢⱼ = (−1)^(i+j) · det(minor with row i, column j deleted),
/// addressed in bordered indices.
pub fn cofactor(m: &BorderedMatrix, i: usize, j: usize) -> Result<f64> {
    let size = m.size();
    if i >= size || j >= size {
        return Err(EsError::Index(format!(
            "cofactor indices ({i}, {j}) out of range for size {size}"
        )));
    }
    let sign = if (i + j).is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * m.mat.delete_row_col(i, j).det())
}

/// Leading principal minors Δ₂..Δ_{n+1} of a single-border matrix, with the
/// strict sign-alternation flag.
#[derive(Clone, Debug)]
pub struct MinorSequence {
    /// Δ_r for r = 2..=n+1, in order.
    pub values: Vec<f64>,
    pub sign_alternates: bool,
}

pub fn leading_principal_minors(m: &BorderedMatrix) -> Result<MinorSequence> {
    if m.border != 1 {
        return Err(EsError::Dimension(format!(
            "leading principal minors are defined for a single border, got m = {}",
            m.border
        )));
    }
    let size = m.size();
    let mut values = Vec::with_capacity(size - 1);
    for r in 2..=size {
        let mut sub = Matrix::zeros(r, r);
        for i in 0..r {
            for j in 0..r {
                sub.set(i, j, m.mat.get(i, j));
            }
        }
        values.push(sub.det());
    }
    // Strict alternation: no zeros (on the scale of the matrix) and adjacent
    // minors of opposite sign.
    let scale = m.mat.row_inf_norm_product().max(1.0);
    let zero_tol = f64::EPSILON * scale * 64.0;
    let sign_alternates = values.iter().all(|v| v.abs() > zero_tol)
        && values.windows(2).all(|w| w[0] * w[1] < 0.0);
    Ok(MinorSequence { values, sign_alternates })
}

/// Both sides of the border-scaling identity
/// det(0,B; C,λA) = λ^(n−1) · det(0,B; C,A), returned as (lhs, rhs).
pub fn scaled_border_det(a: &Matrix, b: &[f64], c: &[f64], lambda: f64) -> Result<(f64, f64)> {
    if !a.is_square() {
        return Err(EsError::Dimension("A must be square".into()));
    }
    let n = a.rows();
    if b.len() != n || c.len() != n {
        return Err(EsError::Dimension(format!("B and C must have length {n}")));
    }
    let assemble = |scale: f64| {
        let mut m = Matrix::zeros(n + 1, n + 1);
        for i in 0..n {
            m.set(0, i + 1, b[i]);
            m.set(i + 1, 0, c[i]);
            for j in 0..n {
                m.set(i + 1, j + 1, scale * a.get(i, j));
            }
        }
        m
    };
    let lhs = assemble(lambda).det();
    let rhs = lambda.powi(n as i32 - 1) * assemble(1.0).det();
    Ok((lhs, rhs))
}

/// A·B computed as A⁽¹⁾B⁽¹⁾ + A⁽²⁾B⁽²⁾ after splitting A by columns and B by
/// rows at `split`. Equals plain multiplication; exercised as a tested
/// identity because the cofactor sensitivity derivation relies on it.
pub fn split_matmul(a: &Matrix, b: &Matrix, split: usize) -> Result<Matrix> {
    if a.cols() != b.rows() {
        return Err(EsError::Dimension("split_matmul: inner dimensions differ".into()));
    }
    if split == 0 || split >= a.cols() {
        return Err(EsError::Dimension(format!(
            "split {split} must be strictly inside 1..{}",
            a.cols()
        )));
    }
    let (m, p) = (a.rows(), b.cols());
    let mut a1 = Matrix::zeros(m, split);
    let mut a2 = Matrix::zeros(m, a.cols() - split);
    for i in 0..m {
        for j in 0..a.cols() {
            if j < split {
                a1.set(i, j, a.get(i, j));
            } else {
                a2.set(i, j - split, a.get(i, j));
            }
        }
    }
    let mut b1 = Matrix::zeros(split, p);
    let mut b2 = Matrix::zeros(b.rows() - split, p);
    for i in 0..b.rows() {
        for j in 0..p {
            if i < split {
                b1.set(i, j, b.get(i, j));
            } else {
                b2.set(i - split, j, b.get(i, j));
            }
        }
    }
    let first = a1.matmul(&b1)?;
    let second = a2.matmul(&b2)?;
    let mut out = Matrix::zeros(m, p);
    for i in 0..m {
        for j in 0..p {
            out.set(i, j, first.get(i, j) + second.get(i, j));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::point::Point;
    use crate::prodfn::{differentiate, nested_min_branch, FunctionSpec};

    fn pt(coords: &[f64]) -> Point {
        Point::new(coords.to_vec()).unwrap()
    }

    /// Determinant by explicit cofactor expansion along the first row.
    /// Independent of the LU path; usable for sizes up to ~6.
    fn naive_det(m: &Matrix) -> f64 {
        let n = m.rows();
        if n == 1 {
            return m.get(0, 0);
        }
        let mut acc = 0.0;
        for j in 0..n {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * m.get(0, j) * naive_det(&m.delete_row_col(0, j));
        }
        acc
    }

    #[test]
    fn layout_from_gradient_and_hessian() {
        let d = DiffBundle {
            value: 3.0,
            gradient: vec![1.0, 1.0],
            hessian: Matrix::from_rows(&[vec![-1.0, 0.0], vec![0.0, -1.0]]).unwrap(),
            point: pt(&[1.0, 1.0]),
        };
        let b = bordered_hessian(&d);
        assert_eq!(
            b.matrix().to_rows(),
            vec![
                vec![0.0, 1.0, 1.0],
                vec![1.0, -1.0, 0.0],
                vec![1.0, 0.0, -1.0],
            ]
        );
        assert!((determinant(&b) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn cobb_douglas_bordered_matrix() {
        let spec = FunctionSpec::CobbDouglas { scale: 1.0, exponents: vec![0.3, 0.5] };
        let b = bordered_hessian(&differentiate(&spec, &pt(&[1.0, 1.0])).unwrap());
        let want = [
            [0.0, 0.3, 0.5],
            [0.3, -0.21, 0.15],
            [0.5, 0.15, -0.25],
        ];
        for (i, row) in want.iter().enumerate() {
            for (j, &w) in row.iter().enumerate() {
                assert!((b.matrix().get(i, j) - w).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn degenerate_branch_matrix_is_singular() {
        // branch f = x1 of nested_min: border (1,0,0) over a zero base block
        let b = bordered_hessian(&nested_min_branch(&pt(&[1.0, 2.0, 3.0])).unwrap());
        assert_eq!(determinant(&b), 0.0);
        assert!(b.is_singular());
    }

    #[test]
    fn cofactor_matches_hand_minor() {
        let d = DiffBundle {
            value: 0.0,
            gradient: vec![1.0, 1.0],
            hessian: Matrix::from_rows(&[vec![-1.0, 0.0], vec![0.0, -1.0]]).unwrap(),
            point: pt(&[1.0, 1.0]),
        };
        let b = bordered_hessian(&d);
        // F_12: delete row 1 / col 2, minor |0 1; 1 0| = -1, sign (-1)^3
        assert!((cofactor(&b, 1, 2).unwrap() - 1.0).abs() < 1e-14);
        assert!(cofactor(&b, 3, 0).is_err());
    }

    #[test]
    fn f00_is_base_block_determinant() {
        let spec = FunctionSpec::CobbDouglas { scale: 1.0, exponents: vec![0.3, 0.5] };
        let d = differentiate(&spec, &pt(&[0.9, 1.7])).unwrap();
        let b = bordered_hessian(&d);
        let f00 = cofactor(&b, 0, 0).unwrap();
        assert!((f00 - d.hessian.det()).abs() < 1e-14);
    }

    #[test]
    fn minors_alternate_for_cobb_douglas() {
        let spec = FunctionSpec::CobbDouglas { scale: 1.0, exponents: vec![0.3, 0.5] };
        let b = bordered_hessian(&differentiate(&spec, &pt(&[1.0, 1.0])).unwrap());
        let seq = leading_principal_minors(&b).unwrap();
        assert!((seq.values[0] + 0.09).abs() < 1e-14);
        assert!(seq.values[1] > 0.0);
        assert!(seq.sign_alternates);
    }

    #[test]
    fn minors_do_not_alternate_with_zero_entry() {
        let b = bordered_hessian(&nested_min_branch(&pt(&[1.0, 2.0, 3.0])).unwrap());
        let seq = leading_principal_minors(&b).unwrap();
        assert!(!seq.sign_alternates);
        assert!(seq.values.contains(&0.0));
    }

    #[test]
    fn scaled_border_det_worked_example() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let (lhs, rhs) = scaled_border_det(&a, &[5.0, 6.0], &[7.0, 8.0], 3.0).unwrap();
        assert!((lhs - 54.0).abs() < 1e-12);
        assert!((rhs - 54.0).abs() < 1e-12);

        let (lhs, rhs) = scaled_border_det(&a, &[5.0, 6.0], &[7.0, 8.0], 1.0).unwrap();
        assert_eq!(lhs, rhs);

        let (lhs, rhs) = scaled_border_det(&a, &[5.0, 6.0], &[7.0, 8.0], 0.0).unwrap();
        assert_eq!(lhs, 0.0);
        assert_eq!(rhs, 0.0);
    }

    #[test]
    fn two_constraint_blackorby_determinant() {
        // borders {(1,0,0), (0,x3,x2)} over the Hessian of x2*x3 with unit
        // multiplier; determinant is -2*x2*x3
        for (x2, x3) in [(1.0, 1.0), (2.0, 0.7), (0.3, 1.9)] {
            let base = Matrix::from_rows(&[
                vec![0.0, 0.0, 0.0],
                vec![0.0, 0.0, 1.0],
                vec![0.0, 1.0, 0.0],
            ])
            .unwrap();
            let grads = vec![vec![1.0, 0.0, 0.0], vec![0.0, x3, x2]];
            let b = multi_bordered(&grads, &base).unwrap();
            assert_eq!(b.border_count(), 2);
            assert!((determinant(&b) + 2.0 * x2 * x3).abs() < 1e-12);
        }
    }

    #[test]
    fn single_border_multi_matches_bordered_hessian() {
        let spec = FunctionSpec::CobbDouglas { scale: 1.0, exponents: vec![0.3, 0.5] };
        let d = differentiate(&spec, &pt(&[1.2, 0.8])).unwrap();
        let via_bundle = bordered_hessian(&d);
        let via_multi =
            multi_bordered(std::slice::from_ref(&d.gradient), &d.hessian).unwrap();
        assert_eq!(via_bundle.matrix(), via_multi.matrix());
    }

    #[test]
    fn zero_borders_make_determinant_zero() {
        let base = Matrix::identity(3);
        let b = multi_bordered(&[vec![0.0; 3], vec![0.0; 3]], &base).unwrap();
        assert_eq!(determinant(&b), 0.0);
    }

    #[test]
    fn lu_det_matches_naive_expansion_up_to_5() {
        let mut state = 0x9e3779b97f4a7c15_u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 4.0 - 2.0
        };
        for n in 2..=5 {
            for _ in 0..20 {
                let rows: Vec<Vec<f64>> =
                    (0..n).map(|_| (0..n).map(|_| next()).collect()).collect();
                let m = Matrix::from_rows(&rows).unwrap();
                let lu = m.det();
                let naive = naive_det(&m);
                assert!(
                    (lu - naive).abs() <= 1e-10 * naive.abs().max(1.0),
                    "n={n}: {lu} vs {naive}"
                );
            }
        }
    }

    #[test]
    fn split_product_equals_plain_product() {
        let a = Matrix::from_rows(&[
            vec![1.0, 2.0, 3.0, 4.0],
            vec![0.5, -1.0, 2.5, 0.0],
        ])
        .unwrap();
        let b = Matrix::from_rows(&[
            vec![1.0, 0.0],
            vec![2.0, 1.0],
            vec![-1.0, 3.0],
            vec![0.5, 0.5],
        ])
        .unwrap();
        let whole = a.matmul(&b).unwrap();
        for split in 1..4 {
            let parts = split_matmul(&a, &b, split).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    assert!((whole.get(i, j) - parts.get(i, j)).abs() < 1e-12);
                }
            }
        }
    }
}
