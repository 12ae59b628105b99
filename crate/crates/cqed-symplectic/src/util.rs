//! Small shared helpers for the dense symmetric linear algebra used by the
//! diagonalizers.

use nalgebra::{DMatrix, DVector};

use crate::error::SymplecticError;

/// Relative tolerance used when checking that inputs are symmetric.
pub(crate) const SYMMETRY_RTOL: f64 = 1e-8;

/// Verify `m` is square and symmetric up to `SYMMETRY_RTOL` relative to its
/// largest entry, returning the symmetrized matrix `(m + m^T)/2`.
pub(crate) fn require_symmetric(m: &DMatrix<f64>) -> Result<DMatrix<f64>, SymplecticError> {
    if m.nrows() != m.ncols() {
        return Err(SymplecticError::BadShape {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    let scale = m.amax().max(f64::MIN_POSITIVE);
    let mut asym = 0.0f64;
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            asym = asym.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    let tolerance = SYMMETRY_RTOL * scale;
    if asym > tolerance {
        return Err(SymplecticError::NotSymmetric {
            asymmetry: asym,
            tolerance,
        });
    }
    Ok((m + m.transpose()) * 0.5)
}

/// Eigendecomposition of a symmetric matrix with eigenvalues sorted in
/// ascending order and the eigenvector columns permuted to match.
pub(crate) fn symmetric_eigen_sorted(m: DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let eig = m.symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_fn(n, |i, _| eig.eigenvalues[order[i]]);
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Build `V f(D) V^T` from a sorted symmetric eigendecomposition, applying `f`
/// to each eigenvalue.
pub(crate) fn apply_spectral(
    values: &DVector<f64>,
    vectors: &DMatrix<f64>,
    f: impl Fn(f64) -> f64,
) -> DMatrix<f64> {
    let n = values.len();
    let mut scaled = vectors.clone();
    for j in 0..n {
        let fv = f(values[j]);
        scaled.column_mut(j).scale_mut(fv);
    }
    scaled * vectors.transpose()
}

/// Flip the sign of each column so that its largest-magnitude entry is
/// positive (ties broken by the first such entry). This fixes the sign
/// ambiguity of eigenvectors deterministically.
pub(crate) fn fix_column_signs(m: &mut DMatrix<f64>) {
    for j in 0..m.ncols() {
        let col = m.column(j);
        let mut best = 0usize;
        let mut best_abs = 0.0f64;
        for i in 0..col.len() {
            if col[i].abs() > best_abs {
                best_abs = col[i].abs();
                best = i;
            }
        }
        if col[best] < 0.0 {
            m.column_mut(j).neg_mut();
        }
    }
}
