//! Error types shared by the symplectic and Bogoliubov solvers.

use thiserror::Error;

/// Failure modes of the quadratic-form diagonalizers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymplecticError {
    /// The input matrix is not square with even dimension.
    #[error("quadratic form must be square with even dimension, got {rows}x{cols}")]
    BadShape {
        /// Number of rows of the offending matrix.
        rows: usize,
        /// Number of columns of the offending matrix.
        cols: usize,
    },

    /// The input matrix deviates from symmetry beyond numerical noise.
    #[error("matrix must be symmetric: max |H - H^T| = {asymmetry:.3e} exceeds {tolerance:.3e}")]
    NotSymmetric {
        /// Largest entrywise difference between the matrix and its transpose.
        asymmetry: f64,
        /// Tolerance that was applied (relative to the matrix magnitude).
        tolerance: f64,
    },

    /// The quadratic form has a non-positive eigenvalue, so no positive normal
    /// form exists.
    #[error("quadratic form is not positive definite: min eigenvalue {min_eigenvalue:.6e}")]
    NotPositiveDefinite {
        /// Smallest eigenvalue found.
        min_eigenvalue: f64,
    },

    /// Position and momentum blocks disagree in size.
    #[error("mode blocks must be square and of equal size, got {theta_rows}x{theta_cols} and {xi_rows}x{xi_cols}")]
    DimensionMismatch {
        /// Rows of the hopping block.
        theta_rows: usize,
        /// Columns of the hopping block.
        theta_cols: usize,
        /// Rows of the pairing block.
        xi_rows: usize,
        /// Columns of the pairing block.
        xi_cols: usize,
    },

    /// The mode-space spectrum cannot be paired into (-mu, +mu) couples: one of
    /// the definite combinations of the blocks fails to be positive definite.
    /// This signals physically invalid input (an unstable quadratic model).
    #[error("spectrum cannot be paired into +/-mu: {block} block not positive definite (min eigenvalue {min_eigenvalue:.6e})")]
    UnpairableSpectrum {
        /// Which definite combination failed ("sum" or "difference").
        block: &'static str,
        /// Smallest eigenvalue of the failing combination.
        min_eigenvalue: f64,
    },

    /// A vector argument does not match the solver dimension.
    #[error("vector length {got} does not match solver dimension {expected}")]
    VectorLength {
        /// Expected length.
        expected: usize,
        /// Actual length.
        got: usize,
    },

    /// The secular-equation solver could not bracket a root. This indicates
    /// inconsistent input (e.g. unsorted diagonal) rather than a numerical
    /// tolerance issue.
    #[error("secular solver failed to bracket eigenvalue {index}")]
    SecularBracketing {
        /// Index of the eigenvalue whose bracket failed.
        index: usize,
    },

    /// Pair extraction inside a degenerate eigenvalue cluster did not produce
    /// the expected number of independent planes.
    #[error("degenerate eigenvalue cluster of size {cluster_size} yielded {pairs_found} symplectic pairs instead of {pairs_expected}")]
    DegeneratePairing {
        /// Number of eigenvectors in the cluster.
        cluster_size: usize,
        /// Pairs actually recovered.
        pairs_found: usize,
        /// Pairs that should exist.
        pairs_expected: usize,
    },
}
