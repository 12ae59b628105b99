//! Williamson normal form of positive-definite quadratic Hamiltonians.
//!
//! A positive-definite quadratic Hamiltonian `H = 1/2 x^T H_h x` on the
//! phase-space vector `x = (x_1..x_N, p_1..p_N)` can always be brought to a
//! sum of decoupled harmonic oscillators by a linear canonical transformation.
//! [`williamson_diagonalize`] computes the normal-mode frequencies and the
//! symplectic matrix `S` realizing that transformation:
//!
//! ```text
//! S^T H_h S = diag(Λ, Λ),      S^T J S = J,
//! ```
//!
//! with `J` the standard symplectic form returned by [`symplectic_form`] and
//! `Λ` the vector of symplectic eigenvalues in ascending order.

use nalgebra::{DMatrix, DVector};

use crate::error::SymplecticError;
use crate::util::{apply_spectral, require_symmetric, symmetric_eigen_sorted};

/// Relative gap below which neighboring symplectic eigenvalues are treated as
/// one degenerate cluster when extracting canonical pairs.
const DEGENERACY_RTOL: f64 = 1e-8;

/// The standard symplectic form
/// `J = [[0, I], [-I, 0]]`
/// on a phase space with `n` position and `n` momentum coordinates.
pub fn symplectic_form(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = 1.0;
        j[(n + i, i)] = -1.0;
    }
    j
}

/// Result of [`williamson_diagonalize`].
#[derive(Debug, Clone)]
pub struct Williamson {
    /// Symplectic eigenvalues (normal-mode frequencies when `H_h` is written
    /// in frequency units), ascending.
    pub frequencies: DVector<f64>,
    /// Symplectic transformation `S` with `S^T H_h S = diag(Λ, Λ)` and
    /// `S^T J S = J`.
    pub transform: DMatrix<f64>,
}

/// Diagonalize a positive-definite quadratic form on phase space into its
/// Williamson normal form.
///
/// `h` must be a symmetric positive-definite `2N x 2N` matrix expressed in the
/// coordinate ordering `(x_1..x_N, p_1..p_N)`. Returns the symplectic
/// eigenvalues in ascending order together with the symplectic matrix that
/// realizes the normal form.
///
/// The construction first forms `A = H^{1/2} J H^{1/2}`, which is
/// antisymmetric, so `-A^2` is symmetric positive semi-definite with doubly
/// degenerate eigenvalues `Λ_k^2`. Each degenerate plane yields a canonical
/// pair `(x, y = A x / Λ)`; assembling `Q = [Y | X]` and scaling by
/// `diag(Λ,Λ)^{1/2}` gives `S = H^{-1/2} Q diag(Λ,Λ)^{1/2}`. A final rotation
/// within each mode plane (a pure gauge freedom of the normal form) is fixed
/// deterministically by maximizing the trace of `S`, which in particular maps
/// an already-canonical `diag(Λ, Λ)` to `S = I`.
///
/// # Errors
///
/// * [`SymplecticError::BadShape`] if `h` is not square with even dimension.
/// * [`SymplecticError::NotSymmetric`] if `h` is not symmetric.
/// * [`SymplecticError::NotPositiveDefinite`] if `h` has a non-positive
///   eigenvalue. Singular quadratic forms (frozen or free coordinates) must be
///   projected out by the caller first.
pub fn williamson_diagonalize(h: &DMatrix<f64>) -> Result<Williamson, SymplecticError> {
    let hs = require_symmetric(h)?;
    let dim = hs.nrows();
    if dim == 0 || dim % 2 != 0 {
        return Err(SymplecticError::BadShape {
            rows: dim,
            cols: dim,
        });
    }
    let n = dim / 2;

    let (hvals, hvecs) = symmetric_eigen_sorted(hs);
    if hvals[0] <= 0.0 {
        return Err(SymplecticError::NotPositiveDefinite {
            min_eigenvalue: hvals[0],
        });
    }
    let h_sqrt = apply_spectral(&hvals, &hvecs, f64::sqrt);
    let h_isqrt = apply_spectral(&hvals, &hvecs, |v| 1.0 / v.sqrt());

    // A = H^{1/2} J H^{1/2} is antisymmetric; -A^2 is symmetric PSD with
    // doubly degenerate spectrum {Λ_k^2}.
    let j = symplectic_form(n);
    let a = &h_sqrt * j * &h_sqrt;
    let mut minus_a2 = -(&a * &a);
    minus_a2 = (&minus_a2 + minus_a2.transpose()) * 0.5;

    let (sq_vals, sq_vecs) = symmetric_eigen_sorted(minus_a2);

    // Group the 2N eigenvalues of -A^2 into degenerate clusters; each cluster
    // of size 2m carries m canonical planes.
    let mut clusters: Vec<(usize, usize)> = Vec::new(); // [start, end)
    let mut start = 0usize;
    for i in 1..dim {
        let scale = sq_vals[i].abs().max(sq_vals[start].abs()).max(f64::MIN_POSITIVE);
        if (sq_vals[i] - sq_vals[i - 1]).abs() > DEGENERACY_RTOL * scale {
            clusters.push((start, i));
            start = i;
        }
    }
    clusters.push((start, dim));

    let mut xs: Vec<DVector<f64>> = Vec::with_capacity(n);
    let mut ys: Vec<DVector<f64>> = Vec::with_capacity(n);
    let mut lambdas: Vec<f64> = Vec::with_capacity(n);

    for &(lo, hi) in &clusters {
        let cluster_size = hi - lo;
        let pairs_expected = cluster_size / 2;
        let mut pairs_found = 0usize;
        for idx in lo..hi {
            if pairs_found == pairs_expected {
                break;
            }
            // Project the candidate against the pairs already extracted from
            // this cluster; a vanishing residual means it is the partner of an
            // earlier vector.
            let mut v: DVector<f64> = sq_vecs.column(idx).into_owned();
            for p in 0..pairs_found {
                let x = &xs[xs.len() - pairs_found + p];
                let y = &ys[ys.len() - pairs_found + p];
                let cx = x.dot(&v);
                let cy = y.dot(&v);
                v -= x * cx;
                v -= y * cy;
            }
            let norm = v.norm();
            if norm < 1e-6 {
                continue;
            }
            v /= norm;
            // Deterministic sign: largest-magnitude entry positive.
            let mut best = 0usize;
            for i in 0..dim {
                if v[i].abs() > v[best].abs() {
                    best = i;
                }
            }
            if v[best] < 0.0 {
                v.neg_mut();
            }
            let lambda = sq_vals[idx].max(0.0).sqrt();
            if lambda <= 0.0 {
                // A zero symplectic eigenvalue contradicts positive
                // definiteness of H, which was already checked; treat as a
                // pairing failure for safety.
                return Err(SymplecticError::NotPositiveDefinite {
                    min_eigenvalue: 0.0,
                });
            }
            let mut y = (&a * &v) / lambda;
            let ynorm = y.norm();
            y /= ynorm;
            xs.push(v);
            ys.push(y);
            lambdas.push(lambda);
            pairs_found += 1;
        }
        if pairs_found != pairs_expected {
            return Err(SymplecticError::DegeneratePairing {
                cluster_size,
                pairs_found,
                pairs_expected,
            });
        }
    }

    // Q = [Y | X] satisfies Q^T A Q = [[0, Λ], [-Λ, 0]].
    let mut q = DMatrix::zeros(dim, dim);
    for k in 0..n {
        q.set_column(k, &ys[k]);
        q.set_column(n + k, &xs[k]);
    }
    let mut scale = DVector::zeros(dim);
    for k in 0..n {
        scale[k] = lambdas[k].sqrt();
        scale[n + k] = lambdas[k].sqrt();
    }
    let mut s = &h_isqrt * q;
    for c in 0..dim {
        s.column_mut(c).scale_mut(scale[c]);
    }

    // Fix the residual rotation gauge within each mode plane by maximizing the
    // trace of S. Columns k and n+k may be rotated into each other without
    // changing either S^T H S or S^T J S.
    for k in 0..n {
        let a_kk = s[(k, k)];
        let b_kn = s[(k, n + k)];
        let c_nk = s[(n + k, k)];
        let d_nn = s[(n + k, n + k)];
        let phi = (b_kn - c_nk).atan2(a_kk + d_nn);
        if phi != 0.0 {
            let (sin_p, cos_p) = phi.sin_cos();
            for i in 0..dim {
                let u = s[(i, k)];
                let w = s[(i, n + k)];
                s[(i, k)] = cos_p * u + sin_p * w;
                s[(i, n + k)] = -sin_p * u + cos_p * w;
            }
        }
    }

    Ok(Williamson {
        frequencies: DVector::from_vec(lambdas),
        transform: s,
    })
}
