//! Real spectral decomposition of an orthogonal matrix.
//!
//! A real orthogonal matrix splits the space into a `+1` eigenspace, a `-1`
//! eigenspace, and two-dimensional planes on which it acts as a rotation by
//! some angle in `(0, π)`. This module recovers that structure from the
//! symmetric part `(S + Sᵀ)/2`, whose eigenspaces are exactly those pieces,
//! and fixes every remaining basis ambiguity with deterministic rules so the
//! decomposition is reproducible bit-for-bit across runs.

use nalgebra::{DMatrix, DVector};

use crate::error::NonreciprocalError;

/// Eigenvalues of the symmetric part closer than this are treated as one
/// cluster (one rotation angle).
const CLUSTER_TOL: f64 = 1e-8;
/// Eigenvalues of the symmetric part within this distance of ±1 are treated
/// as genuine ±1 scattering eigenvalues.
const REAL_EIGENVALUE_TOL: f64 = 1e-8;
/// Residual allowed when validating `S v = ±v` on a reconstructed
/// eigenvector.
const EIGENVECTOR_RESIDUAL_TOL: f64 = 1e-6;
/// Components smaller than this are skipped when fixing signs and phases.
const COMPONENT_TOL: f64 = 1e-9;

/// An invariant plane of the orthogonal matrix.
#[derive(Debug, Clone)]
pub(crate) struct RotationPlane {
    /// Rotation angle in `(0, π)`.
    pub angle: f64,
    /// First in-plane basis vector: the real part of the complex eigenvector
    /// for the eigenvalue `e^{+iθ}`, phase-fixed so that the eigenvector's
    /// last significant component is real and positive.
    pub x: DVector<f64>,
    /// Second in-plane basis vector: the imaginary part of that eigenvector.
    pub y: DVector<f64>,
}

/// Full real spectral structure of an orthogonal matrix.
#[derive(Debug, Clone)]
pub(crate) struct OrthogonalSpectrum {
    /// Orthonormal basis of the `+1` eigenspace, signs fixed so the first
    /// significant component of each vector is positive.
    pub plus: Vec<DVector<f64>>,
    /// Orthonormal basis of the `-1` eigenspace, same sign convention.
    pub minus: Vec<DVector<f64>>,
    /// Invariant rotation planes, ordered by ascending angle.
    pub planes: Vec<RotationPlane>,
}

/// Decomposes an orthogonal matrix into ±1 eigenspaces and rotation planes.
pub(crate) fn orthogonal_spectrum(
    s: &DMatrix<f64>,
) -> Result<OrthogonalSpectrum, NonreciprocalError> {
    let n = s.nrows();
    let symmetric = (s + s.transpose()) * 0.5;
    let eig = symmetric.symmetric_eigen();

    // Order the eigenpairs by descending eigenvalue: +1 first, then rotation
    // clusters by ascending angle, then -1.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[j]
            .partial_cmp(&eig.eigenvalues[i])
            .expect("symmetric eigenvalues are finite")
    });

    let mut spectrum = OrthogonalSpectrum {
        plus: Vec::new(),
        minus: Vec::new(),
        planes: Vec::new(),
    };

    let mut at = 0;
    while at < n {
        // Collect one cluster of (numerically equal) eigenvalues.
        let head = eig.eigenvalues[order[at]];
        let mut cluster: Vec<DVector<f64>> = Vec::new();
        while at < n && (eig.eigenvalues[order[at]] - head).abs() <= CLUSTER_TOL {
            cluster.push(eig.eigenvectors.column(order[at]).into_owned());
            at += 1;
        }
        if (head - 1.0).abs() <= REAL_EIGENVALUE_TOL {
            for v in cluster {
                spectrum.plus.push(real_eigenvector(s, v, 1.0)?);
            }
        } else if (head + 1.0).abs() <= REAL_EIGENVALUE_TOL {
            for v in cluster {
                spectrum.minus.push(real_eigenvector(s, v, -1.0)?);
            }
        } else {
            split_into_planes(s, cluster, &mut spectrum.planes)?;
        }
    }
    Ok(spectrum)
}

/// Validates that `v` is an eigenvector of `s` for `sign`·1 and fixes its
/// overall sign so the first significant component is positive.
fn real_eigenvector(
    s: &DMatrix<f64>,
    v: DVector<f64>,
    sign: f64,
) -> Result<DVector<f64>, NonreciprocalError> {
    let residual = (s * &v - &v * sign).amax();
    if residual > EIGENVECTOR_RESIDUAL_TOL {
        return Err(NonreciprocalError::SpectralDecomposition {
            detail: "a symmetric-part eigenvector near ±1 is not a scattering eigenvector",
            residual,
        });
    }
    let mut v = v.normalize();
    if let Some(first) = v.iter().find(|x| x.abs() > COMPONENT_TOL) {
        if *first < 0.0 {
            v.neg_mut();
        }
    }
    Ok(v)
}

/// Splits one eigenvalue cluster of the symmetric part (rotation angle
/// `θ = acos λ`) into invariant planes, deflating two dimensions at a time.
fn split_into_planes(
    s: &DMatrix<f64>,
    cluster: Vec<DVector<f64>>,
    planes: &mut Vec<RotationPlane>,
) -> Result<(), NonreciprocalError> {
    if cluster.len() % 2 != 0 {
        return Err(NonreciprocalError::SpectralDecomposition {
            detail: "a rotation-angle eigenspace has odd dimension",
            residual: cluster.len() as f64,
        });
    }
    let mut basis = cluster;
    while let Some(p) = basis.first().cloned() {
        let sp = s * &p;
        let cos = p.dot(&sp);
        let mut q = sp - &p * cos;
        let sin = q.norm();
        if sin < EIGENVECTOR_RESIDUAL_TOL {
            return Err(NonreciprocalError::SpectralDecomposition {
                detail: "a rotation plane degenerated to a line",
                residual: sin,
            });
        }
        q /= sin;
        let angle = sin.atan2(cos);

        // Remove span{p, q} from the remaining cluster basis.
        let mut next: Vec<DVector<f64>> = Vec::with_capacity(basis.len() - 2);
        for v in basis.iter().skip(1) {
            let mut w = v - &p * p.dot(v) - &q * q.dot(v);
            for kept in &next {
                w -= kept * kept.dot(&w);
            }
            let norm = w.norm();
            if norm > EIGENVECTOR_RESIDUAL_TOL {
                next.push(w / norm);
            }
        }
        if next.len() + 2 != basis.len() {
            return Err(NonreciprocalError::SpectralDecomposition {
                detail: "plane deflation lost track of the cluster dimension",
                residual: (basis.len() - next.len()) as f64,
            });
        }
        basis = next;

        planes.push(phase_fixed_plane(angle, &p, &q));
    }
    Ok(())
}

/// Rebuilds the in-plane basis from the complex eigenvector phase
/// convention.
///
/// In the plane basis `(p, q)` constructed by [`split_into_planes`] the
/// matrix acts as `S p = cosθ p + sinθ q` with `sinθ > 0`, so `v = p - i q`
/// is the complex eigenvector for `e^{+iθ}`. The eigenvector is defined only
/// up to a phase; multiplying it by the conjugate phase of its last
/// significant component makes that component real and positive, which fixes
/// `x = Re v` and `y = Im v` uniquely regardless of how `(p, q)` was found.
fn phase_fixed_plane(angle: f64, p: &DVector<f64>, q: &DVector<f64>) -> RotationPlane {
    let n = p.len();
    let mut anchor = 0;
    for k in (0..n).rev() {
        if p[k].hypot(q[k]) > COMPONENT_TOL {
            anchor = k;
            break;
        }
    }
    let modulus = p[anchor].hypot(q[anchor]);
    let (pa, qa) = (p[anchor] / modulus, q[anchor] / modulus);
    // v_k = p_k - i q_k; with e^{-i arg(v_anchor)} = (p_a - i q_a)* / |..|:
    // Re v' = (p_a p + q_a q), Im v' = (q_a p - p_a q).
    let x = (p * pa + q * qa).normalize();
    let y = (p * qa - q * pa).normalize();
    RotationPlane { angle, x, y }
}
