//! Frozen-variable detection and projection.
//!
//! A capacitance matrix with a null direction has no Legendre transform on
//! the full variable set: the flux combination along the null direction
//! carries no kinetic energy and is frozen.  [`check_invertibility`]
//! reports the numerical null directions of `C` (and of `M₀` for linear
//! circuits, whose null directions are free-particle sectors), together
//! with the analytic port trigger
//!
//! ```text
//! 1 − C_c aᵀ A⁻¹ a = 0
//! ```
//!
//! for each declared port — the condition under which a port-coupled
//! capacitance matrix becomes singular in the infinite-mode limit even
//! when every truncation is regular.  [`project_frozen`] removes the null
//! directions by orthogonal projection, keeping the projected potential,
//! and returns the reduced model together with the retained basis.

use nalgebra::{DMatrix, DVector};

use crate::dress::PortCoupling;
use crate::error::LumpedError;
use crate::legendre::{symmetric_null, NULL_RTOL};
use crate::model::QuadraticModel;

/// Relative tolerance at which the analytic port trigger fires.
const TRIGGER_RTOL: f64 = 1e-9;

/// Evaluation of the analytic singularity trigger at one port.
#[derive(Debug, Clone, PartialEq)]
pub struct PortTrigger {
    /// Port index.
    pub port: usize,
    /// Residual `1 − C_c aᵀA⁻¹a`; zero means singular in the mode limit.
    pub residual: f64,
    /// Whether the residual is zero to tolerance.
    pub fires: bool,
}

/// Singularity report for a quadratic model.
#[derive(Debug, Clone)]
pub struct InvertibilityReport {
    /// Orthonormal null directions of the kinetic matrix.
    pub frozen: Vec<DVector<f64>>,
    /// Orthonormal null directions of `M₀` (populated for junction-free
    /// circuits, where they are exact free-particle sectors).
    pub inductive_null: Vec<DVector<f64>>,
    /// Analytic trigger evaluations, one per declared port.
    pub triggers: Vec<PortTrigger>,
}

impl InvertibilityReport {
    /// Whether the kinetic matrix is singular, either numerically at this
    /// truncation or analytically in the mode limit.
    #[must_use]
    pub fn is_singular(&self) -> bool {
        !self.frozen.is_empty() || self.triggers.iter().any(|t| t.fires)
    }
}

/// Checks a model for frozen directions and near-singular port structure.
///
/// `ports` may be empty; when given, the leading block of `C` of the
/// port-pattern size is taken as the network block `A` and the trigger
/// `1 − C_c aᵀA⁻¹a` is evaluated for each port.
///
/// # Errors
///
/// Returns an error when a port pattern does not match the model dimension
/// or the network block is not positive definite.
pub fn check_invertibility(
    qm: &QuadraticModel,
    ports: &[PortCoupling],
) -> Result<InvertibilityReport, LumpedError> {
    let frozen = symmetric_null(&qm.c);
    let inductive_null = if qm.junctions.is_empty() {
        symmetric_null(&qm.m0)
    } else {
        Vec::new()
    };

    let mut triggers = Vec::with_capacity(ports.len());
    for (i, port) in ports.iter().enumerate() {
        let na = port.network_pattern.len();
        if na > qm.dim() {
            return Err(LumpedError::DimensionMismatch {
                what: "port network pattern",
                expected: qm.dim(),
                got: na,
            });
        }
        let a_block = qm.c.view((0, 0), (na, na)).into_owned();
        let a_inv = a_block
            .cholesky()
            .map(|ch| ch.inverse())
            .ok_or(LumpedError::NotPositiveDefinite {
                what: "network block A",
                min_eigenvalue: f64::NAN,
            })?;
        let (a, _) = port.weighted()?;
        let nu = (a.transpose() * &a_inv * &a)[(0, 0)];
        let residual = 1.0 - nu;
        triggers.push(PortTrigger {
            port: i,
            residual,
            fires: residual.abs() <= TRIGGER_RTOL * nu.abs().max(1.0),
        });
    }

    Ok(InvertibilityReport {
        frozen,
        inductive_null,
        triggers,
    })
}

/// Projects the frozen directions out of a model, returning the reduced
/// model and the retained orthonormal basis `B` (columns; `Φ = B x`).
///
/// Junction variables are kept as coordinates of the reduced basis, so the
/// junction bookkeeping survives the projection; a junction sitting on a
/// frozen direction cannot be projected and is rejected.
///
/// # Errors
///
/// Returns an error when a junction variable overlaps a frozen direction.
pub fn project_frozen(
    qm: &QuadraticModel,
) -> Result<(QuadraticModel, DMatrix<f64>), LumpedError> {
    let n = qm.dim();
    let eig = qm.c.clone().symmetric_eigen();
    let max = eig.eigenvalues.amax().max(f64::MIN_POSITIVE);
    let retained: Vec<usize> = (0..n)
        .filter(|&k| eig.eigenvalues[k].abs() > NULL_RTOL * max)
        .collect();
    let m = retained.len();
    if m == n {
        return Ok((qm.clone(), DMatrix::identity(n, n)));
    }

    // Retained-space projector for the junction admissibility check.
    let mut vr = DMatrix::zeros(n, m);
    for (col, &k) in retained.iter().enumerate() {
        vr.set_column(col, &eig.eigenvectors.column(k));
    }
    let projector = &vr * vr.transpose();

    let mut anharm_vars: Vec<usize> = qm.junctions.iter().map(|j| j.variable).collect();
    anharm_vars.sort_unstable();
    anharm_vars.dedup();

    // Basis columns: junction unit vectors first, then the retained
    // eigenvectors orthonormalized against them.
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(m);
    for &v in &anharm_vars {
        let ev = DVector::from_fn(n, |i, _| f64::from(u8::from(i == v)));
        if (&projector * &ev - &ev).norm() > 1e-10 {
            return Err(LumpedError::UnsupportedElement {
                what: format!("junction variable {v} overlaps a frozen flux direction"),
            });
        }
        basis.push(ev);
    }
    for col in 0..m {
        let mut w = vr.column(col).into_owned();
        for b in &basis {
            let overlap = b.dot(&w);
            w -= overlap * b;
        }
        let norm = w.norm();
        if norm > 1e-8 {
            basis.push(w / norm);
        }
        if basis.len() == m {
            break;
        }
    }
    if basis.len() != m {
        return Err(LumpedError::DimensionMismatch {
            what: "projected basis",
            expected: m,
            got: basis.len(),
        });
    }
    let mut b = DMatrix::zeros(n, m);
    for (col, vec) in basis.iter().enumerate() {
        b.set_column(col, vec);
    }

    let junctions = qm
        .junctions
        .iter()
        .map(|j| {
            let variable = anharm_vars
                .iter()
                .position(|&v| v == j.variable)
                .expect("collected above");
            crate::model::JunctionTerm {
                variable,
                ..j.clone()
            }
        })
        .collect();

    let reduced = QuadraticModel::new(
        b.transpose() * &qm.c * &b,
        b.transpose() * &qm.m0 * &b,
        b.transpose() * &qm.g * &b,
        b.transpose() * &qm.bias,
        junctions,
    )?;
    Ok((reduced, b))
}
