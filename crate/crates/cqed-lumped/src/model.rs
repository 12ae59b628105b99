//! Quadratic circuit models and their quantized form.
//!
//! A [`QuadraticModel`] collects the matrices of the flux-variable equations
//! of motion
//!
//! ```text
//! C Φ̈ = −G Φ̇ − M₀ Φ + bias − ∇U(Φ),
//! U(Φ) = −Σ_j E_J,j cos(2π (s_j Φ_{v_j} − φ_ext,j) / Φ_q),
//! ```
//!
//! with `C` symmetric positive semidefinite, `M₀` symmetric positive
//! semidefinite and `G` exactly skew-symmetric.  The conjugate charge is
//! `Q = C Φ̇ + ½ G Φ`, and the classical Hamiltonian is
//!
//! ```text
//! H = ½ (Q − ½GΦ)ᵀ C⁻¹ (Q − ½GΦ) + ½ Φᵀ M₀ Φ − biasᵀ Φ + U(Φ).
//! ```
//!
//! [`QuantizedHamiltonian`] holds the canonically quantized data: normal-mode
//! frequencies, the symplectic normal-form transform when one exists, the
//! junction–mode coupling table and the per-junction energy scales.  All
//! internal quantities are SI (rad/s for frequencies, joule for energies);
//! the serialization layer converts to Hz as `f = ω / 2π` and `E / h`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::constants::{FLUX_QUANTUM, PLANCK};
use crate::error::LumpedError;

/// One Josephson element attached to a flux variable.
#[derive(Debug, Clone, PartialEq)]
pub struct JunctionTerm {
    /// Index of the flux variable the junction phase is built from.
    pub variable: usize,
    /// Orientation of the junction branch relative to that variable (±1).
    pub sign: f64,
    /// Josephson energy `E_J` in joule.
    pub josephson_energy: f64,
    /// External flux threading the junction loop, in weber.
    pub external_flux: f64,
}

impl JunctionTerm {
    /// Junction branch flux for a given variable vector.
    #[must_use]
    pub fn branch_flux(&self, phi: &DVector<f64>) -> f64 {
        self.sign * phi[self.variable] - self.external_flux
    }
}

/// Quadratic (plus cosine) model of a lumped circuit in flux variables.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticModel {
    /// Capacitance (kinetic) matrix, symmetric positive semidefinite.
    pub c: DMatrix<f64>,
    /// Inverse-inductance (potential) matrix, symmetric positive semidefinite.
    pub m0: DMatrix<f64>,
    /// Gyration matrix, exactly skew-symmetric.
    pub g: DMatrix<f64>,
    /// Constant force from external fluxes threading inductive loops.
    pub bias: DVector<f64>,
    /// Josephson elements, each tied to a single flux variable.
    pub junctions: Vec<JunctionTerm>,
    /// Frozen flux directions detected in `C` (null-space basis vectors).
    pub frozen: Vec<DVector<f64>>,
}

impl QuadraticModel {
    /// Builds a model from its matrices, enforcing exact symmetry of `C`
    /// and `M₀` and exact skew-symmetry of `G` by (anti)symmetrization.
    ///
    /// # Errors
    ///
    /// Returns an error when the matrices are not square of a common
    /// dimension, when `bias` has a different length, or when a junction
    /// references a variable out of range.
    pub fn new(
        c: DMatrix<f64>,
        m0: DMatrix<f64>,
        g: DMatrix<f64>,
        bias: DVector<f64>,
        junctions: Vec<JunctionTerm>,
    ) -> Result<Self, LumpedError> {
        let n = c.nrows();
        for (what, m) in [("C", &c), ("M0", &m0), ("G", &g)] {
            if m.nrows() != n || m.ncols() != n {
                return Err(LumpedError::DimensionMismatch {
                    what,
                    expected: n,
                    got: m.nrows().max(m.ncols()),
                });
            }
        }
        if bias.len() != n {
            return Err(LumpedError::DimensionMismatch {
                what: "bias",
                expected: n,
                got: bias.len(),
            });
        }
        for j in &junctions {
            if j.variable >= n {
                return Err(LumpedError::JunctionOutsideNetwork {
                    variable: j.variable,
                    network: n,
                });
            }
        }
        Ok(Self {
            c: symmetrize(&c),
            m0: symmetrize(&m0),
            g: antisymmetrize(&g),
            bias,
            junctions,
            frozen: Vec::new(),
        })
    }

    /// Number of flux variables.
    #[must_use]
    pub fn dim(&self) -> usize {
        self.c.nrows()
    }

    /// Gradient of the cosine potential at `phi`.
    #[must_use]
    pub fn junction_force(&self, phi: &DVector<f64>) -> DVector<f64> {
        let mut grad = DVector::zeros(self.dim());
        let k = 2.0 * std::f64::consts::PI / FLUX_QUANTUM;
        for j in &self.junctions {
            grad[j.variable] +=
                j.josephson_energy * k * (k * j.branch_flux(phi)).sin() * j.sign;
        }
        grad
    }
}

/// Enforces exact symmetry: `(M + Mᵀ) / 2`, so `M[i,j] == M[j,i]` bitwise.
#[must_use]
pub(crate) fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = m.clone();
    for i in 0..m.nrows() {
        for j in 0..i {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
    }
    out
}

/// Enforces exact skew-symmetry: `(M − Mᵀ) / 2` with a zero diagonal.
#[must_use]
pub(crate) fn antisymmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = m.clone();
    for i in 0..m.nrows() {
        out[(i, i)] = 0.0;
        for j in 0..i {
            let v = 0.5 * (m[(i, j)] - m[(j, i)]);
            out[(i, j)] = v;
            out[(j, i)] = -v;
        }
    }
    out
}

/// Acceleration `Φ̈` from the Lagrangian equations of motion at a state
/// `(Φ, Φ̇)`.
///
/// # Errors
///
/// Returns an error when `C` is singular.
pub fn lagrangian_acceleration(
    qm: &QuadraticModel,
    phi: &DVector<f64>,
    phidot: &DVector<f64>,
) -> Result<DVector<f64>, LumpedError> {
    let force =
        -&qm.g * phidot - &qm.m0 * phi + &qm.bias - qm.junction_force(phi);
    qm.c.clone()
        .lu()
        .solve(&force)
        .ok_or(LumpedError::SingularKinetic { null_dimension: 1 })
}

/// Hamiltonian flow `(Φ̇, Q̇)` at a phase-space point `(Φ, Q)`.
///
/// # Errors
///
/// Returns an error when `C` is singular.
pub fn hamiltonian_flow(
    qm: &QuadraticModel,
    phi: &DVector<f64>,
    q: &DVector<f64>,
) -> Result<(DVector<f64>, DVector<f64>), LumpedError> {
    let shifted = q - 0.5 * &qm.g * phi;
    let velocity = qm
        .c
        .clone()
        .lu()
        .solve(&shifted)
        .ok_or(LumpedError::SingularKinetic { null_dimension: 1 })?;
    let qdot = -0.5 * &qm.g * &velocity - &qm.m0 * phi + &qm.bias
        - qm.junction_force(phi);
    Ok((velocity, qdot))
}

/// Which junction operator a normal mode couples to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingKind {
    /// Coupling through the junction charge (number) operator.
    Charge,
    /// Coupling through the junction flux (phase) operator.
    Flux,
}

impl CouplingKind {
    /// Serialized name of the coupling type.
    #[must_use]
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Charge => "charge",
            Self::Flux => "flux",
        }
    }
}

/// One junction–mode coupling entry.
#[derive(Debug, Clone, PartialEq)]
pub struct Coupling {
    /// Normal-mode index (into the ascending frequency list).
    pub mode: usize,
    /// Variable index of the junction partner.
    pub partner: usize,
    /// Coupling rate `g` in rad/s.
    pub g: f64,
    /// Which junction operator the mode couples to.
    pub kind: CouplingKind,
}

/// Energy scales of one anharmonic (junction) degree of freedom, in joule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnharmonicTerm {
    /// Variable index the element lives on.
    pub variable: usize,
    /// Kinetic energy scale (charging energy for flux circuits, inductive
    /// energy for charge-basis duals).
    pub charge_energy: f64,
    /// Cosine amplitude (Josephson or phase-slip energy).
    pub josephson_energy: f64,
}

/// Canonically quantized form of a lumped circuit.
#[derive(Debug, Clone)]
pub struct QuantizedHamiltonian {
    /// Positive normal-mode frequencies in rad/s, ascending.
    pub frequencies: Vec<f64>,
    /// Number of canonical zero-frequency pairs (conserved-momentum sectors).
    pub zero_modes: usize,
    /// Number of free-particle directions (kinetic term without restoring
    /// force that is not part of a canonical pair).
    pub free_modes: usize,
    /// Symplectic normal-form transform, present only when the harmonic
    /// phase-space form is positive definite.  Satisfies `Sᵀ J S = J`.
    pub symplectic: Option<DMatrix<f64>>,
    /// Junction–mode couplings.
    pub couplings: Vec<Coupling>,
    /// Per-junction energy scales.
    pub anharmonic: Vec<AnharmonicTerm>,
    /// The model's gyration (skew) matrix.
    pub gyration: DMatrix<f64>,
    /// Inverse of the kinetic matrix on the retained variables.
    pub kinetic_inverse: DMatrix<f64>,
}

/// Serialization record with frequency-domain units (Hz via `f = ω/2π`,
/// energies as `E/h`).  Field order fixes the JSON key order.
#[derive(Debug, Clone, Serialize)]
pub struct HamiltonianRecord {
    /// Normal-mode frequencies in Hz.
    pub frequencies_hz: Vec<f64>,
    /// Junction–mode couplings with rates in Hz.
    pub couplings: Vec<CouplingRecord>,
    /// Charging (or dual inductive) energies in Hz.
    #[serde(rename = "EC_hz")]
    pub ec_hz: Vec<f64>,
    /// Josephson (or phase-slip) energies in Hz.
    #[serde(rename = "EJ_hz")]
    pub ej_hz: Vec<f64>,
    /// Gyration matrix, row-major.
    #[serde(rename = "G")]
    pub g: Vec<Vec<f64>>,
    /// Inverse kinetic matrix, row-major.
    #[serde(rename = "Cinv")]
    pub cinv: Vec<Vec<f64>>,
    /// Number of canonical zero-frequency pairs.
    pub zero_modes: usize,
}

/// One serialized coupling entry.
#[derive(Debug, Clone, Serialize)]
pub struct CouplingRecord {
    /// Normal-mode index.
    pub mode: usize,
    /// Junction variable index.
    pub partner: usize,
    /// Coupling rate in Hz.
    pub g_hz: f64,
    /// Coupling type, `"charge"` or `"flux"`.
    #[serde(rename = "type")]
    pub kind: &'static str,
}

impl QuantizedHamiltonian {
    /// Converts to the frequency-domain serialization record.
    #[must_use]
    pub fn record(&self) -> HamiltonianRecord {
        let two_pi = 2.0 * std::f64::consts::PI;
        HamiltonianRecord {
            frequencies_hz: self.frequencies.iter().map(|w| w / two_pi).collect(),
            couplings: self
                .couplings
                .iter()
                .map(|c| CouplingRecord {
                    mode: c.mode,
                    partner: c.partner,
                    g_hz: c.g / two_pi,
                    kind: c.kind.as_str(),
                })
                .collect(),
            ec_hz: self
                .anharmonic
                .iter()
                .map(|a| a.charge_energy / PLANCK)
                .collect(),
            ej_hz: self
                .anharmonic
                .iter()
                .map(|a| a.josephson_energy / PLANCK)
                .collect(),
            g: matrix_rows(&self.gyration),
            cinv: matrix_rows(&self.kinetic_inverse),
            zero_modes: self.zero_modes,
        }
    }
}

/// Row-major nested-vector form of a matrix.
#[must_use]
pub fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}
