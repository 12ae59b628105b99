//! Charge-basis quantization of phase-slip circuits behind an impedance
//! coupler.
//!
//! Each port carries a series inductor and, optionally, a phase-slip
//! element with cosine potential `−E_S cos(πQ/e)` in the port charge.  The
//! coupler enters through its impedance matrix `Z_G`, giving
//!
//! ```text
//! H = ½ (Φ − ½ Z_G Q)ᵀ 𝖫⁻¹ (Φ − ½ Z_G Q) + U(Q).
//! ```
//!
//! With the canonical pair `(x, p) = (Q, −Φ)` this is the flux-basis form
//! with `C ↔ 𝖫` and `G ↔ −Z_G`, so the same quantization core applies; the
//! inductive energy of a phase-slip port is `E_L = Φ_q²(𝖫⁻¹)_vv/8` and its
//! cosine argument is `θ = πQ/e`.  The spectrum of a charge-basis circuit
//! equals that of its flux-basis twin with the numeric values of `𝖫`
//! and `Z_G` reinterpreted as a capacitance and a gyration matrix.

use cqed_nonreciprocal::{cayley_impedance, ScatteringDevice};
use nalgebra::{DMatrix, DVector};

use crate::constants::ELEMENTARY_CHARGE;
use crate::error::LumpedError;
use crate::legendre::quantize_model;
use crate::model::{CouplingKind, JunctionTerm, QuadraticModel, QuantizedHamiltonian};

/// Nonlinear element attached to one port of a charge-basis circuit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DualElement {
    /// Purely linear port.
    Linear,
    /// Phase-slip element with cosine amplitude `E_S` in joule.
    PhaseSlip {
        /// Slip energy `E_S` in joule.
        slip_energy: f64,
    },
    /// Josephson junction — not representable in the charge basis.
    Josephson {
        /// Josephson energy in joule.
        josephson_energy: f64,
    },
}

/// Quantizes a phase-slip circuit in the charge basis.
///
/// `inductances[i]` is the series inductance of port `i`; `elements[i]`
/// its nonlinear element.  `device` is the impedance coupler joining the
/// ports, or `None` for decoupled ports.
///
/// # Errors
///
/// Returns an error when any element is a Josephson junction, when the
/// device has no impedance description (`+1` scattering eigenvalue), or on
/// dimension mismatch and invalid inductances.
pub fn dual_charge_hamiltonian(
    device: Option<&ScatteringDevice>,
    inductances: &[f64],
    elements: &[DualElement],
) -> Result<QuantizedHamiltonian, LumpedError> {
    let n = inductances.len();
    if elements.len() != n {
        return Err(LumpedError::DimensionMismatch {
            what: "element list",
            expected: n,
            got: elements.len(),
        });
    }
    let josephson = elements
        .iter()
        .filter(|e| matches!(e, DualElement::Josephson { .. }))
        .count();
    if josephson > 0 {
        return Err(LumpedError::MixedNonlinearElements { josephson });
    }
    for &l in inductances {
        if !(l.is_finite() && l > 0.0) {
            return Err(LumpedError::BadParameter {
                what: "port inductance",
                requirement: "positive and finite",
                value: l,
            });
        }
    }

    let z_g = match device {
        None => DMatrix::zeros(n, n),
        Some(dev) => {
            if dev.ports() != n {
                return Err(LumpedError::DimensionMismatch {
                    what: "device ports",
                    expected: n,
                    got: dev.ports(),
                });
            }
            cayley_impedance(dev)?
        }
    };

    let slips: Vec<JunctionTerm> = elements
        .iter()
        .enumerate()
        .filter_map(|(i, e)| match e {
            DualElement::PhaseSlip { slip_energy } => Some(JunctionTerm {
                variable: i,
                sign: 1.0,
                josephson_energy: *slip_energy,
                external_flux: 0.0,
            }),
            _ => None,
        })
        .collect();

    let kinetic = DMatrix::from_diagonal(&DVector::from_row_slice(inductances));
    let qm = QuadraticModel::new(
        kinetic,
        DMatrix::zeros(n, n),
        -&z_g,
        DVector::zeros(n),
        slips,
    )?;

    let mut qh = quantize_model(
        &qm,
        std::f64::consts::PI / ELEMENTARY_CHARGE,
        CouplingKind::Charge,
        CouplingKind::Flux,
    )?;
    // Report the physical impedance matrix; the sign flip above is the
    // canonical-pair bookkeeping, not a device property.
    qh.gyration = z_g;
    Ok(qh)
}
