//! Impedance-mode dressing of port-coupled capacitance matrices.
//!
//! A network capacitively coupled to an impedance expansion has the
//! structured kinetic matrix
//!
//! ```text
//! C = [[ A,        −Σᵢ aᵢuᵢᵀ       ],        aᵢ = √cᵢ · (network pattern)ᵢ,
//!      [ −Σᵢ uᵢaᵢᵀ,  C_n + Σᵢ uᵢuᵢᵀ ]],      uᵢ = √cᵢ · (mode pattern)ᵢ,
//! ```
//!
//! where `cᵢ` is the coupling capacitance of port `i`.  The canonical shift
//! `x_A = Φ_A − Σᵢ (A⁻¹aᵢ)(uᵢᵀ Φ_n)` ([`shift_port_variables`]) removes the
//! off-diagonal block exactly and leaves the mode overlap matrix
//!
//! ```text
//! M_n = C_n + Σᵢⱼ (δᵢⱼ − νᵢⱼ) uᵢuⱼᵀ,     νᵢⱼ = aᵢᵀ A⁻¹ aⱼ,
//! ```
//!
//! as the mode-block kinetic matrix.  [`dress_impedance_modes`] rescales the
//! mode variables by `(M_n/m_ref)^{1/2}` so their kinetic matrix becomes
//! `m_ref` times the identity — staying in capacitance units — and reports
//! the port coupling vectors `fᵢ = √m_ref · M_n^{−1/2} eᵢ` against the same
//! reference capacitance `m_ref`; the saturation of `|fᵢ|² / m_ref` as
//! modes are added is the intrinsic ultraviolet cutoff of the coupling.

use nalgebra::{DMatrix, DVector};

use crate::error::LumpedError;
use crate::model::{antisymmetrize, symmetrize, QuadraticModel};

/// One capacitive port between a network block and an impedance expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct PortCoupling {
    /// Dimensionless attachment pattern on the network variables.
    pub network_pattern: DVector<f64>,
    /// Dimensionless attachment pattern on the mode variables.
    pub mode_pattern: DVector<f64>,
    /// Coupling capacitance in farad.
    pub capacitance: f64,
}

impl PortCoupling {
    /// Capacitance-weighted coupling vectors `(aᵢ, uᵢ)`.
    ///
    /// # Errors
    ///
    /// Returns an error when the coupling capacitance is not positive.
    pub fn weighted(&self) -> Result<(DVector<f64>, DVector<f64>), LumpedError> {
        if !(self.capacitance.is_finite() && self.capacitance > 0.0) {
            return Err(LumpedError::BadParameter {
                what: "coupling capacitance",
                requirement: "positive and finite",
                value: self.capacitance,
            });
        }
        let w = self.capacitance.sqrt();
        Ok((w * &self.network_pattern, w * &self.mode_pattern))
    }
}

/// A port-dressed model whose mode kinetic block is `m_ref` times the
/// identity.
#[derive(Debug, Clone)]
pub struct DressedModel {
    /// Model in the variables `(Φ_A, z_n = (M_n/m_ref)^{1/2} Φ_n)`.
    pub model: QuadraticModel,
    /// Mode overlap matrix `M_n`.
    pub mode_overlap: DMatrix<f64>,
    /// Port coupling vectors `fᵢ = √m_ref · M_n^{−1/2} eᵢ`.
    pub couplings: Vec<DVector<f64>>,
    /// Reference capacitance `m_ref` used to normalize the couplings.
    pub reference_mass: f64,
}

/// Splits `C` into its blocks and validates the declared port structure.
fn validate_structure(
    qm: &QuadraticModel,
    ports: &[PortCoupling],
) -> Result<(usize, usize), LumpedError> {
    let first = ports.first().ok_or(LumpedError::DimensionMismatch {
        what: "port list",
        expected: 1,
        got: 0,
    })?;
    let na = first.network_pattern.len();
    let nm = first.mode_pattern.len();
    if na + nm != qm.dim() {
        return Err(LumpedError::DimensionMismatch {
            what: "port patterns",
            expected: qm.dim(),
            got: na + nm,
        });
    }
    for p in ports {
        if p.network_pattern.len() != na || p.mode_pattern.len() != nm {
            return Err(LumpedError::DimensionMismatch {
                what: "port patterns",
                expected: na,
                got: p.network_pattern.len(),
            });
        }
    }

    // The off-diagonal block must equal −Σᵢ aᵢuᵢᵀ.
    let mut expected = DMatrix::zeros(na, nm);
    for p in ports {
        let (a, u) = p.weighted()?;
        expected -= a * u.transpose();
    }
    let actual = qm.c.view((0, na), (na, nm));
    let scale = qm.c.amax().max(f64::MIN_POSITIVE);
    let deviation = (&expected - actual).amax();
    if deviation > 1e-12 * scale {
        return Err(LumpedError::StructureMismatch {
            what: "network-mode coupling",
            deviation,
        });
    }
    Ok((na, nm))
}

/// Mode overlap matrix assembled directly from its closed form
/// `M_n = C_mode − Σᵢⱼ νᵢⱼ uᵢuⱼᵀ` with `νᵢⱼ = aᵢᵀA⁻¹aⱼ`.
///
/// This is an evaluation route independent of [`shift_port_variables`];
/// the two must agree.
///
/// # Errors
///
/// Returns an error when the network block is not positive definite or a
/// port capacitance is invalid.
pub fn mode_overlap(
    qm: &QuadraticModel,
    ports: &[PortCoupling],
) -> Result<DMatrix<f64>, LumpedError> {
    let (na, nm) = validate_structure(qm, ports)?;
    let a_block = qm.c.view((0, 0), (na, na)).into_owned();
    let a_inv = a_block
        .clone()
        .cholesky()
        .map(|ch| ch.inverse())
        .ok_or(LumpedError::NotPositiveDefinite {
            what: "network block A",
            min_eigenvalue: f64::NAN,
        })?;
    let mut m_n = qm.c.view((na, na), (nm, nm)).into_owned();
    for pi in ports {
        let (ai, ui) = pi.weighted()?;
        for pj in ports {
            let (aj, uj) = pj.weighted()?;
            let nu = (ai.transpose() * &a_inv * aj)[(0, 0)];
            m_n -= nu * &ui * uj.transpose();
        }
    }
    Ok(symmetrize(&m_n))
}

/// Symmetric square root and inverse square root of a positive-definite
/// matrix, via its eigendecomposition.
fn sqrt_pair(
    m: &DMatrix<f64>,
    what: &'static str,
) -> Result<(DMatrix<f64>, DMatrix<f64>), LumpedError> {
    let eig = m.clone().symmetric_eigen();
    let min = eig.eigenvalues.min();
    let max = eig.eigenvalues.max();
    if !(min > 1e-14 * max.abs() && min > 0.0) {
        return Err(LumpedError::NotPositiveDefinite {
            what,
            min_eigenvalue: min,
        });
    }
    let v = &eig.eigenvectors;
    let sqrt = v * DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt)) * v.transpose();
    let inv_sqrt =
        v * DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt())) * v.transpose();
    Ok((symmetrize(&sqrt), symmetrize(&inv_sqrt)))
}

/// Applies the canonical shift `x_A = Φ_A − Σᵢ (A⁻¹aᵢ)(uᵢᵀ Φ_n)`, which
/// removes the network–mode kinetic coupling exactly; returns the shifted
/// model and the per-port shift vectors `bᵢ = A⁻¹aᵢ`.
///
/// The model must be free of junctions: the shift mixes network and mode
/// fluxes, so a junction phase would stop being a single variable.
///
/// # Errors
///
/// Returns an error when junctions are present, the declared ports do not
/// match the kinetic matrix, or the network block is not positive definite.
pub fn shift_port_variables(
    qm: &QuadraticModel,
    ports: &[PortCoupling],
) -> Result<(QuadraticModel, Vec<DVector<f64>>), LumpedError> {
    if !qm.junctions.is_empty() {
        return Err(LumpedError::UnsupportedElement {
            what: "junctions under a port-variable shift (shift mixes their phase)".into(),
        });
    }
    let (na, nm) = validate_structure(qm, ports)?;
    let n = qm.dim();

    let a_block = qm.c.view((0, 0), (na, na)).into_owned();
    let a_inv = a_block
        .cholesky()
        .map(|ch| ch.inverse())
        .ok_or(LumpedError::NotPositiveDefinite {
            what: "network block A",
            min_eigenvalue: f64::NAN,
        })?;

    // T⁻¹ = [[1, B], [0, 1]] with B = Σᵢ bᵢuᵢᵀ; new matrices are T⁻ᵀ M T⁻¹.
    let mut shifts = Vec::with_capacity(ports.len());
    let mut b = DMatrix::zeros(na, nm);
    for p in ports {
        let (a, u) = p.weighted()?;
        let bi = &a_inv * a;
        b += &bi * u.transpose();
        shifts.push(bi);
    }
    let mut t_inv = DMatrix::identity(n, n);
    t_inv.view_mut((0, na), (na, nm)).copy_from(&b);

    let c = t_inv.transpose() * &qm.c * &t_inv;
    let m0 = t_inv.transpose() * &qm.m0 * &t_inv;
    let g = t_inv.transpose() * &qm.g * &t_inv;
    let bias = t_inv.transpose() * &qm.bias;

    let model = QuadraticModel::new(c, m0, g, bias, Vec::new())?;
    Ok((model, shifts))
}

/// Dresses the impedance modes: applies the canonical port shift, then
/// rescales the mode variables by `(M_n/m_ref)^{1/2}` so their kinetic
/// block is `m_ref` times the identity (keeping capacitance units), and
/// reports the port couplings `fᵢ = √m_ref · M_n^{−1/2} eᵢ` against the
/// reference capacitance `m_ref`.
///
/// The coupling magnitude `|fᵢ|²/m_ref = eᵢᵀ M_n⁻¹ eᵢ` saturates as the mode
/// count grows — the intrinsic ultraviolet cutoff of the port.  Both steps
/// are point transformations, so the spectrum of the model is unchanged.
///
/// # Errors
///
/// Returns an error when junctions are present (the shift would mix their
/// phase variables), when the declared ports do not match the kinetic
/// matrix, or when `M_n` is not positive definite.
pub fn dress_impedance_modes(
    qm: &QuadraticModel,
    ports: &[PortCoupling],
    reference_mass: f64,
) -> Result<DressedModel, LumpedError> {
    if !(reference_mass.is_finite() && reference_mass > 0.0) {
        return Err(LumpedError::BadParameter {
            what: "reference capacitance",
            requirement: "positive and finite",
            value: reference_mass,
        });
    }
    let (shifted, _) = shift_port_variables(qm, ports)?;
    let (na, nm) = validate_structure(qm, ports)?;

    // After the shift the kinetic matrix is exactly block diagonal; its
    // mode block is the overlap matrix M_n.
    let m_n = symmetrize(&shifted.c.view((na, na), (nm, nm)).into_owned());
    let (_, inv_sqrt) = sqrt_pair(&m_n, "mode overlap M_n")?;

    let n = qm.dim();
    let mut t = DMatrix::identity(n, n);
    t.view_mut((na, na), (nm, nm))
        .copy_from(&(reference_mass.sqrt() * &inv_sqrt));

    let c = symmetrize(&(&t * &shifted.c * &t));
    let m0 = symmetrize(&(&t * &shifted.m0 * &t));
    let g = antisymmetrize(&(&t * &shifted.g * &t));
    let bias = &t * &shifted.bias;

    let couplings = ports
        .iter()
        .map(|p| reference_mass.sqrt() * &inv_sqrt * &p.mode_pattern)
        .collect();

    let model = QuadraticModel::new(c, m0, g, bias, Vec::new())?;
    Ok(DressedModel {
        model,
        mode_overlap: m_n,
        couplings,
        reference_mass,
    })
}
