//! Frozen-variable reduction for devices without an admittance description.
//!
//! When the scattering matrix has a `-1` eigenvalue, the flux component
//! along its eigenvector `v₋₁` is frozen: `v₋₁ᵀ Φ̇ = 0`, so that combination
//! is a constant `α` rather than a dynamical variable. Expanding the
//! remaining fluxes in the orthonormal basis `{wₙ}` of the complementary
//! subspace, `Φ = α v₋₁ + Σₙ fₙ wₙ`, turns the port equations of motion into
//! an unconstrained system with a full-rank kinetic matrix,
//!
//! ```text
//! C_Q f̈ = G ḟ - ∇Ũ_α(f),
//! ```
//!
//! with `C_Q` the capacitance matrix restricted to the `w` basis, `G` the
//! skew-symmetric gyration matrix of the restricted scattering matrix, and
//! `Ũ_α(f) = U(α v₋₁ + Σ fₙ wₙ)` the junction potential in the new
//! coordinates. The corresponding quantized Hamiltonian is
//! `H = ½ (Q + ½ G f)ᵀ C_Q⁻¹ (Q + ½ G f) + Ũ_α(f)`.

use nalgebra::{DMatrix, DVector};

use crate::cayley::antisymmetrize;
use crate::device::ScatteringDevice;
use crate::error::NonreciprocalError;
use crate::spectral::orthogonal_spectrum;

/// Reduced, unconstrained model of a junction-loaded device whose scattering
/// matrix freezes one flux combination.
///
/// Produced by [`reduce_frozen`]. The equations of motion in the reduced
/// coordinates `f` read `C_Q f̈ = G ḟ - ∇Ũ_α(f)`.
#[derive(Debug, Clone)]
pub struct ReducedCirculator {
    /// Reduced capacitance matrix `C_Q` (symmetric positive definite),
    /// `(n-1) × (n-1)` for an `n`-port device.
    pub capacitance: DMatrix<f64>,
    /// Skew-symmetric gyration matrix `G`; rows and columns of zeros appear
    /// for directions with scattering eigenvalue `+1`.
    pub gyration: DMatrix<f64>,
    /// Orthogonal change of basis: column 0 is the frozen direction `v₋₁`,
    /// columns `1..n` are the dynamical directions `wₙ`, so that
    /// `Φ = basis · (α, f)`.
    pub basis: DMatrix<f64>,
    /// Frozen flux constant `α` (an initial condition, not a dynamical
    /// variable).
    pub alpha: f64,
    /// Josephson energy of the junction shunting each port; zero entries
    /// mean an unloaded port.
    pub josephson_energies: Vec<f64>,
    /// Reference resistance of the device in ohms.
    pub resistance: f64,
    /// Precomputed inverse of the reduced capacitance matrix.
    capacitance_inv: DMatrix<f64>,
}

impl ReducedCirculator {
    /// Number of dynamical degrees of freedom (`ports - 1`).
    pub fn dof(&self) -> usize {
        self.capacitance.nrows()
    }

    /// The frozen flux direction `v₋₁` (column 0 of [`Self::basis`]).
    pub fn frozen_direction(&self) -> DVector<f64> {
        self.basis.column(0).into_owned()
    }

    /// Maps reduced coordinates to the original port fluxes,
    /// `Φ = α v₋₁ + Σₙ fₙ wₙ`.
    ///
    /// # Panics
    ///
    /// Panics when `f` does not have [`Self::dof`] entries.
    pub fn port_fluxes(&self, f: &DVector<f64>) -> DVector<f64> {
        assert_eq!(f.len(), self.dof(), "reduced coordinate count");
        let mut extended = DVector::zeros(self.dof() + 1);
        extended[0] = self.alpha;
        extended.rows_mut(1, self.dof()).copy_from(f);
        &self.basis * extended
    }

    /// Junction potential in reduced coordinates,
    /// `Ũ_α(f) = -Σᵢ E_i cos Φᵢ(α, f)` with port phases `Φᵢ` in radians.
    pub fn potential(&self, f: &DVector<f64>) -> f64 {
        let phi = self.port_fluxes(f);
        -self
            .josephson_energies
            .iter()
            .zip(phi.iter())
            .map(|(e, p)| e * p.cos())
            .sum::<f64>()
    }

    /// Gradient of the reduced potential with respect to `f`.
    pub fn potential_gradient(&self, f: &DVector<f64>) -> DVector<f64> {
        let phi = self.port_fluxes(f);
        let full: DVector<f64> = DVector::from_iterator(
            phi.len(),
            self.josephson_energies
                .iter()
                .zip(phi.iter())
                .map(|(e, p)| e * p.sin()),
        );
        let projected = self.basis.transpose() * full;
        projected.rows(1, self.dof()).into_owned()
    }

    /// Acceleration of the reduced coordinates,
    /// `f̈ = C_Q⁻¹ (G ḟ - ∇Ũ_α(f))`.
    pub fn acceleration(&self, f: &DVector<f64>, f_dot: &DVector<f64>) -> DVector<f64> {
        assert_eq!(f_dot.len(), self.dof(), "reduced velocity count");
        let force = &self.gyration * f_dot - self.potential_gradient(f);
        &self.capacitance_inv * force
    }
}

/// Reduces a junction-loaded scattering device with one frozen flux to an
/// unconstrained model.
///
/// `capacitances` and `josephson_energies` give the shunt capacitor and
/// junction energy at each port; `alpha` is the frozen flux constant (an
/// initial condition, usually zero).
///
/// The gyration matrix is reported in the convention in which the reduced
/// equations of motion read `C_Q f̈ = G ḟ - ∇Ũ_α(f)`; its 2×2 blocks for a
/// rotation plane of angle `θ` are `tan(θ/2)/R · [[0, 1], [-1, 0]]`.
///
/// # Errors
///
/// Returns an error when the `-1` eigenvalue is absent or degenerate, when a
/// parameter vector has the wrong length, or when a capacitance is not
/// positive and finite.
pub fn reduce_frozen(
    dev: &ScatteringDevice,
    capacitances: &[f64],
    josephson_energies: &[f64],
    alpha: f64,
) -> Result<ReducedCirculator, NonreciprocalError> {
    let n = dev.ports();
    if capacitances.len() != n {
        return Err(NonreciprocalError::DimensionMismatch {
            what: "capacitances",
            expected: n,
            got: capacitances.len(),
        });
    }
    if josephson_energies.len() != n {
        return Err(NonreciprocalError::DimensionMismatch {
            what: "josephson_energies",
            expected: n,
            got: josephson_energies.len(),
        });
    }
    for (index, &c) in capacitances.iter().enumerate() {
        if !c.is_finite() || c <= 0.0 {
            return Err(NonreciprocalError::BadParameter {
                name: "capacitances",
                index,
                requirement: "positive and finite",
                value: c,
            });
        }
    }
    for (index, &e) in josephson_energies.iter().enumerate() {
        if !e.is_finite() {
            return Err(NonreciprocalError::BadParameter {
                name: "josephson_energies",
                index,
                requirement: "finite",
                value: e,
            });
        }
    }
    if !alpha.is_finite() {
        return Err(NonreciprocalError::BadParameter {
            name: "alpha",
            index: 0,
            requirement: "finite",
            value: alpha,
        });
    }

    let spectrum = orthogonal_spectrum(dev.s())?;
    match spectrum.minus.len() {
        0 => return Err(NonreciprocalError::MissingFrozenEigenvalue),
        1 => {}
        multiplicity => {
            return Err(NonreciprocalError::DegenerateFrozenEigenvalue { multiplicity })
        }
    }

    // Dynamical directions: +1 eigenvectors first (angle 0), then the
    // rotation-plane pairs by ascending angle.
    let mut w: Vec<DVector<f64>> = Vec::with_capacity(n - 1);
    w.extend(spectrum.plus.iter().cloned());
    for plane in &spectrum.planes {
        w.push(plane.x.clone());
        w.push(plane.y.clone());
    }
    debug_assert_eq!(w.len(), n - 1);

    let mut basis = DMatrix::zeros(n, n);
    basis.column_mut(0).copy_from(&spectrum.minus[0]);
    for (k, wk) in w.iter().enumerate() {
        basis.column_mut(k + 1).copy_from(wk);
    }
    let gram_residual = (basis.transpose() * &basis - DMatrix::identity(n, n)).amax();
    if gram_residual > 1e-10 {
        return Err(NonreciprocalError::SpectralDecomposition {
            detail: "reduction basis is not orthogonal",
            residual: gram_residual,
        });
    }

    // Reduced capacitance: C restricted to the w basis, exactly symmetric.
    let m = n - 1;
    let mut capacitance = DMatrix::zeros(m, m);
    for a in 0..m {
        for b in a..m {
            let value: f64 = (0..n).map(|i| w[a][i] * capacitances[i] * w[b][i]).sum();
            capacitance[(a, b)] = value;
            capacitance[(b, a)] = value;
        }
    }

    // Gyration matrix from the scattering matrix restricted to the w basis.
    // The Cayley transform of the transposed restriction matches the sign of
    // the equations of motion C_Q f̈ = G ḟ - ∇Ũ (per-plane blocks
    // tan(θ/2)/R · [[0,1],[-1,0]]).
    let mut s_w = DMatrix::zeros(m, m);
    for a in 0..m {
        let s_wa = dev.s() * &w[a];
        for b in 0..m {
            // (Sᵀ)_w[a][b] = w_aᵀ Sᵀ w_b = (S w_a)ᵀ w_b.
            s_w[(a, b)] = s_wa.dot(&w[b]);
        }
    }
    let eye = DMatrix::identity(m, m);
    let sum = &eye + &s_w;
    let diff = &eye - &s_w;
    let gyration = sum
        .lu()
        .solve(&diff)
        .ok_or(NonreciprocalError::SpectralDecomposition {
            detail: "restricted scattering matrix still has a -1 eigenvalue",
            residual: f64::NAN,
        })?
        / dev.r();
    let gyration = antisymmetrize(gyration);

    let capacitance_inv = capacitance.clone().cholesky().map(|c| c.inverse()).ok_or(
        NonreciprocalError::SpectralDecomposition {
            detail: "reduced capacitance matrix is not positive definite",
            residual: f64::NAN,
        },
    )?;

    Ok(ReducedCirculator {
        capacitance,
        gyration,
        basis,
        alpha,
        josephson_energies: josephson_energies.to_vec(),
        resistance: dev.r(),
        capacitance_inv,
    })
}
