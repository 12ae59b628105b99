//! Error type for nonreciprocal-device analysis.

use thiserror::Error;

/// Errors produced while classifying or reducing ideal nonreciprocal devices.
#[derive(Debug, Clone, Error)]
pub enum NonreciprocalError {
    /// The scattering matrix is not square or is empty.
    #[error("scattering matrix must be square and nonempty, got {rows}x{cols}")]
    BadShape {
        /// Number of rows received.
        rows: usize,
        /// Number of columns received.
        cols: usize,
    },

    /// The scattering matrix is not orthogonal.
    #[error(
        "scattering matrix is not orthogonal: max |SᵀS - 1| = {deviation:.3e} \
         exceeds the admission tolerance"
    )]
    NotOrthogonal {
        /// Largest absolute deviation of SᵀS from the identity.
        deviation: f64,
    },

    /// The reference resistance is not a positive finite number.
    #[error("reference resistance must be positive and finite, got {value}")]
    NonpositiveResistance {
        /// Offending value.
        value: f64,
    },

    /// An immittance description was requested that the device does not admit.
    #[error(
        "{eigenvalue:+.0} eigenvalue: no {immittance} description exists \
         for this scattering matrix"
    )]
    ForbiddenEigenvalue {
        /// The scattering eigenvalue (+1 or -1) blocking the description.
        eigenvalue: f64,
        /// The requested description ("Y" or "Z").
        immittance: &'static str,
    },

    /// Frozen-variable reduction was requested but no flux is frozen.
    #[error("scattering matrix has no -1 eigenvalue: no frozen flux to reduce")]
    MissingFrozenEigenvalue,

    /// More than one flux combination is frozen; the single-constraint
    /// reduction does not apply.
    #[error(
        "scattering matrix has a -1 eigenvalue of multiplicity {multiplicity}; \
         the frozen-variable reduction requires multiplicity 1"
    )]
    DegenerateFrozenEigenvalue {
        /// Dimension of the -1 eigenspace.
        multiplicity: usize,
    },

    /// An input vector has the wrong length for the device's port count.
    #[error("{what} must have one entry per port ({expected}), got {got}")]
    DimensionMismatch {
        /// What was mis-sized.
        what: &'static str,
        /// Expected length.
        expected: usize,
        /// Received length.
        got: usize,
    },

    /// A per-port parameter is outside its admissible range.
    #[error("{name}[{index}] must be {requirement}, got {value}")]
    BadParameter {
        /// Parameter name.
        name: &'static str,
        /// Port index of the offending entry.
        index: usize,
        /// Requirement violated.
        requirement: &'static str,
        /// Offending value.
        value: f64,
    },

    /// The spectral decomposition failed an internal consistency check.
    #[error("spectral decomposition inconsistency: {detail} (residual {residual:.3e})")]
    SpectralDecomposition {
        /// What went wrong.
        detail: &'static str,
        /// Size of the residual that tripped the check.
        residual: f64,
    },
}
