//! Error type for lumped-element quantization.

use cqed_nonreciprocal::NonreciprocalError;
use thiserror::Error;

/// Errors produced while assembling, inverting or quantizing lumped models.
#[derive(Debug, Clone, Error)]
pub enum LumpedError {
    /// Two quantities that must share a dimension do not.
    #[error("{what}: expected dimension {expected}, got {got}")]
    DimensionMismatch {
        /// What was being checked.
        what: &'static str,
        /// Required dimension.
        expected: usize,
        /// Dimension received.
        got: usize,
    },

    /// A matrix that must be symmetric is not.
    #[error("{what} is not symmetric: max |M - Mᵀ| = {deviation:.3e}")]
    NotSymmetric {
        /// Which matrix failed the check.
        what: &'static str,
        /// Largest absolute asymmetry.
        deviation: f64,
    },

    /// A matrix that must be positive definite is not.
    #[error("{what} is not positive definite (smallest eigenvalue {min_eigenvalue:.6e})")]
    NotPositiveDefinite {
        /// Which matrix failed the check.
        what: &'static str,
        /// Its smallest eigenvalue.
        min_eigenvalue: f64,
    },

    /// The capacitance matrix has frozen directions, so no Hamiltonian
    /// exists on the full variable set.
    #[error(
        "kinetic matrix is singular ({null_dimension} frozen flux direction(s)); \
         project the frozen directions out before the Legendre transform"
    )]
    SingularKinetic {
        /// Dimension of the numerical null space.
        null_dimension: usize,
    },

    /// A block-inversion pivot is at or near its singular point, signalling
    /// a frozen variable in disguise.
    #[error(
        "block-inverse pivot is singular to working precision \
         (condition {condition:.3e}); a flux combination is frozen and must be \
         projected out before inversion"
    )]
    NearSingularPivot {
        /// Ratio of largest to smallest pivot singular value.
        condition: f64,
    },

    /// The coupling block has a different numerical rank than declared.
    #[error("coupling block has numerical rank {detected}, expected at most {expected}")]
    RankMismatch {
        /// Declared maximum rank.
        expected: usize,
        /// Rank detected from the singular spectrum.
        detected: usize,
    },

    /// A declared port layout does not match the capacitance matrix.
    #[error(
        "declared ports do not match the capacitance matrix: \
         max deviation {deviation:.3e} in the {what} block"
    )]
    StructureMismatch {
        /// Which block disagreed.
        what: &'static str,
        /// Largest absolute disagreement.
        deviation: f64,
    },

    /// A scattering device in the netlist has no admittance description,
    /// so it cannot enter the equations of motion as a gyration matrix.
    #[error(
        "coupler {coupler} has no admittance description and cannot be \
         assembled; apply the frozen-variable scattering reduction instead: {source}"
    )]
    NoAdmittance {
        /// Index of the coupler in the netlist.
        coupler: usize,
        /// Underlying device-analysis error.
        source: NonreciprocalError,
    },

    /// A device-level analysis failed.
    #[error("scattering-device analysis failed: {0}")]
    Device(#[from] NonreciprocalError),

    /// The netlist contains an element class this pipeline does not handle.
    #[error("unsupported element for lumped assembly: {what}")]
    UnsupportedElement {
        /// Description of the offending element.
        what: String,
    },

    /// The loop structure has not been reduced to effective blocks yet.
    #[error("loop structure carries no effective blocks; eliminate transformers first")]
    MissingEffectiveBlocks,

    /// A dual (charge-basis) circuit mixes phase-slip and Josephson
    /// nonlinearities, which have no common canonical basis here.
    #[error(
        "{josephson} Josephson junction(s) in a charge-basis circuit; \
         the dual construction requires phase-slip elements only"
    )]
    MixedNonlinearElements {
        /// Number of offending Josephson elements.
        josephson: usize,
    },

    /// A junction sits on a variable outside the retained network block.
    #[error("junction variable {variable} lies outside the network block (size {network})")]
    JunctionOutsideNetwork {
        /// The junction's variable index.
        variable: usize,
        /// Size of the network block.
        network: usize,
    },

    /// The harmonic sector is not positive definite while junctions are
    /// present, so mode couplings cannot be defined.
    #[error(
        "harmonic sector is not positive definite (smallest eigenvalue \
         {min_eigenvalue:.6e}) while {junctions} junction(s) couple to it"
    )]
    NonPositiveHarmonicSector {
        /// Smallest eigenvalue of the harmonic phase-space form.
        min_eigenvalue: f64,
        /// Number of junctions requesting couplings.
        junctions: usize,
    },

    /// A parameter is out of its physical domain.
    #[error("{what} must be {requirement}, got {value}")]
    BadParameter {
        /// Which parameter.
        what: &'static str,
        /// The violated requirement.
        requirement: &'static str,
        /// Offending value.
        value: f64,
    },

    /// A symplectic-analysis step failed.
    #[error("symplectic analysis failed: {0}")]
    Symplectic(#[from] cqed_symplectic::SymplecticError),
}
