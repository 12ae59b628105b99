//! Lumped-element circuit quantization.
//!
//! This crate turns the loop structure of a superconducting circuit into a
//! canonically quantized Hamiltonian:
//!
//! * [`assemble_matrices`] — capacitance, inverse-inductance and gyration
//!   matrices of the flux-variable equations of motion, with junction
//!   bookkeeping and external-flux bias;
//! * [`check_invertibility`] / [`project_frozen`] — detection and removal
//!   of frozen flux directions, including the analytic port trigger
//!   `1 − C_c aᵀA⁻¹a = 0` for singularities that only appear in the
//!   infinite-mode limit;
//! * [`invert_block`] / [`invert_rank_one`] / [`port_coefficient_matrices`]
//!   — exact structured inversion of bordered capacitance matrices through
//!   pivots the size of the coupling rank;
//! * [`dress_impedance_modes`] / [`shift_port_variables`] — the canonical
//!   port shift and mode rescaling that expose the intrinsic ultraviolet
//!   cutoff of capacitive couplings;
//! * [`legendre_transform`] — normal-mode frequencies, zero-mode census,
//!   junction charging energies and junction–mode coupling spectra;
//! * [`dual_charge_hamiltonian`] — the charge-basis construction for
//!   phase-slip circuits behind an impedance coupler.
//!
//! Units are SI throughout: farad, henry, ohm, weber, joule, rad/s.  The
//! serialization layer ([`HamiltonianRecord`]) reports frequencies in Hz
//! as `f = ω/2π` and energies as `E/h`.

pub mod assemble;
pub mod constants;
pub mod dress;
pub mod dual;
pub mod error;
pub mod freeze;
pub mod invert;
pub mod legendre;
pub mod model;

pub use assemble::{assemble_matrices, coupler_device, gyrator_scattering, to_dense};
pub use dress::{dress_impedance_modes, mode_overlap, shift_port_variables, DressedModel, PortCoupling};
pub use dual::{dual_charge_hamiltonian, DualElement};
pub use error::LumpedError;
pub use freeze::{check_invertibility, project_frozen, InvertibilityReport, PortTrigger};
pub use invert::{
    invert_block, invert_ported, invert_rank_one, port_coefficient_matrices, BlockInverse,
    PortCoefficients,
};
pub use legendre::legendre_transform;
pub use model::{
    hamiltonian_flow, lagrangian_acceleration, matrix_rows, AnharmonicTerm, Coupling,
    CouplingKind, CouplingRecord, HamiltonianRecord, JunctionTerm, QuadraticModel,
    QuantizedHamiltonian,
};
