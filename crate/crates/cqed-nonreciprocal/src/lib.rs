//! Ideal nonreciprocal circuit elements described by scattering matrices.
//!
//! A lossless nonreciprocal multiport (gyrator, circulator) is characterized
//! by a constant real orthogonal scattering matrix `S` and a reference
//! resistance `R`. Which circuit-level descriptions exist depends only on
//! the spectrum of `S`:
//!
//! * [`classify`] — reports whether an admittance (no `-1` eigenvalue) or
//!   impedance (no `+1` eigenvalue) description exists, plus the spectrum.
//! * [`cayley_admittance`] / [`cayley_impedance`] — the skew-symmetric
//!   `Y = R⁻¹(1+S)⁻¹(1-S)` and `Z = R(1-S)⁻¹(1+S)` matrices when they exist.
//! * [`reduce_frozen`] — when `-1` is an eigenvalue no admittance exists and
//!   one flux combination is frozen; this removes it and returns the
//!   unconstrained reduced model ([`ReducedCirculator`]) with its restricted
//!   capacitance and gyration matrices and remapped junction potential.
//!
//! All basis and sign ambiguities are fixed by deterministic rules
//! (eigenvector phase and sign conventions, plane ordering by rotation
//! angle), so repeated runs produce identical matrices.

pub mod cayley;
pub mod classify;
pub mod device;
pub mod error;
pub mod reduce;
mod spectral;

pub use cayley::{cayley_admittance, cayley_impedance};
pub use classify::{classify, Classification};
pub use device::ScatteringDevice;
pub use error::NonreciprocalError;
pub use reduce::{reduce_frozen, ReducedCirculator};
