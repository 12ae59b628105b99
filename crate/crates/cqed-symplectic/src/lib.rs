//! Normal-form diagonalization of positive quadratic Hamiltonians.
//!
//! This crate provides the two linear-algebra kernels used throughout the
//! circuit-quantization workspace:
//!
//! * [`williamson_diagonalize`] — Williamson normal form of a positive-definite
//!   quadratic form on phase space: normal-mode frequencies plus the
//!   symplectic transformation that realizes them.
//! * [`bogoliubov_modes`] — bosonic Bogoliubov diagonalization of a quadratic
//!   mode Hamiltonian given by number-type and pairing-type blocks, with a
//!   structured `O(n^2)` variant ([`bogoliubov_diag_rank_one`]) for
//!   diagonal-plus-rank-one problems.
//! * [`DiagPlusRankOne`] — the underlying secular-equation eigensolver for
//!   symmetric diagonal-plus-rank-one matrices.
//!
//! All routines are deterministic: eigenvector sign and degenerate-subspace
//! ambiguities are fixed by explicit rules so repeated runs yield identical
//! output.

pub mod bogoliubov;
pub mod error;
pub mod rank_one;
mod util;
pub mod williamson;

pub use bogoliubov::{bogoliubov_diag_rank_one, bogoliubov_modes, Bogoliubov, StructuredBogoliubov};
pub use error::SymplecticError;
pub use rank_one::DiagPlusRankOne;
pub use williamson::{symplectic_form, williamson_diagonalize, Williamson};
