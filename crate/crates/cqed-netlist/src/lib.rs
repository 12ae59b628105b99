//! Netlist front end for the circuit-quantization workspace.
//!
//! This crate turns a JSON description of a superconducting circuit —
//! capacitors, inductors, Josephson junctions, multiport transformers,
//! gyrators/circulators and transmission-line segments — into the
//! graph-theoretic data that drives matrix assembly downstream:
//!
//! * [`parse_netlist`] / [`serialize_netlist`] — document validation,
//!   multiport expansion and the inverse mapping;
//! * [`build_loop_structure`] — deterministic spanning-tree assignment
//!   (capacitors and transformer primaries in the tree; junctions,
//!   inductors, coupler ports, transformer secondaries and line ports as
//!   chords) and the integer fundamental-loop matrix `F` with
//!   `F I_ch = -I_tr`;
//! * [`eliminate_transformers`] — absorption of ideal-transformer windings
//!   into effective real-valued loop blocks via the turns matrix.
//!
//! Units are SI throughout: farad, henry, joule, ohm, weber, meter.

pub mod error;
pub mod loops;
pub mod matrix;
mod parse;
mod schema;
pub mod types;

pub use error::NetlistError;
pub use loops::{
    build_loop_structure, eliminate_transformers, verify_current_law, ChordClass,
    EffectiveBlocks, LoopStructure, TreeClass,
};
pub use matrix::{IntMatrix, RealMatrix};
pub use parse::{parse_netlist, serialize_netlist};
pub use types::{
    Branch, BranchKind, CircuitNetlist, Coupler, CouplerKind, TLSegment, TlEnd, TlLength,
    TlTermination, Transformer,
};
