//! Domain types describing a validated circuit netlist.
//!
//! A [`CircuitNetlist`] is the result of parsing and validating a netlist
//! document.  Multi-terminal elements from the document are expanded into
//! two-terminal [`Branch`] entries so that the circuit is an oriented
//! multigraph:
//!
//! * a Josephson junction declared with a shunt capacitance `cj` expands into
//!   a capacitor branch (the shunt) followed by the pure tunnel-element
//!   branch;
//! * a gyrator or circulator with `P` ports expands into `P` coupler-port
//!   branches;
//! * a multiport transformer expands into its primary (left) windings
//!   followed by its secondary (right) windings;
//! * a transmission-line segment contributes one port branch (port node to
//!   ground) per terminal that attaches to the lumped circuit.
//!
//! Branch ids are assigned consecutively in this expansion order: document
//! branches first (in declaration order), then coupler ports, transformer
//! windings and line ports.  All deterministic orderings used by the loop
//! analysis derive from these ids.

use serde_json::{Map, Value};

/// Which side of a two-sided element a branch belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TlEnd {
    /// The `left` terminal of a transmission-line segment.
    Left,
    /// The `right` terminal of a transmission-line segment.
    Right,
}

/// Electrical kind and parameters of an expanded branch.
#[derive(Debug, Clone, PartialEq)]
pub enum BranchKind {
    /// Linear capacitor; value in farad.
    Capacitor {
        /// Capacitance in farad.
        c: f64,
    },
    /// Linear inductor; value in henry.
    Inductor {
        /// Inductance in henry.
        l: f64,
    },
    /// Josephson tunnel element.  A declared shunt capacitance is expanded
    /// into a separate [`BranchKind::Capacitor`] branch and recorded here so
    /// the original document can be reconstructed.
    Junction {
        /// Josephson energy in joule.
        ej: f64,
        /// Shunt capacitance in farad, when declared on the junction itself.
        cj: Option<f64>,
    },
    /// One port of a nonreciprocal coupler (gyrator or circulator); the
    /// element data lives in [`CircuitNetlist::couplers`].
    CouplerPort {
        /// Index into [`CircuitNetlist::couplers`].
        coupler: usize,
        /// Port number within that coupler, starting at 0.
        port: usize,
    },
    /// Primary (tree-side) winding of a multiport transformer.
    TransformerPrimary {
        /// Index into [`CircuitNetlist::transformers`].
        transformer: usize,
        /// Winding number within that transformer's primary side.
        winding: usize,
    },
    /// Secondary (chord-side) winding of a multiport transformer.
    TransformerSecondary {
        /// Index into [`CircuitNetlist::transformers`].
        transformer: usize,
        /// Winding number within that transformer's secondary side.
        winding: usize,
    },
    /// Lumped port of a transmission-line segment terminal.
    TlPort {
        /// Index into [`CircuitNetlist::tl_segments`].
        segment: usize,
        /// Which terminal of the segment this port represents.
        end: TlEnd,
    },
}

impl BranchKind {
    /// Short lower-case name of the kind, used in diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            BranchKind::Capacitor { .. } => "capacitor",
            BranchKind::Inductor { .. } => "inductor",
            BranchKind::Junction { .. } => "junction",
            BranchKind::CouplerPort { .. } => "coupler port",
            BranchKind::TransformerPrimary { .. } => "transformer primary winding",
            BranchKind::TransformerSecondary { .. } => "transformer secondary winding",
            BranchKind::TlPort { .. } => "transmission-line port",
        }
    }
}

/// A two-terminal branch of the expanded circuit multigraph.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    /// Stable id: position in [`CircuitNetlist::branches`].
    pub id: usize,
    /// Electrical kind and parameters.
    pub kind: BranchKind,
    /// Node index (into [`CircuitNetlist::nodes`]) the branch leaves from.
    pub from: usize,
    /// Node index the branch points to.
    pub to: usize,
    /// Declared orientation: `+1` keeps `from -> to`, `-1` reverses it.
    pub orientation: i8,
    /// External flux (weber) threading this branch's fundamental loop when it
    /// is a chord; 0 when unspecified.
    pub phi_ext: f64,
    /// For a capacitor that was expanded out of a junction declaration: the
    /// branch id of that junction.  Such branches are omitted on
    /// serialization because the junction entry restores them.
    pub shunt_of: Option<usize>,
}

impl Branch {
    /// Tail node index after applying the declared orientation.
    pub fn tail(&self) -> usize {
        if self.orientation >= 0 {
            self.from
        } else {
            self.to
        }
    }

    /// Head node index after applying the declared orientation.
    pub fn head(&self) -> usize {
        if self.orientation >= 0 {
            self.to
        } else {
            self.from
        }
    }
}

/// Family of a nonreciprocal coupler.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplerKind {
    /// Two-port gyrator with gyration resistance `R`.
    Gyrator,
    /// `P`-port circulator, optionally carrying an explicit scattering
    /// matrix; without one, the canonical ideal circulator of that port
    /// count is implied.
    Circulator,
}

/// A nonreciprocal multiport element (gyrator or circulator).
#[derive(Debug, Clone, PartialEq)]
pub struct Coupler {
    /// Gyrator or circulator.
    pub kind: CouplerKind,
    /// Reference impedance / gyration resistance in ohm.
    pub r: f64,
    /// Optional explicit scattering matrix, row-major, `P x P`.
    pub smatrix: Option<Vec<Vec<f64>>>,
    /// Port terminal pairs as node indices `(plus, minus)`, one per port.
    pub ports: Vec<(usize, usize)>,
    /// Branch ids of the expanded per-port branches, in port order.
    pub port_branches: Vec<usize>,
}

/// An ideal multiport (Belevitch) transformer.
#[derive(Debug, Clone, PartialEq)]
pub struct Transformer {
    /// Turns matrix, one row per secondary winding and one column per
    /// primary winding: secondary currents are `-turns` times primary
    /// currents, and primary voltages are `turns^T` times secondary voltages
    /// (all port currents pointing inward).
    pub turns: Vec<Vec<f64>>,
    /// Primary-winding terminal pairs as node indices.
    pub primary_ports: Vec<(usize, usize)>,
    /// Secondary-winding terminal pairs as node indices.
    pub secondary_ports: Vec<(usize, usize)>,
    /// Branch ids of the primary windings, in winding order.
    pub primary_branches: Vec<usize>,
    /// Branch ids of the secondary windings, in winding order.
    pub secondary_branches: Vec<usize>,
}

/// Length specification of a transmission-line segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TlLength {
    /// Finite segment of the given length in meter.
    Finite(f64),
    /// Semi-infinite segment (one terminal at infinity).
    SemiInfinite,
}

/// Boundary condition or attachment at one terminal of a line segment.
#[derive(Debug, Clone, PartialEq)]
pub enum TlTermination {
    /// Shorted to ground.
    Short,
    /// Left open.
    Open,
    /// Attached to the lumped circuit at the given node index.
    Port(usize),
}

/// A uniform transmission-line segment.
#[derive(Debug, Clone, PartialEq)]
pub struct TLSegment {
    /// Capacitance per unit length in farad/meter.
    pub c_per_len: f64,
    /// Inductance per unit length in henry/meter.
    pub l_per_len: f64,
    /// Finite length or semi-infinite extent.
    pub length: TlLength,
    /// Termination of the left terminal.
    pub left: TlTermination,
    /// Termination of the right terminal.
    pub right: TlTermination,
}

/// A validated circuit netlist: an oriented multigraph of two-terminal
/// branches plus the multiport element data the branches refer to.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitNetlist {
    /// Node names in declaration order.
    pub nodes: Vec<String>,
    /// Index of the ground node in [`CircuitNetlist::nodes`].
    pub ground: usize,
    /// Expanded two-terminal branches; `branches[i].id == i`.
    pub branches: Vec<Branch>,
    /// Nonreciprocal couplers referenced by coupler-port branches.
    pub couplers: Vec<Coupler>,
    /// Multiport transformers referenced by winding branches.
    pub transformers: Vec<Transformer>,
    /// Transmission-line segments referenced by line-port branches.
    pub tl_segments: Vec<TLSegment>,
    /// Free-form document metadata, passed through untouched.
    pub metadata: Map<String, Value>,
}

impl CircuitNetlist {
    /// Node index for a name, if declared.
    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n == name)
    }

    /// Name of a node index.
    pub fn node_name(&self, index: usize) -> &str {
        &self.nodes[index]
    }

    /// Number of non-ground nodes.
    pub fn non_ground_nodes(&self) -> usize {
        self.nodes.len() - 1
    }
}
