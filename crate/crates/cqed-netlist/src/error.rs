//! Error types for netlist parsing and loop analysis.

use thiserror::Error;

/// Failure modes of netlist parsing, validation and loop-structure analysis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetlistError {
    /// The document does not conform to the netlist JSON schema.
    #[error("schema violation at line {line}, column {column}: {detail}")]
    Schema {
        /// 1-based line of the offending token (0 when unknown).
        line: usize,
        /// 1-based column of the offending token (0 when unknown).
        column: usize,
        /// Human-readable description of the violation.
        detail: String,
    },

    /// A branch, coupler port, transformer winding or line terminal names a
    /// node that is not in the `nodes` list.
    #[error("unknown node reference `{node}` in {context}")]
    UnknownNode {
        /// The undeclared node name.
        node: String,
        /// Where the reference occurred (e.g. `branches[3]`).
        context: String,
    },

    /// A physical element parameter that must be strictly positive is zero,
    /// negative, or not finite.
    #[error("nonpositive parameter `{name}` = {value} in {context}")]
    NonpositiveParameter {
        /// Parameter key as written in the document (`c`, `l`, `ej`, ...).
        name: &'static str,
        /// The offending value.
        value: f64,
        /// Where the parameter occurred (e.g. `branches[0]`).
        context: String,
    },

    /// The circuit multigraph is not connected, so no spanning tree exists.
    #[error("circuit graph is disconnected: node `{node}` is unreachable from ground")]
    Disconnected {
        /// A node with no path to the ground node.
        node: String,
    },

    /// No spanning tree satisfying the tree/chord convention exists: the tree
    /// must contain every capacitor and every primary transformer winding,
    /// and every junction must close its loop through a single parallel
    /// capacitor.
    #[error("no valid BKD tree: {reason}")]
    NoValidTree {
        /// Which structural rule failed and on which element.
        reason: String,
    },

    /// Transformer elimination requires that no fundamental loop of a
    /// secondary winding contains a primary winding of any transformer.
    #[error(
        "transformer elimination precondition violated: primary winding branch {primary_branch} \
         lies in the loop of secondary winding branch {secondary_branch}"
    )]
    TransformerLoop {
        /// Branch id of the offending primary (tree-side) winding.
        primary_branch: usize,
        /// Branch id of the offending secondary (chord-side) winding.
        secondary_branch: usize,
    },
}

impl NetlistError {
    /// Convenience constructor for schema violations detected after JSON
    /// decoding, where no source position is available.
    pub(crate) fn schema(detail: impl Into<String>) -> Self {
        NetlistError::Schema {
            line: 0,
            column: 0,
            detail: detail.into(),
        }
    }
}
