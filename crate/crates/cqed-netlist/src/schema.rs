//! Serde document model for the netlist JSON schema.
//!
//! These types mirror the on-disk format exactly; semantic validation and
//! expansion into [`crate::CircuitNetlist`] happen in [`crate::parse`].
//! Top-level keys: `nodes`, `ground`, `branches`, `couplers`, `transformers`,
//! `tlines`, plus a free-form `metadata` object.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct NetlistDoc {
    pub nodes: Vec<String>,
    pub ground: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub branches: Vec<BranchDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub couplers: Vec<CouplerDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub transformers: Vec<TransformerDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tlines: Vec<TlineDoc>,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub metadata: Map<String, Value>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct BranchDoc {
    pub kind: String,
    pub from: String,
    pub to: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<i8>,
    #[serde(default)]
    pub params: ParamsDoc,
}

/// Union of all per-kind parameter keys; presence is validated per kind.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct ParamsDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ej: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cj: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_ext: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct CouplerDoc {
    pub kind: String,
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smatrix: Option<Vec<Vec<f64>>>,
    pub ports: Vec<[String; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct TransformerDoc {
    pub turns: Vec<Vec<f64>>,
    pub left_ports: Vec<[String; 2]>,
    pub right_ports: Vec<[String; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct TlineDoc {
    pub c: f64,
    pub l: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub semi_infinite: bool,
    pub left: TermDoc,
    pub right: TermDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub(crate) enum TermDoc {
    /// `"short"` or `"open"`.
    Named(String),
    /// `{"port": "<node>"}`.
    Port { port: String },
}
