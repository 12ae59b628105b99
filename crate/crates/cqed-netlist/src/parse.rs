//! Parsing, validation, expansion and serialization of netlist documents.

use crate::error::NetlistError;
use crate::schema::{
    BranchDoc, CouplerDoc, NetlistDoc, ParamsDoc, TermDoc, TlineDoc, TransformerDoc,
};
use crate::types::{
    Branch, BranchKind, CircuitNetlist, Coupler, CouplerKind, TLSegment, TlEnd, TlLength,
    TlTermination, Transformer,
};

/// Parse and validate a netlist document.
///
/// The input is a JSON object with keys `nodes`, `ground`, `branches`,
/// `couplers`, `transformers`, `tlines` and optional `metadata`.  On success
/// all node references are resolved, every physical parameter has been
/// checked for positivity, and multiport elements are expanded into
/// two-terminal branches (see [`CircuitNetlist`] for the expansion order).
///
/// # Errors
///
/// [`NetlistError::Schema`] for malformed documents, unknown kinds, missing
/// or extraneous parameters; [`NetlistError::UnknownNode`] for references to
/// undeclared nodes; [`NetlistError::NonpositiveParameter`] for physical
/// values that are not strictly positive and finite.
pub fn parse_netlist(text: &str) -> Result<CircuitNetlist, NetlistError> {
    let doc: NetlistDoc = serde_json::from_str(text).map_err(|e| NetlistError::Schema {
        line: e.line(),
        column: e.column(),
        detail: e.to_string(),
    })?;
    expand(doc)
}

/// Serialize a netlist back into its document form.
///
/// The output is semantically identical to the original input: expanded
/// branches are folded back into their declaring elements (junction shunt
/// capacitors into the junction entry, coupler ports into the coupler, and
/// so on), and defaulted fields are omitted.
pub fn serialize_netlist(net: &CircuitNetlist) -> String {
    let doc = to_doc(net);
    serde_json::to_string_pretty(&doc).expect("netlist document serialization cannot fail")
}

struct NodeTable<'a> {
    names: &'a [String],
}

impl<'a> NodeTable<'a> {
    fn resolve(&self, name: &str, context: &str) -> Result<usize, NetlistError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| NetlistError::UnknownNode {
                node: name.to_owned(),
                context: context.to_owned(),
            })
    }
}

fn positive(
    value: f64,
    name: &'static str,
    context: &str,
) -> Result<f64, NetlistError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(NetlistError::NonpositiveParameter {
            name,
            value,
            context: context.to_owned(),
        })
    }
}

fn finite(value: f64, name: &str, context: &str) -> Result<f64, NetlistError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(NetlistError::schema(format!(
            "{context}: parameter `{name}` must be finite, got {value}"
        )))
    }
}

/// Reject parameter keys that do not belong to the branch kind.
fn reject_foreign_params(
    params: &ParamsDoc,
    allowed: &[&str],
    context: &str,
) -> Result<(), NetlistError> {
    let present: [(&str, bool); 5] = [
        ("c", params.c.is_some()),
        ("l", params.l.is_some()),
        ("ej", params.ej.is_some()),
        ("cj", params.cj.is_some()),
        ("phi_ext", params.phi_ext.is_some()),
    ];
    for (key, is_present) in present {
        if is_present && !allowed.contains(&key) {
            return Err(NetlistError::schema(format!(
                "{context}: parameter `{key}` is not valid for this branch kind"
            )));
        }
    }
    Ok(())
}

fn expand(doc: NetlistDoc) -> Result<CircuitNetlist, NetlistError> {
    if doc.nodes.is_empty() {
        return Err(NetlistError::schema("`nodes` must declare at least one node"));
    }
    for (i, name) in doc.nodes.iter().enumerate() {
        if name.is_empty() {
            return Err(NetlistError::schema(format!("nodes[{i}]: empty node name")));
        }
        if doc.nodes[..i].contains(name) {
            return Err(NetlistError::schema(format!(
                "nodes[{i}]: duplicate node name `{name}`"
            )));
        }
    }
    let table = NodeTable { names: &doc.nodes };
    let ground = table.resolve(&doc.ground, "ground")?;

    let mut branches: Vec<Branch> = Vec::new();
    let push = |kind: BranchKind,
                    from: usize,
                    to: usize,
                    orientation: i8,
                    phi_ext: f64,
                    shunt_of: Option<usize>,
                    branches: &mut Vec<Branch>| {
        let id = branches.len();
        branches.push(Branch {
            id,
            kind,
            from,
            to,
            orientation,
            phi_ext,
            shunt_of,
        });
        id
    };

    for (i, b) in doc.branches.iter().enumerate() {
        let context = format!("branches[{i}]");
        let from = table.resolve(&b.from, &context)?;
        let to = table.resolve(&b.to, &context)?;
        if from == to {
            return Err(NetlistError::schema(format!(
                "{context}: branch endpoints must be distinct nodes (self-loop on `{}`)",
                b.from
            )));
        }
        let orientation = match b.orientation {
            None | Some(1) => 1,
            Some(-1) => -1,
            Some(other) => {
                return Err(NetlistError::schema(format!(
                    "{context}: orientation must be 1 or -1, got {other}"
                )))
            }
        };
        let phi_ext = match b.params.phi_ext {
            Some(v) => finite(v, "phi_ext", &context)?,
            None => 0.0,
        };
        match b.kind.as_str() {
            "capacitor" => {
                reject_foreign_params(&b.params, &["c"], &context)?;
                let c = b.params.c.ok_or_else(|| {
                    NetlistError::schema(format!("{context}: capacitor requires params.c"))
                })?;
                let c = positive(c, "c", &context)?;
                push(
                    BranchKind::Capacitor { c },
                    from,
                    to,
                    orientation,
                    0.0,
                    None,
                    &mut branches,
                );
            }
            "inductor" => {
                reject_foreign_params(&b.params, &["l", "phi_ext"], &context)?;
                let l = b.params.l.ok_or_else(|| {
                    NetlistError::schema(format!("{context}: inductor requires params.l"))
                })?;
                let l = positive(l, "l", &context)?;
                push(
                    BranchKind::Inductor { l },
                    from,
                    to,
                    orientation,
                    phi_ext,
                    None,
                    &mut branches,
                );
            }
            "junction" => {
                reject_foreign_params(&b.params, &["ej", "cj", "phi_ext"], &context)?;
                let ej = b.params.ej.ok_or_else(|| {
                    NetlistError::schema(format!("{context}: junction requires params.ej"))
                })?;
                let ej = positive(ej, "ej", &context)?;
                let cj = match b.params.cj {
                    Some(v) => Some(positive(v, "cj", &context)?),
                    None => None,
                };
                if let Some(c) = cj {
                    // The shunt capacitor precedes its junction so capacitor
                    // row order matches declaration order.
                    let junction_id = branches.len() + 1;
                    push(
                        BranchKind::Capacitor { c },
                        from,
                        to,
                        orientation,
                        0.0,
                        Some(junction_id),
                        &mut branches,
                    );
                }
                push(
                    BranchKind::Junction { ej, cj },
                    from,
                    to,
                    orientation,
                    phi_ext,
                    None,
                    &mut branches,
                );
            }
            other => {
                return Err(NetlistError::schema(format!(
                    "{context}: unknown branch kind `{other}` \
                     (expected capacitor, inductor or junction)"
                )))
            }
        }
    }

    let mut couplers: Vec<Coupler> = Vec::new();
    for (i, c) in doc.couplers.iter().enumerate() {
        let context = format!("couplers[{i}]");
        let kind = match c.kind.as_str() {
            "gyrator" => CouplerKind::Gyrator,
            "circulator" => CouplerKind::Circulator,
            other => {
                return Err(NetlistError::schema(format!(
                    "{context}: unknown coupler kind `{other}` (expected gyrator or circulator)"
                )))
            }
        };
        let r = positive(c.r, "R", &context)?;
        if kind == CouplerKind::Gyrator && c.ports.len() != 2 {
            return Err(NetlistError::schema(format!(
                "{context}: a gyrator has exactly 2 ports, got {}",
                c.ports.len()
            )));
        }
        if kind == CouplerKind::Circulator && c.ports.len() < 2 {
            return Err(NetlistError::schema(format!(
                "{context}: a circulator needs at least 2 ports, got {}",
                c.ports.len()
            )));
        }
        if kind == CouplerKind::Gyrator && c.smatrix.is_some() {
            return Err(NetlistError::schema(format!(
                "{context}: a gyrator takes no smatrix; its constitutive law is fixed by R"
            )));
        }
        if let Some(s) = &c.smatrix {
            let p = c.ports.len();
            if s.len() != p || s.iter().any(|row| row.len() != p) {
                return Err(NetlistError::schema(format!(
                    "{context}: smatrix must be {p}x{p} to match the port count"
                )));
            }
            for (ri, row) in s.iter().enumerate() {
                for (ci, &v) in row.iter().enumerate() {
                    finite(v, &format!("smatrix[{ri}][{ci}]"), &context)?;
                }
            }
        }
        let mut ports = Vec::with_capacity(c.ports.len());
        for (pi, pair) in c.ports.iter().enumerate() {
            let pcontext = format!("{context}.ports[{pi}]");
            let plus = table.resolve(&pair[0], &pcontext)?;
            let minus = table.resolve(&pair[1], &pcontext)?;
            if plus == minus {
                return Err(NetlistError::schema(format!(
                    "{pcontext}: port terminals must be distinct nodes"
                )));
            }
            ports.push((plus, minus));
        }
        let mut port_branches = Vec::with_capacity(ports.len());
        for (pi, &(plus, minus)) in ports.iter().enumerate() {
            let id = push(
                BranchKind::CouplerPort {
                    coupler: i,
                    port: pi,
                },
                plus,
                minus,
                1,
                0.0,
                None,
                &mut branches,
            );
            port_branches.push(id);
        }
        couplers.push(Coupler {
            kind,
            r,
            smatrix: c.smatrix.clone(),
            ports,
            port_branches,
        });
    }

    let mut transformers: Vec<Transformer> = Vec::new();
    for (i, t) in doc.transformers.iter().enumerate() {
        let context = format!("transformers[{i}]");
        if t.left_ports.is_empty() || t.right_ports.is_empty() {
            return Err(NetlistError::schema(format!(
                "{context}: left_ports and right_ports must be non-empty"
            )));
        }
        let (n_left, n_right) = (t.left_ports.len(), t.right_ports.len());
        if t.turns.len() != n_right || t.turns.iter().any(|row| row.len() != n_left) {
            return Err(NetlistError::schema(format!(
                "{context}: turns matrix must have one row per right port and one column \
                 per left port ({n_right}x{n_left})"
            )));
        }
        for (ri, row) in t.turns.iter().enumerate() {
            for (ci, &v) in row.iter().enumerate() {
                finite(v, &format!("turns[{ri}][{ci}]"), &context)?;
            }
        }
        let resolve_ports = |pairs: &[[String; 2]],
                             side: &str|
         -> Result<Vec<(usize, usize)>, NetlistError> {
            let mut out = Vec::with_capacity(pairs.len());
            for (pi, pair) in pairs.iter().enumerate() {
                let pcontext = format!("{context}.{side}[{pi}]");
                let a = table.resolve(&pair[0], &pcontext)?;
                let b = table.resolve(&pair[1], &pcontext)?;
                if a == b {
                    return Err(NetlistError::schema(format!(
                        "{pcontext}: winding terminals must be distinct nodes"
                    )));
                }
                out.push((a, b));
            }
            Ok(out)
        };
        let primary_ports = resolve_ports(&t.left_ports, "left_ports")?;
        let secondary_ports = resolve_ports(&t.right_ports, "right_ports")?;
        let mut primary_branches = Vec::with_capacity(n_left);
        for (wi, &(a, b)) in primary_ports.iter().enumerate() {
            let id = push(
                BranchKind::TransformerPrimary {
                    transformer: i,
                    winding: wi,
                },
                a,
                b,
                1,
                0.0,
                None,
                &mut branches,
            );
            primary_branches.push(id);
        }
        let mut secondary_branches = Vec::with_capacity(n_right);
        for (wi, &(a, b)) in secondary_ports.iter().enumerate() {
            let id = push(
                BranchKind::TransformerSecondary {
                    transformer: i,
                    winding: wi,
                },
                a,
                b,
                1,
                0.0,
                None,
                &mut branches,
            );
            secondary_branches.push(id);
        }
        transformers.push(Transformer {
            turns: t.turns.clone(),
            primary_ports,
            secondary_ports,
            primary_branches,
            secondary_branches,
        });
    }

    let mut tl_segments: Vec<TLSegment> = Vec::new();
    for (i, tl) in doc.tlines.iter().enumerate() {
        let context = format!("tlines[{i}]");
        let c_per_len = positive(tl.c, "c", &context)?;
        let l_per_len = positive(tl.l, "l", &context)?;
        let length = match (tl.length, tl.semi_infinite) {
            (Some(len), false) => TlLength::Finite(positive(len, "length", &context)?),
            (None, true) => TlLength::SemiInfinite,
            (Some(_), true) => {
                return Err(NetlistError::schema(format!(
                    "{context}: declare either a finite `length` or `semi_infinite`, not both"
                )))
            }
            (None, false) => {
                return Err(NetlistError::schema(format!(
                    "{context}: a segment needs a `length` or `\"semi_infinite\": true"
                )))
            }
        };
        let resolve_term = |term: &TermDoc, side: &str| -> Result<TlTermination, NetlistError> {
            match term {
                TermDoc::Named(name) => match name.as_str() {
                    "short" => Ok(TlTermination::Short),
                    "open" => Ok(TlTermination::Open),
                    other => Err(NetlistError::schema(format!(
                        "{context}.{side}: unknown termination `{other}` \
                         (expected \"short\", \"open\" or {{\"port\": node}})"
                    ))),
                },
                TermDoc::Port { port } =>

                    Ok(TlTermination::Port(
                        table.resolve(port, &format!("{context}.{side}"))?,
                    )),
            }
        };
        let left = resolve_term(&tl.left, "left")?;
        let right = resolve_term(&tl.right, "right")?;
        if length == TlLength::SemiInfinite && right != TlTermination::Open {
            return Err(NetlistError::schema(format!(
                "{context}: a semi-infinite segment extends to the right; \
                 its right termination must be \"open\""
            )));
        }
        if let TlTermination::Port(node) = left {
            push(
                BranchKind::TlPort {
                    segment: i,
                    end: TlEnd::Left,
                },
                node,
                ground,
                1,
                0.0,
                None,
                &mut branches,
            );
        }
        if let TlTermination::Port(node) = right {
            push(
                BranchKind::TlPort {
                    segment: i,
                    end: TlEnd::Right,
                },
                node,
                ground,
                1,
                0.0,
                None,
                &mut branches,
            );
        }
        tl_segments.push(TLSegment {
            c_per_len,
            l_per_len,
            length,
            left,
            right,
        });
    }

    Ok(CircuitNetlist {
        nodes: doc.nodes,
        ground,
        branches,
        couplers,
        transformers,
        tl_segments,
        metadata: doc.metadata,
    })
}

fn to_doc(net: &CircuitNetlist) -> NetlistDoc {
    let name = |i: usize| net.nodes[i].clone();
    let pair = |(a, b): (usize, usize)| [name(a), name(b)];

    let mut branches = Vec::new();
    for b in &net.branches {
        if b.shunt_of.is_some() {
            continue;
        }
        let (kind, params) = match &b.kind {
            BranchKind::Capacitor { c } => (
                "capacitor",
                ParamsDoc {
                    c: Some(*c),
                    ..ParamsDoc::default()
                },
            ),
            BranchKind::Inductor { l } => (
                "inductor",
                ParamsDoc {
                    l: Some(*l),
                    phi_ext: (b.phi_ext != 0.0).then_some(b.phi_ext),
                    ..ParamsDoc::default()
                },
            ),
            BranchKind::Junction { ej, cj } => (
                "junction",
                ParamsDoc {
                    ej: Some(*ej),
                    cj: *cj,
                    phi_ext: (b.phi_ext != 0.0).then_some(b.phi_ext),
                    ..ParamsDoc::default()
                },
            ),
            // Expanded multiport elements are re-emitted from their
            // declaring entries below.
            _ => continue,
        };
        branches.push(BranchDoc {
            kind: kind.to_owned(),
            from: name(b.from),
            to: name(b.to),
            orientation: (b.orientation == -1).then_some(-1),
            params,
        });
    }

    let couplers = net
        .couplers
        .iter()
        .map(|c| CouplerDoc {
            kind: match c.kind {
                CouplerKind::Gyrator => "gyrator".to_owned(),
                CouplerKind::Circulator => "circulator".to_owned(),
            },
            r: c.r,
            smatrix: c.smatrix.clone(),
            ports: c.ports.iter().map(|&p| pair(p)).collect(),
        })
        .collect();

    let transformers = net
        .transformers
        .iter()
        .map(|t| TransformerDoc {
            turns: t.turns.clone(),
            left_ports: t.primary_ports.iter().map(|&p| pair(p)).collect(),
            right_ports: t.secondary_ports.iter().map(|&p| pair(p)).collect(),
        })
        .collect();

    let term_doc = |t: &TlTermination| match t {
        TlTermination::Short => TermDoc::Named("short".to_owned()),
        TlTermination::Open => TermDoc::Named("open".to_owned()),
        TlTermination::Port(node) => TermDoc::Port { port: name(*node) },
    };
    let tlines = net
        .tl_segments
        .iter()
        .map(|tl| TlineDoc {
            c: tl.c_per_len,
            l: tl.l_per_len,
            length: match tl.length {
                TlLength::Finite(len) => Some(len),
                TlLength::SemiInfinite => None,
            },
            semi_infinite: tl.length == TlLength::SemiInfinite,
            left: term_doc(&tl.left),
            right: term_doc(&tl.right),
        })
        .collect();

    NetlistDoc {
        nodes: net.nodes.clone(),
        ground: net.nodes[net.ground].clone(),
        branches,
        couplers,
        transformers,
        tlines,
        metadata: net.metadata.clone(),
    }
}
