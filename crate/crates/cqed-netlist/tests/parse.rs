//! Document parsing, validation and round-trip tests.

use cqed_netlist::{
    parse_netlist, serialize_netlist, BranchKind, CouplerKind, NetlistError, TlLength,
    TlTermination,
};
use serde_json::json;

#[test]
fn lc_loop_parses_to_two_branches() {
    let doc = json!({
        "nodes": ["g", "n1"],
        "ground": "g",
        "branches": [
            {"kind": "capacitor", "from": "n1", "to": "g", "params": {"c": 1e-12}},
            {"kind": "inductor", "from": "n1", "to": "g", "params": {"l": 1e-9}}
        ]
    });
    let net = parse_netlist(&doc.to_string()).expect("valid document");
    assert_eq!(net.branches.len(), 2);
    assert_eq!(net.non_ground_nodes(), 1);
    assert_eq!(net.branches[0].kind, BranchKind::Capacitor { c: 1e-12 });
    assert_eq!(net.branches[1].kind, BranchKind::Inductor { l: 1e-9 });
}

/// A qubit capacitor plus coupling capacitor feeding a ladder of M = 3
/// parallel-LC stages: 2M + 2 two-terminal branches.
#[test]
fn capacitively_loaded_lc_ladder_has_expected_branch_count() {
    let m = 3;
    let mut nodes = vec!["g".to_owned(), "q".to_owned(), "p".to_owned()];
    let mut branches = vec![
        json!({"kind": "capacitor", "from": "q", "to": "g", "params": {"c": 5e-15}}),
        json!({"kind": "capacitor", "from": "q", "to": "p", "params": {"c": 50e-15}}),
    ];
    let mut left = "p".to_owned();
    for stage in 0..m {
        let right = if stage == m - 1 {
            "g".to_owned()
        } else {
            let name = format!("x{}", stage + 1);
            nodes.push(name.clone());
            name
        };
        branches.push(
            json!({"kind": "capacitor", "from": left.as_str(), "to": right.as_str(),
                   "params": {"c": 0.25e-12}}),
        );
        branches.push(
            json!({"kind": "inductor", "from": left.as_str(), "to": right.as_str(),
                   "params": {"l": 2e-9}}),
        );
        left = right;
    }
    let doc = json!({"nodes": nodes, "ground": "g", "branches": branches});
    let net = parse_netlist(&doc.to_string()).expect("valid document");
    assert_eq!(net.branches.len(), 2 * m + 2);
}

#[test]
fn negative_capacitance_is_rejected() {
    let doc = json!({
        "nodes": ["g", "n1"],
        "ground": "g",
        "branches": [
            {"kind": "capacitor", "from": "n1", "to": "g", "params": {"c": -1e-15}}
        ]
    });
    match parse_netlist(&doc.to_string()) {
        Err(NetlistError::NonpositiveParameter { name, value, .. }) => {
            assert_eq!(name, "c");
            assert_eq!(value, -1e-15);
        }
        other => panic!("expected nonpositive-parameter error, got {other:?}"),
    }
}

#[test]
fn zero_inductance_is_rejected() {
    let doc = json!({
        "nodes": ["g", "n1"],
        "ground": "g",
        "branches": [
            {"kind": "inductor", "from": "n1", "to": "g", "params": {"l": 0.0}}
        ]
    });
    assert!(matches!(
        parse_netlist(&doc.to_string()),
        Err(NetlistError::NonpositiveParameter { name: "l", .. })
    ));
}

#[test]
fn junction_with_shunt_expands_to_capacitor_plus_junction() {
    let doc = json!({
        "nodes": ["g", "n1"],
        "ground": "g",
        "branches": [
            {"kind": "junction", "from": "n1", "to": "g", "params": {"ej": 1.3e-23, "cj": 5e-15}}
        ]
    });
    let net = parse_netlist(&doc.to_string()).expect("valid document");
    assert_eq!(net.branches.len(), 2);
    assert_eq!(net.branches[0].kind, BranchKind::Capacitor { c: 5e-15 });
    assert_eq!(net.branches[0].shunt_of, Some(1));
    assert_eq!(
        net.branches[1].kind,
        BranchKind::Junction {
            ej: 1.3e-23,
            cj: Some(5e-15)
        }
    );
}

#[test]
fn unknown_node_reference_is_rejected() {
    let doc = json!({
        "nodes": ["g", "n1"],
        "ground": "g",
        "branches": [
            {"kind": "capacitor", "from": "n1", "to": "n2", "params": {"c": 1e-12}}
        ]
    });
    match parse_netlist(&doc.to_string()) {
        Err(NetlistError::UnknownNode { node, context }) => {
            assert_eq!(node, "n2");
            assert_eq!(context, "branches[0]");
        }
        other => panic!("expected unknown-node error, got {other:?}"),
    }
}

#[test]
fn undeclared_ground_is_rejected() {
    let doc = json!({"nodes": ["n1"], "ground": "g", "branches": []});
    assert!(matches!(
        parse_netlist(&doc.to_string()),
        Err(NetlistError::UnknownNode { .. })
    ));
}

#[test]
fn duplicate_node_names_are_rejected() {
    let doc = json!({"nodes": ["g", "n1", "n1"], "ground": "g"});
    assert!(matches!(
        parse_netlist(&doc.to_string()),
        Err(NetlistError::Schema { .. })
    ));
}

#[test]
fn self_loop_is_rejected() {
    let doc = json!({
        "nodes": ["g", "n1"],
        "ground": "g",
        "branches": [
            {"kind": "capacitor", "from": "n1", "to": "n1", "params": {"c": 1e-12}}
        ]
    });
    assert!(matches!(
        parse_netlist(&doc.to_string()),
        Err(NetlistError::Schema { .. })
    ));
}

#[test]
fn unknown_branch_kind_is_rejected() {
    let doc = json!({
        "nodes": ["g", "n1"],
        "ground": "g",
        "branches": [
            {"kind": "resistor", "from": "n1", "to": "g", "params": {}}
        ]
    });
    match parse_netlist(&doc.to_string()) {
        Err(NetlistError::Schema { detail, .. }) => {
            assert!(detail.contains("unknown branch kind"), "{detail}");
        }
        other => panic!("expected schema error, got {other:?}"),
    }
}

#[test]
fn foreign_parameter_is_rejected() {
    let doc = json!({
        "nodes": ["g", "n1"],
        "ground": "g",
        "branches": [
            {"kind": "capacitor", "from": "n1", "to": "g", "params": {"c": 1e-12, "l": 1e-9}}
        ]
    });
    assert!(matches!(
        parse_netlist(&doc.to_string()),
        Err(NetlistError::Schema { .. })
    ));
}

#[test]
fn missing_required_parameter_is_rejected() {
    let doc = json!({
        "nodes": ["g", "n1"],
        "ground": "g",
        "branches": [{"kind": "capacitor", "from": "n1", "to": "g", "params": {}}]
    });
    match parse_netlist(&doc.to_string()) {
        Err(NetlistError::Schema { detail, .. }) => {
            assert!(detail.contains("requires params.c"), "{detail}");
        }
        other => panic!("expected schema error, got {other:?}"),
    }
}

#[test]
fn json_syntax_errors_carry_positions() {
    match parse_netlist("{\"nodes\": [\"g\"],\n  \"ground\": ") {
        Err(NetlistError::Schema { line, .. }) => assert!(line >= 1),
        other => panic!("expected schema error, got {other:?}"),
    }
}

#[test]
fn orientation_reverses_branch_direction() {
    let doc = json!({
        "nodes": ["g", "n1"],
        "ground": "g",
        "branches": [
            {"kind": "capacitor", "from": "n1", "to": "g", "orientation": -1,
             "params": {"c": 1e-12}}
        ]
    });
    let net = parse_netlist(&doc.to_string()).expect("valid document");
    let b = &net.branches[0];
    assert_eq!((b.tail(), b.head()), (b.to, b.from));

    let bad = json!({
        "nodes": ["g", "n1"],
        "ground": "g",
        "branches": [
            {"kind": "capacitor", "from": "n1", "to": "g", "orientation": 2,
             "params": {"c": 1e-12}}
        ]
    });
    assert!(matches!(
        parse_netlist(&bad.to_string()),
        Err(NetlistError::Schema { .. })
    ));
}

#[test]
fn gyrator_expands_to_two_port_branches() {
    let doc = json!({
        "nodes": ["g", "n1", "n2"],
        "ground": "g",
        "branches": [
            {"kind": "capacitor", "from": "n1", "to": "g", "params": {"c": 1e-12}},
            {"kind": "capacitor", "from": "n2", "to": "g", "params": {"c": 1e-12}}
        ],
        "couplers": [
            {"kind": "gyrator", "R": 50.0, "ports": [["n1", "g"], ["n2", "g"]]}
        ]
    });
    let net = parse_netlist(&doc.to_string()).expect("valid document");
    assert_eq!(net.couplers.len(), 1);
    assert_eq!(net.couplers[0].kind, CouplerKind::Gyrator);
    assert_eq!(net.couplers[0].port_branches, vec![2, 3]);
    assert_eq!(
        net.branches[2].kind,
        BranchKind::CouplerPort {
            coupler: 0,
            port: 0
        }
    );
}

#[test]
fn gyrator_with_wrong_port_count_is_rejected() {
    let doc = json!({
        "nodes": ["g", "n1", "n2", "n3"],
        "ground": "g",
        "couplers": [
            {"kind": "gyrator", "R": 50.0,
             "ports": [["n1", "g"], ["n2", "g"], ["n3", "g"]]}
        ]
    });
    assert!(matches!(
        parse_netlist(&doc.to_string()),
        Err(NetlistError::Schema { .. })
    ));
}

#[test]
fn circulator_smatrix_shape_is_validated() {
    let base = |smatrix: serde_json::Value| {
        json!({
            "nodes": ["g", "n1", "n2", "n3"],
            "ground": "g",
            "couplers": [
                {"kind": "circulator", "R": 50.0, "smatrix": smatrix,
                 "ports": [["n1", "g"], ["n2", "g"], ["n3", "g"]]}
            ]
        })
    };
    let good = base(json!([[0, 0, -1], [-1, 0, 0], [0, -1, 0]]));
    let net = parse_netlist(&good.to_string()).expect("valid document");
    assert_eq!(net.branches.len(), 3);
    assert_eq!(net.couplers[0].smatrix.as_ref().map(Vec::len), Some(3));

    let bad = base(json!([[0, 0], [0, 0]]));
    assert!(matches!(
        parse_netlist(&bad.to_string()),
        Err(NetlistError::Schema { .. })
    ));
}

#[test]
fn nonpositive_gyration_resistance_is_rejected() {
    let doc = json!({
        "nodes": ["g", "n1", "n2"],
        "ground": "g",
        "couplers": [
            {"kind": "gyrator", "R": -50.0, "ports": [["n1", "g"], ["n2", "g"]]}
        ]
    });
    assert!(matches!(
        parse_netlist(&doc.to_string()),
        Err(NetlistError::NonpositiveParameter { name: "R", .. })
    ));
}

#[test]
fn transformer_turns_shape_is_validated() {
    let doc = json!({
        "nodes": ["g", "a", "b", "c"],
        "ground": "g",
        "transformers": [
            {"turns": [[1.0, -1.0]],
             "left_ports": [["a", "g"], ["b", "g"]],
             "right_ports": [["c", "g"]]}
        ]
    });
    let net = parse_netlist(&doc.to_string()).expect("valid document");
    assert_eq!(net.transformers[0].primary_branches.len(), 2);
    assert_eq!(net.transformers[0].secondary_branches.len(), 1);

    let bad = json!({
        "nodes": ["g", "a", "b", "c"],
        "ground": "g",
        "transformers": [
            {"turns": [[1.0]],
             "left_ports": [["a", "g"], ["b", "g"]],
             "right_ports": [["c", "g"]]}
        ]
    });
    assert!(matches!(
        parse_netlist(&bad.to_string()),
        Err(NetlistError::Schema { .. })
    ));
}

#[test]
fn tline_length_declaration_is_exclusive() {
    let both = json!({
        "nodes": ["g", "n1"],
        "ground": "g",
        "tlines": [
            {"c": 1.6e-10, "l": 4.1e-7, "length": 0.005, "semi_infinite": true,
             "left": {"port": "n1"}, "right": "open"}
        ]
    });
    assert!(matches!(
        parse_netlist(&both.to_string()),
        Err(NetlistError::Schema { .. })
    ));

    let neither = json!({
        "nodes": ["g", "n1"],
        "ground": "g",
        "tlines": [
            {"c": 1.6e-10, "l": 4.1e-7, "left": {"port": "n1"}, "right": "open"}
        ]
    });
    assert!(matches!(
        parse_netlist(&neither.to_string()),
        Err(NetlistError::Schema { .. })
    ));
}

#[test]
fn semi_infinite_line_must_extend_right() {
    let doc = json!({
        "nodes": ["g", "n1"],
        "ground": "g",
        "tlines": [
            {"c": 1.6e-10, "l": 4.1e-7, "semi_infinite": true,
             "left": {"port": "n1"}, "right": "short"}
        ]
    });
    assert!(matches!(
        parse_netlist(&doc.to_string()),
        Err(NetlistError::Schema { .. })
    ));
}

#[test]
fn tline_ports_expand_to_branches() {
    let doc = json!({
        "nodes": ["g", "n1"],
        "ground": "g",
        "branches": [
            {"kind": "capacitor", "from": "n1", "to": "g", "params": {"c": 1e-12}}
        ],
        "tlines": [
            {"c": 1.6e-10, "l": 4.1e-7, "length": 0.0047,
             "left": {"port": "n1"}, "right": "short"}
        ]
    });
    let net = parse_netlist(&doc.to_string()).expect("valid document");
    assert_eq!(net.branches.len(), 2);
    assert!(matches!(net.branches[1].kind, BranchKind::TlPort { .. }));
    assert_eq!(net.tl_segments[0].length, TlLength::Finite(0.0047));
    assert_eq!(net.tl_segments[0].right, TlTermination::Short);
}

#[test]
fn serialization_round_trips_semantically() {
    let doc = json!({
        "metadata": {"title": "round-trip fixture", "revision": 3},
        "ground": "g",
        "nodes": ["g", "n1", "n2", "a", "b"],
        "branches": [
            {"kind": "junction", "from": "n1", "to": "g",
             "params": {"ej": 1.3e-23, "cj": 5e-15, "phi_ext": 2.0e-15}},
            {"kind": "capacitor", "from": "n1", "to": "n2", "params": {"c": 4e-14}},
            {"kind": "capacitor", "from": "n2", "to": "g", "params": {"c": 1e-13}},
            {"kind": "inductor", "from": "n2", "to": "g", "orientation": -1,
             "params": {"l": 2e-9}}
        ],
        "couplers": [
            {"kind": "gyrator", "R": 75.0, "ports": [["n1", "g"], ["n2", "g"]]}
        ],
        "transformers": [
            {"turns": [[0.5, -0.25]],
             "left_ports": [["a", "n2"], ["b", "a"]],
             "right_ports": [["n2", "g"]]}
        ],
        "tlines": [
            {"c": 1.6e-10, "l": 4.1e-7, "semi_infinite": true,
             "left": {"port": "n2"}, "right": "open"}
        ]
    });
    let first = parse_netlist(&doc.to_string()).expect("valid document");
    let text = serialize_netlist(&first);
    let second = parse_netlist(&text).expect("serialized form parses");
    assert_eq!(first, second);
    assert_eq!(first.metadata, second.metadata);
}

#[test]
fn key_order_does_not_matter() {
    let a = json!({
        "nodes": ["g", "n1"],
        "ground": "g",
        "branches": [
            {"kind": "capacitor", "from": "n1", "to": "g", "params": {"c": 1e-12}}
        ]
    });
    let b = json!({
        "branches": [
            {"params": {"c": 1e-12}, "to": "g", "from": "n1", "kind": "capacitor"}
        ],
        "ground": "g",
        "nodes": ["g", "n1"]
    });
    assert_eq!(
        parse_netlist(&a.to_string()).expect("valid"),
        parse_netlist(&b.to_string()).expect("valid")
    );
}

#[test]
fn unknown_top_level_key_is_rejected() {
    let doc = json!({
        "nodes": ["g"],
        "ground": "g",
        "resistors": []
    });
    assert!(matches!(
        parse_netlist(&doc.to_string()),
        Err(NetlistError::Schema { .. })
    ));
}
