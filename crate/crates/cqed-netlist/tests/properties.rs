//! Randomized structural invariants of the loop analysis.
//!
//! Circuits are generated with a guaranteed capacitive spanning tree plus
//! random inductor, junction, and gyrator chords, so every sample must admit
//! a valid tree; the checks then pin the invariants that the loop matrix has
//! to satisfy on all of them.

use cqed_netlist::{
    build_loop_structure, parse_netlist, serialize_netlist, verify_current_law, BranchKind,
    ChordClass,
};
use proptest::prelude::*;
use serde_json::json;

#[derive(Debug, Clone)]
enum JunctionPlan {
    /// Junction across the endpoints of tree capacitor `cap`.
    Parallel { cap: usize, ej: f64 },
    /// Junction from a fresh leaf node down to `attach`, shunted through its
    /// own junction capacitance.
    Leaf { attach: usize, ej: f64, cj: f64 },
}

#[derive(Debug, Clone)]
struct CircuitPlan {
    n_nodes: usize,
    /// parents[i] is the tree parent of node i + 1.
    parents: Vec<usize>,
    cap_values: Vec<f64>,
    cap_flip: Vec<bool>,
    /// (from, to, inductance, flip); from != to after normalization.
    inductors: Vec<(usize, usize, f64, bool)>,
    junctions: Vec<JunctionPlan>,
    /// ((a, b), (c, d), resistance) with a != b and c != d.
    gyrator: Option<(usize, usize, usize, usize, f64)>,
}

fn node_name(i: usize) -> String {
    if i == 0 {
        "g".to_owned()
    } else {
        format!("n{i}")
    }
}

fn distinct(a: usize, b: usize, n: usize) -> (usize, usize) {
    if a == b {
        (a, (b + 1) % n)
    } else {
        (a, b)
    }
}

fn plan_to_doc(plan: &CircuitPlan) -> serde_json::Value {
    let n = plan.n_nodes;
    let mut nodes: Vec<String> = (0..n).map(node_name).collect();
    let mut branches = Vec::new();
    for (i, (&p, (&c, &flip))) in plan
        .parents
        .iter()
        .zip(plan.cap_values.iter().zip(&plan.cap_flip))
        .enumerate()
    {
        let (from, to) = if flip { (p, i + 1) } else { (i + 1, p) };
        branches.push(json!({
            "kind": "capacitor",
            "from": node_name(from),
            "to": node_name(to),
            "params": {"c": c}
        }));
    }
    for &(a, b, l, flip) in &plan.inductors {
        let (a, b) = distinct(a, b, n);
        let (from, to) = if flip { (b, a) } else { (a, b) };
        branches.push(json!({
            "kind": "inductor",
            "from": node_name(from),
            "to": node_name(to),
            "params": {"l": l}
        }));
    }
    for (k, j) in plan.junctions.iter().enumerate() {
        match *j {
            JunctionPlan::Parallel { cap, ej } => {
                let cap = cap % plan.parents.len().max(1);
                let child = cap + 1;
                let parent = plan.parents[cap];
                branches.push(json!({
                    "kind": "junction",
                    "from": node_name(child),
                    "to": node_name(parent),
                    "params": {"ej": ej}
                }));
            }
            JunctionPlan::Leaf { attach, ej, cj } => {
                let leaf = format!("j{k}");
                nodes.push(leaf.clone());
                branches.push(json!({
                    "kind": "junction",
                    "from": leaf,
                    "to": node_name(attach % n),
                    "params": {"ej": ej, "cj": cj}
                }));
            }
        }
    }
    let mut doc = json!({
        "nodes": nodes,
        "ground": "g",
        "branches": branches
    });
    if let Some((a, b, c, d, r)) = plan.gyrator {
        let (a, b) = distinct(a, b, n);
        let (c, d) = distinct(c, d, n);
        doc["couplers"] = json!([{
            "kind": "gyrator",
            "R": r,
            "ports": [[node_name(a), node_name(b)], [node_name(c), node_name(d)]]
        }]);
    }
    doc
}

fn plan_strategy() -> impl Strategy<Value = CircuitPlan> {
    (2usize..8).prop_flat_map(|n| {
        let parents: Vec<_> = (1..n).map(|i| 0..i).collect();
        let cap_values = prop::collection::vec(1e-13..1e-11f64, n - 1);
        let cap_flip = prop::collection::vec(any::<bool>(), n - 1);
        let inductors = prop::collection::vec(
            (0..n, 0..n, 1e-10..1e-8f64, any::<bool>()),
            0..4,
        );
        let junction = prop_oneof![
            (0..8usize, 1e-24..1e-22f64)
                .prop_map(|(cap, ej)| JunctionPlan::Parallel { cap, ej }),
            (0..n, 1e-24..1e-22f64, 1e-15..1e-14f64)
                .prop_map(|(attach, ej, cj)| JunctionPlan::Leaf { attach, ej, cj }),
        ];
        let junctions = prop::collection::vec(junction, 0..3);
        let gyrator = prop::option::of((0..n, 0..n, 0..n, 0..n, 1.0..200.0f64));
        (
            Just(n),
            parents,
            cap_values,
            cap_flip,
            inductors,
            junctions,
            gyrator,
        )
            .prop_map(
                |(n_nodes, parents, cap_values, cap_flip, inductors, junctions, gyrator)| {
                    CircuitPlan {
                        n_nodes,
                        parents,
                        cap_values,
                        cap_flip,
                        inductors,
                        junctions,
                        gyrator,
                    }
                },
            )
    })
}

fn class_rank(class: ChordClass) -> usize {
    match class {
        ChordClass::Junction => 0,
        ChordClass::Inductor => 1,
        ChordClass::CouplerPort => 2,
        ChordClass::TransformerSecondary => 3,
        ChordClass::TlPort => 4,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn generated_circuits_satisfy_loop_invariants(plan in plan_strategy()) {
        let doc = plan_to_doc(&plan);
        let net = parse_netlist(&doc.to_string()).expect("generated document parses");
        let ls = build_loop_structure(&net).expect("generated circuit has a tree");

        // The tree spans the circuit: one branch per non-ground node, and
        // (with no transformers here) every tree branch is a capacitor,
        // every capacitor is a tree branch.
        let n_caps = net
            .branches
            .iter()
            .filter(|b| matches!(b.kind, BranchKind::Capacitor { .. }))
            .count();
        prop_assert_eq!(ls.tree.len(), net.nodes.len() - 1);
        prop_assert_eq!(ls.capacitor_rows, n_caps);
        prop_assert_eq!(ls.tree.len(), n_caps);
        for &id in &ls.tree {
            let is_capacitor = matches!(net.branches[id].kind, BranchKind::Capacitor { .. });
            prop_assert!(is_capacitor, "tree branch {} is not a capacitor", id);
        }
        prop_assert_eq!(ls.tree.len() + ls.chords.len(), net.branches.len());

        // Loop-matrix entries are signs.
        for row in ls.f.to_rows() {
            for x in row {
                prop_assert!((-1..=1).contains(&x));
            }
        }

        // Chords come grouped by class.
        let ranks: Vec<_> = ls.chord_classes.iter().map(|&c| class_rank(c)).collect();
        prop_assert!(ranks.windows(2).all(|w| w[0] <= w[1]));

        // Every junction loop closes through exactly one capacitor.
        for (col, &class) in ls.chord_classes.iter().enumerate() {
            if class == ChordClass::Junction {
                let nonzeros: Vec<_> = (0..ls.tree.len())
                    .filter(|&r| ls.f.at(r, col) != 0)
                    .collect();
                prop_assert_eq!(nonzeros.len(), 1);
                prop_assert!(nonzeros[0] < ls.capacitor_rows);
            }
        }

        // Arbitrary integer chord currents balance at every node.
        let currents: Vec<i64> = (0..ls.chords.len())
            .map(|i| ((i * 37 + 11) % 19) as i64 - 9)
            .collect();
        prop_assert!(verify_current_law(&net, &ls, &currents));

        // Serialization round-trips to the identical loop structure.
        let reparsed = parse_netlist(&serialize_netlist(&net)).expect("round-trip parses");
        let ls2 = build_loop_structure(&reparsed).expect("round-trip has a tree");
        prop_assert_eq!(&ls2, &ls);
    }
}
