//! Equation-of-motion assembly tests.
//!
//! Each circuit is small enough that the kinetic, inductive and gyration
//! blocks are known in closed form; the assembled matrices must match them
//! exactly (the block products involve only sums with a single nonzero
//! term, so no rounding is allowed).

use cqed_lumped::{assemble_matrices, lagrangian_acceleration, LumpedError};
use cqed_netlist::{build_loop_structure, eliminate_transformers, parse_netlist, CircuitNetlist};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

fn net(doc: serde_json::Value) -> CircuitNetlist {
    parse_netlist(&doc.to_string()).expect("valid document")
}

fn assemble(doc: serde_json::Value) -> cqed_lumped::QuadraticModel {
    let net = net(doc);
    let ls = build_loop_structure(&net).expect("valid tree");
    let ls = eliminate_transformers(ls).expect("transformer elimination");
    assemble_matrices(&net, &ls).expect("assembly")
}

fn assert_mat(label: &str, got: &DMatrix<f64>, want: &DMatrix<f64>, tol: f64) {
    assert_eq!(got.nrows(), want.nrows(), "{label}: row count");
    assert_eq!(got.ncols(), want.ncols(), "{label}: column count");
    let dev = (got - want).amax();
    assert!(
        dev <= tol,
        "{label}: deviation {dev:.3e} exceeds {tol:.1e}\ngot {got:.6e}want {want:.6e}"
    );
}

#[test]
fn lc_loop_produces_diagonal_blocks() {
    let qm = assemble(json!({
        "nodes": ["g", "n1"],
        "ground": "g",
        "branches": [
            {"kind": "capacitor", "from": "n1", "to": "g", "params": {"c": 1e-12}},
            {"kind": "inductor", "from": "n1", "to": "g", "params": {"l": 1e-9}}
        ]
    }));
    assert_mat("C", &qm.c, &DMatrix::from_element(1, 1, 1e-12), 0.0);
    assert_mat("M0", &qm.m0, &DMatrix::from_element(1, 1, 1.0 / 1e-9), 0.0);
    assert_mat("G", &qm.g, &DMatrix::zeros(1, 1), 0.0);
    assert_eq!(qm.bias, DVector::zeros(1));
    assert!(qm.junctions.is_empty());
}

#[test]
fn junction_shunt_becomes_the_tree_variable() {
    let qm = assemble(json!({
        "nodes": ["g", "n1"],
        "ground": "g",
        "branches": [
            {"kind": "junction", "from": "n1", "to": "g",
             "params": {"ej": 1.3e-23, "cj": 5e-15, "phi_ext": 2.0e-15}}
        ]
    }));
    assert_mat("C", &qm.c, &DMatrix::from_element(1, 1, 5e-15), 0.0);
    assert_mat("M0", &qm.m0, &DMatrix::zeros(1, 1), 0.0);
    assert_eq!(qm.junctions.len(), 1);
    let j = &qm.junctions[0];
    assert_eq!(j.variable, 0);
    assert_eq!(j.sign.abs(), 1.0);
    assert_eq!(j.josephson_energy, 1.3e-23);
    assert_eq!(j.external_flux * j.sign, 2.0e-15);
}

#[test]
fn inductor_external_flux_biases_the_equilibrium() {
    let (c, l, phi) = (2e-12, 3e-9, 0.7e-15);
    let qm = assemble(json!({
        "nodes": ["g", "n1"],
        "ground": "g",
        "branches": [
            {"kind": "capacitor", "from": "n1", "to": "g", "params": {"c": c}},
            {"kind": "inductor", "from": "n1", "to": "g",
             "params": {"l": l, "phi_ext": phi}}
        ]
    }));
    // bias = F_CL 𝖫⁻¹ φ_ext, and the equilibrium flux equals the loop flux
    // (up to the loop orientation sign).
    assert!((qm.bias[0].abs() - phi / l).abs() <= 1e-15 * (phi / l));
    let equilibrium = DVector::from_element(1, qm.bias[0] * l);
    let acc = lagrangian_acceleration(&qm, &equilibrium, &DVector::zeros(1)).expect("regular C");
    assert!(acc[0].abs() <= 1e-6, "residual acceleration {:.3e}", acc[0]);
}

/// Chain circuit used by the gyrator tests: a shunted junction feeds a
/// series-capacitor chain (with per-cell parallel inductors) into each
/// gyrator port.
fn chain_doc(r: f64, caps: [f64; 3], inds: [f64; 2]) -> serde_json::Value {
    json!({
        "nodes": ["g", "jl", "jr", "xl1", "xl2", "xl3", "xr1", "xr2", "xr3"],
        "ground": "g",
        "branches": [
            {"kind": "junction", "from": "jl", "to": "g",
             "params": {"ej": 1.3e-23, "cj": 6e-15}},
            {"kind": "junction", "from": "jr", "to": "g",
             "params": {"ej": 1.1e-23, "cj": 7e-15}},
            {"kind": "capacitor", "from": "xl1", "to": "jl", "params": {"c": caps[0]}},
            {"kind": "capacitor", "from": "xl2", "to": "xl1", "params": {"c": caps[1]}},
            {"kind": "capacitor", "from": "xl3", "to": "xl2", "params": {"c": caps[2]}},
            {"kind": "capacitor", "from": "xr1", "to": "jr", "params": {"c": caps[0]}},
            {"kind": "capacitor", "from": "xr2", "to": "xr1", "params": {"c": caps[1]}},
            {"kind": "capacitor", "from": "xr3", "to": "xr2", "params": {"c": caps[2]}},
            {"kind": "inductor", "from": "xl2", "to": "xl1", "params": {"l": inds[0]}},
            {"kind": "inductor", "from": "xl3", "to": "xl2", "params": {"l": inds[1]}},
            {"kind": "inductor", "from": "xr2", "to": "xr1", "params": {"l": inds[0]}},
            {"kind": "inductor", "from": "xr3", "to": "xr2", "params": {"l": inds[1]}}
        ],
        "couplers": [
            {"kind": "gyrator", "R": r,
             "ports": [["xl3", "g"], ["xr3", "g"]]}
        ]
    })
}

#[test]
fn gyrator_chain_matches_the_closed_form_blocks() {
    let r = 33.0;
    let caps = [2e-13, 1e-13, 1e-13];
    let inds = [4e-9, 1e-9];
    let qm = assemble(chain_doc(r, caps, inds));
    assert_eq!(qm.dim(), 8);

    // Variables: two junction shunts, then the left and right chains.
    let c_want = DMatrix::from_diagonal(&DVector::from_row_slice(&[
        6e-15, 7e-15, caps[0], caps[1], caps[2], caps[0], caps[1], caps[2],
    ]));
    assert_mat("C", &qm.c, &c_want, 0.0);

    // Each cell inductor loops through its own cell capacitor alone.
    let m_want = DMatrix::from_diagonal(&DVector::from_row_slice(&[
        0.0,
        0.0,
        0.0,
        1.0 / inds[0],
        1.0 / inds[1],
        0.0,
        1.0 / inds[0],
        1.0 / inds[1],
    ]));
    assert_mat("M0", &qm.m0, &m_want, 0.0);

    // Every capacitor of a chain carries the full port current, so the
    // gyration matrix is rank two with homogeneous entries ±1/R.
    let f1 = DVector::from_row_slice(&[1.0, 0.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0]);
    let f2 = DVector::from_row_slice(&[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
    let g_want = (&f1 * f2.transpose() - &f2 * f1.transpose()) / r;
    assert_mat("G", &qm.g, &g_want, 0.0);

    // Exact structure: symmetric C and M0, skew G, zero bias.
    assert_eq!((&qm.c - qm.c.transpose()).amax(), 0.0);
    assert_eq!((&qm.m0 - qm.m0.transpose()).amax(), 0.0);
    assert_eq!((&qm.g + qm.g.transpose()).amax(), 0.0);
    assert_eq!(qm.bias.amax(), 0.0);

    // Each junction loop closes through its own shunt.
    assert_eq!(qm.junctions.len(), 2);
    assert_eq!(qm.junctions[0].variable, 0);
    assert_eq!(qm.junctions[1].variable, 1);
    for j in &qm.junctions {
        assert_eq!(j.sign.abs(), 1.0);
    }
}

#[test]
fn gyration_entries_follow_the_declared_port_orientation() {
    let doc = |ports: serde_json::Value| {
        json!({
            "nodes": ["g", "n1", "n2"],
            "ground": "g",
            "branches": [
                {"kind": "capacitor", "from": "n1", "to": "g", "params": {"c": 1e-12}},
                {"kind": "capacitor", "from": "n2", "to": "g", "params": {"c": 2e-12}}
            ],
            "couplers": [{"kind": "gyrator", "R": 50.0, "ports": ports}]
        })
    };

    // Both ports forward: current into port 1 follows the voltage at
    // port 2, G = (1/R) [[0, 1], [−1, 0]].
    let qm = assemble(doc(json!([["n1", "g"], ["n2", "g"]])));
    let want = DMatrix::from_row_slice(2, 2, &[0.0, 0.02, -0.02, 0.0]);
    assert_mat("G forward", &qm.g, &want, 0.0);

    // Reversing one port's terminals flips the sign of the coupling.
    let qm = assemble(doc(json!([["n1", "g"], ["g", "n2"]])));
    assert_mat("G reversed", &qm.g, &(-want), 0.0);
}

#[test]
fn explicit_circulator_scattering_is_cayley_transformed() {
    // Scattering = plane rotation by θ on ports (1, 2), identity on port 3.
    // The admittance of a rotation block is tan(θ/2)/R times the 2×2 skew
    // unit, and the +1 eigenvalue on port 3 decouples it.
    let theta: f64 = std::f64::consts::FRAC_PI_3;
    let (c, s) = (theta.cos(), theta.sin());
    let qm = assemble(json!({
        "nodes": ["g", "n1", "n2", "n3"],
        "ground": "g",
        "branches": [
            {"kind": "capacitor", "from": "n1", "to": "g", "params": {"c": 1e-12}},
            {"kind": "capacitor", "from": "n2", "to": "g", "params": {"c": 1e-12}},
            {"kind": "capacitor", "from": "n3", "to": "g", "params": {"c": 1e-12}}
        ],
        "couplers": [
            {"kind": "circulator", "R": 50.0,
             "smatrix": [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]],
             "ports": [["n1", "g"], ["n2", "g"], ["n3", "g"]]}
        ]
    }));
    let t = (theta / 2.0).tan() / 50.0;
    let want = DMatrix::from_row_slice(
        3,
        3,
        &[0.0, t, 0.0, -t, 0.0, 0.0, 0.0, 0.0, 0.0],
    );
    assert_mat("G", &qm.g, &want, 1e-13 * t);
}

#[test]
fn ideal_circulator_has_no_admittance() {
    let net = net(json!({
        "nodes": ["g", "n1", "n2", "n3"],
        "ground": "g",
        "branches": [
            {"kind": "capacitor", "from": "n1", "to": "g", "params": {"c": 1e-12}},
            {"kind": "capacitor", "from": "n2", "to": "g", "params": {"c": 1e-12}},
            {"kind": "capacitor", "from": "n3", "to": "g", "params": {"c": 1e-12}}
        ],
        "couplers": [
            {"kind": "circulator", "R": 50.0,
             "ports": [["n1", "g"], ["n2", "g"], ["n3", "g"]]}
        ]
    }));
    let ls = build_loop_structure(&net).expect("valid tree");
    let ls = eliminate_transformers(ls).expect("no transformers");
    let err = assemble_matrices(&net, &ls).expect_err("no admittance description");
    assert!(
        matches!(err, LumpedError::NoAdmittance { coupler: 0, .. }),
        "unexpected error {err:?}"
    );
    let text = err.to_string();
    assert!(text.contains("admittance"), "message: {text}");
    assert!(text.contains("frozen-variable"), "message: {text}");
}

#[test]
fn transformer_winding_reflects_into_the_inductor_loop() {
    let (c1, c2, l, n) = (1e-12, 2e-12, 3e-9, 0.6);
    let qm = assemble(json!({
        "nodes": ["g", "n1", "n2", "a1"],
        "ground": "g",
        "branches": [
            {"kind": "capacitor", "from": "n1", "to": "g", "params": {"c": c1}},
            {"kind": "capacitor", "from": "n2", "to": "g", "params": {"c": c2}},
            {"kind": "inductor", "from": "a1", "to": "g", "params": {"l": l}}
        ],
        "transformers": [
            {"turns": [[n]],
             "left_ports": [["a1", "n1"]],
             "right_ports": [["n2", "g"]]}
        ]
    }));
    assert_eq!(qm.dim(), 2);
    let c_want = DMatrix::from_diagonal(&DVector::from_row_slice(&[c1, c2]));
    assert_mat("C", &qm.c, &c_want, 0.0);

    // The single inductor loop threads the primary winding, so the loop
    // vector is (1, ±n) and M0 is the rank-one reflected inverse inductance.
    let tol = 1e-15 / l;
    assert!((qm.m0[(0, 0)] - 1.0 / l).abs() <= tol);
    assert!((qm.m0[(1, 1)] - n * n / l).abs() <= tol);
    assert!((qm.m0[(0, 1)].abs() - n / l).abs() <= tol);
    assert_eq!(qm.m0[(0, 1)], qm.m0[(1, 0)]);
    let det = qm.m0[(0, 0)] * qm.m0[(1, 1)] - qm.m0[(0, 1)] * qm.m0[(1, 0)];
    assert!(det.abs() <= 1e-12 / (l * l), "rank-one block, det {det:.3e}");
}

#[test]
fn transmission_line_ports_are_rejected() {
    let net = net(json!({
        "nodes": ["g", "n1"],
        "ground": "g",
        "branches": [
            {"kind": "capacitor", "from": "n1", "to": "g", "params": {"c": 1e-12}}
        ],
        "tlines": [
            {"c": 249e-12, "l": 623e-9, "length": 4.7e-3,
             "left": {"port": "n1"}, "right": "short"}
        ]
    }));
    let ls = build_loop_structure(&net).expect("valid tree");
    let ls = eliminate_transformers(ls).expect("no transformers");
    let err = assemble_matrices(&net, &ls).expect_err("distributed elements rejected here");
    let text = err.to_string();
    assert!(text.contains("transmission-line"), "message: {text}");
}

#[test]
fn effective_blocks_are_required() {
    let net = net(json!({
        "nodes": ["g", "n1"],
        "ground": "g",
        "branches": [
            {"kind": "capacitor", "from": "n1", "to": "g", "params": {"c": 1e-12}},
            {"kind": "inductor", "from": "n1", "to": "g", "params": {"l": 1e-9}}
        ]
    }));
    let ls = build_loop_structure(&net).expect("valid tree");
    let err = assemble_matrices(&net, &ls).expect_err("effective blocks missing");
    assert!(matches!(err, LumpedError::MissingEffectiveBlocks));
}

#[test]
fn random_chain_parameters_keep_the_exact_block_structure() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_a55e);
    for _ in 0..6 {
        let r = rng.gen_range(1.0..200.0);
        let caps = [
            rng.gen_range(1e-14..1e-12),
            rng.gen_range(1e-14..1e-12),
            rng.gen_range(1e-14..1e-12),
        ];
        let inds = [rng.gen_range(1e-10..1e-8), rng.gen_range(1e-10..1e-8)];
        let qm = assemble(chain_doc(r, caps, inds));

        assert_eq!((&qm.c - qm.c.transpose()).amax(), 0.0);
        assert_eq!((&qm.m0 - qm.m0.transpose()).amax(), 0.0);
        assert_eq!((&qm.g + qm.g.transpose()).amax(), 0.0);
        for i in 0..qm.dim() {
            assert!(qm.c[(i, i)] > 0.0);
        }
        let min_eig = qm.m0.clone().symmetric_eigen().eigenvalues.min();
        assert!(
            min_eig >= -1e-12 * qm.m0.amax(),
            "M0 must stay positive semidefinite, min eigenvalue {min_eig:.3e}"
        );

        let f1 = DVector::from_row_slice(&[1.0, 0.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0]);
        let f2 = DVector::from_row_slice(&[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        let g_want = (&f1 * f2.transpose() - &f2 * f1.transpose()) / r;
        assert_mat("G", &qm.g, &g_want, 0.0);
    }
}
