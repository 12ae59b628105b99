//! Structured-inversion tests: block inverses against dense LU oracles,
//! agreement of the independent rank-one route, coefficient identities of
//! the port-structured closed form, and the saturation of the dressed
//! network block as the mode count grows.

use cqed_lumped::{
    invert_block, invert_ported, invert_rank_one, port_coefficient_matrices, LumpedError,
};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_spd(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let m = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    #[allow(clippy::cast_precision_loss)]
    let shift = n as f64;
    &m * m.transpose() + DMatrix::identity(n, n) * shift
}

fn rel_err(got: &DMatrix<f64>, want: &DMatrix<f64>) -> f64 {
    (got - want).amax() / want.amax()
}

/// Dense symmetric bordered matrix `[[A, D], [Dᵀ, C₁]]`.
fn bordered(a: &DMatrix<f64>, c1: &DMatrix<f64>, d: &DMatrix<f64>) -> DMatrix<f64> {
    let (na, n1) = (a.nrows(), c1.nrows());
    let mut m = DMatrix::zeros(na + n1, na + n1);
    m.view_mut((0, 0), (na, na)).copy_from(a);
    m.view_mut((0, na), (na, n1)).copy_from(d);
    m.view_mut((na, 0), (n1, na)).copy_from(&d.transpose());
    m.view_mut((na, na), (n1, n1)).copy_from(c1);
    m
}

fn dense_inverse(m: &DMatrix<f64>) -> DMatrix<f64> {
    m.clone().lu().try_inverse().expect("oracle inverse")
}

#[test]
fn zero_coupling_returns_the_block_diagonal_inverse() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = random_spd(&mut rng, 4);
    let c1 = random_spd(&mut rng, 7);
    let d = DMatrix::zeros(4, 7);
    let inv = invert_block(&a, &c1, &d, 2).expect("regular");
    assert!(rel_err(&inv.top_left, &dense_inverse(&a)) < 1e-12);
    assert!(rel_err(&inv.bottom_right, &dense_inverse(&c1)) < 1e-12);
    assert_eq!(inv.top_right.amax(), 0.0);
    assert_eq!(inv.bottom_left.amax(), 0.0);
}

#[test]
fn rank_one_block_inverse_matches_the_dense_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let a = random_spd(&mut rng, 5);
    let n1 = 200;
    let c1 = DMatrix::from_diagonal(&DVector::from_fn(n1, |_, _| rng.gen_range(1.0..3.0)));
    let p = DVector::from_fn(5, |_, _| rng.gen_range(-1.0..1.0));
    let q = DVector::from_fn(n1, |_, _| rng.gen_range(-0.2..0.2));
    let d = &p * q.transpose();

    let m = bordered(&a, &c1, &d);
    let want = dense_inverse(&m);
    let inv = invert_block(&a, &c1, &d, 1).expect("regular").dense();
    assert!(rel_err(&inv, &want) < 1e-10, "rel {:.3e}", rel_err(&inv, &want));

    // The scalar-pivot route is an independent evaluation; both must agree
    // with each other even more tightly than with the dense oracle.
    let one = invert_rank_one(&a, &c1, &d).expect("regular").dense();
    assert!(rel_err(&one, &inv) < 1e-12);
    assert!(rel_err(&one, &want) < 1e-10);
}

#[test]
fn rank_three_block_inverse_matches_the_dense_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a = random_spd(&mut rng, 8);
    let n1 = 300;
    let c1 = random_spd(&mut rng, n1);
    let mut d = DMatrix::zeros(8, n1);
    for _ in 0..3 {
        let p = DVector::from_fn(8, |_, _| rng.gen_range(-1.0..1.0));
        let q = DVector::from_fn(n1, |_, _| rng.gen_range(-0.05..0.05));
        d += &p * q.transpose();
    }
    let m = bordered(&a, &c1, &d);
    let want = dense_inverse(&m);
    let inv = invert_block(&a, &c1, &d, 3).expect("regular").dense();
    assert!(rel_err(&inv, &want) < 1e-10, "rel {:.3e}", rel_err(&inv, &want));
}

#[test]
fn higher_rank_coupling_than_declared_is_detected() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let a = random_spd(&mut rng, 4);
    let c1 = random_spd(&mut rng, 6);
    let d = DMatrix::from_fn(4, 6, |_, _| rng.gen_range(-0.1..0.1));
    let err = invert_block(&a, &c1, &d, 1).expect_err("full-rank coupling");
    assert!(matches!(err, LumpedError::RankMismatch { expected: 1, .. }));
    let err = invert_rank_one(&a, &c1, &d).expect_err("full-rank coupling");
    assert!(matches!(err, LumpedError::RankMismatch { expected: 1, .. }));
}

#[test]
fn vanishing_pivot_is_reported_as_frozen() {
    // With A = C₁ = [1] and D = [1] the pivot τ = 1 − 1 vanishes: the
    // matrix [[1, 1], [1, 1]] has a frozen direction.
    let a = DMatrix::from_element(1, 1, 1.0);
    let c1 = DMatrix::from_element(1, 1, 1.0);
    let d = DMatrix::from_element(1, 1, 1.0);
    let err = invert_rank_one(&a, &c1, &d).expect_err("frozen direction");
    assert!(matches!(err, LumpedError::NearSingularPivot { .. }));
    let err = invert_block(&a, &c1, &d, 1).expect_err("frozen direction");
    assert!(matches!(err, LumpedError::NearSingularPivot { .. }));
    let text = err.to_string();
    assert!(text.contains("frozen"), "message: {text}");
}

/// Builds the port-structured matrix
/// `[[A, −Σ aᵢuᵢᵀ], [−Σ uᵢaᵢᵀ, C_n + Σ uᵢuᵢᵀ]]`.
fn ported_matrix(
    a: &DMatrix<f64>,
    c_n: &DMatrix<f64>,
    ports: &[(DVector<f64>, DVector<f64>)],
) -> DMatrix<f64> {
    let (na, n1) = (a.nrows(), c_n.nrows());
    let mut d = DMatrix::zeros(na, n1);
    let mut c_mode = c_n.clone();
    for (av, uv) in ports {
        d -= av * uv.transpose();
        c_mode += uv * uv.transpose();
    }
    bordered(a, &c_mode, &d)
}

#[test]
fn ported_inverse_matches_the_dense_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let na = 3;
    let n1 = 60;
    let a = random_spd(&mut rng, na);
    let c_n = random_spd(&mut rng, n1);
    let ports: Vec<(DVector<f64>, DVector<f64>)> = (0..2)
        .map(|_| {
            (
                DVector::from_fn(na, |_, _| rng.gen_range(-0.5..0.5)),
                DVector::from_fn(n1, |_, _| rng.gen_range(-0.5..0.5)),
            )
        })
        .collect();

    let m = ported_matrix(&a, &c_n, &ports);
    let want = dense_inverse(&m);
    let inv = invert_ported(&a, &c_n, &ports).expect("regular").dense();
    assert!(rel_err(&inv, &want) < 1e-10, "rel {:.3e}", rel_err(&inv, &want));

    let coef = port_coefficient_matrices(&a, &c_n, &ports).expect("regular");
    let scale = coef.gamma.amax();
    assert!(
        (&coef.theta - coef.gamma.transpose()).amax() <= 1e-12 * scale,
        "theta must be the transposed cross coefficient"
    );
    // Both Gram matrices are symmetric by construction.
    assert!((&coef.mu - coef.mu.transpose()).amax() <= 1e-14 * coef.mu.amax());
    assert!((&coef.nu - coef.nu.transpose()).amax() <= 1e-14 * coef.nu.amax());
}

/// Two-port resonator dressing: network block `diag(C_Σ1, C_Σ2)`, each port
/// attached to every mode with alternating-sign patterns, mode block
/// `diag(C₀, C₀/2, …)`.  As modes are added, the dressed network inverse
/// saturates at `diag(1/C_J1, 1/C_J2)` with an `O(1/N)` truncation error.
#[test]
fn two_port_dressing_saturates_at_the_bare_junction_capacitance() {
    let c_c1: f64 = 40.3e-15;
    let c_j1: f64 = 5.13e-15;
    let c_c2 = c_c1 / 2.0;
    let c_j2 = c_j1 / 2.0;
    let c0 = 249e-12 * 9.4e-3;
    let a = DMatrix::from_diagonal(&DVector::from_row_slice(&[c_c1 + c_j1, c_c2 + c_j2]));

    // Dressed coefficient Ξᵢᵢ and reconstructed (C⁻¹)ᵢᵢ at mode count n.
    let eval = |n: usize| -> (f64, f64, f64, f64) {
        let c_n = DMatrix::from_diagonal(&DVector::from_fn(n, |k, _| {
            if k == 0 {
                c0
            } else {
                c0 / 2.0
            }
        }));
        let u1 = DVector::from_fn(n, |_, _| c_c1.sqrt());
        let u2 = DVector::from_fn(n, |k, _| if k % 2 == 0 { c_c2.sqrt() } else { -c_c2.sqrt() });
        let a1 = DVector::from_row_slice(&[c_c1.sqrt(), 0.0]);
        let a2 = DVector::from_row_slice(&[0.0, c_c2.sqrt()]);
        let ports = vec![(a1, u1), (a2, u2)];
        let coef = port_coefficient_matrices(&a, &c_n, &ports).expect("regular");
        let scale = coef.gamma.amax();
        assert!((&coef.theta - coef.gamma.transpose()).amax() <= 1e-12 * scale);
        let inv = invert_ported(&a, &c_n, &ports).expect("regular");
        (
            coef.xi[(0, 0)],
            coef.xi[(1, 1)],
            inv.top_left[(0, 0)],
            inv.top_left[(1, 1)],
        )
    };

    let (xi1_a, xi2_a, ci1_a, ci2_a) = eval(512);
    let (xi1_b, xi2_b, ci1_b, ci2_b) = eval(1024);
    let (xi1_c, xi2_c, ci1_c, ci2_c) = eval(2048);

    // The port Grams grow linearly in the mode count, so every dressed
    // quantity approaches its limit as a Möbius function of N: the signed
    // relative error obeys e_N = -a/(N + b), i.e. 1/e_N is affine in N.
    // That reciprocal linearity is sharp evidence for both the saturation
    // law and the limit itself — shifting the limit by 1% already bends
    // 1/e_N by more than 5%.
    let xi1_lim = (c_c1 + c_j1) / c_j1;
    let xi2_lim = (c_c2 + c_j2) / c_j2;
    for (lim, seq) in [
        (xi1_lim, [xi1_a, xi1_b, xi1_c]),
        (xi2_lim, [xi2_a, xi2_b, xi2_c]),
        (1.0 / c_j1, [ci1_a, ci1_b, ci1_c]),
        (1.0 / c_j2, [ci2_a, ci2_b, ci2_c]),
    ] {
        let e: Vec<f64> = seq.iter().map(|x| (x - lim) / lim).collect();
        assert!(
            e.iter().all(|&err| err < 0.0),
            "truncation approaches the limit from below: {e:?}"
        );
        assert!(
            e[0].abs() > e[1].abs() && e[1].abs() > e[2].abs(),
            "errors must shrink: {e:?}"
        );
        assert!(e[2].abs() < 0.25, "largest mode count too far off: {e:?}");
        let slope_ab = (1.0 / e[1] - 1.0 / e[0]) / 512.0;
        let slope_bc = (1.0 / e[2] - 1.0 / e[1]) / 1024.0;
        let bend = (slope_bc / slope_ab - 1.0).abs();
        assert!(
            bend < 0.03,
            "reciprocal error must be linear in N (bend {bend:.2e}, errors {e:?})"
        );
    }
}

#[test]
fn seeded_block_inverses_agree_with_dense_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for case in 0..12 {
        let na = rng.gen_range(2..7);
        let n1 = rng.gen_range(20..160);
        let rank = rng.gen_range(1..4);
        let a = random_spd(&mut rng, na);
        let c1 = random_spd(&mut rng, n1);
        let mut d = DMatrix::zeros(na, n1);
        for _ in 0..rank {
            let p = DVector::from_fn(na, |_, _| rng.gen_range(-1.0..1.0));
            let q = DVector::from_fn(n1, |_, _| rng.gen_range(-0.05..0.05));
            d += &p * q.transpose();
        }
        let want = dense_inverse(&bordered(&a, &c1, &d));
        let inv = invert_block(&a, &c1, &d, rank).expect("regular").dense();
        let rel = rel_err(&inv, &want);
        assert!(rel < 1e-10, "case {case}: rel {rel:.3e}");
        if rank == 1 {
            let one = invert_rank_one(&a, &c1, &d).expect("regular").dense();
            assert!(rel_err(&one, &inv) < 1e-12, "case {case}: route disagreement");
        }
    }
}
