//! Scattering-spectrum classification tests.

use approx::assert_abs_diff_eq;
use cqed_nonreciprocal::{classify, NonreciprocalError, ScatteringDevice};
use nalgebra::{dmatrix, DMatrix};
use std::f64::consts::PI;

#[test]
fn three_port_circulator_has_z_but_no_y() {
    let dev = ScatteringDevice::ideal_circulator(3, 50.0).unwrap();
    let class = classify(&dev).unwrap();
    assert!(!class.has_y);
    assert!(class.has_z);
}

#[test]
fn four_port_circulator_has_neither_description() {
    let dev = ScatteringDevice::ideal_circulator(4, 50.0).unwrap();
    let class = classify(&dev).unwrap();
    assert!(!class.has_y);
    assert!(!class.has_z);
}

#[test]
fn gyrator_has_both_descriptions() {
    let dev = ScatteringDevice::new(dmatrix![0.0, 1.0; -1.0, 0.0], 50.0).unwrap();
    let class = classify(&dev).unwrap();
    assert!(class.has_y);
    assert!(class.has_z);
    // Eigenvalues ±i, sorted by ascending phase.
    assert_eq!(class.eigenvalues.len(), 2);
    assert_abs_diff_eq!(class.eigenvalues[0].re, 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(class.eigenvalues[0].im, -1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(class.eigenvalues[1].im, 1.0, epsilon = 1e-12);
}

#[test]
fn identity_is_an_open_device() {
    let dev = ScatteringDevice::new(DMatrix::identity(3, 3), 50.0).unwrap();
    let class = classify(&dev).unwrap();
    assert!(class.has_y);
    assert!(!class.has_z);
    assert!(class
        .eigenvalues
        .iter()
        .all(|l| l.re == 1.0 && l.im == 0.0));
}

#[test]
fn circulator_family_eigenvalue_membership_by_port_count() {
    for n in 2..=8 {
        let dev = ScatteringDevice::ideal_circulator(n, 50.0).unwrap();
        let class = classify(&dev).unwrap();
        // -1 is present for every port count; +1 only for even ones.
        assert!(!class.has_y, "N={n} should have a -1 eigenvalue");
        assert_eq!(class.has_z, n % 2 == 1, "N={n} +1 membership");
        assert_eq!(class.eigenvalues.len(), n);
        for l in &class.eigenvalues {
            assert_abs_diff_eq!(l.norm(), 1.0, epsilon = 1e-12);
        }
    }
}

#[test]
fn three_port_phases_are_thirds_of_the_half_circle() {
    let dev = ScatteringDevice::ideal_circulator(3, 50.0).unwrap();
    let class = classify(&dev).unwrap();
    let phases: Vec<f64> = class.eigenvalues.iter().map(|l| l.im.atan2(l.re)).collect();
    assert_abs_diff_eq!(phases[0], -PI / 3.0, epsilon = 1e-12);
    assert_abs_diff_eq!(phases[1], PI / 3.0, epsilon = 1e-12);
    assert_abs_diff_eq!(phases[2].abs(), PI, epsilon = 1e-12);
}

#[test]
fn non_orthogonal_matrix_is_rejected() {
    let err = ScatteringDevice::new(dmatrix![1.0, 1.0; 0.0, 1.0], 50.0).unwrap_err();
    match err {
        NonreciprocalError::NotOrthogonal { deviation } => assert!(deviation > 0.5),
        other => panic!("expected orthogonality rejection, got {other:?}"),
    }
}

#[test]
fn nonpositive_resistance_is_rejected() {
    for r in [0.0, -50.0, f64::NAN] {
        assert!(matches!(
            ScatteringDevice::new(DMatrix::identity(2, 2), r),
            Err(NonreciprocalError::NonpositiveResistance { .. })
        ));
    }
}

#[test]
fn empty_and_rectangular_matrices_are_rejected() {
    assert!(matches!(
        ScatteringDevice::new(DMatrix::zeros(0, 0), 50.0),
        Err(NonreciprocalError::BadShape { .. })
    ));
    assert!(matches!(
        ScatteringDevice::new(DMatrix::zeros(2, 3), 50.0),
        Err(NonreciprocalError::BadShape { .. })
    ));
}
