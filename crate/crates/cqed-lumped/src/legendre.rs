//! Legendre transform and canonical quantization of quadratic models.
//!
//! Junction variables are split from the harmonic sector.  The harmonic
//! phase-space form in `(Φ, Q)` ordering,
//!
//! ```text
//! H_m = [[ M₀ + ¼GᵀC⁻¹G,  −½GᵀC⁻¹ ],
//!        [ −½C⁻¹G,          C⁻¹    ]],
//! ```
//!
//! restricted to the harmonic variables, is brought to symplectic normal
//! form.  When it is positive definite this is a Williamson normal form
//! with transform `S`; otherwise the positive frequencies are read from the
//! imaginary parts of the spectrum of `J·H`, and the null directions are
//! classified by the rank of the symplectic form restricted to them:
//! each canonical null pair is a zero mode (conserved momentum), each
//! unpaired null direction a free-particle sector.
//!
//! Junction–mode couplings are read from the junction rows of `H_m` mapped
//! through `S`: a row coefficient `c` against normal mode `k` couples the
//! junction operator with the mode quadrature at
//!
//! ```text
//! ħ g = scale · √(ħ/2) · √(c_x² + c_p²),
//! ```
//!
//! where `scale` is the junction-operator normalization: `Φ_q/2π` for the
//! flux (phase) operator and `2e` for the charge (number) operator of a
//! flux-basis circuit; the charge-basis dual swaps the roles.  Charging
//! energies come from the diagonal of the full kinetic inverse,
//! `E_C = e²/2 · (C⁻¹)_vv`.

use nalgebra::{DMatrix, DVector};

use cqed_symplectic::{symplectic_form, williamson_diagonalize};

use crate::constants::{FLUX_QUANTUM, REDUCED_PLANCK};
use crate::error::LumpedError;
use crate::model::{
    symmetrize, AnharmonicTerm, Coupling, CouplingKind, QuadraticModel, QuantizedHamiltonian,
};

/// Relative eigenvalue threshold below which a direction counts as null.
pub(crate) const NULL_RTOL: f64 = 1e-12;

/// Relative threshold for treating a phase-space eigenvalue as zero.
const PHASE_NULL_RTOL: f64 = 1e-11;

/// Orthonormal null-space basis of a symmetric matrix, by relative
/// eigenvalue threshold.
pub(crate) fn symmetric_null(m: &DMatrix<f64>) -> Vec<DVector<f64>> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let eig = m.clone().symmetric_eigen();
    let max = eig.eigenvalues.amax();
    (0..eig.eigenvalues.len())
        .filter(|&k| eig.eigenvalues[k].abs() <= NULL_RTOL * max)
        .map(|k| eig.eigenvectors.column(k).into_owned())
        .collect()
}

/// Full phase-space quadratic form in `(Φ, Q)` ordering.
fn phase_space_form(
    c_inv: &DMatrix<f64>,
    g: &DMatrix<f64>,
    m0: &DMatrix<f64>,
) -> DMatrix<f64> {
    let n = c_inv.nrows();
    let gc = c_inv * g; // C⁻¹G
    let tl = m0 + 0.25 * g.transpose() * &gc;
    let mut h = DMatrix::zeros(2 * n, 2 * n);
    h.view_mut((0, 0), (n, n)).copy_from(&tl);
    h.view_mut((0, n), (n, n)).copy_from(&(-0.5 * gc.transpose()));
    h.view_mut((n, 0), (n, n)).copy_from(&(-0.5 * &gc));
    h.view_mut((n, n), (n, n)).copy_from(c_inv);
    symmetrize(&h)
}

/// Restriction of a `2n×2n` phase-space form to a coordinate subset,
/// keeping `(x…, p…)` ordering.
fn restrict(h: &DMatrix<f64>, n: usize, vars: &[usize]) -> DMatrix<f64> {
    let m = vars.len();
    let idx: Vec<usize> = vars
        .iter()
        .copied()
        .chain(vars.iter().map(|&v| n + v))
        .collect();
    DMatrix::from_fn(2 * m, 2 * m, |i, j| h[(idx[i], idx[j])])
}

/// Classified harmonic spectrum.
struct HarmonicSpectrum {
    frequencies: Vec<f64>,
    symplectic: Option<DMatrix<f64>>,
    zero_modes: usize,
    free_modes: usize,
    min_eigenvalue: f64,
}

/// Brings a positive-semidefinite harmonic form to its normal-mode data.
fn classify_harmonic(h_h: &DMatrix<f64>) -> Result<HarmonicSpectrum, LumpedError> {
    let m2 = h_h.nrows();
    let m = m2 / 2;
    if m == 0 {
        return Ok(HarmonicSpectrum {
            frequencies: Vec::new(),
            symplectic: Some(DMatrix::identity(0, 0)),
            zero_modes: 0,
            free_modes: 0,
            min_eigenvalue: 0.0,
        });
    }

    let eig = h_h.clone().symmetric_eigen();
    let max = eig.eigenvalues.amax().max(f64::MIN_POSITIVE);
    let min = eig.eigenvalues.min();
    if min < -1e-8 * max {
        return Err(LumpedError::NotPositiveDefinite {
            what: "harmonic phase-space form",
            min_eigenvalue: min,
        });
    }
    let null: Vec<usize> = (0..m2)
        .filter(|&k| eig.eigenvalues[k].abs() <= PHASE_NULL_RTOL * max)
        .collect();

    if null.is_empty() {
        let w = williamson_diagonalize(h_h)?;
        return Ok(HarmonicSpectrum {
            frequencies: w.frequencies.iter().copied().collect(),
            symplectic: Some(w.transform),
            zero_modes: 0,
            free_modes: 0,
            min_eigenvalue: min,
        });
    }

    // Rank of the symplectic form restricted to the null space separates
    // canonical zero pairs from unpaired free directions.
    let j = symplectic_form(m);
    let k = null.len();
    let mut gram = DMatrix::zeros(k, k);
    for (r, &i) in null.iter().enumerate() {
        for (s, &jj) in null.iter().enumerate() {
            gram[(r, s)] = (eig.eigenvectors.column(i).transpose()
                * &j
                * eig.eigenvectors.column(jj))[(0, 0)];
        }
    }
    let sv = gram.svd(false, false).singular_values;
    let svmax = sv.max();
    let rank = if svmax > 0.0 {
        sv.iter().filter(|&&s| s > 1e-10 * svmax).count()
    } else {
        0
    };
    let zero_modes = rank / 2;
    let free_modes = k - 2 * zero_modes;
    let oscillators = m - zero_modes - free_modes;

    // Oscillator frequencies are the positive imaginary parts of J·H.
    let mut imag: Vec<f64> = (&j * h_h)
        .complex_eigenvalues()
        .iter()
        .map(|z| z.im)
        .filter(|&w| w > 0.0)
        .collect();
    imag.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    imag.truncate(oscillators);
    imag.reverse();

    Ok(HarmonicSpectrum {
        frequencies: imag,
        symplectic: None,
        zero_modes,
        free_modes,
        min_eigenvalue: min,
    })
}

/// Canonical quantization shared by the flux-basis and charge-basis routes.
///
/// `cosine_coefficient` is the factor `k` in the junction cosine argument
/// `cos(k·x)`; it fixes the junction operator scales `1/k` (coordinate) and
/// `ħk` (momentum) and the kinetic energy quantum `(ħk)²(C⁻¹)_vv/8`.
pub(crate) fn quantize_model(
    qm: &QuadraticModel,
    cosine_coefficient: f64,
    x_kind: CouplingKind,
    p_kind: CouplingKind,
) -> Result<QuantizedHamiltonian, LumpedError> {
    let n = qm.dim();
    if n == 0 {
        return Err(LumpedError::DimensionMismatch {
            what: "model dimension",
            expected: 1,
            got: 0,
        });
    }

    // Kinetic inverse; frozen directions make the transform undefined.
    let eig = qm.c.clone().symmetric_eigen();
    let max = eig.eigenvalues.amax().max(f64::MIN_POSITIVE);
    let min = eig.eigenvalues.min();
    if min < -NULL_RTOL * max {
        return Err(LumpedError::NotPositiveDefinite {
            what: "kinetic matrix",
            min_eigenvalue: min,
        });
    }
    let null_dimension = eig
        .eigenvalues
        .iter()
        .filter(|&&l| l.abs() <= NULL_RTOL * max)
        .count();
    if null_dimension > 0 {
        return Err(LumpedError::SingularKinetic { null_dimension });
    }
    let v = &eig.eigenvectors;
    let c_inv = symmetrize(
        &(v * DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l)) * v.transpose()),
    );

    // Junction bookkeeping.
    let mut anharm_vars: Vec<usize> = qm.junctions.iter().map(|j| j.variable).collect();
    anharm_vars.sort_unstable();
    anharm_vars.dedup();
    let harmonic: Vec<usize> = (0..n).filter(|v| !anharm_vars.contains(v)).collect();

    let hbar_k = REDUCED_PLANCK * cosine_coefficient;
    let anharmonic: Vec<AnharmonicTerm> = qm
        .junctions
        .iter()
        .map(|j| AnharmonicTerm {
            variable: j.variable,
            charge_energy: hbar_k * hbar_k * c_inv[(j.variable, j.variable)] / 8.0,
            josephson_energy: j.josephson_energy,
        })
        .collect();

    // Harmonic normal modes.
    let h_m = phase_space_form(&c_inv, &qm.g, &qm.m0);
    let h_h = restrict(&h_m, n, &harmonic);
    let spectrum = classify_harmonic(&h_h)?;
    if spectrum.symplectic.is_none() && !qm.junctions.is_empty() {
        return Err(LumpedError::NonPositiveHarmonicSector {
            min_eigenvalue: spectrum.min_eigenvalue,
            junctions: qm.junctions.len(),
        });
    }

    // Junction–mode couplings through the normal-form transform.
    let mut couplings = Vec::new();
    if let Some(s) = spectrum.symplectic.as_ref() {
        let m = harmonic.len();
        if m > 0 && !anharm_vars.is_empty() {
            let cols: Vec<usize> = harmonic
                .iter()
                .copied()
                .chain(harmonic.iter().map(|&h| n + h))
                .collect();
            for &vj in &anharm_vars {
                for (row, scale, kind) in [
                    (vj, 1.0 / cosine_coefficient, x_kind),
                    (n + vj, hbar_k, p_kind),
                ] {
                    let coeff = DVector::from_fn(2 * m, |i, _| h_m[(row, cols[i])])
                        .transpose()
                        * s;
                    let amps: Vec<f64> =
                        (0..m).map(|k| coeff[k].hypot(coeff[m + k])).collect();
                    let amax = amps.iter().cloned().fold(0.0_f64, f64::max);
                    for (k, &amp) in amps.iter().enumerate() {
                        if amp > 1e-14 * amax {
                            couplings.push(Coupling {
                                mode: k,
                                partner: vj,
                                g: scale * amp / (2.0 * REDUCED_PLANCK).sqrt(),
                                kind,
                            });
                        }
                    }
                }
            }
        }
    }

    Ok(QuantizedHamiltonian {
        frequencies: spectrum.frequencies,
        zero_modes: spectrum.zero_modes,
        free_modes: spectrum.free_modes,
        symplectic: spectrum.symplectic,
        couplings,
        anharmonic,
        gyration: qm.g.clone(),
        kinetic_inverse: c_inv,
    })
}

/// Legendre transform and canonical quantization of a flux-basis model.
///
/// # Errors
///
/// Returns an error when the kinetic matrix is singular (frozen flux
/// directions must be projected out first), when the harmonic sector is
/// not positive semidefinite, or when junctions couple to a sector with
/// zero modes.
pub fn legendre_transform(qm: &QuadraticModel) -> Result<QuantizedHamiltonian, LumpedError> {
    quantize_model(
        qm,
        2.0 * std::f64::consts::PI / FLUX_QUANTUM,
        CouplingKind::Flux,
        CouplingKind::Charge,
    )
}
