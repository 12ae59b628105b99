//! Assembly of the flux-variable equations of motion from a loop structure.
//!
//! The dynamical variables are the fluxes of the tree capacitors.  Writing
//! Kirchhoff's current law on each capacitor row and eliminating chord
//! currents through the constitutive laws gives
//!
//! ```text
//! C Φ̈ = −F_CJ I_c sin(2πΦ_J/Φ_q) − F_CL 𝖫⁻¹ (F_CLᵀ Φ − φ_ext)
//!        − F_CG Y_G F_CGᵀ Φ̇,
//! ```
//!
//! with `C = diag(tree capacitances)`, `𝖫 = diag(inductances)` and `Y_G`
//! the block-diagonal admittance of the nonreciprocal couplers.  The
//! resulting [`QuadraticModel`] carries `M₀ = F_CL 𝖫⁻¹ F_CLᵀ`,
//! `G = F_CG Y_G F_CGᵀ` and the external-flux bias `F_CL 𝖫⁻¹ φ_ext`.
//!
//! A gyrator's constitutive law is fixed here: in declared port order it
//! scatters as `S = [[0, −1], [1, 0]]`, i.e. admittance
//! `Y = (1/R) [[0, 1], [−1, 0]]` (current into port 1 follows the voltage
//! at port 2).  Reversing a port's terminals in the netlist reverses the
//! sign.  Circulators take an explicit scattering matrix, or the ideal
//! cyclic one when none is given; devices whose scattering spectrum
//! contains `−1` have no admittance and are rejected here — such circuits
//! are handled by the frozen-variable scattering reduction instead.

use cqed_netlist::{
    BranchKind, ChordClass, CircuitNetlist, CouplerKind, LoopStructure, RealMatrix,
};
use cqed_nonreciprocal::{cayley_admittance, ScatteringDevice};
use nalgebra::{DMatrix, DVector};

use crate::error::LumpedError;
use crate::model::{JunctionTerm, QuadraticModel};

/// Converts a loop-analysis real matrix to a dense linear-algebra matrix.
#[must_use]
pub fn to_dense(m: &RealMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m.at(i, j))
}

/// Scattering matrix of the canonical gyrator (declared port order).
#[must_use]
pub fn gyrator_scattering() -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0])
}

/// Scattering description of a netlist coupler.
///
/// # Errors
///
/// Returns an error when the stored scattering matrix is not orthogonal or
/// the reference resistance is invalid.
pub fn coupler_device(
    net: &CircuitNetlist,
    coupler: usize,
) -> Result<ScatteringDevice, LumpedError> {
    let dev = &net.couplers[coupler];
    let ports = dev.ports.len();
    let device = match (&dev.kind, &dev.smatrix) {
        (CouplerKind::Gyrator, _) => ScatteringDevice::new(gyrator_scattering(), dev.r)?,
        (CouplerKind::Circulator, Some(rows)) => {
            let s = DMatrix::from_fn(ports, ports, |i, j| rows[i][j]);
            ScatteringDevice::new(s, dev.r)?
        }
        (CouplerKind::Circulator, None) => ScatteringDevice::ideal_circulator(ports, dev.r)?,
    };
    Ok(device)
}

/// Assembles the quadratic equations of motion of a lumped circuit.
///
/// # Errors
///
/// Returns an error when the loop structure has no effective blocks, when
/// the circuit contains transmission-line ports (those belong to the
/// distributed-mode pipeline), or when a coupler has no admittance
/// description.
pub fn assemble_matrices(
    net: &CircuitNetlist,
    ls: &LoopStructure,
) -> Result<QuadraticModel, LumpedError> {
    let eff = ls
        .effective
        .as_ref()
        .ok_or(LumpedError::MissingEffectiveBlocks)?;
    if !ls.chord_cols(ChordClass::TlPort).is_empty() {
        return Err(LumpedError::UnsupportedElement {
            what: "transmission-line ports (use the distributed-mode pipeline)".into(),
        });
    }

    let n = ls.capacitor_rows;
    let mut c = DMatrix::zeros(n, n);
    for (row, &id) in ls.tree[..n].iter().enumerate() {
        match net.branches[id].kind {
            BranchKind::Capacitor { c: value } => c[(row, row)] = value,
            ref other => {
                return Err(LumpedError::UnsupportedElement {
                    what: format!("non-capacitive tree row {row}: {other:?}"),
                })
            }
        }
    }

    let (m0, bias) = inductive_blocks(net, ls, eff)?;
    let g = gyration_matrix(net, ls, eff)?;
    let junctions = junction_terms(net, ls, eff)?;

    QuadraticModel::new(c, m0, g, bias, junctions)
}

/// Inverse-inductance matrix and external-flux bias from the inductor chords.
fn inductive_blocks(
    net: &CircuitNetlist,
    ls: &LoopStructure,
    eff: &cqed_netlist::EffectiveBlocks,
) -> Result<(DMatrix<f64>, DVector<f64>), LumpedError> {
    let n = ls.capacitor_rows;
    let cols = ls.chord_cols(ChordClass::Inductor);
    let f_cl = to_dense(&eff.f_cl);
    let mut weighted = f_cl.clone();
    let mut flux = DVector::zeros(cols.len());
    for (local, col) in cols.clone().enumerate() {
        let id = ls.chords[col];
        let BranchKind::Inductor { l } = net.branches[id].kind else {
            return Err(LumpedError::UnsupportedElement {
                what: format!("non-inductive chord in inductor block: branch {id}"),
            });
        };
        if !(l.is_finite() && l > 0.0) {
            return Err(LumpedError::BadParameter {
                what: "inductance",
                requirement: "positive and finite",
                value: l,
            });
        }
        for row in 0..n {
            weighted[(row, local)] /= l;
        }
        flux[local] = ls.external_flux[col];
    }
    let m0 = &weighted * f_cl.transpose();
    let bias = &weighted * flux;
    Ok((m0, bias))
}

/// Gyration matrix `F_CG Y F_CGᵀ` over all nonreciprocal couplers.
fn gyration_matrix(
    net: &CircuitNetlist,
    ls: &LoopStructure,
    eff: &cqed_netlist::EffectiveBlocks,
) -> Result<DMatrix<f64>, LumpedError> {
    let n = ls.capacitor_rows;
    let cols = ls.chord_cols(ChordClass::CouplerPort);
    let p = cols.len();
    if p == 0 {
        return Ok(DMatrix::zeros(n, n));
    }

    // Admittance of every coupler with at least one port chord.
    let mut admittance: Vec<Option<DMatrix<f64>>> = vec![None; net.couplers.len()];
    let mut placement = Vec::with_capacity(p);
    for col in cols {
        let id = ls.chords[col];
        let BranchKind::CouplerPort { coupler, port } = net.branches[id].kind else {
            return Err(LumpedError::UnsupportedElement {
                what: format!("non-port chord in coupler block: branch {id}"),
            });
        };
        if admittance[coupler].is_none() {
            let device = coupler_device(net, coupler)?;
            let y = cayley_admittance(&device)
                .map_err(|source| LumpedError::NoAdmittance { coupler, source })?;
            admittance[coupler] = Some(y);
        }
        placement.push((coupler, port));
    }

    // Block-diagonal admittance in local chord-column order.
    let mut y_full = DMatrix::zeros(p, p);
    for (i, &(ci, pi)) in placement.iter().enumerate() {
        for (j, &(cj, pj)) in placement.iter().enumerate() {
            if ci == cj {
                y_full[(i, j)] = admittance[ci].as_ref().expect("filled above")[(pi, pj)];
            }
        }
    }

    let f_cg = to_dense(&eff.f_cg);
    Ok(&f_cg * y_full * f_cg.transpose())
}

/// Junction terms from the junction chords; each junction loop must close
/// through exactly one tree capacitor (its shunt).
fn junction_terms(
    net: &CircuitNetlist,
    ls: &LoopStructure,
    eff: &cqed_netlist::EffectiveBlocks,
) -> Result<Vec<JunctionTerm>, LumpedError> {
    let n = ls.capacitor_rows;
    let cols = ls.chord_cols(ChordClass::Junction);
    let f_cj = to_dense(&eff.f_cj);
    let mut terms = Vec::with_capacity(cols.len());
    for (local, col) in cols.enumerate() {
        let id = ls.chords[col];
        let BranchKind::Junction { ej, .. } = net.branches[id].kind else {
            return Err(LumpedError::UnsupportedElement {
                what: format!("non-junction chord in junction block: branch {id}"),
            });
        };
        let entries: Vec<usize> = (0..n).filter(|&r| f_cj[(r, local)] != 0.0).collect();
        let &[row] = entries.as_slice() else {
            return Err(LumpedError::UnsupportedElement {
                what: format!(
                    "junction {id} loop closes through {} capacitors, expected 1",
                    entries.len()
                ),
            });
        };
        terms.push(JunctionTerm {
            variable: row,
            sign: f_cj[(row, local)],
            josephson_energy: ej,
            external_flux: ls.external_flux[col],
        });
    }
    Ok(terms)
}
