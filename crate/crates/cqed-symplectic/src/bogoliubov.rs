//! Bosonic Bogoliubov diagonalization of quadratic mode Hamiltonians.
//!
//! The input is a quadratic boson Hamiltonian specified by two symmetric
//! matrices `theta` (pairing-type block) and `xi` (number-type block),
//!
//! ```text
//! H = Σ_ij  xi_ij (a†_i a_j + a_i a†_j)  +  theta_ij (a†_i a†_j + a_i a_j),
//! ```
//!
//! so a set of decoupled oscillators has `theta = 0` and
//! `xi = diag(ħω_m / 2)`. In the quadrature representation
//! `X = (a + a†)/√2`, `P = -i(a - a†)/√2` the Hamiltonian splits into
//! `H = 1/2 X^T H_xx X + 1/2 P^T H_pp P` with `H_xx = 2(xi + theta)` and
//! `H_pp = 2(xi - theta)`. Both must be positive definite for the spectrum to
//! pair into `±μ` couples; the new mode energies are `2μ_k`, ascending.
//!
//! [`bogoliubov_modes`] performs the dense computation and returns the bosonic
//! transformation blocks `A`, `B` (`b = A a + B a†`, `A A^T - B B^T = I`).
//! [`bogoliubov_diag_rank_one`] is an `O(n^2)` structured path for the common
//! case where `H_xx` is diagonal-plus-rank-one and `H_pp` diagonal, which
//! keeps many-thousand-mode convergence sweeps cheap.

use nalgebra::{DMatrix, DVector};

use crate::error::SymplecticError;
use crate::rank_one::DiagPlusRankOne;
use crate::util::{apply_spectral, fix_column_signs, require_symmetric, symmetric_eigen_sorted};

/// Result of [`bogoliubov_modes`].
#[derive(Debug, Clone)]
pub struct Bogoliubov {
    /// Pairing parameters `μ_k`, ascending; the energy of new mode `k` is
    /// `2 μ_k` in the units of the input blocks.
    pub mu: DVector<f64>,
    /// Coefficient of `a` in `b = A a + B a†`.
    pub a: DMatrix<f64>,
    /// Coefficient of `a†` in `b = A a + B a†`.
    pub b: DMatrix<f64>,
}

impl Bogoliubov {
    /// Energies `2 μ_k` of the decoupled modes, ascending.
    pub fn mode_energies(&self) -> DVector<f64> {
        &self.mu * 2.0
    }

    /// Map a vector of linear couplings to the old displacement operators
    /// `(a_m + a_m†)` onto couplings to the new ones: `g' = (A - B) g`, which
    /// preserves the operator identity `Σ g_m (a_m + a_m†) = Σ g'_k (b_k + b_k†)`.
    pub fn transform_couplings(&self, g: &DVector<f64>) -> Result<DVector<f64>, SymplecticError> {
        if g.len() != self.mu.len() {
            return Err(SymplecticError::VectorLength {
                expected: self.mu.len(),
                got: g.len(),
            });
        }
        Ok((&self.a - &self.b) * g)
    }
}

/// Diagonalize the quadratic boson Hamiltonian defined by the symmetric
/// blocks `theta` (pairing) and `xi` (number); see the module docs for the
/// exact convention.
///
/// Returns the pairing parameters `μ` in ascending order together with the
/// transformation blocks. For decoupled input (`theta = 0`, `xi` diagonal with
/// ascending entries) the transformation is the identity.
///
/// # Errors
///
/// * [`SymplecticError::DimensionMismatch`] if the blocks are not square of
///   equal size.
/// * [`SymplecticError::NotSymmetric`] if either block is not symmetric.
/// * [`SymplecticError::UnpairableSpectrum`] if `xi + theta` or `xi - theta`
///   is not positive definite, i.e. the quadratic model is unstable and the
///   spectrum cannot be arranged into `±μ` pairs.
pub fn bogoliubov_modes(
    theta: &DMatrix<f64>,
    xi: &DMatrix<f64>,
) -> Result<Bogoliubov, SymplecticError> {
    if theta.nrows() != theta.ncols()
        || xi.nrows() != xi.ncols()
        || theta.nrows() != xi.nrows()
    {
        return Err(SymplecticError::DimensionMismatch {
            theta_rows: theta.nrows(),
            theta_cols: theta.ncols(),
            xi_rows: xi.nrows(),
            xi_cols: xi.ncols(),
        });
    }
    let theta_s = require_symmetric(theta)?;
    let xi_s = require_symmetric(xi)?;

    let h_xx = (&xi_s + &theta_s) * 2.0;
    let h_pp = (&xi_s - &theta_s) * 2.0;

    let (pp_vals, pp_vecs) = symmetric_eigen_sorted(h_pp);
    if pp_vals[0] <= 0.0 {
        return Err(SymplecticError::UnpairableSpectrum {
            block: "difference",
            min_eigenvalue: pp_vals[0],
        });
    }
    let pp_sqrt = apply_spectral(&pp_vals, &pp_vecs, f64::sqrt);
    let pp_isqrt = apply_spectral(&pp_vals, &pp_vecs, |v| 1.0 / v.sqrt());

    let mut w = &pp_sqrt * h_xx * &pp_sqrt;
    w = (&w + w.transpose()) * 0.5;
    let (w_vals, mut w_vecs) = symmetric_eigen_sorted(w);
    if w_vals[0] <= 0.0 {
        return Err(SymplecticError::UnpairableSpectrum {
            block: "sum",
            min_eigenvalue: w_vals[0],
        });
    }
    fix_column_signs(&mut w_vecs);

    // Energies D = sqrt(eig W); quadrature maps R_x = D^{1/2} O^T H_pp^{-1/2},
    // R_p = D^{-1/2} O^T H_pp^{1/2}; boson blocks A, B follow.
    let n = w_vals.len();
    let d: DVector<f64> = w_vals.map(f64::sqrt);
    let ot = w_vecs.transpose();
    let mut r_x = &ot * &pp_isqrt;
    let mut r_p = &ot * &pp_sqrt;
    for i in 0..n {
        let s = d[i].sqrt();
        r_x.row_mut(i).scale_mut(s);
        r_p.row_mut(i).scale_mut(1.0 / s);
    }

    let a = (&r_x + &r_p) * 0.5;
    let b = (&r_x - &r_p) * 0.5;
    Ok(Bogoliubov {
        mu: d * 0.5,
        a,
        b,
    })
}

/// Structured Bogoliubov solver for `H_xx = diag(xx) + rho * u u^T` and
/// `H_pp = diag(pp)`, avoiding all dense matrices.
///
/// This covers a single nonlinear degree of freedom capacitively coupled to a
/// bath of modes after normal ordering, where the mode-mode block is a
/// rank-one update of the diagonal. Eigen-energies and coupling transforms
/// cost `O(n^2)` total instead of `O(n^3)`.
#[derive(Debug, Clone)]
pub struct StructuredBogoliubov {
    eig: DiagPlusRankOne,
    pp_sqrt: Vec<f64>,
    mu: Vec<f64>,
}

/// Build the structured solver; see [`StructuredBogoliubov`]. `xx` and `pp`
/// are the diagonals of the quadrature blocks (ascending products assumed
/// nowhere — any order is accepted), `u`/`rho` the rank-one update of the
/// position block.
///
/// # Errors
///
/// * [`SymplecticError::VectorLength`] if the slices disagree in length.
/// * [`SymplecticError::UnpairableSpectrum`] if `pp` has a non-positive entry
///   or `H_xx` is not positive definite.
pub fn bogoliubov_diag_rank_one(
    xx: &[f64],
    pp: &[f64],
    u: &[f64],
    rho: f64,
) -> Result<StructuredBogoliubov, SymplecticError> {
    let n = xx.len();
    if pp.len() != n {
        return Err(SymplecticError::VectorLength {
            expected: n,
            got: pp.len(),
        });
    }
    if u.len() != n {
        return Err(SymplecticError::VectorLength {
            expected: n,
            got: u.len(),
        });
    }
    if let Some(&bad) = pp.iter().find(|&&x| x <= 0.0) {
        return Err(SymplecticError::UnpairableSpectrum {
            block: "difference",
            min_eigenvalue: bad,
        });
    }
    let pp_sqrt: Vec<f64> = pp.iter().map(|&x| x.sqrt()).collect();
    // W = Pp^{1/2} H_xx Pp^{1/2} = diag(xx * pp) + rho * w w^T, w = sqrt(pp) ∘ u.
    let d: Vec<f64> = xx.iter().zip(pp).map(|(&x, &p)| x * p).collect();
    let w: Vec<f64> = u.iter().zip(&pp_sqrt).map(|(&ui, &s)| ui * s).collect();
    let eig = DiagPlusRankOne::new(&d, &w, rho)?;
    let min = eig.eigenvalues()[0];
    if min <= 0.0 {
        return Err(SymplecticError::UnpairableSpectrum {
            block: "sum",
            min_eigenvalue: min,
        });
    }
    let mu: Vec<f64> = eig.eigenvalues().iter().map(|&l| l.sqrt() * 0.5).collect();
    Ok(StructuredBogoliubov { eig, pp_sqrt, mu })
}

impl StructuredBogoliubov {
    /// Pairing parameters `μ_k`, ascending.
    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    /// Energies `2 μ_k` of the decoupled modes, ascending.
    pub fn mode_energies(&self) -> Vec<f64> {
        self.mu.iter().map(|&m| 2.0 * m).collect()
    }

    /// Map old displacement couplings onto the new modes, identically to
    /// [`Bogoliubov::transform_couplings`]: `g'_k = (D^{-1/2} O^T Pp^{1/2} g)_k`.
    pub fn transform_couplings(&self, g: &[f64]) -> Result<Vec<f64>, SymplecticError> {
        let n = self.mu.len();
        if g.len() != n {
            return Err(SymplecticError::VectorLength {
                expected: n,
                got: g.len(),
            });
        }
        let z: Vec<f64> = g.iter().zip(&self.pp_sqrt).map(|(&gi, &s)| gi * s).collect();
        let mut out = vec![0.0; n];
        for k in 0..n {
            let dot = self.eig.eigenvector_dot(k, &z)?;
            out[k] = dot / (2.0 * self.mu[k]).sqrt();
        }
        Ok(out)
    }
}
