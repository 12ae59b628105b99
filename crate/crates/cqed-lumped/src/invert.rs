//! Structured inversion of bordered capacitance matrices.
//!
//! Qubit–resonator capacitance matrices have the bordered form
//!
//! ```text
//! M = [[ A,   D  ],
//!      [ Dᵀ,  C₁ ]]
//! ```
//!
//! with a small network block `A`, a large (often diagonal) mode block `C₁`
//! and a low-rank coupling block `D`.  [`invert_block`] inverts `M` exactly
//! through a pivot whose size is the rank of `D`, never forming a dense
//! Schur complement:
//!
//! ```text
//! M⁻¹ = [[ A⁻¹ + Ap y⁻¹ μ̃ Apᵀ,  −Ap y⁻¹ Cqᵀ        ],
//!        [ −Cq y⁻ᵀ Apᵀ,          C₁⁻¹ + Cq ν̃ y⁻¹ Cqᵀ ]]
//! ```
//!
//! where `D = P Qᵀ` is a rank factorization, `Ap = A⁻¹P`, `Cq = C₁⁻¹Q`,
//! `ν̃ = PᵀA⁻¹P`, `μ̃ = QᵀC₁⁻¹Q` and `y = 1 − μ̃ν̃` is the pivot.
//!
//! [`invert_rank_one`] is an independent route for rank-one coupling via the
//! scalar pivot `τ = 1 − Tr(D C₁⁻¹ Dᵀ A⁻¹)`.
//!
//! For port-structured matrices
//!
//! ```text
//! C = [[ A,        −Σᵢ aᵢuᵢᵀ       ],
//!      [ −Σᵢ uᵢaᵢᵀ,  C_n + Σᵢ uᵢuᵢᵀ ]]
//! ```
//!
//! [`port_coefficient_matrices`] returns the coefficient matrices of the
//! closed-form inverse
//!
//! ```text
//! C⁻¹ = [[ A⁻¹ + Ξᵢⱼ A⁻¹aᵢaⱼᵀA⁻¹,   Θᵢⱼ A⁻¹aᵢuⱼᵀC_n⁻¹      ],
//!        [ Γᵢⱼ C_n⁻¹uᵢaⱼᵀA⁻¹,       C_n⁻¹ + Λᵢⱼ C_n⁻¹uᵢuⱼᵀC_n⁻¹ ]]
//! ```
//!
//! with `μᵢⱼ = uᵢᵀC_n⁻¹uⱼ`, `νᵢⱼ = aᵢᵀA⁻¹aⱼ`, `Γ = (1 + μ − νμ)⁻¹`,
//! `Ξ = μΓ`, `Λ = Γ(ν − 1)` and `Θ = 1 + μΓ(ν − 1) = Γᵀ`.

use nalgebra::{DMatrix, DVector};

use crate::error::LumpedError;

/// Relative singular-value threshold below which a pivot counts as singular.
const PIVOT_RTOL: f64 = 1e-12;

/// The four blocks of a bordered-matrix inverse.
#[derive(Debug, Clone)]
pub struct BlockInverse {
    /// Network-block rows and columns.
    pub top_left: DMatrix<f64>,
    /// Network rows, mode columns.
    pub top_right: DMatrix<f64>,
    /// Mode rows, network columns.
    pub bottom_left: DMatrix<f64>,
    /// Mode-block rows and columns.
    pub bottom_right: DMatrix<f64>,
}

impl BlockInverse {
    /// Assembles the four blocks into one dense matrix.
    #[must_use]
    pub fn dense(&self) -> DMatrix<f64> {
        let na = self.top_left.nrows();
        let n1 = self.bottom_right.nrows();
        let mut out = DMatrix::zeros(na + n1, na + n1);
        out.view_mut((0, 0), (na, na)).copy_from(&self.top_left);
        out.view_mut((0, na), (na, n1)).copy_from(&self.top_right);
        out.view_mut((na, 0), (n1, na)).copy_from(&self.bottom_left);
        out.view_mut((na, na), (n1, n1))
            .copy_from(&self.bottom_right);
        out
    }
}

/// Coefficient matrices of the port-structured inverse.
#[derive(Debug, Clone)]
pub struct PortCoefficients {
    /// Mode-side Gram matrix `μᵢⱼ = uᵢᵀ C_n⁻¹ uⱼ`.
    pub mu: DMatrix<f64>,
    /// Network-side Gram matrix `νᵢⱼ = aᵢᵀ A⁻¹ aⱼ`.
    pub nu: DMatrix<f64>,
    /// Network-block dressing `Ξ = μ (1 + μ − νμ)⁻¹`.
    pub xi: DMatrix<f64>,
    /// Cross-block coefficient `Γ = (1 + μ − νμ)⁻¹`.
    pub gamma: DMatrix<f64>,
    /// Mode-block dressing `Λ = Γ (ν − 1)`.
    pub lambda: DMatrix<f64>,
    /// Transposed cross-block coefficient `Θ = 1 + μΓ(ν − 1)`.
    pub theta: DMatrix<f64>,
}

/// Symmetric positive-definite inverse via Cholesky.
fn spd_inverse(m: &DMatrix<f64>, what: &'static str) -> Result<DMatrix<f64>, LumpedError> {
    m.clone()
        .cholesky()
        .map(|ch| ch.inverse())
        .ok_or(LumpedError::NotPositiveDefinite {
            what,
            min_eigenvalue: f64::NAN,
        })
}

/// Inverse of a small pivot, guarded against near-singularity.
fn pivot_inverse(y: &DMatrix<f64>) -> Result<DMatrix<f64>, LumpedError> {
    if y.is_empty() {
        return Ok(y.clone());
    }
    let svd = y.clone().svd(true, true);
    let max = svd.singular_values.max();
    let min = svd.singular_values.min();
    if !min.is_finite() || min <= PIVOT_RTOL * max {
        return Err(LumpedError::NearSingularPivot {
            condition: if min > 0.0 { max / min } else { f64::INFINITY },
        });
    }
    svd.pseudo_inverse(0.0).map_err(|_| LumpedError::NearSingularPivot {
        condition: f64::INFINITY,
    })
}

/// Rank-revealing factorization `D = Q S` via column-pivoted QR.
///
/// Returns the orthonormal factor `Q`, the triangular factor `S` with the
/// column pivoting undone (so `D = Q S` holds directly) and the numerical
/// rank read off the pivoted diagonal of `R`, whose magnitudes are
/// non-increasing.
fn rank_factorization(d: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>, usize) {
    let (q, mut r, perm) = d.clone().col_piv_qr().unpack();
    let pivots = r.nrows().min(r.ncols());
    let lead = if pivots == 0 { 0.0 } else { r[(0, 0)].abs() };
    let rank = (0..pivots)
        .filter(|&i| lead > 0.0 && r[(i, i)].abs() > PIVOT_RTOL * lead)
        .count();
    perm.inv_permute_columns(&mut r);
    (q, r, rank)
}

/// Inverts `[[A, D], [Dᵀ, C₁]]` through a pivot of size `rank`.
///
/// `A` and `C₁` must be symmetric positive definite and the numerical rank
/// of `D` must not exceed `rank`.
///
/// # Errors
///
/// Returns an error on dimension mismatch, indefinite diagonal blocks, a
/// coupling block of higher rank than declared, or a near-singular pivot
/// (a frozen flux combination).
pub fn invert_block(
    a: &DMatrix<f64>,
    c1: &DMatrix<f64>,
    d: &DMatrix<f64>,
    rank: usize,
) -> Result<BlockInverse, LumpedError> {
    let na = a.nrows();
    let n1 = c1.nrows();
    if d.nrows() != na || d.ncols() != n1 {
        return Err(LumpedError::DimensionMismatch {
            what: "coupling block D",
            expected: na,
            got: d.nrows(),
        });
    }

    let a_inv = spd_inverse(a, "network block A")?;
    let c1_inv = spd_inverse(c1, "mode block C1")?;

    // Rank factorization D = P Qᵀ via column-pivoted QR, whose pivoted
    // diagonal exposes the numerical rank.
    let (qf, rf, r) = rank_factorization(d);
    if r > rank {
        return Err(LumpedError::RankMismatch {
            expected: rank,
            detected: r,
        });
    }
    let p = qf.columns(0, r).into_owned();
    let q = rf.rows(0, r).transpose();

    let ap = &a_inv * &p; // A⁻¹P
    let cq = &c1_inv * &q; // C₁⁻¹Q
    let nu = p.transpose() * &ap; // PᵀA⁻¹P
    let mu = q.transpose() * &cq; // QᵀC₁⁻¹Q
    let y = DMatrix::identity(r, r) - &mu * &nu;
    let y_inv = pivot_inverse(&y)?;

    let top_left = &a_inv + &ap * &y_inv * &mu * ap.transpose();
    let top_right = -(&ap * &y_inv * cq.transpose());
    let bottom_left = -(&cq * y_inv.transpose() * ap.transpose());
    let bottom_right = &c1_inv + &cq * &nu * &y_inv * cq.transpose();

    Ok(BlockInverse {
        top_left,
        top_right,
        bottom_left,
        bottom_right,
    })
}

/// Inverts `[[A, D], [Dᵀ, C₁]]` for rank-one `D` through the scalar pivot
/// `τ = 1 − Tr(D C₁⁻¹ Dᵀ A⁻¹)`:
///
/// ```text
/// M⁻¹ = blkdiag(A⁻¹, C₁⁻¹)
///     + τ⁻¹ [[ A⁻¹D C₁⁻¹Dᵀ A⁻¹,  −A⁻¹D C₁⁻¹ ],
///            [ −C₁⁻¹Dᵀ A⁻¹,       C₁⁻¹Dᵀ A⁻¹D C₁⁻¹ ]]
/// ```
///
/// This is an independent evaluation route kept deliberately distinct from
/// [`invert_block`] so the two can be cross-checked.
///
/// # Errors
///
/// Returns an error when `D` is not numerically rank one, on indefinite
/// diagonal blocks, or when the pivot `τ` vanishes.
pub fn invert_rank_one(
    a: &DMatrix<f64>,
    c1: &DMatrix<f64>,
    d: &DMatrix<f64>,
) -> Result<BlockInverse, LumpedError> {
    let na = a.nrows();
    let n1 = c1.nrows();
    if d.nrows() != na || d.ncols() != n1 {
        return Err(LumpedError::DimensionMismatch {
            what: "coupling block D",
            expected: na,
            got: d.nrows(),
        });
    }
    let (_, _, detected) = rank_factorization(d);
    if detected > 1 {
        return Err(LumpedError::RankMismatch {
            expected: 1,
            detected,
        });
    }

    let a_inv = spd_inverse(a, "network block A")?;
    let c1_inv = spd_inverse(c1, "mode block C1")?;

    let adc = &a_inv * d * &c1_inv; // A⁻¹ D C₁⁻¹
    let tau = 1.0 - (d * &c1_inv * d.transpose() * &a_inv).trace();
    let scale = 1.0 + (d * &c1_inv * d.transpose() * &a_inv).trace().abs();
    if tau.abs() < PIVOT_RTOL * scale {
        return Err(LumpedError::NearSingularPivot {
            condition: scale / tau.abs().max(f64::MIN_POSITIVE),
        });
    }

    let top_left = &a_inv + (&adc * d.transpose() * &a_inv) / tau;
    let top_right = -&adc / tau;
    let bottom_left = -adc.transpose() / tau;
    let bottom_right = &c1_inv + (&c1_inv * d.transpose() * &adc) / tau;

    Ok(BlockInverse {
        top_left,
        top_right,
        bottom_left,
        bottom_right,
    })
}

/// Coefficient matrices `μ, ν, Ξ, Γ, Λ, Θ` of the port-structured inverse.
///
/// `ports[i] = (aᵢ, uᵢ)` are the weighted network and mode coupling vectors
/// of port `i`; `c_n` is the bare mode block, before the `Σ uᵢuᵢᵀ` dressing.
///
/// # Errors
///
/// Returns an error on dimension mismatch, indefinite blocks, or a
/// near-singular coefficient pivot.
pub fn port_coefficient_matrices(
    a: &DMatrix<f64>,
    c_n: &DMatrix<f64>,
    ports: &[(DVector<f64>, DVector<f64>)],
) -> Result<PortCoefficients, LumpedError> {
    let na = a.nrows();
    let n1 = c_n.nrows();
    let r = ports.len();
    for (av, uv) in ports {
        if av.len() != na {
            return Err(LumpedError::DimensionMismatch {
                what: "port network vector",
                expected: na,
                got: av.len(),
            });
        }
        if uv.len() != n1 {
            return Err(LumpedError::DimensionMismatch {
                what: "port mode vector",
                expected: n1,
                got: uv.len(),
            });
        }
    }

    let a_inv = spd_inverse(a, "network block A")?;
    let cn_inv = spd_inverse(c_n, "mode block C_n")?;

    let mut mu = DMatrix::zeros(r, r);
    let mut nu = DMatrix::zeros(r, r);
    for i in 0..r {
        for j in 0..r {
            mu[(i, j)] = (ports[i].1.transpose() * &cn_inv * &ports[j].1)[(0, 0)];
            nu[(i, j)] = (ports[i].0.transpose() * &a_inv * &ports[j].0)[(0, 0)];
        }
    }

    let eye = DMatrix::identity(r, r);
    let pivot = &eye + &mu - &nu * &mu;
    let gamma = pivot_inverse(&pivot)?;
    let xi = &mu * &gamma;
    let lambda = &gamma * (&nu - &eye);
    let theta = &eye + &mu * &gamma * (&nu - &eye);

    Ok(PortCoefficients {
        mu,
        nu,
        xi,
        gamma,
        lambda,
        theta,
    })
}

/// Dense inverse of a port-structured capacitance matrix, assembled from
/// the closed-form coefficient matrices.
///
/// # Errors
///
/// Same failure modes as [`port_coefficient_matrices`].
pub fn invert_ported(
    a: &DMatrix<f64>,
    c_n: &DMatrix<f64>,
    ports: &[(DVector<f64>, DVector<f64>)],
) -> Result<BlockInverse, LumpedError> {
    let coef = port_coefficient_matrices(a, c_n, ports)?;
    let a_inv = spd_inverse(a, "network block A")?;
    let cn_inv = spd_inverse(c_n, "mode block C_n")?;
    let r = ports.len();

    let ahat: Vec<DVector<f64>> = ports.iter().map(|(av, _)| &a_inv * av).collect();
    let uhat: Vec<DVector<f64>> = ports.iter().map(|(_, uv)| &cn_inv * uv).collect();

    let mut top_left = a_inv.clone();
    let mut top_right = DMatrix::zeros(a.nrows(), c_n.nrows());
    let mut bottom_left = DMatrix::zeros(c_n.nrows(), a.nrows());
    let mut bottom_right = cn_inv.clone();
    for i in 0..r {
        for j in 0..r {
            top_left += coef.xi[(i, j)] * &ahat[i] * ahat[j].transpose();
            top_right += coef.theta[(i, j)] * &ahat[i] * uhat[j].transpose();
            bottom_left += coef.gamma[(i, j)] * &uhat[i] * ahat[j].transpose();
            bottom_right += coef.lambda[(i, j)] * &uhat[i] * uhat[j].transpose();
        }
    }

    Ok(BlockInverse {
        top_left,
        top_right,
        bottom_left,
        bottom_right,
    })
}
