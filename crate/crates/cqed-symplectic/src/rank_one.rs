//! Eigendecomposition of symmetric diagonal-plus-rank-one matrices.
//!
//! Matrices of the form `M = D + rho * u u^T` with diagonal `D` arise whenever
//! a single collective degree of freedom couples uniformly to a large bath of
//! oscillators. Their full spectrum follows from the secular equation
//!
//! ```text
//! f(λ) = 1 + rho * Σ_i u_i^2 / (d_i - λ) = 0,
//! ```
//!
//! whose roots interlace the diagonal entries. [`DiagPlusRankOne`] solves this
//! equation with a safeguarded bisection/Newton iteration, costing `O(n)` per
//! eigenvalue and `O(n)` per on-demand eigenvector — no dense matrix is ever
//! formed, which keeps thousands-of-modes problems cheap.

use crate::error::SymplecticError;

/// Relative width at which the bracketing iteration for a secular root stops.
const SECULAR_RTOL: f64 = 4.0 * f64::EPSILON;

/// Maximum iterations per secular root (bisection worst case).
const SECULAR_MAX_ITER: usize = 200;

/// Eigensolver for `D + rho * u u^T` with `D = diag(d)`.
///
/// Construction computes all eigenvalues; eigenvectors are reconstructed on
/// demand by [`DiagPlusRankOne::eigenvector`]. Indices of `d` and `u` refer to
/// the caller's original ordering even though the solver sorts internally.
#[derive(Debug, Clone)]
pub struct DiagPlusRankOne {
    /// Eigenvalues in ascending order.
    eigenvalues: Vec<f64>,
    /// Diagonal in ascending order (after permutation).
    d_sorted: Vec<f64>,
    /// Rank-one vector in sorted order, after degeneracy rotations.
    u_rotated: Vec<f64>,
    /// Scale factor of the rank-one update.
    rho: f64,
    /// `perm[sorted_pos] = original_index`.
    perm: Vec<usize>,
    /// Givens rotations `(i, j, c, s)` applied within equal-diagonal groups,
    /// in application order.
    rotations: Vec<(usize, usize, f64, f64)>,
    /// For each ascending eigenvalue: `Some(sorted_pos)` if it is an exact
    /// deflated diagonal entry, `None` if it is a secular root.
    deflated_source: Vec<Option<usize>>,
    /// Sorted positions that participate in the secular equation.
    active: Vec<usize>,
}

impl DiagPlusRankOne {
    /// Diagonal entries `d`, update vector `u` and scale `rho` such that the
    /// matrix is `diag(d) + rho * u u^T`. `d` need not be sorted.
    ///
    /// # Errors
    ///
    /// * [`SymplecticError::VectorLength`] if `d` and `u` differ in length.
    /// * [`SymplecticError::SecularBracketing`] if a root bracket cannot be
    ///   established (should not happen for finite input).
    pub fn new(d: &[f64], u: &[f64], rho: f64) -> Result<Self, SymplecticError> {
        if d.len() != u.len() {
            return Err(SymplecticError::VectorLength {
                expected: d.len(),
                got: u.len(),
            });
        }
        let n = d.len();

        let mut perm: Vec<usize> = (0..n).collect();
        perm.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
        let d_sorted: Vec<f64> = perm.iter().map(|&i| d[i]).collect();
        let mut u_rotated: Vec<f64> = perm.iter().map(|&i| u[i]).collect();

        let u_norm = u_rotated.iter().map(|x| x * x).sum::<f64>().sqrt();
        let d_scale = d_sorted
            .iter()
            .fold(0.0f64, |m, &x| m.max(x.abs()))
            .max(f64::MIN_POSITIVE);

        // Rotate the weight of each group of (numerically) equal diagonal
        // entries onto its first member. The rotations commute with D exactly
        // on such groups, so the remaining secular problem has strictly
        // separated active poles.
        let mut rotations: Vec<(usize, usize, f64, f64)> = Vec::new();
        let eq_tol = 8.0 * f64::EPSILON * d_scale;
        let mut g = 0usize;
        while g < n {
            let mut h = g + 1;
            while h < n && (d_sorted[h] - d_sorted[g]).abs() <= eq_tol {
                h += 1;
            }
            for j in (g + 1)..h {
                let (ui, uj) = (u_rotated[g], u_rotated[j]);
                let r = ui.hypot(uj);
                if r > 0.0 {
                    let (c, s) = (ui / r, uj / r);
                    u_rotated[g] = r;
                    u_rotated[j] = 0.0;
                    rotations.push((g, j, c, s));
                }
            }
            g = h;
        }

        // Deflate entries whose coupling is negligible: they stay exact
        // eigenpairs (d_i, e_i).
        let defl_tol = f64::EPSILON * u_norm * (n as f64).sqrt();
        let active: Vec<usize> = (0..n)
            .filter(|&i| u_rotated[i].abs() > defl_tol && rho != 0.0)
            .collect();

        let mut eigenvalues: Vec<(f64, Option<usize>)> = Vec::with_capacity(n);
        for i in 0..n {
            if !active.contains(&i) {
                eigenvalues.push((d_sorted[i], Some(i)));
            }
        }

        // Secular roots: one per interval between consecutive active poles,
        // plus one exterior root on the side of the update's sign.
        let m = active.len();
        if m > 0 {
            let w2: f64 = active.iter().map(|&i| u_rotated[i] * u_rotated[i]).sum();
            let shift = rho.abs() * w2;
            for k in 0..m {
                let (lo, hi) = if rho > 0.0 {
                    if k + 1 < m {
                        (d_sorted[active[k]], d_sorted[active[k + 1]])
                    } else {
                        (d_sorted[active[m - 1]], d_sorted[active[m - 1]] + shift)
                    }
                } else if k == 0 {
                    (d_sorted[active[0]] - shift, d_sorted[active[0]])
                } else {
                    (d_sorted[active[k - 1]], d_sorted[active[k]])
                };
                let root =
                    solve_secular(&d_sorted, &u_rotated, &active, rho, lo, hi, k, m)?;
                eigenvalues.push((root, None));
            }
        }

        eigenvalues.sort_by(|a, b| a.0.total_cmp(&b.0));
        let deflated_source: Vec<Option<usize>> = eigenvalues.iter().map(|e| e.1).collect();
        let eigenvalues: Vec<f64> = eigenvalues.iter().map(|e| e.0).collect();

        Ok(Self {
            eigenvalues,
            d_sorted,
            u_rotated,
            rho,
            perm,
            rotations,
            deflated_source,
            active,
        })
    }

    /// All eigenvalues, ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Scale factor of the rank-one update this solver was built with.
    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Dimension of the matrix.
    pub fn len(&self) -> usize {
        self.d_sorted.len()
    }

    /// Whether the matrix is empty.
    pub fn is_empty(&self) -> bool {
        self.d_sorted.is_empty()
    }

    /// Normalized eigenvector for the `k`-th ascending eigenvalue, expressed
    /// in the caller's original index order.
    pub fn eigenvector(&self, k: usize) -> Vec<f64> {
        let n = self.len();
        let mut v = vec![0.0; n];
        match self.deflated_source[k] {
            Some(pos) => v[pos] = 1.0,
            None => {
                let lambda = self.eigenvalues[k];
                for &i in &self.active {
                    v[i] = self.u_rotated[i] / (self.d_sorted[i] - lambda);
                }
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                for x in &mut v {
                    *x /= norm;
                }
            }
        }
        // Undo the degeneracy rotations (transposed, reverse order), then the
        // sorting permutation.
        for &(i, j, c, s) in self.rotations.iter().rev() {
            let (vi, vj) = (v[i], v[j]);
            v[i] = c * vi - s * vj;
            v[j] = s * vi + c * vj;
        }
        let mut out = vec![0.0; n];
        for (sorted_pos, &orig) in self.perm.iter().enumerate() {
            out[orig] = v[sorted_pos];
        }
        out
    }

    /// Dot product of the `k`-th eigenvector with `z`, in `O(n)` without
    /// materializing the vector. `z` is in the caller's original index order.
    pub fn eigenvector_dot(&self, k: usize, z: &[f64]) -> Result<f64, SymplecticError> {
        let n = self.len();
        if z.len() != n {
            return Err(SymplecticError::VectorLength {
                expected: n,
                got: z.len(),
            });
        }
        // Transform z into the rotated-sorted frame once; the eigenvector
        // there is either a unit vector or the secular form.
        let mut zs = vec![0.0; n];
        for (sorted_pos, &orig) in self.perm.iter().enumerate() {
            zs[sorted_pos] = z[orig];
        }
        for &(i, j, c, s) in self.rotations.iter() {
            let (zi, zj) = (zs[i], zs[j]);
            zs[i] = c * zi + s * zj;
            zs[j] = -s * zi + c * zj;
        }
        Ok(match self.deflated_source[k] {
            Some(pos) => zs[pos],
            None => {
                let lambda = self.eigenvalues[k];
                let mut dot = 0.0;
                let mut nrm2 = 0.0;
                for &i in &self.active {
                    let vi = self.u_rotated[i] / (self.d_sorted[i] - lambda);
                    dot += vi * zs[i];
                    nrm2 += vi * vi;
                }
                dot / nrm2.sqrt()
            }
        })
    }
}

/// Secular function `f(λ) = 1 + rho Σ u_i^2/(d_i - λ)` and its derivative,
/// restricted to the active indices.
fn secular_f(
    d: &[f64],
    u: &[f64],
    active: &[usize],
    rho: f64,
    lambda: f64,
) -> (f64, f64) {
    let mut f = 1.0;
    let mut df = 0.0;
    for &i in active {
        let delta = d[i] - lambda;
        let w = u[i] * u[i];
        f += rho * w / delta;
        df += rho * w / (delta * delta);
    }
    (f, df)
}

/// Find the secular root in the open interval `(lo, hi)`. For interior
/// intervals both endpoints are poles; for the exterior interval one endpoint
/// is a pole and the other a finite bound that is widened until the sign
/// flips.
#[allow(clippy::too_many_arguments)]
fn solve_secular(
    d: &[f64],
    u: &[f64],
    active: &[usize],
    rho: f64,
    mut lo: f64,
    mut hi: f64,
    k: usize,
    m: usize,
) -> Result<f64, SymplecticError> {
    // Near the pole(s) the sign of f is fixed by the diverging term; encode it
    // instead of evaluating at the pole. For rho > 0, f -> -inf at lo+ and
    // +inf at hi- on interior intervals; mirrored for rho < 0.
    let exterior = (rho > 0.0 && k == m - 1) || (rho < 0.0 && k == 0);
    if exterior {
        // Widen the finite end until f has the sign that brackets the root.
        let pole = if rho > 0.0 { lo } else { hi };
        let mut span = (if rho > 0.0 { hi - lo } else { hi - lo }).max(f64::MIN_POSITIVE);
        let mut ok = false;
        for _ in 0..80 {
            let probe = if rho > 0.0 { pole + span } else { pole - span };
            let (f, _) = secular_f(d, u, active, rho, probe);
            if (rho > 0.0 && f > 0.0) || (rho < 0.0 && f > 0.0) {
                if rho > 0.0 {
                    hi = probe;
                } else {
                    lo = probe;
                }
                ok = true;
                break;
            }
            span *= 2.0;
        }
        if !ok {
            return Err(SymplecticError::SecularBracketing { index: k });
        }
    }

    // Sign of f just inside lo / hi (without evaluating at poles).
    // rho > 0: f(lo+) = -inf, f(hi-) = +inf  (interior); exterior top: same.
    // rho < 0: f(lo+) = +inf... mirrored. Encode via `f_neg_at_lo`.
    let f_neg_at_lo = rho > 0.0;

    let mut lambda = 0.5 * (lo + hi);
    for _ in 0..SECULAR_MAX_ITER {
        let width = hi - lo;
        let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
        if width <= SECULAR_RTOL * scale {
            break;
        }
        let (f, df) = secular_f(d, u, active, rho, lambda);
        if f == 0.0 || !f.is_finite() {
            break;
        }
        let f_is_neg = f < 0.0;
        if f_is_neg == f_neg_at_lo {
            lo = lambda;
        } else {
            hi = lambda;
        }
        // Newton step, safeguarded to the current bracket.
        let newton = lambda - f / df;
        lambda = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Ok(lambda)
}
