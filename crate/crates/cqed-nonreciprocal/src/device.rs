//! Validated scattering description of an ideal nonreciprocal multiport.

use nalgebra::DMatrix;

use crate::error::NonreciprocalError;

/// Largest tolerated deviation of SᵀS from the identity.
const ORTHOGONALITY_TOL: f64 = 1e-9;

/// An ideal linear nonreciprocal device described by a constant real
/// orthogonal scattering matrix and a reference resistance.
///
/// The constitutive law relates port voltages and currents through
/// `(1 - S) V = R (1 + S) I`; orthogonality of `S` encodes losslessness.
/// Instances are validated on construction, so every downstream operation
/// can assume a square orthogonal matrix and a positive resistance.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringDevice {
    s: DMatrix<f64>,
    r: f64,
}

impl ScatteringDevice {
    /// Builds a device from a scattering matrix and reference resistance.
    ///
    /// # Errors
    ///
    /// Returns an error when the matrix is empty or non-square, when any
    /// entry is non-finite or `SᵀS` deviates from the identity by more than
    /// an absolute `1e-9`, or when the resistance is not positive and finite.
    pub fn new(s: DMatrix<f64>, r: f64) -> Result<Self, NonreciprocalError> {
        if s.nrows() == 0 || s.nrows() != s.ncols() {
            return Err(NonreciprocalError::BadShape {
                rows: s.nrows(),
                cols: s.ncols(),
            });
        }
        if !r.is_finite() || r <= 0.0 {
            return Err(NonreciprocalError::NonpositiveResistance { value: r });
        }
        if s.iter().any(|x| !x.is_finite()) {
            return Err(NonreciprocalError::NotOrthogonal { deviation: f64::NAN });
        }
        let gram = s.transpose() * &s;
        let mut deviation = 0.0_f64;
        for i in 0..gram.nrows() {
            for j in 0..gram.ncols() {
                let target = if i == j { 1.0 } else { 0.0 };
                deviation = deviation.max((gram[(i, j)] - target).abs());
            }
        }
        if deviation > ORTHOGONALITY_TOL {
            return Err(NonreciprocalError::NotOrthogonal { deviation });
        }
        Ok(Self { s, r })
    }

    /// Builds the canonical ideal `n`-port circulator: the cyclic
    /// permutation that routes port `k` to port `k + 1`, times `(-1)ⁿ`.
    ///
    /// This family has a `-1` scattering eigenvalue for every `n` (hence no
    /// admittance matrix) and additionally a `+1` eigenvalue for even `n`
    /// (hence no impedance matrix either).
    ///
    /// # Errors
    ///
    /// Returns an error when `n` is zero or the resistance is not positive
    /// and finite.
    pub fn ideal_circulator(n: usize, r: f64) -> Result<Self, NonreciprocalError> {
        if n == 0 {
            return Err(NonreciprocalError::BadShape { rows: 0, cols: 0 });
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let mut s = DMatrix::zeros(n, n);
        for k in 0..n {
            s[((k + 1) % n, k)] = sign;
        }
        Self::new(s, r)
    }

    /// The scattering matrix.
    pub fn s(&self) -> &DMatrix<f64> {
        &self.s
    }

    /// The reference resistance in ohms.
    pub fn r(&self) -> f64 {
        self.r
    }

    /// Number of ports.
    pub fn ports(&self) -> usize {
        self.s.nrows()
    }
}
