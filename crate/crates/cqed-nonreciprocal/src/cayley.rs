//! Cayley transforms between scattering and immittance descriptions.

use nalgebra::DMatrix;

use crate::device::ScatteringDevice;
use crate::error::NonreciprocalError;
use crate::spectral::orthogonal_spectrum;

/// Admittance matrix of a device whose scattering spectrum excludes `-1`:
/// `Y = R⁻¹ (1 + S)⁻¹ (1 - S)`, skew-symmetric for orthogonal `S`.
///
/// # Errors
///
/// Returns an error when `-1` is a scattering eigenvalue (the inverse does
/// not exist and the device has no admittance description).
pub fn cayley_admittance(dev: &ScatteringDevice) -> Result<DMatrix<f64>, NonreciprocalError> {
    let spectrum = orthogonal_spectrum(dev.s())?;
    if !spectrum.minus.is_empty() {
        return Err(NonreciprocalError::ForbiddenEigenvalue {
            eigenvalue: -1.0,
            immittance: "Y",
        });
    }
    let n = dev.ports();
    let eye = DMatrix::identity(n, n);
    let sum = &eye + dev.s();
    let diff = &eye - dev.s();
    let y = sum
        .lu()
        .solve(&diff)
        .ok_or(NonreciprocalError::ForbiddenEigenvalue {
            eigenvalue: -1.0,
            immittance: "Y",
        })?
        / dev.r();
    Ok(antisymmetrize(y))
}

/// Impedance matrix of a device whose scattering spectrum excludes `+1`:
/// `Z = R (1 - S)⁻¹ (1 + S)`, skew-symmetric for orthogonal `S`.
///
/// # Errors
///
/// Returns an error when `+1` is a scattering eigenvalue (the device has no
/// impedance description).
pub fn cayley_impedance(dev: &ScatteringDevice) -> Result<DMatrix<f64>, NonreciprocalError> {
    let spectrum = orthogonal_spectrum(dev.s())?;
    if !spectrum.plus.is_empty() {
        return Err(NonreciprocalError::ForbiddenEigenvalue {
            eigenvalue: 1.0,
            immittance: "Z",
        });
    }
    let n = dev.ports();
    let eye = DMatrix::identity(n, n);
    let sum = &eye + dev.s();
    let diff = &eye - dev.s();
    let z = diff
        .lu()
        .solve(&sum)
        .ok_or(NonreciprocalError::ForbiddenEigenvalue {
            eigenvalue: 1.0,
            immittance: "Z",
        })?
        * dev.r();
    Ok(antisymmetrize(z))
}

/// Replaces a numerically skew matrix by its exactly skew-symmetric part.
pub(crate) fn antisymmetrize(mut m: DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    for i in 0..n {
        m[(i, i)] = 0.0;
        for j in (i + 1)..n {
            let v = 0.5 * (m[(i, j)] - m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = -v;
        }
    }
    m
}
