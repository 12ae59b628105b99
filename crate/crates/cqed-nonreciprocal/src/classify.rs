//! Scattering-spectrum classification of ideal nonreciprocal devices.

use num_complex::Complex;

use crate::device::ScatteringDevice;
use crate::error::NonreciprocalError;
use crate::spectral::orthogonal_spectrum;

/// Which immittance descriptions a scattering device admits, together with
/// its eigenvalue spectrum.
///
/// A lossless device has an admittance matrix exactly when `-1` is not a
/// scattering eigenvalue, and an impedance matrix exactly when `+1` is not;
/// devices with both eigenvalues can only be described by the scattering
/// relation itself.
#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    /// True when the device admits an admittance (Y) description.
    pub has_y: bool,
    /// True when the device admits an impedance (Z) description.
    pub has_z: bool,
    /// Scattering eigenvalues on the unit circle, sorted by ascending phase
    /// in `(-π, π]`; complex pairs appear as conjugates.
    pub eigenvalues: Vec<Complex<f64>>,
}

/// Classifies a device by the ±1 membership of its scattering spectrum.
///
/// # Errors
///
/// Returns an error when the spectral decomposition fails an internal
/// consistency check (possible only for matrices barely inside the
/// orthogonality admission tolerance).
pub fn classify(dev: &ScatteringDevice) -> Result<Classification, NonreciprocalError> {
    let spectrum = orthogonal_spectrum(dev.s())?;
    let mut eigenvalues: Vec<Complex<f64>> = Vec::with_capacity(dev.ports());
    for _ in &spectrum.minus {
        eigenvalues.push(Complex::new(-1.0, 0.0));
    }
    for _ in &spectrum.plus {
        eigenvalues.push(Complex::new(1.0, 0.0));
    }
    for plane in &spectrum.planes {
        eigenvalues.push(Complex::from_polar(1.0, plane.angle));
        eigenvalues.push(Complex::from_polar(1.0, -plane.angle));
    }
    // Phase of -1 is mapped to +π so it sorts last.
    eigenvalues.sort_by(|a, b| {
        let pa = if a.re == -1.0 && a.im == 0.0 {
            std::f64::consts::PI
        } else {
            a.im.atan2(a.re)
        };
        let pb = if b.re == -1.0 && b.im == 0.0 {
            std::f64::consts::PI
        } else {
            b.im.atan2(b.re)
        };
        pa.partial_cmp(&pb).expect("phases are finite")
    });
    Ok(Classification {
        has_y: spectrum.minus.is_empty(),
        has_z: spectrum.plus.is_empty(),
        eigenvalues,
    })
}
