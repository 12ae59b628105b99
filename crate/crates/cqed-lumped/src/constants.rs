//! Physical constants (2019 SI exact values) used across the workspace.

use std::f64::consts::PI;

/// Elementary charge `e` in coulomb (exact).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Planck constant `h` in joule-second (exact).
pub const PLANCK: f64 = 6.626_070_15e-34;

/// Reduced Planck constant `ħ = h / 2π` in joule-second.
pub const REDUCED_PLANCK: f64 = PLANCK / (2.0 * PI);

/// Superconducting flux quantum `Φ_q = h / 2e` in weber.
pub const FLUX_QUANTUM: f64 = PLANCK / (2.0 * ELEMENTARY_CHARGE);

/// Resistance quantum `R_Q = h / 4e²` in ohm.
pub const RESISTANCE_QUANTUM: f64 =
    PLANCK / (4.0 * ELEMENTARY_CHARGE * ELEMENTARY_CHARGE);
