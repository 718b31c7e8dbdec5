//! Physical constants and unit helpers shared across the crate.
//!
//! Internal unit policy: strict SI everywhere (metres, amperes, teslas,
//! ohms, kelvins, watts). Current density is the single deliberate
//! exception — it is reported in A/cm² to match the engineering limit it
//! is compared against.

use std::f64::consts::PI;

/// Vacuum permeability μ₀ [T·m/A].
pub const MU0: f64 = 4.0e-7 * PI;

/// μ₀ / 4π [T·m/A] — the Biot–Savart prefactor.
pub const MU0_OVER_4PI: f64 = 1.0e-7;

/// Square metres per square centimetre.
pub const M2_PER_CM2: f64 = 1.0e-4;

/// Square centimetres per square metre.
pub const CM2_PER_M2: f64 = 1.0e4;

/// Reference ("room") temperature [K] used to anchor resistivity.
pub const T_REF: f64 = 293.0;

/// Metres per micrometre.
pub const UM: f64 = 1.0e-6;

/// Metres per millimetre.
pub const MM: f64 = 1.0e-3;
