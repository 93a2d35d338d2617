//! Physical constants at the precision the model is calibrated against.
//!
//! These are deliberately the rounded values used throughout the reference
//! parameter set, not CODATA.

/// Planck constant (J·s).
pub const PLANCK: f64 = 6.626_069_3e-34;

/// Speed of light in vacuum (m/s).
pub const LIGHT_SPEED: f64 = 3.0e8;

/// Elementary charge (C).
pub const ELECTRON_CHARGE: f64 = 1.6e-19;

/// Boltzmann constant (J/K).
pub const BOLTZMANN: f64 = 1.38e-23;
