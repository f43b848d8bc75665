//! Physical constants (SI, CODATA exact values).

/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380649e-23;
/// Elementary charge, C.
pub const ELEMENTARY_CHARGE: f64 = 1.602176634e-19;
/// Planck constant, J·s.
pub const PLANCK: f64 = 6.62607015e-34;
/// Reference temperature for room-temperature device parameters, K.
pub const ROOM_TEMPERATURE: f64 = 300.0;
