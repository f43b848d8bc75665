//! Local-oscillator generation: PLL loop dynamics and phase noise, the
//! relaxation VCO law, the third-order harmonic filter, the all-pass 90°
//! shifter and quadrature LO synthesis.

mod filters;
mod lo;
mod noise;
mod pll;

pub use filters::{
    allpass_response, lpf3_response, vco_frequency, vco_gain, FilterResponse, VcoConfig,
};
pub use lo::{generate_quadrature_lo, measure_quadrature, QuadratureMeasurement};
pub use noise::{combine_levels, combine_phase_noise, log_offset_grid, PhaseNoiseProfile};
pub use pll::{
    closed_loop_magnitude, closed_loop_response, natural_frequency_and_damping,
    phase_detector_output, simulate_lock, LockAcquisition, LoopDynamics, PllConfig, PllTrajectory,
};
