//! Transmon and dispersive-readout physics.
//!
//! Frequencies in [`TransmonParams`] are ordinary frequencies (Hz). The
//! dispersive shift handed to [`readout_snr`] is angular (rad/s) so that
//! 2χ·T_meas is dimensionless.

mod bloch;
mod transmon;

pub use bloch::{apply_rotation, pulse_to_rotation, BlochState, Rotation};
pub use transmon::{
    anharmonicity, coherence_envelope, dispersive_shift, gate_fidelity, readout_snr,
    readout_snr_from_power, thermal_occupancy_ok, transition_frequency, Coherence, ReadoutSpec,
    SnrEstimate, TransmonParams, FIDELITY_MODEL_LIMIT, THERMAL_MARGIN,
};
