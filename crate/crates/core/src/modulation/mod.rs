//! Control-path signal construction: DAC, pulse envelopes, I/Q
//! upconversion, image rejection and the power stage.

mod dac;
mod envelope;
mod iq;
mod power_stage;

pub use dac::{dac_levels, dac_linearity, dac_output, DacConfig, DacLinearity};
pub use envelope::{make_envelope, IqEnvelope, PulseShape, PulseSpec};
pub use iq::{image_rejection_ratio, iq_upconvert, quadrature_demodulate, IRR_CAP_DB};
pub use power_stage::{power_stage, PowerStageOutput};
