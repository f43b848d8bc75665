//! Readout-path blocks: cryogenic LNA, flash ADC, 8-PSK decisions and
//! symbol error rate.

mod adc;
mod lna;
mod psk;

pub use adc::{
    adc_convert, adc_enob, adc_thresholds, enob_for_offset_sigma, offset_sigma_for_enob,
    priority_encode, quantization_noise_rms, thermometer_encode, thresholds_monotone, AdcConfig,
    EncoderMode,
};
pub use lna::{lna_gain, lna_noise_figure, LnaConfig, LnaGain};
pub use psk::{
    psk_demodulate, psk_modulate, ser_analytic, ser_monte_carlo, ser_monte_carlo_partitioned,
    ser_partition_errors, PskConstellation, SerEstimate, MIN_MC_TRIALS,
};
