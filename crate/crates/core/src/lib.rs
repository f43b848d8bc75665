//! Behavioral simulation of a cryogenic (4 K) analog signal chain that drives
//! and reads out superconducting transmon qubits.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is a pure
//! function of its inputs or a seeded simulation; file formats, the command
//! line front end and report emission live in the `cryochain` crate.
//!
//! Module map:
//!
//! * [`device`]: temperature-dependent MOSFET and noise parameters.
//! * [`synthesis`]: PLL loop dynamics, VCO law, harmonic filter, all-pass
//!   90° shifter and quadrature LO generation.
//! * [`modulation`]: DAC, pulse envelopes, I/Q upconversion, image rejection
//!   and the power stage.
//! * [`qubit`]: transmon energies, Bloch rotations, coherence, fidelity and
//!   dispersive readout SNR.
//! * [`readout`]: LNA, flash ADC, 8-PSK and symbol error rate.
//! * [`chain`]: end-to-end control, readout and loopback experiments plus the
//!   power budget.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod chain;
pub mod consts;
pub mod device;
mod error;
pub mod modulation;
pub mod qubit;
pub mod readout;
pub mod signal;
pub mod stats;
pub mod synthesis;

pub use error::{Error, Result};
pub use signal::{ComplexSample, Sample, SampledSignal};
