//! Temperature-dependent device physics shared by the analog blocks.
//!
//! All quantities are SI: volts, kelvin, V/√Hz. Conversion to mV/dec or
//! nV/√Hz happens at the report layer.

use core::f64::consts::LN_10;

use serde::{Deserialize, Serialize};

use crate::consts::{BOLTZMANN, ELEMENTARY_CHARGE, ROOM_TEMPERATURE};
use crate::error::{ensure, Result};

/// Device parameters at one operating temperature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceEnvironment {
    /// Operating temperature, K.
    pub temperature: f64,
    /// Mobility at 300 K as a scale factor (1.0 = room-temperature mobility).
    #[serde(rename = "mu_300K")]
    pub mu_300k: f64,
    /// Mobility temperature exponent, 1.5 to 2.0.
    pub alpha: f64,
    /// Room-temperature threshold voltage, V.
    #[serde(rename = "vth_300K")]
    pub vth_300k: f64,
    /// Body-effect coefficient, V^1/2.
    pub gamma: f64,
    /// Fermi potential at `temperature`, V. Taken as an input, not derived
    /// from doping.
    #[serde(rename = "phi_F")]
    pub phi_f: f64,
    /// Largest mobility enhancement the power law is allowed to report.
    pub mobility_cap: f64,
}

impl Default for DeviceEnvironment {
    fn default() -> Self {
        Self {
            temperature: 4.0,
            mu_300k: 1.0,
            alpha: 1.5,
            vth_300k: 0.45,
            gamma: 0.3,
            phi_f: 0.25,
            mobility_cap: 5.0,
        }
    }
}

impl DeviceEnvironment {
    /// Same parameters at a different temperature.
    pub fn at_temperature(&self, temperature: f64) -> Self {
        Self {
            temperature,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(
            self.temperature.is_finite() && self.temperature > 0.0,
            Domain,
            "temperature must be positive, got {} K",
            self.temperature
        );
        ensure!(
            (1.5..=2.0).contains(&self.alpha),
            Domain,
            "mobility exponent alpha must lie in [1.5, 2.0], got {}",
            self.alpha
        );
        ensure!(
            (3.0..=5.0).contains(&self.mobility_cap),
            Domain,
            "mobility cap must lie in [3, 5], got {}",
            self.mobility_cap
        );
        ensure!(self.mu_300k > 0.0, Domain, "mu_300K must be positive");
        ensure!(self.gamma >= 0.0, Domain, "gamma must be non-negative");
        ensure!(self.phi_f >= 0.0, Domain, "phi_F must be non-negative");
        Ok(())
    }
}

/// Input-referred amplifier noise densities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseDensity {
    /// V/√Hz
    pub voltage_density: f64,
    /// A/√Hz
    pub current_density: f64,
}

impl NoiseDensity {
    pub fn new(voltage_density: f64, current_density: f64) -> Result<Self> {
        ensure!(
            voltage_density >= 0.0 && current_density >= 0.0,
            Domain,
            "noise densities must be non-negative"
        );
        Ok(Self {
            voltage_density,
            current_density,
        })
    }
}

fn positive_temperature(t: f64) -> Result<()> {
    ensure!(
        t.is_finite() && t > 0.0,
        Domain,
        "temperature must be positive, got {t} K"
    );
    Ok(())
}

/// Mobility enhancement relative to 300 K, clamped to `mobility_cap`.
///
/// The bare power law `(T/300)^-α` gives ~650× at 4 K; measured devices
/// saturate at a few times room-temperature mobility, hence the clamp.
pub fn mobility_factor(env: &DeviceEnvironment) -> Result<f64> {
    positive_temperature(env.temperature)?;
    let raw = libm::pow(env.temperature / ROOM_TEMPERATURE, -env.alpha);
    Ok(raw.min(env.mobility_cap))
}

/// Absolute mobility in the units of `mu_300K`.
pub fn mobility(env: &DeviceEnvironment) -> Result<f64> {
    Ok(env.mu_300k * mobility_factor(env)?)
}

/// Threshold voltage with the freeze-out body-effect term, V.
pub fn threshold_voltage(env: &DeviceEnvironment) -> Result<f64> {
    ensure!(
        env.phi_f >= 0.0,
        Domain,
        "phi_F must be non-negative, got {}",
        env.phi_f
    );
    Ok(env.vth_300k + env.gamma * libm::sqrt(env.phi_f))
}

/// Thermal-limit subthreshold swing (kT/q)·ln 10, V/decade.
pub fn subthreshold_swing(temperature: f64) -> Result<f64> {
    positive_temperature(temperature)?;
    Ok(BOLTZMANN * temperature / ELEMENTARY_CHARGE * LN_10)
}

/// Johnson noise voltage density √(4kTR), V/√Hz.
pub fn thermal_noise_density(temperature: f64, resistance: f64) -> Result<f64> {
    positive_temperature(temperature)?;
    ensure!(
        resistance.is_finite() && resistance >= 0.0,
        Domain,
        "resistance must be non-negative, got {resistance} Ω"
    );
    Ok(libm::sqrt(4.0 * BOLTZMANN * temperature * resistance))
}

/// Ratio of thermal noise power at `t_hot` to that at `t_cold` (same R and
/// bandwidth).
pub fn noise_power_reduction(t_hot: f64, t_cold: f64) -> Result<f64> {
    positive_temperature(t_hot)?;
    positive_temperature(t_cold)?;
    Ok(t_hot / t_cold)
}
