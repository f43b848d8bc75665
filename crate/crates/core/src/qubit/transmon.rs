use serde::{Deserialize, Serialize};

use crate::consts::{BOLTZMANN, PLANCK};
use crate::error::{ensure, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransmonParams {
    /// Josephson energy / h, Hz.
    pub ej_over_h: f64,
    /// Charging energy / h, Hz.
    pub ec_over_h: f64,
    /// Qubit-resonator coupling g/2π, Hz.
    pub g_over_2pi: f64,
    /// Qubit-resonator detuning Δ/2π, Hz.
    pub delta_over_2pi: f64,
    /// Energy relaxation time, s.
    pub t1: f64,
    /// Dephasing time, s. At most 2·t1.
    pub t2: f64,
}

impl Default for TransmonParams {
    fn default() -> Self {
        Self {
            ej_over_h: 16.9e9,
            ec_over_h: 0.2e9,
            g_over_2pi: 100.0e6,
            delta_over_2pi: 1.0e9,
            t1: 50.0e-6,
            t2: 30.0e-6,
        }
    }
}

impl TransmonParams {
    pub fn validate(&self) -> Result<()> {
        ensure!(
            self.ec_over_h > 0.0 && self.ej_over_h > self.ec_over_h,
            Domain,
            "transmon regime requires E_J > E_C > 0 (got E_J/h = {}, E_C/h = {})",
            self.ej_over_h,
            self.ec_over_h
        );
        ensure!(
            self.t1 > 0.0 && self.t2 > 0.0,
            Domain,
            "coherence times must be positive"
        );
        ensure!(
            self.t2 <= 2.0 * self.t1,
            Domain,
            "T2 = {} s exceeds 2·T1 = {} s",
            self.t2,
            2.0 * self.t1
        );
        Ok(())
    }
}

/// f₀₁ = √(8·E_J·E_C)/h − E_C/h, Hz.
pub fn transition_frequency(p: &TransmonParams) -> Result<f64> {
    p.validate()?;
    Ok(libm::sqrt(8.0 * p.ej_over_h * p.ec_over_h) - p.ec_over_h)
}

/// Leading-order anharmonicity f₁₂ − f₀₁ = −E_C/h, Hz.
pub fn anharmonicity(p: &TransmonParams) -> f64 {
    -p.ec_over_h
}

/// χ = g²/Δ (signed, Hz). The two qubit states pull the resonator 2χ apart.
pub fn dispersive_shift(p: &TransmonParams) -> Result<f64> {
    ensure!(
        p.delta_over_2pi != 0.0,
        Domain,
        "dispersive shift needs nonzero detuning"
    );
    Ok(p.g_over_2pi * p.g_over_2pi / p.delta_over_2pi)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReadoutSpec {
    /// Dispersive shift, rad/s.
    pub chi: f64,
    /// Mean resonator photon number.
    pub n_bar: f64,
    /// Integration time, s.
    pub t_meas: f64,
    /// System noise temperature for the power-ratio SNR form, K.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_sys: Option<f64>,
    /// Noise bandwidth for the power-ratio SNR form, Hz.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bandwidth: Option<f64>,
    /// Received signal power for the power-ratio SNR form, W.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signal_power: Option<f64>,
}

impl Default for ReadoutSpec {
    /// χ·T_meas = π/4 (χ/2π = 1.25 MHz, 100 ns integration).
    fn default() -> Self {
        Self {
            chi: core::f64::consts::FRAC_PI_4 / 100.0e-9,
            n_bar: 1.0,
            t_meas: 100.0e-9,
            t_sys: None,
            bandwidth: None,
            signal_power: None,
        }
    }
}

impl ReadoutSpec {
    pub fn validate(&self) -> Result<()> {
        ensure!(self.chi.is_finite(), Domain, "chi must be finite");
        ensure!(
            self.n_bar >= 0.0,
            Domain,
            "photon number must be non-negative"
        );
        ensure!(
            self.t_meas > 0.0,
            Domain,
            "measurement time must be positive"
        );
        Ok(())
    }
}

/// SNR with its dB value and whether it clears the 10 dB single-shot target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrEstimate {
    pub linear: f64,
    pub db: f64,
    pub meets_target: bool,
}

impl SnrEstimate {
    fn from_linear(linear: f64) -> Self {
        Self {
            linear,
            db: 10.0 * libm::log10(linear),
            meets_target: linear >= 10.0,
        }
    }
}

/// Dispersive readout SNR, 4χ²·n̄·T_meas / (1 + (2χ·T_meas)²), with χ in rad/s.
///
/// The expression is evaluated as written. Its numerator carries units of
/// 1/s (no resonator linewidth appears), so absolute values are only
/// comparable between configurations, not against a physical 10 dB bar.
pub fn readout_snr(spec: &ReadoutSpec) -> Result<SnrEstimate> {
    spec.validate()?;
    let x = 2.0 * spec.chi * spec.t_meas;
    let linear = 4.0 * spec.chi * spec.chi * spec.n_bar * spec.t_meas / (1.0 + x * x);
    Ok(SnrEstimate::from_linear(linear))
}

/// Power-ratio SNR, P_signal / (k_B·T_sys·B). Needs the three optional fields.
pub fn readout_snr_from_power(spec: &ReadoutSpec) -> Result<SnrEstimate> {
    let (Some(p), Some(t), Some(b)) = (spec.signal_power, spec.t_sys, spec.bandwidth) else {
        return Err(crate::Error::Input(
            "power-ratio SNR needs signal_power, t_sys and bandwidth".into(),
        ));
    };
    ensure!(
        p >= 0.0 && t > 0.0 && b > 0.0,
        Domain,
        "power-ratio SNR inputs must be positive"
    );
    Ok(SnrEstimate::from_linear(p / (BOLTZMANN * t * b)))
}

/// Default ratio h·f₀₁ / k_B·T regarded as "much greater than".
pub const THERMAL_MARGIN: f64 = 5.0;

/// Whether h·f₀₁ exceeds `margin`·k_B·T, i.e. thermal excitation is negligible.
pub fn thermal_occupancy_ok(f01: f64, temperature: f64, margin: f64) -> Result<bool> {
    ensure!(
        f01 > 0.0 && margin > 0.0,
        Domain,
        "frequency and margin must be positive"
    );
    ensure!(
        temperature >= 0.0,
        Domain,
        "temperature must be non-negative"
    );
    Ok(PLANCK * f01 > margin * BOLTZMANN * temperature)
}

/// Population and coherence envelopes of free decay.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coherence {
    /// exp(−t/T₁)
    pub population: f64,
    /// exp(−t/T₂)
    pub coherence: f64,
}

pub fn coherence_envelope(p: &TransmonParams, t: f64) -> Result<Coherence> {
    ensure!(t >= 0.0, Domain, "time must be non-negative");
    ensure!(
        p.t1 > 0.0 && p.t2 > 0.0,
        Domain,
        "coherence times must be positive"
    );
    Ok(Coherence {
        population: libm::exp(-t / p.t1),
        coherence: libm::exp(-t / p.t2),
    })
}

/// Largest RMS error for which the quadratic fidelity expansion is used
/// without a warning flag.
pub const FIDELITY_MODEL_LIMIT: f64 = 0.5;

/// Gate fidelity 1 − σ_φ²/2 − σ_A²/2 from RMS phase (rad) and fractional
/// amplitude errors.
///
/// Returns the value with a flag that is `false` when either input exceeds
/// [`FIDELITY_MODEL_LIMIT`] and the expansion is no longer trustworthy.
pub fn gate_fidelity(sigma_phi: f64, sigma_a: f64) -> Result<(f64, bool)> {
    ensure!(
        sigma_phi >= 0.0 && sigma_a >= 0.0,
        Domain,
        "RMS errors must be non-negative"
    );
    let in_model = sigma_phi <= FIDELITY_MODEL_LIMIT && sigma_a <= FIDELITY_MODEL_LIMIT;
    Ok((
        1.0 - 0.5 * sigma_phi * sigma_phi - 0.5 * sigma_a * sigma_a,
        in_model,
    ))
}
