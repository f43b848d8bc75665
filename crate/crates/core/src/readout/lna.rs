use serde::{Deserialize, Serialize};

use crate::consts::BOLTZMANN;
use crate::error::{ensure, Result};

/// Non-inverting cryogenic LNA with input-referred voltage and current noise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LnaConfig {
    /// Feedback resistor, Ω.
    pub r_f: f64,
    /// Ground-leg resistor, Ω.
    pub r_2: f64,
    /// Input voltage noise density, V/√Hz.
    pub e_n: f64,
    /// Input current noise density, A/√Hz.
    pub i_n: f64,
    /// Source resistance, Ω.
    pub r_s: f64,
    /// Source temperature, K.
    pub temperature: f64,
}

impl Default for LnaConfig {
    fn default() -> Self {
        Self {
            r_f: 4.0e3,
            r_2: 1.0e3,
            e_n: 0.9e-9,
            i_n: 1.0e-12,
            r_s: 50.0,
            temperature: 4.0,
        }
    }
}

impl LnaConfig {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.r_f,
            self.r_2,
            self.e_n,
            self.i_n,
            self.r_s,
            self.temperature,
        ]
        .iter()
        .all(|v| v.is_finite());
        ensure!(finite, Domain, "LNA parameters must be finite");
        ensure!(self.r_f >= 0.0, Domain, "LNA r_f must be non-negative");
        ensure!(self.r_2 > 0.0, Domain, "LNA r_2 must be positive");
        ensure!(
            self.e_n >= 0.0 && self.i_n >= 0.0,
            Domain,
            "LNA noise densities must be non-negative"
        );
        ensure!(
            self.r_s > 0.0,
            Domain,
            "LNA source resistance must be positive"
        );
        ensure!(
            self.temperature > 0.0,
            Domain,
            "LNA temperature must be positive"
        );
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LnaGain {
    pub linear: f64,
    pub db: f64,
}

/// Voltage gain 1 + R_f/R_2.
pub fn lna_gain(cfg: &LnaConfig) -> Result<LnaGain> {
    cfg.validate()?;
    let linear = 1.0 + cfg.r_f / cfg.r_2;
    Ok(LnaGain {
        linear,
        db: 20.0 * libm::log10(linear),
    })
}

/// Spot noise figure in dB against the thermal noise of the source resistance.
pub fn lna_noise_figure(cfg: &LnaConfig) -> Result<f64> {
    cfg.validate()?;
    let amp = cfg.e_n * cfg.e_n + (cfg.i_n * cfg.r_s) * (cfg.i_n * cfg.r_s);
    let source = 4.0 * BOLTZMANN * cfg.temperature * cfg.r_s;
    Ok(10.0 * libm::log10(1.0 + amp / source))
}
