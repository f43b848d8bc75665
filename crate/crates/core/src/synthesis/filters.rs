use core::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};

/// RC relaxation VCO: integrating capacitor plus Schmitt comparator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VcoConfig {
    /// Ω
    pub r: f64,
    /// F
    pub c: f64,
    /// Comparator hysteresis, V.
    pub v_hyst: f64,
}

impl Default for VcoConfig {
    fn default() -> Self {
        Self {
            r: 50.0e3,
            c: 10.0e-12,
            v_hyst: 0.5,
        }
    }
}

impl VcoConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("r", self.r), ("c", self.c), ("v_hyst", self.v_hyst)] {
            ensure!(
                v.is_finite() && v > 0.0,
                Domain,
                "VCO {name} must be positive, got {v}"
            );
        }
        Ok(())
    }

    fn period_scale(&self) -> f64 {
        4.0 * self.r * self.c * self.v_hyst
    }
}

/// f = V_ctrl / (4·R·C·V_hyst), Hz.
pub fn vco_frequency(cfg: &VcoConfig, v_ctrl: f64) -> Result<f64> {
    cfg.validate()?;
    ensure!(
        v_ctrl >= 0.0,
        Input,
        "control voltage must be non-negative, got {v_ctrl}"
    );
    Ok(v_ctrl / cfg.period_scale())
}

/// K_v = 2π / (4·R·C·V_hyst), rad/s/V.
pub fn vco_gain(cfg: &VcoConfig) -> Result<f64> {
    cfg.validate()?;
    Ok(TAU / cfg.period_scale())
}

/// Magnitude and phase (rad) of a filter at one frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterResponse {
    pub magnitude: f64,
    pub phase: f64,
}

fn check_rc(rc: f64, omega: f64) -> Result<()> {
    ensure!(
        rc.is_finite() && rc > 0.0,
        Input,
        "RC must be positive, got {rc}"
    );
    ensure!(
        omega >= 0.0,
        Input,
        "angular frequency must be non-negative, got {omega}"
    );
    Ok(())
}

/// Three cascaded RC sections, 1/(1 + sRC)³.
pub fn lpf3_response(rc: f64, omega: f64) -> Result<FilterResponse> {
    check_rc(rc, omega)?;
    let x = omega * rc;
    Ok(FilterResponse {
        magnitude: libm::pow(1.0 + x * x, -1.5),
        phase: -3.0 * libm::atan(x),
    })
}

/// First-order all-pass (1 − sRC)/(1 + sRC); −90° at ω = 1/RC.
pub fn allpass_response(rc: f64, omega: f64) -> Result<FilterResponse> {
    check_rc(rc, omega)?;
    Ok(FilterResponse {
        magnitude: 1.0,
        phase: -2.0 * libm::atan(omega * rc),
    })
}
