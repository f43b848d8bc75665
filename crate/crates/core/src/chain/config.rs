use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::device::DeviceEnvironment;
use crate::error::{ensure, Result};
use crate::modulation::{DacConfig, PulseSpec};
use crate::qubit::{ReadoutSpec, TransmonParams};
use crate::readout::{AdcConfig, LnaConfig};
use crate::synthesis::{LockAcquisition, PllConfig, VcoConfig};

/// Static quadrature error of the LO feeding the I/Q modulator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoImpairments {
    pub phase_error_deg: f64,
    pub amp_imbalance_db: f64,
}

impl Default for LoImpairments {
    fn default() -> Self {
        Self {
            phase_error_deg: 1.8,
            amp_imbalance_db: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerAmpConfig {
    pub gain_db: f64,
    /// Symmetric output rail, V.
    pub v_clip: f64,
}

impl Default for PowerAmpConfig {
    fn default() -> Self {
        Self {
            gain_db: 10.0,
            v_clip: 5.0,
        }
    }
}

/// How the readout and loopback experiments set their noise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct LinkConfig {
    /// Fixed E_s/N₀ at the LNA input, dB. `None` derives it from the
    /// readout SNR and the LNA noise figure.
    #[serde(default)]
    pub es_n0_override_db: Option<f64>,
    /// Drive strength, rad/s per volt of baseband envelope. `None` calibrates
    /// it so a full-scale DAC word gives a π rotation.
    #[serde(default)]
    pub rabi_rate_per_volt: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopbackConfig {
    /// Symbols pushed through the loopback by the chain command.
    pub symbols: usize,
    /// Record length for the ENOB measurement.
    pub enob_samples: usize,
}

impl Default for LoopbackConfig {
    fn default() -> Self {
        Self {
            symbols: 10_000,
            enob_samples: 8192,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerEntry {
    pub block: String,
    /// W
    pub power: f64,
}

/// Steady-state dissipation of the 4 K stage and its projection to a
/// smaller node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerConfig {
    pub node_nm: f64,
    pub vdd: f64,
    /// W
    pub steady_state_power: f64,
    pub projected_node_nm: f64,
    pub projected_vdd: f64,
    /// Cooling power available at the 4 K stage, W.
    pub stage_budget: f64,
    /// Optional per-block split of the total, W.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub breakdown: Vec<PowerEntry>,
}

impl Default for PowerConfig {
    fn default() -> Self {
        Self {
            node_nm: 180.0,
            vdd: 1.8,
            steady_state_power: 0.1997,
            projected_node_nm: 65.0,
            projected_vdd: 1.2,
            stage_budget: 1.0,
            breakdown: Vec::new(),
        }
    }
}

impl PowerConfig {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.node_nm,
            self.vdd,
            self.steady_state_power,
            self.projected_node_nm,
            self.projected_vdd,
            self.stage_budget,
        ];
        ensure!(
            all.iter().all(|v| v.is_finite() && *v > 0.0),
            Domain,
            "power settings must be positive"
        );
        ensure!(
            self.breakdown
                .iter()
                .all(|e| e.power.is_finite() && e.power >= 0.0),
            Domain,
            "power breakdown entries must be non-negative"
        );
        Ok(())
    }
}

/// Every knob of the simulated chain. The default is the nominal design
/// point; [`ChainConfig::ideal`] removes every impairment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainConfig {
    pub device: DeviceEnvironment,
    pub pll: PllConfig,
    pub vco: VcoConfig,
    pub dac: DacConfig,
    pub pulse: PulseSpec,
    pub qubit: TransmonParams,
    pub readout_spec: ReadoutSpec,
    pub lna: LnaConfig,
    pub adc: AdcConfig,
    /// Hz
    pub carrier_hz: f64,
    /// Hz
    pub sample_rate: f64,
    pub seed: u64,
    #[serde(default)]
    pub lo: LoImpairments,
    #[serde(default)]
    pub power_amp: PowerAmpConfig,
    #[serde(default)]
    pub lock: LockAcquisition,
    #[serde(default)]
    pub link: LinkConfig,
    #[serde(default)]
    pub loopback: LoopbackConfig,
    #[serde(default)]
    pub power: PowerConfig,
}

/// Default seed for configs and command-line runs.
pub const DEFAULT_SEED: u64 = 0x5EED_CAFE;

impl Default for ChainConfig {
    fn default() -> Self {
        Self {
            device: DeviceEnvironment::default(),
            pll: PllConfig::default(),
            vco: VcoConfig::default(),
            dac: DacConfig::default(),
            pulse: PulseSpec::default(),
            qubit: TransmonParams::default(),
            readout_spec: ReadoutSpec::default(),
            lna: LnaConfig::default(),
            adc: AdcConfig::default(),
            carrier_hz: 5.0e9,
            sample_rate: 100.0e9,
            seed: DEFAULT_SEED,
            lo: LoImpairments::default(),
            power_amp: PowerAmpConfig::default(),
            lock: LockAcquisition::default(),
            link: LinkConfig::default(),
            loopback: LoopbackConfig::default(),
            power: PowerConfig::default(),
        }
    }
}

impl ChainConfig {
    /// Nominal chain with a balanced LO and an unclipped power stage.
    pub fn ideal() -> Self {
        let base = Self::default();
        Self {
            lo: LoImpairments {
                phase_error_deg: 0.0,
                amp_imbalance_db: 0.0,
            },
            power_amp: PowerAmpConfig {
                gain_db: 10.0,
                v_clip: 1.0e3,
            },
            ..base
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.device.validate()?;
        self.pll.validate()?;
        self.vco.validate()?;
        self.dac.validate()?;
        self.pulse.validate()?;
        self.qubit.validate()?;
        self.readout_spec.validate()?;
        self.lna.validate()?;
        self.adc.validate()?;
        self.power.validate()?;
        ensure!(
            self.carrier_hz.is_finite() && self.carrier_hz > 0.0,
            Domain,
            "carrier_hz must be positive"
        );
        ensure!(
            self.sample_rate.is_finite() && self.sample_rate > 10.0 * self.carrier_hz,
            Domain,
            "sample_rate {:e} Hz must exceed 10× carrier_hz {:e} Hz",
            self.sample_rate,
            self.carrier_hz
        );
        ensure!(
            self.adc.n_bits == 3,
            Unsupported,
            "the phase-digitizing readout needs a 3-bit ADC (one code per 8-PSK sector), got {} bits",
            self.adc.n_bits
        );
        ensure!(
            self.lo.phase_error_deg.is_finite() && self.lo.amp_imbalance_db.is_finite(),
            Domain,
            "LO impairments must be finite"
        );
        ensure!(
            self.power_amp.gain_db.is_finite() && self.power_amp.v_clip > 0.0,
            Domain,
            "power amplifier needs finite gain and a positive clip level"
        );
        if let Some(db) = self.link.es_n0_override_db {
            ensure!(!db.is_nan(), Domain, "es_n0_override_db must not be NaN");
        }
        if let Some(r) = self.link.rabi_rate_per_volt {
            ensure!(r.is_finite(), Domain, "rabi_rate_per_volt must be finite");
        }
        Ok(())
    }
}
