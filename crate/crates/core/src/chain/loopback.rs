use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand_core::RngCore;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::config::ChainConfig;
use super::control::{measure_lo, run_control_path};
use super::power::{power_report, PowerReport};
use super::readout_path::{digitize_phase, effective_es_n0_db, noise_sigma};
use super::{rng, streams};
use crate::error::{ensure, Result};
use crate::modulation::{dac_levels, dac_linearity, image_rejection_ratio};
use crate::qubit::readout_snr;
use crate::readout::{
    adc_enob, adc_thresholds, lna_gain, lna_noise_figure, psk_modulate, ser_analytic,
    PskConstellation,
};
use crate::stats::{wilson_interval, Interval, Z95};
use crate::synthesis::simulate_lock;

/// A report field that could not be computed, with the reason.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Skipped {
    pub field: String,
    pub reason: String,
}

/// Every headline metric of a loopback run. Optional fields are `None`
/// exactly when a matching entry sits in `skipped`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    /// LO quadrature error, deg.
    pub iq_phase_error: f64,
    /// LO amplitude imbalance, dB.
    pub amp_imbalance: f64,
    /// Image rejection ratio of the modulator, dB.
    pub irr: f64,
    /// s
    pub pll_lock_time: Option<f64>,
    /// deg RMS
    pub pll_jitter_rms: Option<f64>,
    /// dB
    pub lna_gain: f64,
    /// dB
    pub lna_noise_figure: f64,
    /// E_s/N₀ used for the loopback, dB.
    pub es_n0: f64,
    pub ser_analytic: f64,
    /// Measured loopback symbol error rate.
    pub ser_mc: f64,
    pub ser_mc_ci95: Interval,
    pub symbols: u64,
    pub symbol_errors: u64,
    /// Dispersive readout SNR, dB.
    pub snr: f64,
    /// Gate fidelity of a full-scale control pulse.
    pub fidelity: Option<f64>,
    /// σ_φ behind `fidelity`, deg.
    pub sigma_phi: Option<f64>,
    pub enob: Option<f64>,
    /// Largest |DNL| of the DAC, LSB.
    pub dac_max_dnl: f64,
    pub power: PowerReport,
    pub skipped: Vec<Skipped>,
}

/// `n` uniformly drawn 3-bit words, reproducible from `seed`.
pub fn random_symbols(n: usize, seed: u64) -> Vec<u8> {
    let mut r = rng(seed, streams::SYMBOLS);
    (0..n).map(|_| (r.next_u32() & 7) as u8).collect()
}

/// Sends `symbols` through the impaired I/Q modulator, AWGN at the effective
/// E_s/N₀, the LNA and the phase-digitizing ADC, and collects the chain
/// metrics alongside.
///
/// The modulator's LO error acts on baseband as I' = I − ε·Q·sin φ,
/// Q' = ε·Q·cos φ.
pub fn run_loopback(cfg: &ChainConfig, symbols: &[u8]) -> Result<ChainReport> {
    cfg.validate()?;
    ensure!(
        !symbols.is_empty(),
        Input,
        "loopback needs at least one symbol"
    );
    let mut skipped = Vec::new();
    let mut skip = |field: &str, e: crate::Error| {
        skipped.push(Skipped {
            field: field.into(),
            reason: e.to_string(),
        })
    };

    let lo = measure_lo(cfg)?;
    let irr = image_rejection_ratio(lo.amplitude_ratio, lo.phase_error)?;

    let (pll_lock_time, pll_jitter_rms) = match simulate_lock(&cfg.pll, &cfg.lock) {
        Ok(t) => {
            if t.lock_time.is_none() {
                skip(
                    "pll_lock_time",
                    crate::Error::Decision("loop did not lock".into()),
                );
                skip(
                    "pll_jitter_rms",
                    crate::Error::Decision("loop did not lock".into()),
                );
            }
            (t.lock_time, t.post_lock_jitter_rms().map(f64::to_degrees))
        }
        Err(e) => {
            skip("pll_jitter_rms", e.clone());
            skip("pll_lock_time", e);
            (None, None)
        }
    };

    let (fidelity, sigma_phi) = match run_control_path(cfg, cfg.dac.codes() as u32 - 1) {
        Ok(run) => (Some(run.metrics.fidelity), Some(run.metrics.sigma_phi_deg)),
        Err(e) => {
            skip("sigma_phi", e.clone());
            skip("fidelity", e);
            (None, None)
        }
    };

    let enob = match adc_enob(&cfg.adc, cfg.adc.v_fs, cfg.loopback.enob_samples, cfg.seed) {
        Ok(v) => Some(v),
        Err(e) => {
            skip("enob", e);
            None
        }
    };

    let dac_max_dnl = dac_linearity(&dac_levels(&cfg.dac)?, &cfg.dac)?.max_abs_dnl();
    let gain = lna_gain(&cfg.lna)?;
    let es_n0 = effective_es_n0_db(cfg)?;
    let sigma = noise_sigma(es_n0);
    let thresholds = adc_thresholds(&cfg.adc)?;
    let constellation = PskConstellation::default();
    let (eps, pe) = (lo.amplitude_ratio, lo.phase_error);
    let (s_pe, c_pe) = (libm::sin(pe), libm::cos(pe));

    let mut r = rng(cfg.seed, streams::LOOPBACK);
    let mut errors = 0u64;
    for &sym in symbols {
        let (i, q) = psk_modulate(sym, &constellation)?;
        let (i, q) = (i - eps * q * s_pe, eps * q * c_pe);
        let ni: f64 = StandardNormal.sample(&mut r);
        let nq: f64 = StandardNormal.sample(&mut r);
        let (i, q) = (
            gain.linear * (i + sigma * ni),
            gain.linear * (q + sigma * nq),
        );
        if digitize_phase(i, q, &thresholds, cfg.adc.v_fs) != sym {
            errors += 1;
        }
    }
    let n = symbols.len() as u64;

    Ok(ChainReport {
        iq_phase_error: lo.phase_error.to_degrees(),
        amp_imbalance: lo.imbalance_db(),
        irr,
        pll_lock_time,
        pll_jitter_rms,
        lna_gain: gain.db,
        lna_noise_figure: lna_noise_figure(&cfg.lna)?,
        es_n0,
        ser_analytic: ser_analytic(es_n0),
        ser_mc: errors as f64 / n as f64,
        ser_mc_ci95: wilson_interval(errors, n, Z95),
        symbols: n,
        symbol_errors: errors,
        snr: readout_snr(&cfg.readout_spec)?.db,
        fidelity,
        sigma_phi,
        enob,
        dac_max_dnl,
        power: power_report(&cfg.power)?,
        skipped,
    })
}
