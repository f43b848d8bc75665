use core::f64::consts::{FRAC_PI_2, PI, TAU};

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::config::ChainConfig;
use super::{rng, streams};
use crate::error::{ensure, Result};
use crate::qubit::readout_snr;
use crate::readout::{adc_convert, lna_gain, lna_noise_figure, EncoderMode};
use crate::stats::{q_function, wilson_interval, wrap_positive, Interval, Z95};

/// Phase of the readout tone for qubit `state`: 90° − χT for |0⟩ and
/// 90° + χT for |1⟩. With χT = 45° the two states land on the 001 and 011
/// constellation points.
pub fn state_phase(cfg: &ChainConfig, state: u8) -> f64 {
    let shift = cfg.readout_spec.chi * cfg.readout_spec.t_meas;
    if state == 0 {
        FRAC_PI_2 - shift
    } else {
        FRAC_PI_2 + shift
    }
}

/// E_s/N₀ at the LNA input, dB: the configured override, or readout SNR
/// minus the LNA noise figure.
pub fn effective_es_n0_db(cfg: &ChainConfig) -> Result<f64> {
    if let Some(db) = cfg.link.es_n0_override_db {
        return Ok(db);
    }
    Ok(readout_snr(&cfg.readout_spec)?.db - lna_noise_figure(&cfg.lna)?)
}

/// Phase digitizer: the flash ADC sees v = V_FS·((φ + 22.5°) mod 360°)/360°,
/// so ADC code k is the 45°-wide sector centred on k·45°.
pub fn digitize_phase(i: f64, q: f64, thresholds: &[f64], v_fs: f64) -> u8 {
    let v = v_fs * wrap_positive(libm::atan2(q, i) + PI / 8.0) / TAU;
    adc_convert(v, thresholds, EncoderMode::Masked) as u8
}

/// Noise σ per quadrature for unit symbol energy, or 0 when noiseless.
pub(crate) fn noise_sigma(es_n0_db: f64) -> f64 {
    if es_n0_db == f64::INFINITY {
        0.0
    } else {
        libm::sqrt(0.5 / libm::pow(10.0, es_n0_db / 10.0))
    }
}

/// Circular distance between two 8-PSK indices.
fn index_distance(a: u8, b: u8) -> u8 {
    let d = (a as i16 - b as i16).rem_euclid(8) as u8;
    d.min(8 - d)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReadoutOutcome {
    pub state: u8,
    pub trials: u64,
    pub correct: u64,
    pub error_rate: f64,
    pub ci95: Interval,
    /// How often each ADC code (= 8-PSK symbol) was recovered.
    pub symbol_counts: [u64; 8],
    /// Symbol the state maps to without noise.
    pub expected_symbol: u8,
    /// Dispersive readout SNR, dB.
    pub snr_db: f64,
    pub es_n0_db: f64,
    pub lna_gain_db: f64,
    pub noise_figure_db: f64,
    /// Binary-hypothesis error Q(sin(χT)·√(2·E_s/N₀)) for the two state points.
    pub predicted_error: f64,
}

/// Repeated single-shot readout of qubit `state` (0 or 1).
///
/// Each shot: unit-amplitude tone at [`state_phase`], complex AWGN at the
/// effective E_s/N₀, LNA gain, phase digitization, then state assignment to
/// the nearer of the two expected symbols. Symbols equidistant from both go
/// to the side of the perpendicular bisector of the two state points.
pub fn run_readout_path(cfg: &ChainConfig, state: u8, trials: u64) -> Result<ReadoutOutcome> {
    cfg.validate()?;
    ensure!(state <= 1, Input, "qubit state must be 0 or 1, got {state}");
    ensure!(trials >= 1, Input, "need at least one readout trial");
    let thresholds = crate::readout::adc_thresholds(&cfg.adc)?;
    let v_fs = cfg.adc.v_fs;
    let gain = lna_gain(&cfg.lna)?;
    let snr = readout_snr(&cfg.readout_spec)?;
    let es_n0_db = effective_es_n0_db(cfg)?;
    let sigma = noise_sigma(es_n0_db);

    let phases = [state_phase(cfg, 0), state_phase(cfg, 1)];
    let points = phases.map(|p| (libm::cos(p), libm::sin(p)));
    let expected = points.map(|(i, q)| digitize_phase(i, q, &thresholds, v_fs));
    // normal of the bisector between the two state points, toward |0⟩
    let axis = (points[0].0 - points[1].0, points[0].1 - points[1].1);

    let mut rng = rng(cfg.seed, streams::READOUT + state as u64);
    let (i0, q0) = points[state as usize];
    let mut counts = [0u64; 8];
    let mut correct = 0;
    for _ in 0..trials {
        let ni: f64 = StandardNormal.sample(&mut rng);
        let nq: f64 = StandardNormal.sample(&mut rng);
        let (i, q) = (
            gain.linear * (i0 + sigma * ni),
            gain.linear * (q0 + sigma * nq),
        );
        let sym = digitize_phase(i, q, &thresholds, v_fs);
        counts[sym as usize] += 1;
        let d0 = index_distance(sym, expected[0]);
        let d1 = index_distance(sym, expected[1]);
        let decided = if d0 != d1 {
            u8::from(d1 < d0)
        } else {
            u8::from(i * axis.0 + q * axis.1 < 0.0)
        };
        if decided == state {
            correct += 1;
        }
    }
    let errors = trials - correct;
    let half_sep =
        0.5 * wrap_positive(phases[1] - phases[0]).min(TAU - wrap_positive(phases[1] - phases[0]));
    let predicted_error = if sigma == 0.0 {
        if half_sep > 0.0 {
            0.0
        } else {
            0.5
        }
    } else {
        q_function(libm::sin(half_sep) / sigma)
    };
    Ok(ReadoutOutcome {
        state,
        trials,
        correct,
        error_rate: errors as f64 / trials as f64,
        ci95: wilson_interval(errors, trials, Z95),
        symbol_counts: counts,
        expected_symbol: expected[state as usize],
        snr_db: snr.db,
        es_n0_db,
        lna_gain_db: gain.db,
        noise_figure_db: lna_noise_figure(&cfg.lna)?,
        predicted_error,
    })
}
