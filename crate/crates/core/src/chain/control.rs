use alloc::vec::Vec;
use core::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::config::ChainConfig;
use crate::error::{ensure, Result};
use crate::modulation::{
    dac_output, make_envelope, power_stage, quadrature_demodulate, IqEnvelope, PulseSpec,
};
use crate::qubit::{apply_rotation, gate_fidelity, pulse_to_rotation, BlochState, Rotation};
use crate::stats::{rms, wrap_phase};
use crate::synthesis::{generate_quadrature_lo, measure_quadrature, QuadratureMeasurement};
use crate::SampledSignal;

/// Samples below this fraction of the peak amplitude carry no usable phase.
const PHASE_GATE: f64 = 0.1;

/// Quality of one control pulse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlMetrics {
    pub code: u32,
    /// DAC output over V_ref; scales the pulse amplitude.
    pub amplitude_scale: f64,
    /// RMS of the complex envelope error after demodulation, as a fraction
    /// of the ideal peak.
    pub envelope_error_rms: f64,
    /// RMS fractional amplitude error over the pulse body.
    pub envelope_amplitude_rms: f64,
    /// RMS envelope phase error over the pulse body, deg.
    pub envelope_phase_rms_deg: f64,
    /// Quadrature error of the LO, deg.
    pub lo_phase_error_deg: f64,
    pub lo_imbalance_db: f64,
    /// Total σ_φ combining LO and envelope phase errors, deg.
    pub sigma_phi_deg: f64,
    /// Total fractional σ_A combining envelope and LO amplitude errors.
    pub sigma_a: f64,
    pub fidelity: f64,
    /// False when σ_φ or σ_A is past the range of the quadratic fidelity model.
    pub fidelity_in_model: bool,
    pub clipped_fraction: f64,
    /// Rotation of the ideal envelope. `None` for pulses whose phase varies.
    pub rotation: Option<Rotation>,
    /// Ground state after `rotation`.
    pub final_state: Option<BlochState>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ControlRun {
    /// RF waveform delivered to the qubit line.
    pub pulse_at_qubit: SampledSignal,
    /// Baseband envelope recovered from `pulse_at_qubit`.
    pub recovered: IqEnvelope,
    pub metrics: ControlMetrics,
}

/// Drives one DAC word through envelope shaping, the impaired I/Q modulator
/// and the power stage, then demodulates the result to score it.
pub fn run_control_path(cfg: &ChainConfig, code: u32) -> Result<ControlRun> {
    cfg.validate()?;
    let scale = dac_output(code, &cfg.dac)? / cfg.dac.v_ref;
    let spec = PulseSpec {
        peak_amplitude: cfg.pulse.peak_amplitude * scale,
        ..cfg.pulse.clone()
    };
    let fs = cfg.sample_rate;
    let fc = cfg.carrier_hz;
    let env = make_envelope(&spec, fs)?;
    let pe = cfg.lo.phase_error_deg.to_radians();

    let (lo_i, lo_q) = generate_quadrature_lo(
        fc,
        1.0,
        fs,
        env.len() as f64 / fs,
        pe,
        cfg.lo.amp_imbalance_db,
    )?;
    ensure!(
        lo_i.len() == env.len(),
        Input,
        "LO and envelope grids differ"
    );
    // I·LO_i − Q·LO_q; with a perfect LO this equals iq_upconvert(env, fc)
    let rf: Vec<f64> = env
        .pairs()
        .zip(lo_i.samples().iter().zip(lo_q.samples()))
        .map(|((i, q), (li, lq))| i * li - q * lq)
        .collect();
    let rf = SampledSignal::new(rf, fs, 0.0)?;
    let pa = power_stage(&rf, cfg.power_amp.gain_db, cfg.power_amp.v_clip)?;
    let gain = libm::pow(10.0, cfg.power_amp.gain_db / 20.0);
    let recovered = quadrature_demodulate(&pa.signal.scaled(1.0 / gain)?, fc)?;

    let lo = measure_lo(cfg)?;
    let rotation = drive_rotation(cfg, &env)?;
    let final_state = rotation.map(|r| apply_rotation(BlochState::GROUND, r.axis_phi, r.angle));

    let ideal_amp = env.amplitude();
    let peak = ideal_amp.iter().copied().fold(0.0, f64::max);
    let (err_rms, amp_rms, phase_rms) = if peak == 0.0 {
        (0.0, 0.0, 0.0)
    } else {
        envelope_errors(&env, &recovered, peak)
    };
    let (sigma_phi, sigma_a) = if peak == 0.0 {
        // no pulse, nothing to get wrong
        (0.0, 0.0)
    } else {
        let eps = lo.amplitude_ratio;
        (
            libm::hypot(lo.phase_error, phase_rms),
            libm::hypot(amp_rms, eps - 1.0),
        )
    };
    let (fidelity, in_model) = gate_fidelity(sigma_phi, sigma_a)?;

    Ok(ControlRun {
        pulse_at_qubit: pa.signal,
        recovered,
        metrics: ControlMetrics {
            code,
            amplitude_scale: scale,
            envelope_error_rms: err_rms,
            envelope_amplitude_rms: amp_rms,
            envelope_phase_rms_deg: phase_rms.to_degrees(),
            lo_phase_error_deg: lo.phase_error.to_degrees(),
            lo_imbalance_db: lo.imbalance_db(),
            sigma_phi_deg: sigma_phi.to_degrees(),
            sigma_a,
            fidelity,
            fidelity_in_model: in_model,
            clipped_fraction: pa.clipped_fraction,
            rotation,
            final_state,
        },
    })
}

/// Quadrature error of the configured LO, measured over an integer number
/// of carrier periods.
pub(crate) fn measure_lo(cfg: &ChainConfig) -> Result<QuadratureMeasurement> {
    let periods = libm::round(cfg.carrier_hz * cfg.pulse.duration).max(1.0);
    let (i, q) = generate_quadrature_lo(
        cfg.carrier_hz,
        1.0,
        cfg.sample_rate,
        periods / cfg.carrier_hz,
        cfg.lo.phase_error_deg.to_radians(),
        cfg.lo.amp_imbalance_db,
    )?;
    measure_quadrature(&i, &q)
}

/// Rabi rate in rad/s per volt: configured, or chosen so a full-scale pulse
/// is a π rotation.
fn rabi_rate(cfg: &ChainConfig) -> Result<f64> {
    if let Some(r) = cfg.link.rabi_rate_per_volt {
        return Ok(r);
    }
    let full = make_envelope(&cfg.pulse, cfg.sample_rate)?;
    let area = full
        .amplitude()
        .windows(2)
        .map(|w| 0.5 * (w[0] + w[1]))
        .sum::<f64>()
        / cfg.sample_rate;
    ensure!(
        area > 0.0,
        Domain,
        "cannot calibrate a Rabi rate from a zero-area pulse"
    );
    Ok(PI / area)
}

fn drive_rotation(cfg: &ChainConfig, env: &IqEnvelope) -> Result<Option<Rotation>> {
    let rate = rabi_rate(cfg)?;
    match pulse_to_rotation(env, rate) {
        Ok(r) => Ok(Some(r)),
        Err(crate::Error::Unsupported(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// (complex error RMS, amplitude RMS, phase RMS in rad), all amplitude terms
/// relative to `peak`.
fn envelope_errors(ideal: &IqEnvelope, got: &IqEnvelope, peak: f64) -> (f64, f64, f64) {
    let complex: Vec<f64> = ideal
        .pairs()
        .zip(got.pairs())
        .map(|((i0, q0), (i1, q1))| libm::hypot(i1 - i0, q1 - q0) / peak)
        .collect();
    let (a0, p0) = (ideal.amplitude(), ideal.phase());
    let (a1, p1) = (got.amplitude(), got.phase());
    let mut amp = Vec::new();
    let mut phase = Vec::new();
    for k in 0..a0.len() {
        if a0[k] > PHASE_GATE * peak {
            amp.push((a1[k] - a0[k]) / peak);
            phase.push(wrap_phase(p1[k] - p0[k]));
        }
    }
    (rms(&complex), rms(&amp), rms(&phase))
}
