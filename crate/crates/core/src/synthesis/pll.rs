use alloc::vec::Vec;
use core::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};
use crate::stats::wrap_phase;
use crate::ComplexSample;

/// Constants of the second-order loop: linearized XOR detector, first-order
/// RC loop filter and VCO.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PllConfig {
    /// Detector gain, V/rad.
    pub kd: f64,
    /// VCO gain, rad/s/V.
    pub kv: f64,
    /// Loop-filter time constant, s.
    pub tau: f64,
    /// Reference frequency, Hz.
    pub f_ref: f64,
}

impl Default for PllConfig {
    /// ζ = 0.7071 and ω_n = 7071 rad/s with the VCO gain of the nominal
    /// relaxation oscillator (2π·1 MHz/V).
    fn default() -> Self {
        let kv = TAU * 1.0e6;
        Self {
            kd: 5.0e3 / kv,
            kv,
            tau: 1.0e-4,
            f_ref: 1.0e6,
        }
    }
}

impl PllConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("kd", self.kd),
            ("kv", self.kv),
            ("tau", self.tau),
            ("f_ref", self.f_ref),
        ] {
            ensure!(
                v.is_finite() && v > 0.0,
                Domain,
                "PLL {name} must be positive, got {v}"
            );
        }
        Ok(())
    }

    /// Loop gain K = kd·kv, 1/s.
    pub fn loop_gain(&self) -> f64 {
        self.kd * self.kv
    }
}

/// Natural frequency and damping of the closed loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoopDynamics {
    /// rad/s
    pub omega_n: f64,
    pub zeta: f64,
}

/// Linearized phase detector: kd times the phase difference wrapped to (−π, π].
pub fn phase_detector_output(phi_ref: f64, phi_fb: f64, kd: f64) -> f64 {
    kd * wrap_phase(phi_ref - phi_fb)
}

/// ω_n = √(kd·kv/τ), ζ = 1/(2·ω_n·τ).
pub fn natural_frequency_and_damping(cfg: &PllConfig) -> Result<LoopDynamics> {
    cfg.validate()?;
    let omega_n = libm::sqrt(cfg.loop_gain() / cfg.tau);
    Ok(LoopDynamics {
        omega_n,
        zeta: 1.0 / (2.0 * omega_n * cfg.tau),
    })
}

/// Closed-loop transfer H(j2πf) = ω_n² / (ω_n² − ω² + jω/τ).
pub fn closed_loop_response(cfg: &PllConfig, f_m: f64) -> ComplexSample {
    let wn2 = cfg.loop_gain() / cfg.tau;
    let w = TAU * f_m;
    let re = wn2 - w * w;
    let im = w / cfg.tau;
    let den = re * re + im * im;
    ComplexSample::new(wn2 * re / den, -wn2 * im / den)
}

/// |H(j2πf)|.
pub fn closed_loop_magnitude(cfg: &PllConfig, f_m: f64) -> Result<f64> {
    cfg.validate()?;
    ensure!(
        f_m >= 0.0,
        Input,
        "offset frequency must be non-negative, got {f_m}"
    );
    if f_m == 0.0 {
        return Ok(1.0);
    }
    Ok(closed_loop_response(cfg, f_m).magnitude())
}

/// One lock-acquisition scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LockAcquisition {
    /// Free-running VCO frequency at zero control voltage, Hz.
    pub f0_vco: f64,
    /// Reference minus VCO phase at t = 0, rad.
    #[serde(default)]
    pub initial_phase_error: f64,
    /// Integration step, s. `None` selects 0.02/ω_n.
    #[serde(default)]
    pub dt: Option<f64>,
    /// Simulated span, s.
    pub t_max: f64,
    /// Lock tolerance on |phase error|, rad.
    pub lock_tol: f64,
}

impl Default for LockAcquisition {
    fn default() -> Self {
        Self {
            f0_vco: 1.0e6 - 20.0,
            initial_phase_error: core::f64::consts::FRAC_PI_2,
            dt: None,
            t_max: 5.0e-3,
            lock_tol: 2.0_f64.to_radians(),
        }
    }
}

/// Sampled lock transient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PllTrajectory {
    pub times: Vec<f64>,
    pub v_error: Vec<f64>,
    pub v_ctrl: Vec<f64>,
    /// Wrapped to (−π, π].
    pub phase_error: Vec<f64>,
    /// First instant after which |phase error| stays below the tolerance;
    /// `None` when the loop has not locked by the end of the run.
    pub lock_time: Option<f64>,
    pub f0_vco: f64,
    pub f_ref: f64,
    pub kv: f64,
}

impl PllTrajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// VCO output frequency implied by the last control voltage, Hz.
    pub fn final_vco_frequency(&self) -> f64 {
        self.f0_vco + self.kv * self.v_ctrl.last().copied().unwrap_or(0.0) / TAU
    }

    /// RMS deviation of the phase error about its mean over the second half
    /// of the locked interval, rad. The first half still carries the
    /// deterministic settling tail, which is not jitter.
    pub fn post_lock_jitter_rms(&self) -> Option<f64> {
        let t_lock = self.lock_time?;
        let t_end = *self.times.last()?;
        let t_start = t_lock + 0.5 * (t_end - t_lock);
        let tail: Vec<f64> = self
            .times
            .iter()
            .zip(&self.phase_error)
            .filter(|(t, _)| **t >= t_start)
            .map(|(_, p)| *p)
            .collect();
        if tail.is_empty() {
            return None;
        }
        let mean = tail.iter().sum::<f64>() / tail.len() as f64;
        let var = tail.iter().map(|p| (p - mean) * (p - mean)).sum::<f64>() / tail.len() as f64;
        Some(libm::sqrt(var))
    }
}

/// Time-steps the loop from the given acquisition state with fixed-step RK4.
///
/// State is (θ, v): θ = φ_ref − φ_vco and v the filtered control voltage.
///
/// ```text
/// dθ/dt = 2π(f_ref − f0_vco) − kv·v
/// dv/dt = (kd·wrap(θ) − v) / τ
/// ```
pub fn simulate_lock(cfg: &PllConfig, acq: &LockAcquisition) -> Result<PllTrajectory> {
    let dyn_ = natural_frequency_and_damping(cfg)?;
    let dt = acq.dt.unwrap_or(0.02 / dyn_.omega_n);
    ensure!(
        dt.is_finite() && dt > 0.0 && dt < 0.1 / dyn_.omega_n,
        Precondition,
        "step {dt:e} s must be positive and below 0.1/ω_n = {:e} s",
        0.1 / dyn_.omega_n
    );
    ensure!(
        acq.t_max.is_finite() && acq.t_max > 0.0,
        Precondition,
        "t_max must be positive"
    );
    ensure!(acq.lock_tol > 0.0, Input, "lock tolerance must be positive");
    ensure!(acq.f0_vco.is_finite(), Input, "f0_vco must be finite");

    let detuning = TAU * (cfg.f_ref - acq.f0_vco);
    let deriv = |theta: f64, v: f64| -> (f64, f64) {
        (
            detuning - cfg.kv * v,
            (phase_detector_output(theta, 0.0, cfg.kd) - v) / cfg.tau,
        )
    };

    let steps = libm::round(acq.t_max / dt) as usize;
    let mut times = Vec::with_capacity(steps + 1);
    let mut v_error = Vec::with_capacity(steps + 1);
    let mut v_ctrl = Vec::with_capacity(steps + 1);
    let mut phase_error = Vec::with_capacity(steps + 1);

    let (mut theta, mut v) = (acq.initial_phase_error, 0.0);
    for k in 0..=steps {
        times.push(k as f64 * dt);
        v_error.push(phase_detector_output(theta, 0.0, cfg.kd));
        v_ctrl.push(v);
        phase_error.push(wrap_phase(theta));

        let (k1t, k1v) = deriv(theta, v);
        let (k2t, k2v) = deriv(theta + 0.5 * dt * k1t, v + 0.5 * dt * k1v);
        let (k3t, k3v) = deriv(theta + 0.5 * dt * k2t, v + 0.5 * dt * k2v);
        let (k4t, k4v) = deriv(theta + dt * k3t, v + dt * k3v);
        theta += dt / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t);
        v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }

    let lock_time = match phase_error.iter().rposition(|p| p.abs() >= acq.lock_tol) {
        None => Some(0.0),
        Some(last) if last + 1 < times.len() => Some(times[last + 1]),
        Some(_) => None,
    };

    Ok(PllTrajectory {
        times,
        v_error,
        v_ctrl,
        phase_error,
        lock_time,
        f0_vco: acq.f0_vco,
        f_ref: cfg.f_ref,
        kv: cfg.kv,
    })
}
