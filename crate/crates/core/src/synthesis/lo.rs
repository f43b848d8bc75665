use core::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};
use crate::SampledSignal;

/// Generates the I and Q local-oscillator waveforms.
///
/// `i = A·cos(2πft)`, `q = A·ε·sin(2πft + phase_error)` with
/// `ε = 10^(amp_imbalance_db/20)`.
pub fn generate_quadrature_lo(
    f_lo: f64,
    amplitude: f64,
    sample_rate: f64,
    duration: f64,
    phase_error: f64,
    amp_imbalance_db: f64,
) -> Result<(SampledSignal, SampledSignal)> {
    ensure!(f_lo > 0.0, Input, "LO frequency must be positive");
    ensure!(
        sample_rate > 10.0 * f_lo,
        Precondition,
        "sample rate {sample_rate:e} Hz must exceed 10× the LO frequency {f_lo:e} Hz"
    );
    ensure!(duration > 0.0, Input, "duration must be positive");
    let n = libm::round(duration * sample_rate) as usize;
    let eps = libm::pow(10.0, amp_imbalance_db / 20.0);
    let w = TAU * f_lo;
    let i = SampledSignal::from_fn(n, sample_rate, 0.0, |t| amplitude * libm::cos(w * t))?;
    let q = SampledSignal::from_fn(n, sample_rate, 0.0, |t| {
        amplitude * eps * libm::sin(w * t + phase_error)
    })?;
    Ok((i, q))
}

/// Quadrature error measured from a pair of LO waveforms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureMeasurement {
    /// Deviation of the Q channel from exact quadrature, rad.
    pub phase_error: f64,
    /// RMS(q)/RMS(i).
    pub amplitude_ratio: f64,
}

impl QuadratureMeasurement {
    pub fn imbalance_db(&self) -> f64 {
        20.0 * libm::log10(self.amplitude_ratio)
    }
}

/// Estimates quadrature error from the normalized cross-correlation of the
/// two channels: `⟨i·q⟩ / (rms_i·rms_q) = sin(phase_error)`. Exact when the
/// record spans an integer number of LO periods.
pub fn measure_quadrature(i: &SampledSignal, q: &SampledSignal) -> Result<QuadratureMeasurement> {
    ensure!(i.same_grid(q), Input, "I and Q must share a sample grid");
    ensure!(!i.is_empty(), Input, "empty LO record");
    let n = i.len() as f64;
    let cross = i
        .samples()
        .iter()
        .zip(q.samples())
        .map(|(a, b)| a * b)
        .sum::<f64>()
        / n;
    let (ri, rq) = (i.rms(), q.rms());
    ensure!(ri > 0.0 && rq > 0.0, Input, "LO channels must be non-zero");
    let s = (cross / (ri * rq)).clamp(-1.0, 1.0);
    Ok(QuadratureMeasurement {
        phase_error: libm::asin(s),
        amplitude_ratio: rq / ri,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const F: f64 = 5.0e6;
    const FS: f64 = 1.0e8;
    // 200 LO periods
    const T: f64 = 40.0e-6;

    #[test]
    fn ideal_quadrature_is_orthogonal() {
        let (i, q) = generate_quadrature_lo(F, 2.5, FS, T, 0.0, 0.0).unwrap();
        let cross = i
            .samples()
            .iter()
            .zip(q.samples())
            .map(|(a, b)| a * b)
            .sum::<f64>()
            / i.len() as f64;
        assert!(cross.abs() < 1e-6 * 2.5);
        let m = measure_quadrature(&i, &q).unwrap();
        assert!(m.phase_error.abs() < 1e-9);
        assert!((m.amplitude_ratio - 1.0).abs() < 1e-9);
    }

    #[test]
    fn phase_error_recovered() {
        let (i, q) = generate_quadrature_lo(F, 1.0, FS, T, 1.8f64.to_radians(), 0.0).unwrap();
        let m = measure_quadrature(&i, &q).unwrap();
        assert!((m.phase_error.to_degrees() - 1.8).abs() < 0.05);
    }

    #[test]
    fn imbalance_recovered() {
        let (i, q) = generate_quadrature_lo(F, 1.0, FS, T, 0.0, -0.3).unwrap();
        let m = measure_quadrature(&i, &q).unwrap();
        assert!((m.amplitude_ratio - 0.9661).abs() < 0.001);
        assert!((m.imbalance_db() + 0.3).abs() < 1e-6);
    }

    #[test]
    fn undersampling_rejected() {
        assert!(matches!(
            generate_quadrature_lo(F, 1.0, 9.0 * F, T, 0.0, 0.0),
            Err(crate::Error::Precondition(_))
        ));
    }
}
