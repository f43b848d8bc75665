use alloc::vec::Vec;
use core::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};
use crate::stats::wrap_positive;
use crate::SampledSignal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PulseShape {
    Gaussian,
    /// Gaussian I channel with a derivative-shaped Q channel.
    Drag,
    /// Raised cosine, (1 − cos 2πt/T)/2.
    Cosine,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseSpec {
    pub shape: PulseShape,
    /// s
    pub duration: f64,
    /// Gaussian width, s. Ignored for cosine pulses.
    #[serde(default)]
    pub sigma: f64,
    /// DRAG scale; Q = coefficient·σ·dI/dt.
    #[serde(default)]
    pub drag_coefficient: f64,
    /// V
    pub peak_amplitude: f64,
}

impl Default for PulseSpec {
    fn default() -> Self {
        Self {
            shape: PulseShape::Gaussian,
            duration: 40.0e-9,
            sigma: 8.0e-9,
            drag_coefficient: 0.0,
            peak_amplitude: 1.0,
        }
    }
}

impl PulseSpec {
    pub fn validate(&self) -> Result<()> {
        ensure!(
            self.duration.is_finite() && self.duration > 0.0,
            Domain,
            "pulse duration must be positive"
        );
        if self.shape != PulseShape::Cosine {
            ensure!(
                self.sigma.is_finite() && self.sigma > 0.0,
                Domain,
                "pulse sigma must be positive for gaussian and drag shapes"
            );
        }
        ensure!(
            self.peak_amplitude.is_finite(),
            Domain,
            "peak amplitude must be finite"
        );
        ensure!(
            self.drag_coefficient.is_finite(),
            Domain,
            "drag coefficient must be finite"
        );
        Ok(())
    }
}

/// Baseband I and Q envelopes on a shared sample grid.
#[derive(Debug, Clone, PartialEq)]
pub struct IqEnvelope {
    i: SampledSignal,
    q: SampledSignal,
}

impl IqEnvelope {
    pub fn new(i: SampledSignal, q: SampledSignal) -> Result<Self> {
        ensure!(
            i.same_grid(&q),
            Input,
            "I and Q envelopes must share length, rate and start time"
        );
        Ok(Self { i, q })
    }

    pub fn i(&self) -> &SampledSignal {
        &self.i
    }

    pub fn q(&self) -> &SampledSignal {
        &self.q
    }

    pub fn sample_rate(&self) -> f64 {
        self.i.sample_rate()
    }

    pub fn len(&self) -> usize {
        self.i.len()
    }

    pub fn is_empty(&self) -> bool {
        self.i.is_empty()
    }

    /// A(t) = √(I² + Q²).
    pub fn amplitude(&self) -> Vec<f64> {
        self.pairs().map(|(i, q)| libm::hypot(i, q)).collect()
    }

    /// φ(t) = atan2(Q, I) in [0, 2π).
    pub fn phase(&self) -> Vec<f64> {
        self.pairs()
            .map(|(i, q)| wrap_positive(libm::atan2(q, i)))
            .collect()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.i
            .samples()
            .iter()
            .copied()
            .zip(self.q.samples().iter().copied())
    }

    /// Mean of (I² + Q²).
    pub fn mean_power(&self) -> f64 {
        self.i.mean_power() + self.q.mean_power()
    }
}

/// Samples the pulse on t = k/fs, k = 0..=round(fs·T).
pub fn make_envelope(spec: &PulseSpec, sample_rate: f64) -> Result<IqEnvelope> {
    spec.validate()?;
    ensure!(
        sample_rate.is_finite() && sample_rate > 0.0,
        Input,
        "sample rate must be positive"
    );
    ensure!(
        sample_rate * spec.duration >= 16.0,
        Precondition,
        "pulse spans {:.1} samples, need at least 16",
        sample_rate * spec.duration
    );
    let n = libm::round(sample_rate * spec.duration) as usize + 1;
    let (a, t_mid, sigma) = (spec.peak_amplitude, 0.5 * spec.duration, spec.sigma);
    let gauss = |t: f64| {
        let x = (t - t_mid) / sigma;
        a * libm::exp(-0.5 * x * x)
    };
    let (i, q) = match spec.shape {
        PulseShape::Gaussian => (
            SampledSignal::from_fn(n, sample_rate, 0.0, gauss)?,
            SampledSignal::from_fn(n, sample_rate, 0.0, |_| 0.0)?,
        ),
        PulseShape::Drag => {
            let k = spec.drag_coefficient;
            (
                SampledSignal::from_fn(n, sample_rate, 0.0, gauss)?,
                // σ·dI/dt = −(t − T/2)/σ · I
                SampledSignal::from_fn(n, sample_rate, 0.0, |t| {
                    -k * (t - t_mid) / sigma * gauss(t)
                })?,
            )
        }
        PulseShape::Cosine => (
            SampledSignal::from_fn(n, sample_rate, 0.0, |t| {
                a * 0.5 * (1.0 - libm::cos(TAU * t / spec.duration))
            })?,
            SampledSignal::from_fn(n, sample_rate, 0.0, |_| 0.0)?,
        ),
    };
    IqEnvelope::new(i, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FS: f64 = 1.0e11;

    fn spec(shape: PulseShape) -> PulseSpec {
        PulseSpec {
            shape,
            drag_coefficient: 0.5,
            ..PulseSpec::default()
        }
    }

    #[test]
    fn gaussian_peak_at_centre() {
        let env = make_envelope(&spec(PulseShape::Gaussian), FS).unwrap();
        let (k, peak) = env
            .i()
            .samples()
            .iter()
            .enumerate()
            .fold(
                (0, 0.0),
                |best, (k, v)| if *v > best.1 { (k, *v) } else { best },
            );
        assert!((env.i().time(k) - 20.0e-9).abs() <= 0.5 / FS);
        assert!((peak - 1.0).abs() < 1e-12);
        assert!(env.q().samples().iter().all(|q| *q == 0.0));
    }

    #[test]
    fn cosine_endpoints() {
        let env = make_envelope(&spec(PulseShape::Cosine), FS).unwrap();
        let s = env.i().samples();
        assert_eq!(s.len(), 4001);
        assert!(s[0].abs() < 1e-15);
        assert!(s[4000].abs() < 1e-12);
        assert!((s[2000] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn drag_without_coefficient_is_gaussian() {
        let mut d = spec(PulseShape::Drag);
        d.drag_coefficient = 0.0;
        let drag = make_envelope(&d, FS).unwrap();
        let gauss = make_envelope(&spec(PulseShape::Gaussian), FS).unwrap();
        assert!(drag.q().samples().iter().all(|q| *q == 0.0));
        assert_eq!(drag.i(), gauss.i());
    }

    #[test]
    fn drag_quadrature_peak_and_symmetry() {
        let s = spec(PulseShape::Drag);
        let env = make_envelope(&s, FS).unwrap();
        let peak = env.q().peak();
        let expected = s.drag_coefficient * s.peak_amplitude / libm::sqrt(core::f64::consts::E);
        assert!((peak - expected).abs() < 1e-6 * expected);
        let integral: f64 = env.q().samples().iter().sum::<f64>() / FS;
        assert!(integral.abs() < 1e-6 * peak * s.duration);
    }

    #[test]
    fn too_few_samples() {
        assert!(matches!(
            make_envelope(&spec(PulseShape::Gaussian), 15.0 / 40.0e-9),
            Err(crate::Error::Precondition(_))
        ));
    }
}
