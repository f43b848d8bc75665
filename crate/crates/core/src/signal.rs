//! Uniformly sampled waveforms exchanged between blocks.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};

/// Sample types a [`SampledSignal`] can carry.
pub trait Sample: Copy + PartialEq {
    fn is_finite(&self) -> bool;
    /// Squared magnitude, used for power measurements.
    fn power(&self) -> f64;
    fn scale(self, k: f64) -> Self;
}

impl Sample for f64 {
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }

    fn power(&self) -> f64 {
        self * self
    }

    fn scale(self, k: f64) -> Self {
        self * k
    }
}

/// Minimal complex baseband sample (in-phase, quadrature).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ComplexSample {
    pub re: f64,
    pub im: f64,
}

impl ComplexSample {
    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub fn from_polar(magnitude: f64, phase: f64) -> Self {
        Self::new(magnitude * libm::cos(phase), magnitude * libm::sin(phase))
    }

    pub fn magnitude(&self) -> f64 {
        libm::hypot(self.re, self.im)
    }

    /// Phase in (−π, π].
    pub fn phase(&self) -> f64 {
        libm::atan2(self.im, self.re)
    }
}

impl Add for ComplexSample {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for ComplexSample {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for ComplexSample {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl Sample for ComplexSample {
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    fn power(&self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    fn scale(self, k: f64) -> Self {
        Self::new(self.re * k, self.im * k)
    }
}

/// A uniformly sampled real or complex waveform.
///
/// Construction rejects NaN/Inf samples and non-positive sample rates, so
/// every block downstream can assume finite data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledSignal<T: Sample = f64> {
    samples: Vec<T>,
    sample_rate: f64,
    start_time: f64,
}

impl<T: Sample> SampledSignal<T> {
    pub fn new(samples: Vec<T>, sample_rate: f64, start_time: f64) -> Result<Self> {
        ensure!(
            sample_rate.is_finite() && sample_rate > 0.0,
            Input,
            "sample rate must be positive and finite, got {sample_rate}"
        );
        ensure!(start_time.is_finite(), Input, "start time must be finite");
        if let Some(k) = samples.iter().position(|s| !s.is_finite()) {
            return Err(crate::Error::Input(alloc::format!(
                "non-finite sample at index {k}"
            )));
        }
        Ok(Self {
            samples,
            sample_rate,
            start_time,
        })
    }

    /// Builds a signal by evaluating `f` at `n` instants starting at `start_time`.
    pub fn from_fn(
        n: usize,
        sample_rate: f64,
        start_time: f64,
        f: impl FnMut(f64) -> T,
    ) -> Result<Self> {
        let mut f = f;
        let dt = 1.0 / sample_rate;
        let samples = (0..n).map(|k| f(start_time + k as f64 * dt)).collect();
        Self::new(samples, sample_rate, start_time)
    }

    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<T> {
        self.samples
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn start_time(&self) -> f64 {
        self.start_time
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dt(&self) -> f64 {
        1.0 / self.sample_rate
    }

    /// Time stamp of sample `k`.
    pub fn time(&self, k: usize) -> f64 {
        self.start_time + k as f64 / self.sample_rate
    }

    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate
    }

    /// Mean power (mean squared magnitude) of the samples.
    pub fn mean_power(&self) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        self.samples.iter().map(Sample::power).sum::<f64>() / self.samples.len() as f64
    }

    pub fn rms(&self) -> f64 {
        libm::sqrt(self.mean_power())
    }

    pub fn peak(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| libm::sqrt(s.power()))
            .fold(0.0, f64::max)
    }

    /// Applies `f` sample-wise, keeping rate and start time.
    pub fn map<U: Sample>(&self, f: impl FnMut(T) -> U) -> Result<SampledSignal<U>> {
        let samples = self.samples.iter().copied().map(f).collect();
        SampledSignal::new(samples, self.sample_rate, self.start_time)
    }

    pub fn scaled(&self, k: f64) -> Result<Self> {
        self.map(|s| s.scale(k))
    }

    pub(crate) fn same_grid<U: Sample>(&self, other: &SampledSignal<U>) -> bool {
        self.samples.len() == other.samples.len()
            && self.sample_rate == other.sample_rate
            && self.start_time == other.start_time
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rejects_non_finite() {
        assert!(SampledSignal::new(vec![0.0, f64::NAN], 1.0, 0.0).is_err());
        assert!(SampledSignal::new(vec![0.0, f64::INFINITY], 1.0, 0.0).is_err());
        assert!(SampledSignal::new(vec![ComplexSample::new(0.0, f64::NAN)], 1.0, 0.0).is_err());
        assert!(SampledSignal::<f64>::new(vec![1.0], 0.0, 0.0).is_err());
    }

    #[test]
    fn sine_rms() {
        let n = 1000;
        let s = SampledSignal::from_fn(n, 1000.0, 0.0, |t| {
            2.0 * libm::sin(2.0 * core::f64::consts::PI * 10.0 * t)
        })
        .unwrap();
        assert!((s.rms() - 2.0 / core::f64::consts::SQRT_2).abs() < 1e-12);
        assert_eq!(s.len(), n);
        assert!((s.duration() - 1.0).abs() < 1e-15);
    }
}
