use crate::error::{ensure, Result};
use crate::SampledSignal;

#[derive(Debug, Clone, PartialEq)]
pub struct PowerStageOutput {
    pub signal: SampledSignal,
    /// Fraction of samples that hit the rail.
    pub clipped_fraction: f64,
}

/// Linear gain followed by a symmetric hard clip at ±`v_clip`.
pub fn power_stage(signal: &SampledSignal, gain_db: f64, v_clip: f64) -> Result<PowerStageOutput> {
    ensure!(
        v_clip.is_finite() && v_clip > 0.0,
        Input,
        "clip level must be positive"
    );
    ensure!(gain_db.is_finite(), Input, "gain must be finite");
    let g = libm::pow(10.0, gain_db / 20.0);
    let mut clipped = 0usize;
    let out = signal.map(|x| {
        let y = g * x;
        if y.abs() > v_clip {
            clipped += 1;
            y.signum() * v_clip
        } else {
            y
        }
    })?;
    let clipped_fraction = if signal.is_empty() {
        0.0
    } else {
        clipped as f64 / signal.len() as f64
    };
    Ok(PowerStageOutput {
        signal: out,
        clipped_fraction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::TAU;

    fn sine(amp: f64) -> SampledSignal {
        SampledSignal::from_fn(1000, 1.0e6, 0.0, |t| amp * libm::sin(TAU * 1.0e4 * t)).unwrap()
    }

    #[test]
    fn unity_gain_is_identity() {
        let s = sine(1.0);
        let out = power_stage(&s, 0.0, 5.0).unwrap();
        assert_eq!(out.signal, s);
        assert_eq!(out.clipped_fraction, 0.0);
    }

    #[test]
    fn six_db_doubles() {
        let out = power_stage(&sine(1.0), 6.02, 5.0).unwrap();
        assert!((out.signal.peak() - 2.0).abs() < 0.002 * 2.0);
        let power_ratio = out.signal.mean_power() / sine(1.0).mean_power();
        assert!((power_ratio - libm::pow(10.0, 0.602)).abs() < 0.005 * power_ratio);
    }

    #[test]
    fn hard_clip() {
        let out = power_stage(&sine(1.0), 20.0, 5.0).unwrap();
        assert_eq!(out.signal.peak(), 5.0);
        assert!(out.clipped_fraction > 0.5);
        for (x, y) in sine(1.0).samples().iter().zip(out.signal.samples()) {
            if 10.0 * x.abs() > 5.0 {
                assert_eq!(y.abs(), 5.0);
            }
        }
        assert!(power_stage(&sine(1.0), 0.0, 0.0).is_err());
    }
}
