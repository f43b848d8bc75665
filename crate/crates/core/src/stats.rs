//! Small statistics helpers shared by the Monte Carlo routines.

use serde::{Deserialize, Serialize};

/// Two-sided confidence interval on a probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// z-score of the two-sided 95% normal interval.
pub const Z95: f64 = 1.959963984540054;

/// Wilson score interval for `successes` out of `trials` at normal quantile `z`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> Interval {
    if trials == 0 {
        return Interval { lo: 0.0, hi: 1.0 };
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * libm::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    if successes == 0 {
        return Interval {
            lo: 0.0,
            hi: (centre + half).min(1.0),
        };
    }
    if successes == trials {
        return Interval {
            lo: (centre - half).max(0.0),
            hi: 1.0,
        };
    }
    Interval {
        lo: (centre - half).max(0.0),
        hi: (centre + half).min(1.0),
    }
}

/// Gaussian tail probability Q(x) = P(N(0,1) > x).
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / core::f64::consts::SQRT_2)
}

/// Root mean square of a slice; zero for an empty slice.
pub fn rms(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    libm::sqrt(values.iter().map(|v| v * v).sum::<f64>() / values.len() as f64)
}

/// Wraps an angle to (−π, π].
pub fn wrap_phase(x: f64) -> f64 {
    use core::f64::consts::{PI, TAU};
    let mut y = libm::fmod(x, TAU);
    if y > PI {
        y -= TAU;
    } else if y <= -PI {
        y += TAU;
    }
    y
}

/// Wraps an angle to [0, 2π).
pub fn wrap_positive(x: f64) -> f64 {
    use core::f64::consts::TAU;
    let y = libm::fmod(x, TAU);
    let y = if y < 0.0 { y + TAU } else { y };
    // fmod of a tiny negative value can round up to exactly TAU
    if y >= TAU {
        0.0
    } else {
        y
    }
}
