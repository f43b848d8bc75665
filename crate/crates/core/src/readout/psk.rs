use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_4, PI};

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};
use crate::stats::{q_function, wilson_interval, wrap_positive, Interval, Z95};

/// Eight points at k·45°, labelled counterclockwise from angle 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PskConstellation {
    pub order: u32,
    /// `labels[k]` is the 3-bit word sent at angle k·45°.
    pub labels: Vec<u8>,
    /// Point radius; the symbol energy is its square.
    pub amplitude: f64,
}

impl Default for PskConstellation {
    fn default() -> Self {
        Self {
            order: 8,
            labels: (0..8).collect(),
            amplitude: 1.0,
        }
    }
}

impl PskConstellation {
    pub fn validate(&self) -> Result<()> {
        ensure!(
            self.order == 8,
            Unsupported,
            "only 8-PSK is modelled, got order {}",
            self.order
        );
        let mut seen = [false; 8];
        for l in &self.labels {
            ensure!(
                (*l as usize) < 8 && !seen[*l as usize],
                Input,
                "labels must be a permutation of 0..8"
            );
            seen[*l as usize] = true;
        }
        ensure!(
            self.labels.len() == 8,
            Input,
            "need 8 labels, got {}",
            self.labels.len()
        );
        ensure!(
            self.amplitude.is_finite() && self.amplitude > 0.0,
            Domain,
            "constellation amplitude must be positive"
        );
        Ok(())
    }

    /// E_s = amplitude².
    pub fn symbol_energy(&self) -> f64 {
        self.amplitude * self.amplitude
    }

    /// Angle (rad) at which `symbol` is transmitted.
    pub fn angle(&self, symbol: u8) -> Result<f64> {
        let k = self.labels.iter().position(|l| *l == symbol);
        let k = k.ok_or_else(|| {
            crate::Error::Input(alloc::format!("symbol {symbol} is not a 3-bit word"))
        })?;
        Ok(k as f64 * FRAC_PI_4)
    }
}

/// Constellation point for a 3-bit word.
pub fn psk_modulate(symbol: u8, c: &PskConstellation) -> Result<(f64, f64)> {
    c.validate()?;
    ensure!(symbol < 8, Input, "symbol {symbol} out of range for 8-PSK");
    let k = c.labels.iter().position(|l| *l == symbol).unwrap_or(0);
    // exact values on the axes and diagonals
    let (s, co) = match k % 2 {
        0 => [(0.0, 1.0), (1.0, 0.0), (0.0, -1.0), (-1.0, 0.0)][k / 2],
        _ => {
            let h = core::f64::consts::FRAC_1_SQRT_2;
            [(h, h), (h, -h), (-h, -h), (-h, h)][k / 2]
        }
    };
    Ok((c.amplitude * co, c.amplitude * s))
}

/// Relative tolerance for treating a received angle as exactly on a decision
/// boundary.
const TIE_TOLERANCE: f64 = 1e-12;

/// Nearest-angle decision. Points exactly between two symbols go to the one
/// with the lower angle index (index 0 at the 337.5° boundary).
pub fn psk_demodulate(i: f64, q: f64, c: &PskConstellation) -> Result<u8> {
    c.validate()?;
    ensure!(
        i.is_finite() && q.is_finite(),
        Input,
        "received point must be finite"
    );
    ensure!(
        i != 0.0 || q != 0.0,
        Decision,
        "no phase decision at the origin"
    );
    Ok(c.labels[nearest_index(i, q)])
}

fn nearest_index(i: f64, q: f64) -> usize {
    let x = wrap_positive(libm::atan2(q, i)) / FRAC_PI_4;
    let lower = libm::floor(x);
    let frac = x - lower;
    let lower = lower as usize % 8;
    let upper = (lower + 1) % 8;
    if (frac - 0.5).abs() <= TIE_TOLERANCE * 8.0 {
        lower.min(upper)
    } else if frac < 0.5 {
        lower
    } else {
        upper
    }
}

/// Approximate 8-PSK symbol error rate 2·Q(√(2E_s/N₀)·sin(π/8)), capped at 1.
pub fn ser_analytic(es_n0_db: f64) -> f64 {
    if es_n0_db == f64::NEG_INFINITY {
        return 1.0;
    }
    let snr = libm::pow(10.0, es_n0_db / 10.0);
    (2.0 * q_function(libm::sqrt(2.0 * snr) * libm::sin(PI / 8.0))).min(1.0)
}

/// Smallest trial count accepted by the Monte Carlo estimator.
pub const MIN_MC_TRIALS: u64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SerEstimate {
    pub ser: f64,
    pub errors: u64,
    pub trials: u64,
    pub ci95: Interval,
}

/// Symbol errors in `trials` AWGN trials drawn from stream `partition` of
/// `seed`. `es_n0_db = +∞` is noiseless.
pub fn ser_partition_errors(es_n0_db: f64, trials: u64, seed: u64, partition: u64) -> Result<u64> {
    ensure!(!es_n0_db.is_nan(), Input, "Es/N0 must not be NaN");
    let c = PskConstellation::default();
    let points: Vec<(f64, f64)> = (0..8u8)
        .map(|s| psk_modulate(s, &c))
        .collect::<Result<_>>()?;
    let sigma = if es_n0_db == f64::INFINITY {
        0.0
    } else {
        let n0 = c.symbol_energy() / libm::pow(10.0, es_n0_db / 10.0);
        libm::sqrt(0.5 * n0)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(partition);
    let mut errors = 0;
    for _ in 0..trials {
        let sym = (rng.next_u32() & 7) as usize;
        let ni: f64 = StandardNormal.sample(&mut rng);
        let nq: f64 = StandardNormal.sample(&mut rng);
        let (i, q) = points[sym];
        let (ri, rq) = (i + sigma * ni, q + sigma * nq);
        if ri == 0.0 && rq == 0.0 {
            errors += 1;
            continue;
        }
        if nearest_index(ri, rq) != sym {
            errors += 1;
        }
    }
    Ok(errors)
}

/// Monte Carlo SER split over `partitions` independent streams; partition p
/// runs ⌊trials/partitions⌋ trials plus one if p < trials mod partitions.
/// The result depends only on (es_n0_db, trials, seed, partitions).
pub fn ser_monte_carlo_partitioned(
    es_n0_db: f64,
    trials: u64,
    seed: u64,
    partitions: u64,
) -> Result<SerEstimate> {
    ensure!(
        trials >= MIN_MC_TRIALS,
        Precondition,
        "Monte Carlo SER needs at least {MIN_MC_TRIALS} trials, got {trials}"
    );
    ensure!(partitions >= 1, Input, "need at least one partition");
    let base = trials / partitions;
    let extra = trials % partitions;
    let mut errors = 0;
    for p in 0..partitions {
        let n = base + u64::from(p < extra);
        errors += ser_partition_errors(es_n0_db, n, seed, p)?;
    }
    Ok(SerEstimate {
        ser: errors as f64 / trials as f64,
        errors,
        trials,
        ci95: wilson_interval(errors, trials, Z95),
    })
}

/// Single-stream Monte Carlo SER with a Wilson 95% interval.
pub fn ser_monte_carlo(es_n0_db: f64, trials: u64, seed: u64) -> Result<SerEstimate> {
    ser_monte_carlo_partitioned(es_n0_db, trials, seed, 1)
}
