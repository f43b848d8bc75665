use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};

/// Flash ADC: a resistor ladder feeding 2^n − 1 comparators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdcConfig {
    pub n_bits: u32,
    /// Full-scale input range, V.
    pub v_fs: f64,
    /// Input-referred offset of each comparator, V (one per comparator).
    pub comparator_offsets: Vec<f64>,
    /// Seed the offsets were drawn with, if they were drawn.
    pub seed: u64,
}

impl Default for AdcConfig {
    fn default() -> Self {
        Self::ideal(3, 2.5)
    }
}

impl AdcConfig {
    /// Zero-offset converter.
    pub fn ideal(n_bits: u32, v_fs: f64) -> Self {
        let comparators = (1usize << n_bits.min(24)) - 1;
        Self {
            n_bits,
            v_fs,
            comparator_offsets: vec![0.0; comparators],
            seed: 0,
        }
    }

    /// Converter whose comparator offsets are independent N(0, σ²) draws.
    pub fn with_drawn_offsets(n_bits: u32, v_fs: f64, sigma: f64, seed: u64) -> Self {
        let mut cfg = Self::ideal(n_bits, v_fs);
        cfg.comparator_offsets = drawn_offsets(cfg.comparator_offsets.len(), sigma, seed, 0);
        cfg.seed = seed;
        cfg
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(
            (1..=16).contains(&self.n_bits),
            Domain,
            "ADC resolution must be 1..=16 bits, got {}",
            self.n_bits
        );
        ensure!(
            self.v_fs.is_finite() && self.v_fs > 0.0,
            Domain,
            "ADC v_fs must be positive"
        );
        ensure!(
            self.comparator_offsets.len() == self.comparators(),
            Input,
            "ADC needs {} comparator offsets, got {}",
            self.comparators(),
            self.comparator_offsets.len()
        );
        ensure!(
            self.comparator_offsets.iter().all(|v| v.is_finite()),
            Domain,
            "comparator offsets must be finite"
        );
        Ok(())
    }

    pub fn comparators(&self) -> usize {
        (1usize << self.n_bits) - 1
    }

    /// V_LSB = V_FS / 2^n.
    pub fn lsb(&self) -> f64 {
        self.v_fs / (1u64 << self.n_bits) as f64
    }
}

fn drawn_offsets(count: usize, sigma: f64, seed: u64, stream: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    (0..count)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            sigma * z
        })
        .collect()
}

/// Comparator thresholds k·V_LSB + offset_k for k = 1..2^n − 1.
pub fn adc_thresholds(cfg: &AdcConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let codes = (1u64 << cfg.n_bits) as f64;
    Ok(cfg
        .comparator_offsets
        .iter()
        .enumerate()
        .map(|(k, off)| (k + 1) as f64 * cfg.v_fs / codes + off)
        .collect())
}

/// True when the thresholds are strictly ascending. Offsets large enough to
/// reorder comparators make the thermometer code prone to bubbles.
pub fn thresholds_monotone(thresholds: &[f64]) -> bool {
    thresholds.windows(2).all(|w| w[0] < w[1])
}

/// Comparator outputs; element k−1 holds D_k = (v_in > threshold_k).
pub fn thermometer_encode(v_in: f64, thresholds: &[f64]) -> Vec<bool> {
    thresholds.iter().map(|t| v_in > *t).collect()
}

/// Thermometer-to-binary conversion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EncoderMode {
    /// One-hot stage H_k = D_k ∧ ¬D_{k+1} ahead of the OR planes. A proper
    /// thermometer code of weight w yields w.
    #[default]
    Masked,
    /// OR planes fed directly from the comparators. Only correct for one-hot
    /// inputs; kept for fault studies.
    RawOr,
}

/// Binary output bit b is the OR of every line k (1-based) whose index has
/// bit b set.
pub fn priority_encode(d: &[bool], mode: EncoderMode) -> u32 {
    let line = |k: usize| -> bool {
        let dk = d[k - 1];
        match mode {
            EncoderMode::RawOr => dk,
            EncoderMode::Masked => dk && !d.get(k).copied().unwrap_or(false),
        }
    };
    let mut code = 0u32;
    for k in 1..=d.len() {
        if line(k) {
            code |= k as u32;
        }
    }
    code
}

/// Full conversion of one input voltage.
pub fn adc_convert(v_in: f64, thresholds: &[f64], mode: EncoderMode) -> u32 {
    priority_encode(&thermometer_encode(v_in, thresholds), mode)
}

/// Uniform-quantizer noise V_FS/(2^n·√12).
pub fn quantization_noise_rms(cfg: &AdcConfig) -> Result<f64> {
    cfg.validate()?;
    Ok(cfg.v_fs / ((1u64 << cfg.n_bits) as f64 * libm::sqrt(12.0)))
}

fn is_prime(n: usize) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Prime number of tone cycles, coprime with the record length, so every
/// sample lands on a distinct phase.
fn coherent_cycles(samples: usize) -> usize {
    let mut p = samples / 7;
    while p > 2 && !(is_prime(p) && gcd(p, samples) == 1) {
        p -= 1;
    }
    p
}

/// Effective number of bits from a coherently sampled sine.
///
/// `test_tone_swing` is the peak-to-peak input swing centred at V_FS/2, so
/// `v_fs` is a full-scale tone. The digitized record is compared with a
/// three-parameter least-squares sine fit at the known frequency;
/// ENOB = (SINAD − 1.76)/6.02. The seed sets the starting phase of the tone.
pub fn adc_enob(cfg: &AdcConfig, test_tone_swing: f64, samples: usize, seed: u64) -> Result<f64> {
    ensure!(
        samples >= 4096,
        Precondition,
        "ENOB needs at least 4096 samples, got {samples}"
    );
    ensure!(
        test_tone_swing.is_finite() && test_tone_swing > 0.0,
        Domain,
        "test tone swing must be positive"
    );
    let thresholds = adc_thresholds(cfg)?;
    let phase0 = {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        TAU * (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    };
    let cycles = coherent_cycles(samples) as f64;
    let n = samples as f64;
    let lsb = cfg.lsb();
    let mut output = Vec::with_capacity(samples);
    let (mut sum, mut sum_c, mut sum_s) = (0.0, 0.0, 0.0);
    for k in 0..samples {
        let arg = TAU * cycles * k as f64 / n;
        let v = 0.5 * cfg.v_fs + 0.5 * test_tone_swing * libm::sin(arg + phase0);
        let y = adc_convert(v, &thresholds, EncoderMode::Masked) as f64 * lsb;
        sum += y;
        sum_c += y * libm::cos(arg);
        sum_s += y * libm::sin(arg);
        output.push(y);
    }
    // integer cycles make the cos/sin/dc basis orthogonal over the record
    let dc = sum / n;
    let a = 2.0 * sum_c / n;
    let b = 2.0 * sum_s / n;
    let residual: f64 = output
        .iter()
        .enumerate()
        .map(|(k, y)| {
            let arg = TAU * cycles * k as f64 / n;
            let e = y - (dc + a * libm::cos(arg) + b * libm::sin(arg));
            e * e
        })
        .sum::<f64>()
        / n;
    let signal = 0.5 * (a * a + b * b);
    ensure!(signal > 0.0, Decision, "digitized record carries no tone");
    if residual == 0.0 {
        return Ok(f64::INFINITY);
    }
    let sinad_db = 10.0 * libm::log10(signal / residual);
    Ok((sinad_db - 1.76) / 6.02)
}

/// Mean full-scale ENOB over `draws` independent offset realizations with
/// standard deviation `sigma` (V). Draw j uses stream j of `seed`, so the
/// same standard-normal pattern is reused as `sigma` varies.
pub fn enob_for_offset_sigma(
    n_bits: u32,
    v_fs: f64,
    sigma: f64,
    draws: usize,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    ensure!(draws >= 1, Input, "need at least one offset draw");
    ensure!(
        sigma.is_finite() && sigma >= 0.0,
        Domain,
        "offset sigma must be non-negative"
    );
    let mut cfg = AdcConfig::ideal(n_bits, v_fs);
    cfg.seed = seed;
    let mut total = 0.0;
    for j in 0..draws {
        cfg.comparator_offsets = drawn_offsets(cfg.comparators(), sigma, seed, j as u64);
        total += adc_enob(&cfg, v_fs, samples, seed)?;
    }
    Ok(total / draws as f64)
}

/// Offset σ (V) at which the mean ENOB falls to `target_enob`, found by
/// bisection on [0, 2·V_LSB].
pub fn offset_sigma_for_enob(
    target_enob: f64,
    n_bits: u32,
    v_fs: f64,
    draws: usize,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    let lsb = v_fs / (1u64 << n_bits.min(16)) as f64;
    let f = |s: f64| {
        enob_for_offset_sigma(n_bits, v_fs, s, draws, samples, seed).map(|e| e - target_enob)
    };
    let (mut lo, mut hi) = (0.0, 2.0 * lsb);
    let (f_lo, f_hi) = (f(lo)?, f(hi)?);
    ensure!(
        f_lo > 0.0 && f_hi < 0.0,
        Decision,
        "target ENOB {target_enob} is not bracketed by offset sigma in [0, 2 LSB]"
    );
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-4 * lsb {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn ideal_ladder() {
        let t = adc_thresholds(&AdcConfig::default()).unwrap();
        let expect: Vec<f64> = (1..8).map(|k| k as f64 * 0.3125).collect();
        assert_eq!(t, expect);
        let one = adc_thresholds(&AdcConfig::ideal(1, 2.5)).unwrap();
        assert_eq!(one, vec![1.25]);
    }

    #[test]
    fn uniform_negative_offset_shifts_one_code() {
        let mut cfg = AdcConfig::default();
        cfg.comparator_offsets = vec![-cfg.lsb(); 7];
        let t = adc_thresholds(&cfg).unwrap();
        let ideal = adc_thresholds(&AdcConfig::default()).unwrap();
        for k in 1..7 {
            assert_abs_diff_eq!(t[k], ideal[k - 1], epsilon = 1e-15);
        }
        assert_abs_diff_eq!(t[0], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn wrong_offset_count_rejected() {
        let mut cfg = AdcConfig::default();
        cfg.comparator_offsets.pop();
        assert!(adc_thresholds(&cfg).is_err());
    }

    #[test]
    fn thermometer_examples() {
        let t = adc_thresholds(&AdcConfig::default()).unwrap();
        assert_eq!(thermometer_encode(-1.0, &t), vec![false; 7]);
        assert_eq!(thermometer_encode(5.0, &t), vec![true; 7]);
        let d = thermometer_encode(1.0, &t);
        assert_eq!(d, [true, true, true, false, false, false, false]);
        assert_eq!(priority_encode(&d, EncoderMode::Masked), 0b011);
    }

    fn thermometer(weight: usize) -> Vec<bool> {
        (0..7).map(|k| k < weight).collect()
    }

    #[test]
    fn masked_encoder_maps_weight_to_binary() {
        for w in 0..=7 {
            assert_eq!(
                priority_encode(&thermometer(w), EncoderMode::Masked),
                w as u32
            );
        }
    }

    #[test]
    fn raw_or_fails_on_thermometer_codes() {
        assert_eq!(priority_encode(&thermometer(2), EncoderMode::RawOr), 0b011);
        assert_eq!(priority_encode(&thermometer(7), EncoderMode::RawOr), 0b111);
        let wrong = (0..=7)
            .filter(|w| priority_encode(&thermometer(*w), EncoderMode::RawOr) != *w as u32)
            .count();
        assert!(wrong > 0);
    }

    #[test]
    fn raw_or_is_right_for_one_hot() {
        for k in 1..=7 {
            let d: Vec<bool> = (1..=7).map(|j| j == k).collect();
            assert_eq!(priority_encode(&d, EncoderMode::RawOr), k as u32);
        }
    }

    #[test]
    fn quantization_noise_examples() {
        let q = quantization_noise_rms(&AdcConfig::default()).unwrap();
        assert_abs_diff_eq!(q, 0.0902, epsilon = 1e-4);
        let q = quantization_noise_rms(&AdcConfig::ideal(3, 1.0)).unwrap();
        assert_abs_diff_eq!(q, 0.0361, epsilon = 1e-4);
        let fine = quantization_noise_rms(&AdcConfig::ideal(16, 2.5)).unwrap();
        assert!(fine < 2e-5);
    }

    #[test]
    fn ideal_enob_is_three_bits() {
        let e = adc_enob(&AdcConfig::default(), 2.5, 8192, 1).unwrap();
        assert!((2.9..=3.1).contains(&e), "{e}");
    }

    #[test]
    fn half_scale_tone_loses_a_bit() {
        let cfg = AdcConfig::default();
        let full = adc_enob(&cfg, 2.5, 8192, 1).unwrap();
        let half = adc_enob(&cfg, 1.25, 8192, 1).unwrap();
        assert!((full - half - 1.0).abs() < 0.25, "{full} {half}");
    }

    #[test]
    fn offsets_degrade_enob() {
        let lsb = AdcConfig::default().lsb();
        let ideal = enob_for_offset_sigma(3, 2.5, 0.0, 8, 4096, 3).unwrap();
        let noisy = enob_for_offset_sigma(3, 2.5, 0.2 * lsb, 8, 4096, 3).unwrap();
        assert!(noisy < ideal, "{noisy} vs {ideal}");
    }

    #[test]
    fn enob_needs_enough_samples() {
        assert!(matches!(
            adc_enob(&AdcConfig::default(), 2.5, 1000, 0),
            Err(crate::Error::Precondition(_))
        ));
    }

    #[test]
    fn drawn_offsets_are_seeded() {
        let a = AdcConfig::with_drawn_offsets(3, 2.5, 0.01, 9);
        let b = AdcConfig::with_drawn_offsets(3, 2.5, 0.01, 9);
        let c = AdcConfig::with_drawn_offsets(3, 2.5, 0.01, 10);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.validate().is_ok());
    }

    #[test]
    fn monotone_flag() {
        assert!(thresholds_monotone(&[0.1, 0.2, 0.3]));
        assert!(!thresholds_monotone(&[0.1, 0.3, 0.2]));
    }

    proptest! {
        #[test]
        fn masked_encoder_matches_floor(v in -1.0f64..3.5) {
            let cfg = AdcConfig::default();
            let t = adc_thresholds(&cfg).unwrap();
            let expect = libm::floor(v / cfg.lsb()).clamp(0.0, 7.0) as u32;
            // exact ladder points sit on the comparator's non-firing side
            let on_step = (v / cfg.lsb()).fract() == 0.0;
            prop_assume!(!on_step);
            prop_assert_eq!(adc_convert(v, &t, EncoderMode::Masked), expect);
        }

        #[test]
        fn single_bubble_stays_close(w in 2usize..7, hole in 0usize..7) {
            prop_assume!(hole + 1 < w);
            let mut d = thermometer(w);
            d[hole] = false;
            let code = priority_encode(&d, EncoderMode::Masked);
            // one bubble creates two one-hot lines; output is their OR
            prop_assert_eq!(code, (hole as u32) | (w as u32));
        }
    }
}
