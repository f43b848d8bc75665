use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};

/// Binary-weighted DAC.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DacConfig {
    pub n_bits: u32,
    /// Reference voltage, V.
    pub v_ref: f64,
    /// Optional per-code level error, V. Empty means ideal levels; otherwise
    /// one entry per code.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub code_errors: Vec<f64>,
}

impl Default for DacConfig {
    fn default() -> Self {
        Self {
            n_bits: 3,
            v_ref: 1.0,
            code_errors: Vec::new(),
        }
    }
}

impl DacConfig {
    pub fn validate(&self) -> Result<()> {
        ensure!(
            (1..=24).contains(&self.n_bits),
            Domain,
            "DAC resolution must be 1..=24 bits, got {}",
            self.n_bits
        );
        ensure!(
            self.v_ref.is_finite() && self.v_ref > 0.0,
            Domain,
            "DAC v_ref must be positive"
        );
        ensure!(
            self.code_errors.is_empty() || self.code_errors.len() == self.codes(),
            Input,
            "DAC code_errors must be empty or hold {} entries, got {}",
            self.codes(),
            self.code_errors.len()
        );
        Ok(())
    }

    pub fn codes(&self) -> usize {
        1usize << self.n_bits
    }

    /// V_LSB = V_ref / 2^n.
    pub fn lsb(&self) -> f64 {
        self.v_ref / self.codes() as f64
    }
}

/// Output voltage for `code`: V_ref·code/2^n plus the configured code error.
pub fn dac_output(code: u32, cfg: &DacConfig) -> Result<f64> {
    cfg.validate()?;
    ensure!(
        (code as usize) < cfg.codes(),
        Input,
        "code {code} out of range for a {}-bit DAC",
        cfg.n_bits
    );
    let err = cfg.code_errors.get(code as usize).copied().unwrap_or(0.0);
    Ok(code as f64 * cfg.lsb() + err)
}

/// Every output level, indexed by code.
pub fn dac_levels(cfg: &DacConfig) -> Result<Vec<f64>> {
    (0..cfg.codes() as u32)
        .map(|k| dac_output(k, cfg))
        .collect()
}

/// Differential and integral nonlinearity in LSB, indexed by code.
///
/// `dnl[k]` describes the step from code k−1 to code k, so `dnl[0]` is 0 by
/// construction; `inl[k]` is the running sum of `dnl[0..=k]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DacLinearity {
    pub dnl: Vec<f64>,
    pub inl: Vec<f64>,
}

impl DacLinearity {
    pub fn max_abs_dnl(&self) -> f64 {
        self.dnl.iter().fold(0.0, |m, d| m.max(d.abs()))
    }

    pub fn max_abs_inl(&self) -> f64 {
        self.inl.iter().fold(0.0, |m, d| m.max(d.abs()))
    }
}

pub fn dac_linearity(measured_levels: &[f64], cfg: &DacConfig) -> Result<DacLinearity> {
    cfg.validate()?;
    ensure!(
        measured_levels.len() == cfg.codes(),
        Input,
        "expected {} levels for a {}-bit DAC, got {}",
        cfg.codes(),
        cfg.n_bits,
        measured_levels.len()
    );
    let lsb = cfg.lsb();
    let mut dnl = Vec::with_capacity(measured_levels.len());
    dnl.push(0.0);
    dnl.extend(
        measured_levels
            .windows(2)
            .map(|w| (w[1] - w[0] - lsb) / lsb),
    );
    let inl = dnl
        .iter()
        .scan(0.0, |acc, d| {
            *acc += d;
            Some(*acc)
        })
        .collect();
    Ok(DacLinearity { dnl, inl })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn dac(n_bits: u32, v_ref: f64) -> DacConfig {
        DacConfig {
            n_bits,
            v_ref,
            code_errors: Vec::new(),
        }
    }

    #[test]
    fn output_examples() {
        assert_eq!(dac_output(0, &dac(3, 1.0)).unwrap(), 0.0);
        assert_eq!(dac_output(0b111, &dac(3, 1.0)).unwrap(), 0.875);
        assert!((dac_output(0b100, &dac(3, 1.8)).unwrap() - 0.9).abs() < 1e-15);
        assert!(matches!(
            dac_output(8, &dac(3, 1.0)),
            Err(crate::Error::Input(_))
        ));
    }

    #[test]
    fn binary_weighting_matches_bit_sum() {
        let cfg = dac(3, 1.0);
        for code in 0..8u32 {
            let (b2, b1, b0) = ((code >> 2) & 1, (code >> 1) & 1, code & 1);
            let expected = cfg.v_ref * (4 * b2 + 2 * b1 + b0) as f64 / 8.0;
            assert_eq!(dac_output(code, &cfg).unwrap(), expected);
        }
    }

    #[test]
    fn ideal_levels_are_linear() {
        let cfg = dac(3, 1.0);
        let lin = dac_linearity(&dac_levels(&cfg).unwrap(), &cfg).unwrap();
        assert!(lin.dnl.iter().chain(&lin.inl).all(|d| *d == 0.0));
    }

    #[test]
    fn wide_step_at_code_3() {
        let cfg = dac(3, 1.0);
        let lsb = cfg.lsb();
        let levels: Vec<f64> = (0..8)
            .map(|k| k as f64 * lsb + if k >= 3 { 0.5 * lsb } else { 0.0 })
            .collect();
        let lin = dac_linearity(&levels, &cfg).unwrap();
        for k in 0..8 {
            let dnl = if k == 3 { 0.5 } else { 0.0 };
            let inl = if k >= 3 { 0.5 } else { 0.0 };
            assert!((lin.dnl[k] - dnl).abs() < 1e-12, "dnl[{k}]");
            assert!((lin.inl[k] - inl).abs() < 1e-12, "inl[{k}]");
        }
    }

    #[test]
    fn missing_code() {
        let cfg = dac(3, 1.0);
        let lsb = cfg.lsb();
        let mut levels: Vec<f64> = (0..8).map(|k| k as f64 * lsb).collect();
        for l in levels.iter_mut().skip(5) {
            *l -= lsb;
        }
        let lin = dac_linearity(&levels, &cfg).unwrap();
        assert!((lin.dnl[5] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn wrong_length_rejected() {
        assert!(dac_linearity(&[0.0; 7], &dac(3, 1.0)).is_err());
    }

    #[test]
    fn code_errors_shift_levels() {
        let mut cfg = dac(2, 1.0);
        cfg.code_errors = vec![0.0, 0.01, 0.0, 0.0];
        assert!((dac_output(1, &cfg).unwrap() - 0.26).abs() < 1e-15);
        cfg.code_errors = vec![0.0];
        assert!(cfg.validate().is_err());
    }

    proptest! {
        #[test]
        fn steps_equal_one_lsb(n_bits in 1u32..12, v_ref in 0.1f64..5.0) {
            let cfg = dac(n_bits, v_ref);
            let levels = dac_levels(&cfg).unwrap();
            for w in levels.windows(2) {
                prop_assert!(w[1] > w[0]);
                prop_assert!((w[1] - w[0] - cfg.lsb()).abs() <= 1e-12 * v_ref);
            }
            let lin = dac_linearity(&levels, &cfg).unwrap();
            prop_assert!(lin.max_abs_dnl() <= 1e-12 * (1u64 << n_bits) as f64);
        }
    }
}
