use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::pll::{closed_loop_response, PllConfig};
use crate::error::{ensure, Result};
use crate::{ComplexSample, Sample};

/// Single-sideband phase noise sampled on an offset grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseNoiseProfile {
    offsets: Vec<f64>,
    levels: Vec<f64>,
}

impl PhaseNoiseProfile {
    /// `offsets` in Hz (strictly increasing, positive), `levels` in dBc/Hz.
    pub fn new(offsets: Vec<f64>, levels: Vec<f64>) -> Result<Self> {
        ensure!(
            offsets.len() == levels.len(),
            Input,
            "{} offsets but {} levels",
            offsets.len(),
            levels.len()
        );
        ensure!(
            offsets.iter().all(|f| f.is_finite() && *f > 0.0),
            Input,
            "offsets must be positive"
        );
        ensure!(
            offsets.windows(2).all(|w| w[1] > w[0]),
            Input,
            "offsets must be strictly increasing"
        );
        ensure!(
            levels.iter().all(|l| l.is_finite()),
            Input,
            "levels must be finite"
        );
        Ok(Self { offsets, levels })
    }

    /// A profile with the same level at every offset.
    pub fn flat(offsets: Vec<f64>, level: f64) -> Result<Self> {
        let levels = alloc::vec![level; offsets.len()];
        Self::new(offsets, levels)
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }
}

/// Logarithmic offset grid from `start` to `stop` inclusive.
pub fn log_offset_grid(start: f64, stop: f64, points_per_decade: usize) -> Result<Vec<f64>> {
    ensure!(start > 0.0 && stop > start, Input, "need 0 < start < stop");
    ensure!(
        points_per_decade > 0,
        Input,
        "points per decade must be positive"
    );
    let decades = libm::log10(stop / start);
    let n = libm::round(decades * points_per_decade as f64) as usize;
    Ok((0..=n)
        .map(|k| start * libm::pow(10.0, decades * k as f64 / n as f64))
        .collect())
}

fn db_to_lin(db: f64) -> f64 {
    libm::pow(10.0, db / 10.0)
}

/// Power-domain sum `ref·h2 + vco·one_minus_h2` of two dBc/Hz levels.
pub fn combine_levels(ref_db: f64, vco_db: f64, h2: f64, one_minus_h2: f64) -> f64 {
    10.0 * libm::log10(db_to_lin(ref_db) * h2 + db_to_lin(vco_db) * one_minus_h2)
}

/// Output phase noise of the loop: reference noise low-passed by |H|²,
/// VCO noise high-passed by |1 − H|².
pub fn combine_phase_noise(
    reference: &PhaseNoiseProfile,
    vco: &PhaseNoiseProfile,
    cfg: &PllConfig,
) -> Result<PhaseNoiseProfile> {
    cfg.validate()?;
    ensure!(
        reference.offsets == vco.offsets,
        Input,
        "reference and VCO profiles must share one offset grid"
    );
    let levels = reference
        .offsets
        .iter()
        .zip(reference.levels.iter().zip(&vco.levels))
        .map(|(&f, (&r, &v))| {
            let h = closed_loop_response(cfg, f);
            let one_minus_h = ComplexSample::new(1.0, 0.0) - h;
            let h2 = h.power();
            combine_levels(r, v, h2, one_minus_h.power())
        })
        .collect();
    PhaseNoiseProfile::new(reference.offsets.clone(), levels)
}
