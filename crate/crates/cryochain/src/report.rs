//! CSV and JSON renderings of command results.
//!
//! Every CSV has exactly one header row and the column order below is part
//! of the file format.

use cryochain_core::chain::{ChainReport, PowerReport};
use cryochain_core::synthesis::PllTrajectory;
use serde::{Deserialize, Serialize};

pub const PLL_HEADER: [&str; 4] = ["time_s", "v_error", "v_ctrl", "phase_error_rad"];
pub const SER_HEADER: [&str; 5] = ["es_n0_db", "ser_analytic", "ser_mc", "ci_lo", "ci_hi"];
pub const DEVICE_HEADER: [&str; 8] = [
    "temperature_k",
    "mobility_factor",
    "mobility",
    "threshold_voltage_v",
    "vth_shift_mv",
    "subthreshold_swing_mv_per_dec",
    "thermal_noise_nv_per_rthz",
    "noise_power_reduction",
];
pub const POWER_HEADER: [&str; 6] = [
    "case",
    "node_nm",
    "vdd_v",
    "power_mw",
    "budget_fraction",
    "over_budget",
];
pub const CHAIN_HEADER: [&str; 16] = [
    "iq_phase_error_deg",
    "amp_imbalance_db",
    "irr_db",
    "pll_lock_time_s",
    "pll_jitter_rms_deg",
    "lna_gain_db",
    "lna_noise_figure_db",
    "es_n0_db",
    "ser_analytic",
    "ser_mc",
    "symbol_errors",
    "snr_db",
    "fidelity",
    "enob",
    "power_mw",
    "projected_power_mw",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SerPoint {
    pub es_n0_db: f64,
    pub ser_analytic: f64,
    pub ser_mc: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub errors: u64,
    pub trials: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviceRow {
    pub temperature_k: f64,
    pub mobility_factor: f64,
    pub mobility: f64,
    pub threshold_voltage_v: f64,
    pub vth_shift_mv: f64,
    pub subthreshold_swing_mv_per_dec: f64,
    pub thermal_noise_nv_per_rthz: f64,
    /// Thermal noise power at 300 K over that at this temperature.
    pub noise_power_reduction: f64,
}

fn num(x: f64) -> String {
    x.to_string()
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn write_csv<const N: usize>(
    header: [&str; N],
    rows: impl IntoIterator<Item = [String; N]>,
) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

pub fn pll_csv(t: &PllTrajectory) -> String {
    write_csv(
        PLL_HEADER,
        (0..t.len()).map(|k| {
            [
                num(t.times[k]),
                num(t.v_error[k]),
                num(t.v_ctrl[k]),
                num(t.phase_error[k]),
            ]
        }),
    )
}

pub fn ser_csv(points: &[SerPoint]) -> String {
    write_csv(
        SER_HEADER,
        points.iter().map(|p| {
            [
                num(p.es_n0_db),
                num(p.ser_analytic),
                num(p.ser_mc),
                num(p.ci_lo),
                num(p.ci_hi),
            ]
        }),
    )
}

pub fn device_csv(rows: &[DeviceRow]) -> String {
    write_csv(
        DEVICE_HEADER,
        rows.iter().map(|r| {
            [
                num(r.temperature_k),
                num(r.mobility_factor),
                num(r.mobility),
                num(r.threshold_voltage_v),
                num(r.vth_shift_mv),
                num(r.subthreshold_swing_mv_per_dec),
                num(r.thermal_noise_nv_per_rthz),
                num(r.noise_power_reduction),
            ]
        }),
    )
}

pub fn power_csv(p: &PowerReport) -> String {
    write_csv(
        POWER_HEADER,
        [("current", &p.current), ("projected", &p.projected)].map(|(name, b)| {
            [
                name.to_string(),
                num(b.node_nm),
                num(b.vdd),
                num(b.steady_state_power * 1e3),
                num(b.budget_fraction),
                b.over_budget.to_string(),
            ]
        }),
    )
}

pub fn chain_csv(r: &ChainReport) -> String {
    write_csv(
        CHAIN_HEADER,
        [[
            num(r.iq_phase_error),
            num(r.amp_imbalance),
            num(r.irr),
            opt(r.pll_lock_time),
            opt(r.pll_jitter_rms),
            num(r.lna_gain),
            num(r.lna_noise_figure),
            num(r.es_n0),
            num(r.ser_analytic),
            num(r.ser_mc),
            r.symbol_errors.to_string(),
            num(r.snr),
            opt(r.fidelity),
            opt(r.enob),
            num(r.power.current.steady_state_power * 1e3),
            num(r.power.projected.steady_state_power * 1e3),
        ]],
    )
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_header_row_and_fixed_columns() {
        let csv = ser_csv(&[SerPoint {
            es_n0_db: 10.0,
            ser_analytic: 0.087,
            ser_mc: 0.08,
            ci_lo: 0.07,
            ci_hi: 0.09,
            errors: 8,
            trials: 100,
        }]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "es_n0_db,ser_analytic,ser_mc,ci_lo,ci_hi");
        assert_eq!(lines[1], "10,0.087,0.08,0.07,0.09");
        assert_eq!(lines.len(), 2);
    }

    #[test]
    fn floats_round_trip_through_text() {
        for x in [0.1, 1.0 / 3.0, 1.06e-6, 88.756, 5e-324] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }
}
