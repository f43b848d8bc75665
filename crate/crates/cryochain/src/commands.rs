//! The five experiments behind the subcommands. Each returns the files it
//! wants written plus human-readable summary lines; nothing here touches the
//! filesystem.

use std::thread;

use cryochain_core::chain::{
    power_report, power_scaling, random_symbols, run_loopback, thermal_budget_fraction,
    ChainConfig, ChainReport, PowerBudget, PowerReport,
};
use cryochain_core::consts::ROOM_TEMPERATURE;
use cryochain_core::device::{
    mobility, mobility_factor, noise_power_reduction, subthreshold_swing, thermal_noise_density,
    threshold_voltage,
};
use cryochain_core::readout::{ser_analytic, ser_monte_carlo};
use cryochain_core::synthesis::{natural_frequency_and_damping, simulate_lock};
use serde::Serialize;

use crate::error::CliError;
use crate::report::{self, DeviceRow, SerPoint};

/// An output file: name relative to the output directory and its contents.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputFile {
    pub name: String,
    pub contents: String,
}

impl OutputFile {
    fn new(name: &str, contents: String) -> Self {
        Self {
            name: name.to_string(),
            contents,
        }
    }

    pub fn is_csv(&self) -> bool {
        self.name.ends_with(".csv")
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CommandOutput {
    pub files: Vec<OutputFile>,
    pub summary: Vec<String>,
    pub warnings: Vec<String>,
}

/// Device parameters at each temperature.
///
/// The configured φ_F belongs to the configured cold operating point, so the
/// freeze-out shift applies below 300 K and is zero at or above it.
pub fn device_rows(cfg: &ChainConfig, temperatures: &[f64]) -> Result<Vec<DeviceRow>, CliError> {
    let r_s = cfg.lna.r_s;
    temperatures
        .iter()
        .map(|&t| {
            let mut env = cfg.device.at_temperature(t);
            if t >= ROOM_TEMPERATURE {
                env.gamma = 0.0;
            }
            env.validate()?;
            let vth = threshold_voltage(&env)?;
            Ok(DeviceRow {
                temperature_k: t,
                mobility_factor: mobility_factor(&env)?,
                mobility: mobility(&env)?,
                threshold_voltage_v: vth,
                vth_shift_mv: (vth - env.vth_300k) * 1e3,
                subthreshold_swing_mv_per_dec: subthreshold_swing(t)? * 1e3,
                thermal_noise_nv_per_rthz: thermal_noise_density(t, r_s)? * 1e9,
                noise_power_reduction: noise_power_reduction(ROOM_TEMPERATURE, t)?,
            })
        })
        .collect()
}

pub fn cmd_device(cfg: &ChainConfig, temperatures: &[f64]) -> Result<CommandOutput, CliError> {
    if temperatures.is_empty() {
        return Err(CliError::Usage("need at least one temperature".into()));
    }
    let rows = device_rows(cfg, temperatures)?;
    let mut summary = Vec::new();
    let head: String = rows
        .iter()
        .map(|r| format!("{:>14}", format!("{} K", r.temperature_k)))
        .collect();
    summary.push(format!("{:<20}{head}", "Parameter"));
    let line = |label: &str, f: &dyn Fn(&DeviceRow) -> String| {
        let cells: String = rows.iter().map(|r| format!("{:>14}", f(r))).collect();
        format!("{label:<20}{cells}")
    };
    summary.push(line("Carrier Mobility", &|r| {
        format!("{:.2}x", r.mobility_factor)
    }));
    summary.push(line("Threshold Voltage", &|r| {
        format!("{:.1} mV", r.threshold_voltage_v * 1e3)
    }));
    summary.push(line("Subthreshold Swing", &|r| {
        format!("{:.3} mV/dec", r.subthreshold_swing_mv_per_dec)
    }));
    summary.push(line("Thermal Noise", &|r| {
        format!("{:.1}x lower", r.noise_power_reduction)
    }));
    Ok(CommandOutput {
        files: vec![
            OutputFile::new("device.json", report::to_json(&rows)),
            OutputFile::new("device.csv", report::device_csv(&rows)),
        ],
        summary,
        warnings: Vec::new(),
    })
}

#[derive(Debug, Clone, Serialize)]
struct PllSummary {
    lock_time: Option<f64>,
    jitter_deg_rms: Option<f64>,
    omega_n: f64,
    zeta: f64,
    final_vco_frequency: f64,
    f_ref: f64,
}

pub fn cmd_pll(cfg: &ChainConfig) -> Result<CommandOutput, CliError> {
    let dynamics = natural_frequency_and_damping(&cfg.pll)?;
    if let Some(dt) = cfg.lock.dt {
        let limit = 0.1 / dynamics.omega_n;
        if !(dt > 0.0 && dt < limit) {
            return Err(CliError::Config(format!(
                "lock.dt = {dt:e} s violates the step precondition 0 < dt < 0.1/ω_n = {limit:e} s"
            )));
        }
    }
    let traj = simulate_lock(&cfg.pll, &cfg.lock)?;
    let summary_data = PllSummary {
        lock_time: traj.lock_time,
        jitter_deg_rms: traj.post_lock_jitter_rms().map(f64::to_degrees),
        omega_n: dynamics.omega_n,
        zeta: dynamics.zeta,
        final_vco_frequency: traj.final_vco_frequency(),
        f_ref: cfg.pll.f_ref,
    };
    let mut out = CommandOutput {
        files: vec![
            OutputFile::new("pll_trajectory.csv", report::pll_csv(&traj)),
            OutputFile::new("pll_summary.json", report::to_json(&summary_data)),
        ],
        ..Default::default()
    };
    out.summary.push(format!(
        "omega_n = {:.1} rad/s, zeta = {:.4}",
        dynamics.omega_n, dynamics.zeta
    ));
    match (summary_data.lock_time, summary_data.jitter_deg_rms) {
        (Some(t), jitter) => {
            out.summary.push(format!("lock_time = {t:.6e} s"));
            if let Some(j) = jitter {
                out.summary
                    .push(format!("post-lock jitter = {j:.4} deg RMS"));
            }
        }
        (None, _) => {
            out.summary.push("lock_time = null".into());
            out.warnings.push(format!(
                "loop did not lock within t_max = {:e} s",
                cfg.lock.t_max
            ));
        }
    }
    Ok(out)
}

/// Inclusive E_s/N₀ sweep in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub from: f64,
    pub to: f64,
    pub step: f64,
}

impl Sweep {
    pub fn points(&self) -> Result<Vec<f64>, CliError> {
        let ok = self.from.is_finite() && self.to.is_finite() && self.step.is_finite();
        if !ok || self.step <= 0.0 || self.to < self.from {
            return Err(CliError::Usage(format!(
                "empty sweep: from {} to {} step {} dB",
                self.from, self.to, self.step
            )));
        }
        let n = ((self.to - self.from) / self.step + 1e-9).floor() as usize;
        Ok((0..=n).map(|k| self.from + k as f64 * self.step).collect())
    }
}

/// SER sweep. Points run on worker threads; results are merged in sweep
/// order, and each point depends only on (E_s/N₀, trials, seed).
pub fn ser_points(sweep: &Sweep, trials: u64, seed: u64) -> Result<Vec<SerPoint>, CliError> {
    let grid = sweep.points()?;
    let workers = thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(grid.len());
    let chunk = grid.len().div_ceil(workers);
    let results: Vec<Result<Vec<SerPoint>, CliError>> = thread::scope(|s| {
        let handles: Vec<_> = grid
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    part.iter()
                        .map(|&db| {
                            let mc = ser_monte_carlo(db, trials, seed)?;
                            Ok(SerPoint {
                                es_n0_db: db,
                                ser_analytic: ser_analytic(db),
                                ser_mc: mc.ser,
                                ci_lo: mc.ci95.lo,
                                ci_hi: mc.ci95.hi,
                                errors: mc.errors,
                                trials: mc.trials,
                            })
                        })
                        .collect()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("SER worker panicked"))
            .collect()
    });
    let mut points = Vec::with_capacity(grid.len());
    for r in results {
        points.extend(r?);
    }
    Ok(points)
}

pub fn cmd_ser(sweep: &Sweep, trials: u64, seed: u64) -> Result<CommandOutput, CliError> {
    let points = ser_points(sweep, trials, seed)?;
    let mut summary = vec![format!(
        "{:>9} {:>13} {:>13} {:>27}",
        "Es/N0 dB", "analytic", "monte carlo", "95% interval"
    )];
    for p in &points {
        summary.push(format!(
            "{:>9.2} {:>13.4e} {:>13.4e}   [{:.4e}, {:.4e}]",
            p.es_n0_db, p.ser_analytic, p.ser_mc, p.ci_lo, p.ci_hi
        ));
    }
    Ok(CommandOutput {
        files: vec![
            OutputFile::new("ser.csv", report::ser_csv(&points)),
            OutputFile::new("ser.json", report::to_json(&points)),
        ],
        summary,
        warnings: Vec::new(),
    })
}

/// Fixed-point with `digits` decimals, without a "-0.000" for tiny negatives.
fn fixed(x: f64, digits: usize) -> String {
    let scale = 10f64.powi(digits as i32);
    format!("{:.*}", digits, (x * scale).round() / scale + 0.0)
}

fn fmt_opt(x: Option<f64>, f: impl Fn(f64) -> String) -> String {
    x.map(f).unwrap_or_else(|| "skipped".into())
}

fn power_lines(p: &PowerReport) -> Vec<String> {
    let row = |label: &str, a: String, b: String| format!("{label:<22}{a:>20}{b:>20}");
    vec![
        row("Parameter", "Current Work".into(), "Projected".into()),
        row(
            "Technology Node",
            format!("{} nm", p.current.node_nm),
            format!("{} nm", p.projected.node_nm),
        ),
        row(
            "Supply Voltage",
            format!("{} V", p.current.vdd),
            format!("{} V", p.projected.vdd),
        ),
        row(
            "Steady-State Power",
            format!("{:.2} mW", p.current.steady_state_power * 1e3),
            format!("{:.2} mW", p.projected.steady_state_power * 1e3),
        ),
        row(
            "Thermal Budget Use",
            format!("{:.2}%", p.current.budget_fraction * 100.0),
            format!("{:.2}%", p.projected.budget_fraction * 100.0),
        ),
    ]
}

/// Human summary of a chain report, labelled like the comparison table.
pub fn chain_summary(cfg: &ChainConfig, r: &ChainReport) -> Vec<String> {
    let row = |label: &str, value: String| format!("{label:<22}{value}");
    let mut lines = vec![
        row("Temperature", format!("{} K", cfg.device.temperature)),
        row(
            "DAC/ADC Bits",
            format!("{}/{}", cfg.dac.n_bits, cfg.adc.n_bits),
        ),
        row(
            "I/Q Phase Error",
            format!("{}°", fixed(r.iq_phase_error, 3)),
        ),
        row("LNA Gain", format!("{:.2} dB", r.lna_gain)),
        row("Control+Readout", "Both".into()),
        row("Validation", "Sim".into()),
        row(
            "Amplitude Imbalance",
            format!("{} dB", fixed(r.amp_imbalance, 3)),
        ),
        row("Image Rejection", format!("{:.2} dB", r.irr)),
        row(
            "PLL Lock Time",
            fmt_opt(r.pll_lock_time, |t| format!("{:.3} ms", t * 1e3)),
        ),
        row(
            "PLL Jitter",
            fmt_opt(r.pll_jitter_rms, |j| format!("{j:.4}° RMS")),
        ),
        row("LNA Noise Figure", format!("{:.2} dB", r.lna_noise_figure)),
        row("Readout SNR", format!("{:.2} dB", r.snr)),
        row("Es/N0", format!("{:.2} dB", r.es_n0)),
        row(
            "Symbol Error Rate",
            format!(
                "analytic {:.3e}, measured {:.3e} ({} of {} symbols)",
                r.ser_analytic, r.ser_mc, r.symbol_errors, r.symbols
            ),
        ),
        row("Gate Fidelity", fmt_opt(r.fidelity, |f| format!("{f:.6}"))),
        row("ADC ENOB", fmt_opt(r.enob, |e| format!("{e:.3} bits"))),
    ];
    lines.push(String::new());
    lines.extend(power_lines(&r.power));
    lines
}

pub fn cmd_chain(cfg: &ChainConfig, symbols: usize) -> Result<CommandOutput, CliError> {
    if symbols == 0 {
        return Err(CliError::Usage("symbol count must be positive".into()));
    }
    let syms = random_symbols(symbols, cfg.seed);
    let report = run_loopback(cfg, &syms)?;
    let warnings = report
        .skipped
        .iter()
        .map(|s| format!("{} skipped: {}", s.field, s.reason))
        .collect();
    Ok(CommandOutput {
        files: vec![
            OutputFile::new("chain_report.json", report::to_json(&report)),
            OutputFile::new("chain.csv", report::chain_csv(&report)),
        ],
        summary: chain_summary(cfg, &report),
        warnings,
    })
}

/// Power projection from explicit numbers rather than a config.
pub fn power_from_args(
    p_mw: f64,
    vdd_from: f64,
    vdd_to: f64,
    budget_w: f64,
) -> Result<PowerReport, CliError> {
    let p = p_mw * 1e-3;
    let now = thermal_budget_fraction(p, budget_w)?;
    let p_new = power_scaling(p, vdd_from, vdd_to)?;
    let then = thermal_budget_fraction(p_new, budget_w)?;
    let base = power_report(&Default::default())?;
    Ok(PowerReport {
        current: PowerBudget {
            vdd: vdd_from,
            steady_state_power: p,
            budget_fraction: now.fraction,
            over_budget: now.over_budget,
            ..base.current
        },
        projected: PowerBudget {
            vdd: vdd_to,
            steady_state_power: p_new,
            budget_fraction: then.fraction,
            over_budget: then.over_budget,
            ..base.projected
        },
        stage_budget: budget_w,
        breakdown: Vec::new(),
    })
}

pub fn cmd_power(report: &PowerReport) -> Result<CommandOutput, CliError> {
    let mut warnings = Vec::new();
    for (name, b) in [
        ("current", &report.current),
        ("projected", &report.projected),
    ] {
        if b.over_budget {
            warnings.push(format!(
                "{name} power exceeds the {} W stage budget",
                report.stage_budget
            ));
        }
    }
    Ok(CommandOutput {
        files: vec![
            OutputFile::new("power.json", report::to_json(report)),
            OutputFile::new("power.csv", report::power_csv(report)),
        ],
        summary: power_lines(report),
        warnings,
    })
}
