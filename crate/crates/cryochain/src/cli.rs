//! Argument parsing and dispatch for the `cryochain` binary.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use cryochain_core::chain::{power_report, ChainConfig, DEFAULT_SEED};

use crate::commands::{self, CommandOutput, Sweep};
use crate::config::load_config;
use crate::error::CliError;
use crate::manifest::RunManifest;

/// Monte Carlo trials per SER point when `--trials` is omitted.
pub const DEFAULT_SER_TRIALS: u64 = 100_000;

#[derive(Debug, Parser)]
#[command(
    name = "cryochain",
    version,
    about = "Behavioral simulator for a 4 K qubit control and readout chain"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// JSON chain configuration; built-in nominal values when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// RNG seed; overrides the config seed (default 1592642302).
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
    /// Monte Carlo trials (ser) or loopback symbols (chain).
    #[arg(long, global = true, value_name = "N")]
    pub trials: Option<u64>,
    /// Which report files to write.
    #[arg(long, global = true, value_enum, default_value_t = Format::Both)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// MOSFET parameters across temperatures.
    Device {
        /// Comma-separated temperatures in kelvin; default 300 and the
        /// configured operating temperature.
        #[arg(long, value_delimiter = ',')]
        temperatures: Vec<f64>,
    },
    /// PLL lock transient.
    Pll,
    /// 8-PSK symbol error rate sweep.
    Ser {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, default_value_t = 20.0, allow_negative_numbers = true)]
        to: f64,
        #[arg(long, default_value_t = 1.0)]
        step: f64,
    },
    /// End-to-end loopback report.
    Chain,
    /// Supply-voltage power projection.
    Power {
        /// Steady-state power, mW (default from config).
        #[arg(long)]
        p_mw: Option<f64>,
        #[arg(long)]
        vdd_from: Option<f64>,
        #[arg(long)]
        vdd_to: Option<f64>,
        /// 4 K stage cooling budget, W.
        #[arg(long)]
        budget_w: Option<f64>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Device { .. } => "device",
            Command::Pll => "pll",
            Command::Ser { .. } => "ser",
            Command::Chain => "chain",
            Command::Power { .. } => "power",
        }
    }
}

fn resolve_config(global: &GlobalArgs) -> Result<ChainConfig, CliError> {
    let mut cfg = match &global.config {
        Some(path) => load_config(path)?,
        None => ChainConfig::default(),
    };
    if let Some(seed) = global.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn execute(cli: &Cli, cfg: &ChainConfig) -> Result<CommandOutput, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Device { temperatures } => {
            let temps = if temperatures.is_empty() {
                vec![300.0, cfg.device.temperature]
            } else {
                temperatures.clone()
            };
            commands::cmd_device(cfg, &temps)
        }
        Command::Pll => commands::cmd_pll(cfg),
        Command::Ser { from, to, step } => {
            let sweep = Sweep {
                from: *from,
                to: *to,
                step: *step,
            };
            commands::cmd_ser(&sweep, g.trials.unwrap_or(DEFAULT_SER_TRIALS), cfg.seed)
        }
        Command::Chain => {
            let n = g.trials.map_or(cfg.loopback.symbols, |t| t as usize);
            commands::cmd_chain(cfg, n)
        }
        Command::Power {
            p_mw,
            vdd_from,
            vdd_to,
            budget_w,
        } => {
            let p = &cfg.power;
            let report =
                if p_mw.is_none() && vdd_from.is_none() && vdd_to.is_none() && budget_w.is_none() {
                    power_report(p)?
                } else {
                    commands::power_from_args(
                        p_mw.unwrap_or(p.steady_state_power * 1e3),
                        vdd_from.unwrap_or(p.vdd),
                        vdd_to.unwrap_or(p.projected_vdd),
                        budget_w.unwrap_or(p.stage_budget),
                    )?
                };
            commands::cmd_power(&report)
        }
    }
}

fn write_outputs(out: &CommandOutput, dir: &Path, format: Format) -> Result<Vec<String>, CliError> {
    let mut written = Vec::new();
    for f in &out.files {
        let keep = match format {
            Format::Both => true,
            Format::Csv => f.is_csv(),
            Format::Json => !f.is_csv(),
        };
        if keep {
            let path = dir.join(&f.name);
            fs::write(&path, &f.contents).map_err(|e| CliError::io(path, e))?;
            written.push(f.name.clone());
        }
    }
    Ok(written)
}

/// Runs a parsed command line, writing outputs and the manifest. Returns
/// the process exit status.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8 {
    let g = &cli.global;
    let seed = g.seed.unwrap_or(DEFAULT_SEED);
    let mut manifest = RunManifest::start(cli.command.name(), g.config.as_deref(), seed, &g.out);
    if let Err(e) = fs::create_dir_all(&g.out) {
        let _ = writeln!(stderr, "error: {}", CliError::io(&g.out, e));
        return 1;
    }
    let result = resolve_config(g).and_then(|cfg| {
        manifest.seed = cfg.seed;
        let out = execute(cli, &cfg)?;
        manifest.files = write_outputs(&out, &g.out, g.format)?;
        Ok(out)
    });
    let code = match result {
        Ok(out) => {
            for line in &out.summary {
                let _ = writeln!(stdout, "{line}");
            }
            for w in &out.warnings {
                let _ = writeln!(stderr, "warning: {w}");
            }
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    };
    manifest.exit_code = code;
    if let Err(e) = manifest.write() {
        let _ = writeln!(stderr, "error: {e}");
        return if code == 0 { 1 } else { code };
    }
    code
}

/// Entry point used by the binary: parses `args` and runs the command.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    run(&cli, &mut std::io::stdout(), &mut std::io::stderr())
}
