//! End-to-end experiments built from the block models: the control path
//! (DAC word to pulse at the qubit), the dispersive readout path, the 8-PSK
//! loopback and the 4 K power budget.
//!
//! All chain noise is referred to the LNA input as one equivalent E_s/N₀.
//! Unless overridden it is the dispersive readout SNR less the LNA noise
//! figure, both in dB.

mod config;
mod control;
mod loopback;
mod power;
mod readout_path;

pub use config::{
    ChainConfig, LinkConfig, LoImpairments, LoopbackConfig, PowerAmpConfig, PowerConfig,
    PowerEntry, DEFAULT_SEED,
};
pub use control::{run_control_path, ControlMetrics, ControlRun};
pub use loopback::{random_symbols, run_loopback, ChainReport, Skipped};
pub use power::{
    power_report, power_scaling, thermal_budget_fraction, BudgetUse, PowerBudget, PowerReport,
};
pub use readout_path::{
    digitize_phase, effective_es_n0_db, run_readout_path, state_phase, ReadoutOutcome,
};

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

/// RNG streams, one per experiment, so runs sharing a seed stay independent.
mod streams {
    pub const READOUT: u64 = 0x10;
    pub const LOOPBACK: u64 = 0x20;
    pub const SYMBOLS: u64 = 0x30;
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}
