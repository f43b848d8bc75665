//! JSON chain configuration.
//!
//! The document mirrors [`ChainConfig`] field for field. Unknown keys are
//! rejected and the error names the offending path, e.g. `adc.n_bitz`.

use std::fs;
use std::path::Path;

use cryochain_core::chain::ChainConfig;

use crate::error::CliError;

/// Parses and validates a config document.
pub fn parse_config(text: &str) -> Result<ChainConfig, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let cfg: ChainConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CliError::Config(format!("at `{path}`: {}", e.into_inner()))
    })?;
    cfg.validate()
        .map_err(|e| CliError::Config(format!("invalid config: {e}")))?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<ChainConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_config(&text).map_err(|e| match e {
        CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Pretty-printed JSON with a trailing newline.
pub fn dump_config(cfg: &ChainConfig) -> String {
    let mut s = serde_json::to_string_pretty(cfg).expect("config serializes");
    s.push('\n');
    s
}
