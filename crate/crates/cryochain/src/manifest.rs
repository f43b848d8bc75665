use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use time::format_description::well_known::Rfc3339;
use time::OffsetDateTime;

use crate::error::CliError;

pub const MANIFEST_FILE: &str = "run_manifest.json";

/// Provenance record written next to every set of outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub config_path: Option<PathBuf>,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub tool_version: String,
    /// RFC 3339, UTC.
    pub started_at: String,
    pub files: Vec<String>,
    pub exit_code: u8,
}

impl RunManifest {
    pub fn start(
        subcommand: &str,
        config_path: Option<&Path>,
        seed: u64,
        output_dir: &Path,
    ) -> Self {
        Self {
            subcommand: subcommand.to_string(),
            config_path: config_path.map(Path::to_path_buf),
            seed,
            output_dir: output_dir.to_path_buf(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            started_at: OffsetDateTime::now_utc()
                .format(&Rfc3339)
                .unwrap_or_default(),
            files: Vec::new(),
            exit_code: 0,
        }
    }

    pub fn write(&self) -> Result<(), CliError> {
        let path = self.output_dir.join(MANIFEST_FILE);
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        fs::write(&path, text).map_err(|e| CliError::io(path, e))
    }
}
