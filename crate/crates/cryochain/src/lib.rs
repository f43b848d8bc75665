//! Host-side companion to `cryochain-core`: JSON configuration, CSV and JSON
//! report files, run manifests and the `cryochain` command-line tool.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod manifest;
pub mod report;

pub use error::CliError;
