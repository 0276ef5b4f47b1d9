//! Experiment harness: JSON configs in, CSV or JSON-lines tables out.

pub mod config;
pub mod demo;
mod error;
pub mod experiments;
pub mod report;
pub mod table;

use std::path::Path;

pub use config::{ExperimentConfig, ExperimentKind, Format, Overrides};
pub use error::CliError;
pub use experiments::run_experiment;
pub use table::{Cell, Table};

/// `git describe --always --dirty` at build time.
pub const BUILD_ID: &str = env!("QBC_BUILD_ID");

/// Parses a config, applies overrides, runs it and renders the table in
/// the configured format (CSV by default).
pub fn run_config_text(text: &str, overrides: &Overrides) -> Result<(ExperimentConfig, String), CliError> {
    let mut config = ExperimentConfig::from_json(text)?;
    config.apply(overrides);
    let table = run_experiment(&config)?;
    let rendered = table.render(config.format.unwrap_or_default())?;
    Ok((config, rendered))
}

/// `qbc run`: writes to the configured path, or returns the text for stdout.
pub fn run_config_file(path: &Path, overrides: &Overrides) -> Result<Option<String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config("config", format!("cannot read {}: {e}", path.display())))?;
    let (config, rendered) = run_config_text(&text, overrides)?;
    match &config.out {
        Some(out) => {
            std::fs::write(out, rendered)?;
            Ok(None)
        }
        None => Ok(Some(rendered)),
    }
}
