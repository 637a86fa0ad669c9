use std::path::{Path, PathBuf};

use halfint_core::suite::SuiteConfig;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Settings read from `--config`; command-line flags override them.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    #[serde(flatten)]
    pub suite: SuiteConfig,
    pub out: Option<PathBuf>,
    /// Form file for the half-integral weight form.
    pub form: Option<PathBuf>,
    /// Form files of the lift basis.
    pub basis: Vec<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        let cfg: RunConfig =
            serde_json::from_str(&text).map_err(|e| CliError::usage(format!("config {}: {e}", path.display())))?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn check(&self) -> Result<(), CliError> {
        self.suite.tolerances.validate()?;
        self.suite.precision.validate()?;
        for p in self.form.iter().chain(&self.basis) {
            if !p.is_file() {
                return Err(CliError::usage(format!("form file {} is not readable", p.display())));
            }
        }
        Ok(())
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("halfint-out"))
    }
}
