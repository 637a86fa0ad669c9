use std::path::Path;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::{FormStatus, FourierExpansion};
use crate::error::{Error, Result};
use crate::report::{pair, unpair, Pair};

/// On-disk form description. Floats are written in shortest round-trip form,
/// so reading back reproduces every coefficient bit for bit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormFile {
    pub weight_times_two: i64,
    pub level: u64,
    pub cusp_width: String,
    pub coefficients: Vec<Pair>,
    pub fricke_eigenvalue: Option<Pair>,
    pub label: String,
    pub source: String,
    #[serde(default = "unvalidated")]
    pub status: FormStatus,
}

fn unvalidated() -> FormStatus {
    FormStatus::Unvalidated
}

impl From<&FourierExpansion> for FormFile {
    fn from(f: &FourierExpansion) -> Self {
        FormFile {
            weight_times_two: f.weight_times_two,
            level: f.level,
            cusp_width: f.cusp_width.to_string(),
            coefficients: f.coefficients().iter().map(|&c| pair(c)).collect(),
            fricke_eigenvalue: f.fricke_eigenvalue.map(pair),
            label: f.label.clone(),
            source: f.source.clone(),
            status: f.status,
        }
    }
}

impl FormFile {
    pub fn to_expansion(&self) -> Result<FourierExpansion> {
        let width: Rational64 = self
            .cusp_width
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("cusp width {:?}: {e}", self.cusp_width)))?;
        let mut f = FourierExpansion::new(
            self.weight_times_two,
            self.level,
            width,
            self.coefficients.iter().map(|&p| unpair(p)).collect(),
            self.fricke_eigenvalue.map(unpair),
        )?
        .with_label(self.label.clone())
        .with_source(self.source.clone());
        f.status = self.status;
        Ok(f)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

pub fn read_form_file(path: &Path) -> Result<FourierExpansion> {
    let text = std::fs::read_to_string(path)?;
    FormFile::from_json(&text)?.to_expansion()
}

pub fn write_form_file(path: &Path, f: &FourierExpansion) -> Result<()> {
    std::fs::write(path, FormFile::from(f).to_json()?)?;
    Ok(())
}
