use std::path::{Path, PathBuf};

use halfint_core::report::CheckReport;
use serde::Serialize;

use crate::CliError;

/// Writes `<stem>.json` and, when rows are given, `<stem>.csv` under `dir`.
pub struct Artifacts {
    dir: PathBuf,
    pub written: Vec<PathBuf>,
}

impl Artifacts {
    pub fn new(dir: &Path) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::usage(format!("cannot create {}: {e}", dir.display())))?;
        Ok(Artifacts {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn json<T: Serialize>(&mut self, stem: &str, value: &T) -> Result<PathBuf, CliError> {
        let path = self.dir.join(format!("{stem}.json"));
        let text = serde_json::to_string_pretty(value).map_err(|e| CliError::usage(e.to_string()))?;
        std::fs::write(&path, text + "\n").map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
        self.written.push(path.clone());
        Ok(path)
    }

    pub fn csv<T: Serialize>(&mut self, stem: &str, rows: &[T]) -> Result<PathBuf, CliError> {
        let path = self.dir.join(format!("{stem}.csv"));
        let mut w = csv::Writer::from_path(&path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
        for r in rows {
            w.serialize(r).map_err(|e| CliError::usage(e.to_string()))?;
        }
        w.flush().map_err(|e| CliError::usage(e.to_string()))?;
        self.written.push(path.clone());
        Ok(path)
    }
}

#[derive(Serialize)]
pub struct CheckCsvRow<'a> {
    pub check: &'a str,
    pub label: &'a str,
    pub residual: f64,
    pub tol: f64,
    pub passed: bool,
    pub lhs_re: Option<f64>,
    pub lhs_im: Option<f64>,
    pub rhs_re: Option<f64>,
    pub rhs_im: Option<f64>,
}

pub fn check_rows(reports: &[CheckReport]) -> Vec<CheckCsvRow<'_>> {
    let mut out = Vec::new();
    for r in reports {
        for row in &r.rows {
            out.push(CheckCsvRow {
                check: &r.name,
                label: &row.label,
                residual: row.residual,
                tol: r.tol,
                passed: r.passed,
                lhs_re: row.lhs.map(|p| p[0]),
                lhs_im: row.lhs.map(|p| p[1]),
                rhs_re: row.rhs.map(|p| p[0]),
                rhs_im: row.rhs.map(|p| p[1]),
            });
        }
    }
    out
}

pub fn summary_line(r: &CheckReport) -> String {
    format!(
        "{:<4} {:<40} max residual {:.3e} (tol {:.1e})",
        if r.passed { "PASS" } else { "FAIL" },
        r.name,
        r.max_residual,
        r.tol
    )
}
