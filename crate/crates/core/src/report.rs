//! Plain result rows shared by the verification routines and the CLI.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A complex number as `[re, im]` for JSON output.
pub type Pair = [f64; 2];

pub fn pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

pub fn unpair(p: Pair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub label: String,
    pub residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhs: Option<Pair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhs: Option<Pair>,
}

impl ReportRow {
    pub fn new(label: impl Into<String>, residual: f64) -> Self {
        ReportRow {
            label: label.into(),
            residual,
            lhs: None,
            rhs: None,
        }
    }

    pub fn compare(label: impl Into<String>, lhs: Complex64, rhs: Complex64, residual: f64) -> Self {
        ReportRow {
            label: label.into(),
            residual,
            lhs: Some(pair(lhs)),
            rhs: Some(pair(rhs)),
        }
    }
}

/// Outcome of one verification: pass/fail against `tol`, with per-sample rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub max_residual: f64,
    pub tol: f64,
    pub rows: Vec<ReportRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl CheckReport {
    /// Builds a report whose verdict is max residual ≤ tol. NaN residuals fail.
    pub fn from_rows(name: impl Into<String>, tol: f64, rows: Vec<ReportRow>) -> Self {
        let max_residual =
            rows.iter().map(|r| r.residual).fold(
                0.0,
                |m: f64, r| {
                    if r.is_nan() || m.is_nan() {
                        f64::NAN
                    } else {
                        m.max(r)
                    }
                },
            );
        CheckReport {
            name: name.into(),
            passed: max_residual <= tol,
            max_residual,
            tol,
            rows,
            warnings: Vec::new(),
        }
    }

    pub fn with_warnings(mut self, warnings: Vec<String>) -> Self {
        self.warnings.extend(warnings);
        self
    }

    /// Combines several reports into one that passes only when all do.
    pub fn merge(name: impl Into<String>, parts: Vec<CheckReport>) -> Self {
        let passed = parts.iter().all(|p| p.passed);
        let mut rows = Vec::new();
        let mut warnings = Vec::new();
        let mut max_residual: f64 = 0.0;
        let mut tol: f64 = 0.0;
        for p in parts {
            max_residual = if p.max_residual.is_nan() {
                f64::NAN
            } else {
                max_residual.max(p.max_residual)
            };
            tol = tol.max(p.tol);
            for r in p.rows {
                rows.push(ReportRow {
                    label: format!("{}: {}", p.name, r.label),
                    ..r
                });
            }
            warnings.extend(p.warnings.into_iter().map(|w| format!("{}: {w}", p.name)));
        }
        CheckReport {
            name: name.into(),
            passed,
            max_residual,
            tol,
            rows,
            warnings,
        }
    }
}

/// Relative deviation |a − b| / max(|b|, floor).
pub fn rel_dev(a: Complex64, b: Complex64, floor: f64) -> f64 {
    (a - b).norm() / b.norm().max(floor)
}
