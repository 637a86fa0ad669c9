use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::Evaluate;
use crate::error::{Error, Result};
use crate::special::cpowf;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormStatus {
    Unvalidated,
    Validated,
    Rejected,
}

/// A point value of a truncated q-expansion with its tail estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    pub tail_bound: f64,
    pub warning: Option<String>,
}

/// Truncated expansion f(z) = Σ_{n=1}^{M} a(n) e^{2πinz/λ} of a cusp form.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierExpansion {
    pub weight_times_two: i64,
    pub level: u64,
    pub cusp_width: Rational64,
    coefficients: Vec<Complex64>,
    /// ε in f(−1/(Nz)) = ε (−i√N z)^k f(z), for both integral and half-integral k.
    pub fricke_eigenvalue: Option<Complex64>,
    pub label: String,
    pub source: String,
    pub status: FormStatus,
}

impl FourierExpansion {
    /// `coefficients[n - 1]` is a(n).
    pub fn new(
        weight_times_two: i64,
        level: u64,
        cusp_width: Rational64,
        coefficients: Vec<Complex64>,
        fricke_eigenvalue: Option<Complex64>,
    ) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::domain("expansion needs at least one coefficient"));
        }
        if coefficients.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::domain("expansion coefficients must be finite"));
        }
        if level == 0 {
            return Err(Error::domain("level must be positive"));
        }
        if weight_times_two % 2 != 0 && level % 4 != 0 {
            return Err(Error::domain("half-integral weight needs 4 | N"));
        }
        if cusp_width <= Rational64::from_integer(0) {
            return Err(Error::domain("cusp width must be positive"));
        }
        if let Some(e) = fricke_eigenvalue {
            if (e.norm() - 1.0).abs() > 1e-10 {
                return Err(Error::domain(format!("Fricke eigenvalue {e} is not unimodular")));
            }
        }
        Ok(FourierExpansion {
            weight_times_two,
            level,
            cusp_width,
            coefficients,
            fricke_eigenvalue,
            label: String::new(),
            source: "ingested".to_string(),
            status: FormStatus::Unvalidated,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.source = source.into();
        self
    }

    pub fn zero_like(other: &FourierExpansion) -> Self {
        let mut z = other.clone();
        z.coefficients.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
        z.label = "zero".into();
        z
    }

    pub fn weight(&self) -> f64 {
        self.weight_times_two as f64 / 2.0
    }

    pub fn is_half_integral(&self) -> bool {
        self.weight_times_two % 2 != 0
    }

    pub fn width(&self) -> f64 {
        self.cusp_width.to_f64().unwrap_or(f64::NAN)
    }

    pub fn truncation(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// a(n) for n ≥ 1, zero beyond the truncation.
    pub fn coefficient(&self, n: usize) -> Complex64 {
        if n == 0 || n > self.coefficients.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coefficients[n - 1]
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|c| c.norm() == 0.0)
    }

    /// Smallest C with |a(n)| ≤ C n^{k/2} over the stored range.
    pub fn growth_constant(&self) -> f64 {
        let half_k = self.weight() / 2.0;
        self.coefficients
            .iter()
            .enumerate()
            .map(|(i, c)| c.norm() / ((i + 1) as f64).powf(half_k))
            .fold(0.0, f64::max)
    }

    /// Bound on Σ_{n>M} |a(n)| r^n with r = e^{−2π y/λ}, majorizing |a(n)| by C n^{k/2}.
    pub fn tail_bound(&self, im_z: f64) -> f64 {
        let c = self.growth_constant();
        if c == 0.0 {
            return 0.0;
        }
        let m = self.coefficients.len() as f64;
        let half_k = self.weight() / 2.0;
        let log_r = -2.0 * PI * im_z / self.width();
        let ratio = ((m + 2.0) / (m + 1.0)).powf(half_k) * log_r.exp();
        if ratio >= 1.0 {
            return f64::INFINITY;
        }
        c * ((m + 1.0).ln() * half_k + (m + 1.0) * log_r).exp() / (1.0 - ratio)
    }

    /// Direct truncated sum, no use of the Fricke relation.
    pub fn series_value(&self, z: Complex64) -> Complex64 {
        let q = (Complex64::new(0.0, 2.0 * PI) * z / self.width()).exp();
        // Horner from the top keeps this to one multiply-add per term
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coefficients.iter().rev() {
            acc = (acc + c) * q;
        }
        acc
    }

    /// Truncated sum with a tail bound; warns when the bound exceeds `abs_tol`.
    pub fn evaluate(&self, z: Complex64, abs_tol: f64) -> Result<Evaluation> {
        if !(z.im > 0.0) {
            return Err(Error::domain(format!(
                "evaluation point {z} is not in the upper half-plane"
            )));
        }
        let value = self.series_value(z);
        let tail_bound = self.tail_bound(z.im);
        let warning = (tail_bound > abs_tol)
            .then(|| format!("truncation tail bound {tail_bound:e} exceeds {abs_tol:e} at z = {z}"));
        Ok(Evaluation {
            value,
            tail_bound,
            warning,
        })
    }

    /// Value at z, moving to −1/(Nz) first when that point is higher and the
    /// Fricke eigenvalue is known.
    pub fn value_reduced(&self, z: Complex64) -> Complex64 {
        if let Some(eps) = self.fricke_eigenvalue {
            let n = self.level as f64;
            if z.norm_sqr() * n < 1.0 {
                let zp = -1.0 / (n * z);
                let factor = cpowf(Complex64::new(0.0, -n.sqrt()) * zp, self.weight());
                return eps * factor * self.series_value(zp);
            }
        }
        self.series_value(z)
    }

    pub fn scale(&self, c: Complex64) -> FourierExpansion {
        let mut out = self.clone();
        out.coefficients.iter_mut().for_each(|a| *a *= c);
        out
    }

    /// Sum of two expansions with the same weight, level, width and Fricke data.
    pub fn add(&self, other: &FourierExpansion) -> Result<FourierExpansion> {
        if self.weight_times_two != other.weight_times_two
            || self.level != other.level
            || self.cusp_width != other.cusp_width
        {
            return Err(Error::domain("cannot add expansions of different type"));
        }
        let fricke = match (self.fricke_eigenvalue, other.fricke_eigenvalue) {
            (Some(a), Some(b)) if (a - b).norm() < 1e-12 => Some(a),
            (None, None) => None,
            _ => return Err(Error::domain("cannot add expansions with different Fricke data")),
        };
        let m = self.truncation().min(other.truncation());
        let coeffs = (1..=m).map(|n| self.coefficient(n) + other.coefficient(n)).collect();
        let mut out = FourierExpansion::new(self.weight_times_two, self.level, self.cusp_width, coeffs, fricke)?;
        out.status = if self.status == FormStatus::Validated && other.status == FormStatus::Validated {
            FormStatus::Validated
        } else {
            FormStatus::Unvalidated
        };
        out.source = "linear-combination".into();
        Ok(out)
    }

    /// g(z/m) as an expansion of width mλ: same coefficients, stretched variable.
    ///
    /// If g satisfies the Fricke relation at level N, g(z/m) satisfies it at level
    /// N/m² (when integral) with the same eigenvalue.
    pub fn stretch(&self, m: i64) -> Result<FourierExpansion> {
        if m <= 0 {
            return Err(Error::domain("stretch factor must be positive"));
        }
        let mm = (m * m) as u64;
        let level = if self.level % mm == 0 {
            self.level / mm
        } else {
            self.level
        };
        let fricke = if self.level % mm == 0 {
            self.fricke_eigenvalue
        } else {
            None
        };
        let mut out = self.clone();
        out.level = level;
        out.cusp_width = self.cusp_width * Rational64::from_integer(m);
        out.fricke_eigenvalue = fricke;
        out.label = format!("{}(z/{m})", self.label);
        Ok(out)
    }

    /// R(mz): same width, coefficient a(n) moved to index mn.
    pub fn compress(&self, m: usize) -> Result<FourierExpansion> {
        if m == 0 {
            return Err(Error::domain("substitution factor must be positive"));
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.truncation() * m];
        for (i, c) in self.coefficients.iter().enumerate() {
            coeffs[(i + 1) * m - 1] = *c;
        }
        let mut out = self.clone();
        out.coefficients = coeffs;
        out.fricke_eigenvalue = None;
        out.label = format!("{}({m}z)", self.label);
        Ok(out)
    }

    /// A copy truncated to the first `m` coefficients.
    pub fn truncated(&self, m: usize) -> FourierExpansion {
        let mut out = self.clone();
        out.coefficients.truncate(m.max(1));
        out
    }

    pub fn set_coefficient(&mut self, n: usize, value: Complex64) -> Result<()> {
        if n == 0 || n > self.coefficients.len() {
            return Err(Error::domain(format!("coefficient index {n} out of range")));
        }
        self.coefficients[n - 1] = value;
        Ok(())
    }
}

impl Evaluate for FourierExpansion {
    fn weight_times_two(&self) -> i64 {
        self.weight_times_two
    }

    fn value(&self, z: Complex64) -> Complex64 {
        if !(z.im > 0.0) {
            return Complex64::new(f64::NAN, f64::NAN);
        }
        self.value_reduced(z)
    }
}

/// Evaluates an expansion by its series only, ignoring any Fricke data.
pub struct SeriesOnly<'a>(pub &'a FourierExpansion);

impl Evaluate for SeriesOnly<'_> {
    fn weight_times_two(&self) -> i64 {
        self.0.weight_times_two
    }

    fn value(&self, z: Complex64) -> Complex64 {
        if !(z.im > 0.0) {
            return Complex64::new(f64::NAN, f64::NAN);
        }
        self.0.series_value(z)
    }
}
