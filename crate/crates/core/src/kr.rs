//! The incomplete-gamma Eichler function 𝓔*_f of a half-integral weight cusp form,
//! its Fricke defect, and its representation as a nested integral.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{Evaluate, Evaluation, FourierExpansion};
use crate::lseries::LSeriesEvaluator;
use crate::report::{pair, rel_dev, CheckReport, Pair, ReportRow};
use crate::special::{
    cpowf, gamma_real, incomplete_gamma_half_complex, integrate_semi_infinite, integrate_vertical,
    upper_gamma_scaled_cf, Precision,
};

pub const MIN_TRUNCATION: usize = 50;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// e^w Γ(1/2, w) − w^{−1/2} for Re w > 0.
///
/// Equals −½∫_0^∞ e^{−t}(w+t)^{−3/2} dt, so its modulus is at most ½|w|^{−3/2}.
pub fn shifted_half_gamma(w: Complex64) -> Result<Complex64> {
    if w.norm() < 2.0 {
        return Ok(w.exp() * incomplete_gamma_half_complex(w)? - 1.0 / w.sqrt());
    }
    let h = upper_gamma_scaled_cf(c(0.5, 0.0), w)?;
    let r = w.sqrt();
    Ok((w * h - 1.0) / r)
}

/// Which sign joins the half-integer L-value terms in the Fricke defect of 𝓔*_f.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HalfTermSign {
    Plus,
    Minus,
}

impl HalfTermSign {
    fn value(self) -> f64 {
        match self {
            HalfTermSign::Plus => 1.0,
            HalfTermSign::Minus => -1.0,
        }
    }
}

/// Defect sign that the numerics support for the principal branch.
pub const DEFECT_SIGN: HalfTermSign = HalfTermSign::Minus;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KrRow {
    pub z: Pair,
    pub lhs: Pair,
    pub rhs: Pair,
    pub rel_residual: f64,
}

/// 𝓔*_f(z) = π^{−1/2} Σ a(n) n^{1−k} [e^{−2πinz}Γ(1/2, −2πinz) − (−2πinz)^{−1/2}].
#[derive(Clone, Debug)]
pub struct KREvaluator {
    lseries: LSeriesEvaluator,
    truncation: usize,
}

impl KREvaluator {
    pub fn new(form: FourierExpansion, truncation: usize) -> Result<Self> {
        if truncation < MIN_TRUNCATION {
            return Err(Error::domain(format!(
                "truncation {truncation} is below {MIN_TRUNCATION}"
            )));
        }
        if truncation > form.truncation() {
            return Err(Error::domain(format!(
                "truncation {truncation} exceeds the {} stored coefficients",
                form.truncation()
            )));
        }
        if !form.is_half_integral() {
            return Err(Error::domain("the Eichler function 𝓔* needs half-integral weight"));
        }
        if (form.width() - 1.0).abs() > 0.0 {
            return Err(Error::Unsupported(format!(
                "cusp width {} (only width 1)",
                form.cusp_width
            )));
        }
        Ok(KREvaluator {
            lseries: LSeriesEvaluator::new(form)?,
            truncation,
        })
    }

    pub fn form(&self) -> &FourierExpansion {
        self.lseries.form()
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn weight(&self) -> f64 {
        self.form().weight()
    }

    pub fn level(&self) -> f64 {
        self.form().level as f64
    }

    /// L_f(s), the uncompleted series.
    pub fn l_value(&self, s: f64) -> Result<Complex64> {
        self.lseries.l_value(c(s, 0.0))
    }

    /// Partial sums of 𝓔*_f(z) over n ≤ m, without the 1/√π.
    fn partial(&self, z: Complex64, m: usize) -> Result<Complex64> {
        let k = self.weight();
        let mut acc = c(0.0, 0.0);
        for n in 1..=m {
            let a = self.form().coefficient(n);
            if a == c(0.0, 0.0) {
                continue;
            }
            let nf = n as f64;
            let w = c(0.0, -2.0 * PI * nf) * z;
            acc += a * nf.powf(1.0 - k) * shifted_half_gamma(w)?;
        }
        Ok(acc)
    }

    /// Bound on the terms n > M, from |a(n)| ≤ C n^{k/2} and the ½|w|^{−3/2} estimate.
    pub fn tail_bound(&self, z: Complex64, m: usize) -> f64 {
        let cg = self.form().growth_constant();
        if cg == 0.0 {
            return 0.0;
        }
        let p = self.weight() / 2.0 + 0.5;
        let m = m as f64;
        cg / (2.0 * (2.0 * PI * z.norm()).powf(1.5)) * m.powf(1.0 - p) / (p - 1.0) / PI.sqrt()
    }

    /// 𝓔*_f(z) with its tail bound; warns when the bound exceeds `abs_tol`.
    pub fn kr_eichler(&self, z: Complex64, abs_tol: f64) -> Result<Evaluation> {
        if !(z.im > 0.0) {
            return Err(Error::domain(format!("𝓔* needs Im z > 0, got {z}")));
        }
        let value = self.partial(z, self.truncation)? / PI.sqrt();
        let tail_bound = self.tail_bound(z, self.truncation);
        let warning =
            (tail_bound > abs_tol).then(|| format!("tail bound {tail_bound:.3e} at z = {z} exceeds {abs_tol:.1e}"));
        Ok(Evaluation {
            value,
            tail_bound,
            warning,
        })
    }

    /// The terms a(n) n^{1−k}[…]/√π for n = 1..=m, for envelope checks.
    pub fn terms(&self, z: Complex64, m: usize) -> Result<Vec<Complex64>> {
        (1..=m.min(self.form().truncation()))
            .map(|n| {
                let nf = n as f64;
                let w = c(0.0, -2.0 * PI * nf) * z;
                Ok(self.form().coefficient(n) * nf.powf(1.0 - self.weight()) * shifted_half_gamma(w)? / PI.sqrt())
            })
            .collect()
    }

    /// (𝓔*_f |_{2−k} W_N)(z) = (−i√N z)^{k−2} 𝓔*_f(−1/(Nz)).
    pub fn fricke_image(&self, z: Complex64, abs_tol: f64) -> Result<Evaluation> {
        let n = self.level();
        let zp = -1.0 / (n * z);
        let inner = self.kr_eichler(zp, abs_tol)?;
        let factor = cpowf(c(0.0, -n.sqrt()) * z, self.weight() - 2.0);
        Ok(Evaluation {
            value: factor * inner.value,
            tail_bound: factor.norm() * inner.tail_bound,
            warning: inner.warning,
        })
    }

    /// 𝓔*_f(z) − (𝓔*_f |_{2−k} W_N)(z).
    pub fn fricke_defect(&self, z: Complex64, abs_tol: f64) -> Result<Evaluation> {
        let a = self.kr_eichler(z, abs_tol)?;
        let b = self.fricke_image(z, abs_tol)?;
        Ok(Evaluation {
            value: a.value - b.value,
            tail_bound: a.tail_bound + b.tail_bound,
            warning: a.warning.or(b.warning),
        })
    }

    /// Σ_{n=0}^{k−3/2} (L_f(k−n−1)/n! ± L_f(k−n−1/2)/Γ(n+1/2) u^{−1/2}) u^n with u = 2πz/i.
    pub fn defect_polynomial(&self, z: Complex64, sign: HalfTermSign) -> Result<Complex64> {
        let k = self.weight();
        let u = c(0.0, -2.0 * PI) * z;
        let top = (k - 1.5).round() as i32;
        let root = u.sqrt();
        let mut acc = c(0.0, 0.0);
        for n in 0..=top {
            let nf = n as f64;
            let whole = self.l_value(k - nf - 1.0)? / gamma_real(nf + 1.0)?;
            let half = self.l_value(k - nf - 0.5)? / gamma_real(nf + 0.5)? / root;
            acc += (whole + sign.value() * half) * u.powi(n);
        }
        Ok(acc)
    }

    /// Number of summands in `defect_polynomial`.
    pub fn defect_terms(&self) -> usize {
        (self.weight() - 0.5).round() as usize
    }
}

/// Rows comparing the Fricke defect of 𝓔*_f with the L-value sum at each sample.
pub fn kreich_rows(ev: &KREvaluator, z_samples: &[Complex64], sign: HalfTermSign) -> Result<Vec<KrRow>> {
    z_samples
        .iter()
        .map(|&z| {
            // at the Fricke fixed point both sides vanish, so the scale is taken
            // from the two terms of the defect rather than from the defect itself
            let e = ev.kr_eichler(z, f64::INFINITY)?.value;
            let image = ev.fricke_image(z, f64::INFINITY)?.value;
            let lhs = e - image;
            let rhs = ev.defect_polynomial(z, sign)?;
            let scale = e.norm().max(image.norm());
            let rel_residual = if scale == 0.0 && rhs.norm() == 0.0 {
                0.0
            } else {
                rel_dev(lhs, rhs, scale)
            };
            Ok(KrRow {
                z: pair(z),
                lhs: pair(lhs),
                rhs: pair(rhs),
                rel_residual,
            })
        })
        .collect()
}

pub fn verify_kreich(ev: &KREvaluator, z_samples: &[Complex64], tol: f64) -> Result<CheckReport> {
    verify_kreich_with_sign(ev, z_samples, tol, DEFECT_SIGN)
}

pub fn verify_kreich_with_sign(
    ev: &KREvaluator,
    z_samples: &[Complex64],
    tol: f64,
    sign: HalfTermSign,
) -> Result<CheckReport> {
    if ev.form().fricke_eigenvalue != Some(c(1.0, 0.0)) {
        return Err(Error::domain("the defect identity needs f |_k W_N = f"));
    }
    let rows = kreich_rows(ev, z_samples, sign)?;
    let report_rows = rows
        .iter()
        .map(|r| {
            ReportRow::compare(
                format!("z = {}", crate::report::unpair(r.z)),
                crate::report::unpair(r.lhs),
                crate::report::unpair(r.rhs),
                r.rel_residual,
            )
        })
        .collect();
    let mut warnings = Vec::new();
    for &z in z_samples {
        if let Some(w) = ev.fricke_defect(z, tol * 1e-2)?.warning {
            warnings.push(w);
        }
    }
    Ok(CheckReport::from_rows("kreich", tol, report_rows).with_warnings(warnings))
}

/// α_k = (−2πi)^{k−1} / (√π Γ(k−3/2)).
pub fn alpha_k(k: f64) -> Result<Complex64> {
    Ok(cpowf(c(0.0, -2.0 * PI), k - 1.0) / (PI.sqrt() * gamma_real(k - 1.5)?))
}

/// F_f(w) = ∫_0^∞ f(xw) x^{k−3/2} (x+1)^{−1/2} dx.
pub fn inner_transform(form: &FourierExpansion, w: Complex64, prec: &Precision) -> Result<Complex64> {
    let k = form.weight();
    let g = |x: f64| {
        if x == 0.0 {
            return c(0.0, 0.0);
        }
        form.value(w * x) * x.powf(k - 1.5) / (x + 1.0).sqrt()
    };
    // the integrand decays like e^{−2πx Im w}; panels start at that scale
    Ok(integrate_vertical(g, 0.0, 1.0 / w.im, prec)?.value)
}

/// 𝓔*_f(z) from α_k z^{1/2} ∫_z^{i∞} F_f(w)(w − z)^{k−5/2} dw − L_f(k−1/2)/√(−2π²iz).
pub fn eichler_from_integral(ev: &KREvaluator, z: Complex64, prec: &Precision) -> Result<Complex64> {
    if !(z.im > 0.0) {
        return Err(Error::domain(format!(
            "integral representation needs Im z > 0, got {z}"
        )));
    }
    let k = ev.weight();
    let form = ev.form();
    let alpha = alpha_k(k)?;
    // F_f(z + it) decays like t^{1/2−k}, so the inner tolerance shrinks at that rate
    // to keep the weighted error below the outer budget
    let outer_prec = prec.with_abs_tol(prec.target_abs_tol / alpha.norm().max(1.0));
    let outer = |t: f64| {
        if t == 0.0 {
            return c(0.0, 0.0);
        }
        let w = z + c(0.0, t);
        let shrink = (1.0 + t / z.im).powf(k - 0.5);
        let inner_prec = outer_prec.with_abs_tol(outer_prec.target_abs_tol * 1e-2 / shrink);
        let v = inner_transform(form, w, &inner_prec).unwrap_or(c(f64::NAN, f64::NAN));
        v * cpowf(c(0.0, t), k - 2.5) * c(0.0, 1.0)
    };
    let integral = integrate_semi_infinite(outer, 0.0, &outer_prec)?.value;
    let constant = ev.l_value(k - 0.5)? / (c(0.0, -2.0 * PI * PI) * z).sqrt();
    Ok(alpha * z.sqrt() * integral - constant)
}

/// Compares the nested-integral value of 𝓔*_f(z) with the series.
pub fn kr_integral_representation(ev: &KREvaluator, z: Complex64, tol: f64, prec: &Precision) -> Result<CheckReport> {
    let series = ev.kr_eichler(z, tol * 1e-2)?;
    let integral = eichler_from_integral(ev, z, prec)?;
    let residual = if series.value.norm() == 0.0 && integral.norm() == 0.0 {
        0.0
    } else {
        rel_dev(integral, series.value, 1e-300)
    };
    let row = ReportRow::compare(format!("z = {z}"), integral, series.value, residual);
    Ok(CheckReport::from_rows("kr-integral", tol, vec![row]).with_warnings(series.warning.into_iter().collect()))
}
