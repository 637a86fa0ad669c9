//! Completed L-values Λ_f(s) = ∫_0^∞ f(it) t^{s−1} dt by the split-integral method.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{Evaluate, FourierExpansion};
use crate::report::{pair, rel_dev, CheckReport, Pair, ReportRow};
use crate::special::{
    cpow, gamma_complex, i_pow, incomplete_gamma_upper_complex, integrate_vertical, Precision, QuadEstimate,
};

/// Λ_f(s) with an absolute error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LValue {
    pub value: Complex64,
    pub abs_err_bound: f64,
}

/// JSON record for one L-value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LValueRecord {
    pub s: Pair,
    pub lambda: Pair,
    pub abs_err_bound: f64,
}

impl LValueRecord {
    pub fn new(s: Complex64, v: LValue) -> Self {
        LValueRecord {
            s: pair(s),
            lambda: pair(v.value),
            abs_err_bound: v.abs_err_bound,
        }
    }
}

/// Evaluates Λ_f for a form with known Fricke eigenvalue ε, where
/// f(−1/(Nz)) = ε (−i√N z)^k f(z).
#[derive(Clone, Debug)]
pub struct LSeriesEvaluator {
    form: FourierExpansion,
    fricke_eigenvalue: Complex64,
    split_height: f64,
}

// terms below this fraction of the running sum end the incomplete-gamma series
const SUM_CUTOFF: f64 = 1e-19;

impl LSeriesEvaluator {
    pub fn new(form: FourierExpansion) -> Result<Self> {
        let eps = form
            .fricke_eigenvalue
            .ok_or_else(|| Error::domain(format!("{} has no Fricke eigenvalue", form.label)))?;
        let split_height = 1.0 / (form.level as f64).sqrt();
        Ok(LSeriesEvaluator {
            form,
            fricke_eigenvalue: eps,
            split_height,
        })
    }

    /// Replaces the eigenvalue, for perturbation experiments.
    pub fn with_fricke_eigenvalue(mut self, eps: Complex64) -> Self {
        self.fricke_eigenvalue = eps;
        self
    }

    pub fn form(&self) -> &FourierExpansion {
        &self.form
    }

    pub fn fricke_eigenvalue(&self) -> Complex64 {
        self.fricke_eigenvalue
    }

    pub fn split_height(&self) -> f64 {
        self.split_height
    }

    pub fn weight(&self) -> f64 {
        self.form.weight()
    }

    fn level(&self) -> f64 {
        self.form.level as f64
    }

    /// ∫_T^∞ f(it) t^{s−1} dt = Σ a_n (λ/2πn)^s Γ(s, 2πnT/λ), with a tail estimate.
    pub fn upper_integral(&self, s: Complex64, height: f64) -> Result<LValue> {
        if !(height > 0.0) {
            return Err(Error::domain("split height must be positive"));
        }
        let lambda = self.form.width();
        let mut sum = Complex64::new(0.0, 0.0);
        let mut last_n = self.form.truncation();
        for n in 1..=self.form.truncation() {
            let a = self.form.coefficient(n);
            let x = 2.0 * PI * n as f64 * height / lambda;
            if a.norm() == 0.0 {
                continue;
            }
            let term = a
                * cpow(Complex64::new(lambda / (2.0 * PI * n as f64), 0.0), s)
                * incomplete_gamma_upper_complex(s, x)?;
            sum += term;
            // past the peak of t^{σ−1}e^{−t} the terms decay geometrically
            if x > s.re.abs() + 40.0 && term.norm() < SUM_CUTOFF * sum.norm().max(f64::MIN_POSITIVE) {
                last_n = n;
                break;
            }
        }
        let abs_err_bound = self.tail_estimate(s, height, last_n) + 1e-15 * sum.norm();
        Ok(LValue {
            value: sum,
            abs_err_bound,
        })
    }

    // Majorize Σ_{n>M} |a_n| (λ/2πn)^σ Γ(σ, 2πnT/λ) with |a_n| ≤ C n^{k/2} and a
    // geometric ratio read off from the first two omitted terms.
    fn tail_estimate(&self, s: Complex64, height: f64, m: usize) -> f64 {
        let c = self.form.growth_constant();
        if c == 0.0 {
            return 0.0;
        }
        let lambda = self.form.width();
        let half_k = self.weight() / 2.0;
        let sigma = s.re;
        let bound = |n: f64| -> f64 {
            let x = 2.0 * PI * n * height / lambda;
            let g = crate::special::incomplete_gamma_upper(sigma, x).unwrap_or(f64::INFINITY);
            c * n.powf(half_k) * (lambda / (2.0 * PI * n)).powf(sigma) * g
        };
        let m = m as f64;
        let b1 = bound(m + 1.0);
        let b2 = bound(m + 2.0);
        if b1 == 0.0 {
            return 0.0;
        }
        let r = b2 / b1;
        if !(r < 1.0) {
            return f64::INFINITY;
        }
        b1 / (1.0 - r)
    }

    /// Λ_f(s) = ∫_{t₁}^∞ + ε N^{k/2−s} ∫_{1/(N t₁)}^∞ for any split height t₁ > 0.
    pub fn lambda_split(&self, s: Complex64, split: f64) -> Result<LValue> {
        let k = self.weight();
        let n = self.level();
        let direct = self.upper_integral(s, split)?;
        let reflected = self.upper_integral(Complex64::new(k, 0.0) - s, 1.0 / (n * split))?;
        let factor = self.fricke_eigenvalue * cpow(Complex64::new(n, 0.0), Complex64::new(k / 2.0, 0.0) - s);
        Ok(LValue {
            value: direct.value + factor * reflected.value,
            abs_err_bound: direct.abs_err_bound + factor.norm() * reflected.abs_err_bound,
        })
    }

    /// Λ_f(s), split at the Fricke fixed point t₀ = 1/√N.
    pub fn lambda_value(&self, s: Complex64) -> Result<LValue> {
        self.lambda_split(s, self.split_height)
    }

    /// L_f(s) = Λ_f(s) (2π/λ)^s / Γ(s).
    pub fn l_value(&self, s: Complex64) -> Result<Complex64> {
        let lam = self.lambda_value(s)?.value;
        let scale = cpow(Complex64::new(2.0 * PI / self.form.width(), 0.0), s);
        Ok(lam * scale / gamma_complex(s)?)
    }

    /// η with f|_k W_N = η f for the slash used in the functional equation:
    /// (−i√N z)^{−k} f(−1/(Nz)) for half-integral k, (√N z)^{−k} f(−1/(Nz)) otherwise.
    pub fn slash_eigenvalue(&self) -> Complex64 {
        if self.form.is_half_integral() {
            self.fricke_eigenvalue
        } else {
            self.fricke_eigenvalue * i_pow(-self.weight())
        }
    }

    /// The factor c(s) in Λ_f(s) = c(s) Λ_f(k − s).
    pub fn functional_equation_factor(&self, s: Complex64) -> Complex64 {
        let k = self.weight();
        let power = cpow(Complex64::new(self.level(), 0.0), Complex64::new(k / 2.0, 0.0) - s);
        let ik = if self.form.is_half_integral() {
            Complex64::new(1.0, 0.0)
        } else {
            i_pow(k)
        };
        ik * power * self.slash_eigenvalue()
    }
}

/// Split height used for the functional-equation check; off the fixed point so the
/// two sides are computed from different pieces of the integral.
pub const OFF_CENTRE_SPLIT: f64 = 1.3;

/// Checks Λ_f(s) = c(s) Λ_f(k − s) on a grid, both sides split at 1.3/√N.
pub fn verify_functional_equation(ev: &LSeriesEvaluator, s_grid: &[Complex64], tol: f64) -> Result<CheckReport> {
    let split = OFF_CENTRE_SPLIT * ev.split_height();
    let k = Complex64::new(ev.weight(), 0.0);
    let mut rows = Vec::with_capacity(s_grid.len());
    for &s in s_grid {
        let lhs = ev.lambda_split(s, split)?.value;
        let rhs = ev.functional_equation_factor(s) * ev.lambda_split(k - s, split)?.value;
        rows.push(ReportRow::compare(
            format!("s = {s}"),
            lhs,
            rhs,
            rel_dev(lhs, rhs, 1e-300),
        ));
    }
    Ok(CheckReport::from_rows(
        format!("functional equation of {}", ev.form().label),
        tol,
        rows,
    ))
}

/// ∫_0^∞ f(it) t^{s−1} dt by direct quadrature of point values, split at t₀.
///
/// The piece below t₀ is mapped to ∫_{1/t₀}^∞ f(i/u) u^{−s−1} du. Independent of
/// any Fricke data when `f` is evaluated exactly (e.g. as an eta product).
pub fn lambda_by_quadrature<F: Evaluate>(f: &F, s: Complex64, t0: f64, prec: &Precision) -> Result<QuadEstimate> {
    let upper = integrate_vertical(
        |t| f.value(Complex64::new(0.0, t)) * cpow(Complex64::new(t, 0.0), s - 1.0),
        t0,
        0.5,
        prec,
    )?;
    let lower = integrate_vertical(
        |u| {
            let v = f.value(Complex64::new(0.0, 1.0 / u));
            if v == Complex64::new(0.0, 0.0) {
                return v;
            }
            v * cpow(Complex64::new(u, 0.0), -s - 1.0)
        },
        1.0 / t0,
        0.5,
        prec,
    )?;
    Ok(QuadEstimate {
        value: upper.value + lower.value,
        abs_err: upper.abs_err + lower.abs_err,
        evaluations: upper.evaluations + lower.evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{bundled_forms, half_integral_eta, integral_eta, theta_lift_basis, DEFAULT_TRUNCATION};

    fn evaluators() -> (LSeriesEvaluator, LSeriesEvaluator) {
        let mut forms = bundled_forms(DEFAULT_TRUNCATION).unwrap();
        let g = LSeriesEvaluator::new(forms.pop().unwrap()).unwrap();
        let f = LSeriesEvaluator::new(forms.pop().unwrap()).unwrap();
        (f, g)
    }

    fn real(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn zero_form_is_zero() {
        let (f, _) = evaluators();
        let zero = LSeriesEvaluator::new(FourierExpansion::zero_like(f.form())).unwrap();
        assert_eq!(zero.lambda_value(real(2.0)).unwrap().value, Complex64::new(0.0, 0.0));
        let r = verify_functional_equation(&zero, &[real(1.0), real(2.0)], 1e-12).unwrap();
        assert!(r.passed && r.max_residual == 0.0);
    }

    #[test]
    fn frozen_half_integral_values() {
        // computed with an independent 30-digit evaluation of the same split sums
        let (f, _) = evaluators();
        let want = [
            (5.25, 0.002_300_521_995_612_622_170_4),
            (4.25, 0.003_340_874_293_518_011_847_8),
            (3.25, 0.005_991_645_149_267_197_661_6),
            (2.25, 0.013_363_497_174_072_047_391_2),
            (1.25, 0.036_808_351_929_801_954_726_3),
        ];
        for (s, v) in want {
            let got = f.lambda_value(real(s)).unwrap();
            assert!(
                (got.value.re - v).abs() < 1e-14 && got.value.im.abs() < 1e-15,
                "s = {s}: {}",
                got.value
            );
        }
    }

    #[test]
    fn frozen_integral_values() {
        let (_, g) = evaluators();
        let want = [
            (1.0, 0.037_760_306_919_987_349_759_2),
            (2.0, 0.013_948_315_309_621_741_240_0),
            (3.0, 0.006_293_384_486_664_558_293_2),
            (4.0, 0.003_487_078_827_405_435_310_0),
            (5.0, 0.002_360_019_182_499_209_360_0),
        ];
        for (s, v) in want {
            let got = g.lambda_value(real(s)).unwrap();
            assert!((got.value.re - v).abs() < 1e-14, "s = {s}: {}", got.value);
        }
    }

    #[test]
    fn half_integral_functional_equation() {
        let (f, _) = evaluators();
        let grid: Vec<_> = [1.0, 2.0, 3.25, 4.5].iter().map(|&s| real(s)).collect();
        let r = verify_functional_equation(&f, &grid, 1e-8).unwrap();
        assert!(r.passed, "{}", r.max_residual);
    }

    #[test]
    fn integral_functional_equation_has_sign_i_to_the_k() {
        let (_, g) = evaluators();
        assert_eq!(g.slash_eigenvalue(), real(-1.0));
        let grid: Vec<_> = (1..=5).map(|s| real(s as f64)).collect();
        let r = verify_functional_equation(&g, &grid, 1e-8).unwrap();
        assert!(r.passed, "{}", r.max_residual);
    }

    #[test]
    fn wrong_eigenvalue_sign_is_detected() {
        let (f, g) = evaluators();
        for ev in [f, g] {
            let eps = ev.fricke_eigenvalue();
            let bad = ev.with_fricke_eigenvalue(-eps);
            let r = verify_functional_equation(&bad, &[real(1.0), real(2.0), real(3.0)], 1e-8).unwrap();
            assert!(r.max_residual > 0.1, "{}", r.max_residual);
        }
    }

    #[test]
    fn matches_quadrature_of_eta_product() {
        let (f, g) = evaluators();
        let p = Precision::default().with_abs_tol(1e-14).with_rel_tol(1e-13);
        let q = lambda_by_quadrature(&integral_eta(), real(4.0), 0.5, &p).unwrap();
        let v = g.lambda_value(real(4.0)).unwrap().value;
        assert!((q.value - v).norm() < 1e-8 * v.norm());
        for s in [Complex64::new(0.7, 2.0), Complex64::new(3.1, -1.5), real(6.5)] {
            let q = lambda_by_quadrature(&half_integral_eta(), s, 0.5, &p).unwrap();
            let v = f.lambda_value(s).unwrap().value;
            assert!((q.value - v).norm() < 1e-7 * v.norm(), "s = {s}: {} vs {v}", q.value);
        }
    }

    #[test]
    fn stretched_form_scales_by_power_of_two() {
        let (_, g) = evaluators();
        let g1 = LSeriesEvaluator::new(theta_lift_basis(DEFAULT_TRUNCATION).unwrap()).unwrap();
        for s in [2.0, 3.0, 4.0] {
            let a = g1.lambda_value(real(s)).unwrap().value;
            let b = 2f64.powf(s) * g.lambda_value(real(s)).unwrap().value;
            assert!((a - b).norm() < 1e-12 * b.norm(), "s = {s}");
        }
    }

    #[test]
    fn l_value_from_dirichlet_series() {
        // for Re s large L_f(s) is the Dirichlet series itself
        let (_, g) = evaluators();
        let s = real(12.0);
        let direct: f64 = (1..=300)
            .map(|n| g.form().coefficient(n).re / (n as f64).powf(12.0))
            .sum();
        assert!((g.l_value(s).unwrap().re - direct).abs() < 1e-12);
    }

    #[test]
    fn error_bound_is_small_and_finite() {
        let (f, _) = evaluators();
        let v = f.lambda_value(real(3.25)).unwrap();
        assert!(v.abs_err_bound.is_finite() && v.abs_err_bound < 1e-14);
    }
}
