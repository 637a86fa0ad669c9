//! The two-term kernel Φ_a, its Eichler integral F_a and the period polynomial P_a
//! of a Fricke-invariant half-integral weight cusp form.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{Character, Evaluate};
use crate::group::GroupElement;
use crate::lseries::LSeriesEvaluator;
use crate::poly::Poly;
use crate::report::{pair, rel_dev, unpair, CheckReport, Pair, ReportRow};
use crate::special::{binom_general, cpowf, i_pow, integrate_vertical, Precision, QuadEstimate};

/// Weight, level and exponent parameter of the kernel.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelParams {
    pub k_times_two: i64,
    pub level: u64,
    pub a: Rational64,
    second_sign: f64,
    // binom(k−2, n) and binom(k−2, n+1/2) for n = 0..D
    binoms: Vec<(f64, f64)>,
}

impl KernelParams {
    /// Requires half-integral k > 5/2, 4 | N and 0 ≤ a ≤ 2k − 9/2.
    pub fn new(k_times_two: i64, level: u64, a: Rational64) -> Result<Self> {
        if k_times_two % 2 == 0 || k_times_two <= 5 {
            return Err(Error::domain(format!(
                "kernel needs half-integral k > 5/2, got 2k = {k_times_two}"
            )));
        }
        if level == 0 || level % 4 != 0 {
            return Err(Error::domain(format!("kernel needs 4 | N, got N = {level}")));
        }
        let upper = Rational64::new(2 * k_times_two - 9, 2);
        if a < Rational64::from_integer(0) || a > upper {
            return Err(Error::domain(format!("a = {a} outside [0, {upper}]")));
        }
        let k = k_times_two as f64 / 2.0;
        let d = ((k_times_two - 5) / 2) as usize;
        let binoms = (0..=d)
            .map(|n| {
                let n = n as f64;
                Ok((binom_general(k - 2.0, n)?, binom_general(k - 2.0, n + 0.5)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(KernelParams {
            k_times_two,
            level,
            a,
            second_sign: 1.0,
            binoms,
        })
    }

    /// a = k − 2.
    pub fn canonical(k_times_two: i64, level: u64) -> Result<Self> {
        Self::new(k_times_two, level, Rational64::new(k_times_two - 4, 2))
    }

    /// The kernel with its second term negated; breaks the W_N symmetry.
    pub fn with_flipped_second_term(mut self) -> Self {
        self.second_sign = -self.second_sign;
        self
    }

    pub fn k(&self) -> f64 {
        self.k_times_two as f64 / 2.0
    }

    /// D = k − 5/2.
    pub fn degree(&self) -> usize {
        ((self.k_times_two - 5) / 2) as usize
    }

    pub fn a_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN)
    }

    pub fn binomials(&self) -> &[(f64, f64)] {
        &self.binoms
    }

    /// φ_n(w) with Φ_a(z, w) = Σ_n φ_n(w) z^n.
    pub fn kernel_coefficients(&self, w: Complex64) -> Vec<Complex64> {
        let k = self.k();
        let a = self.a_f64();
        let n_lvl = self.level as f64;
        let lead = i_pow(k) * n_lvl.powf(-0.25) * self.second_sign;
        let minus_nw = -n_lvl * w;
        self.binoms
            .iter()
            .enumerate()
            .map(|(n, &(b1, b2))| {
                let nf = n as f64;
                let first = b1 * Complex64::new(0.0, n_lvl).powi(n as i32) * cpowf(w, a - nf);
                let second =
                    lead * b2 * Complex64::new(0.0, 1.0).powi(n as i32) * cpowf(minus_nw, 2.0 * k - 4.5 - a - nf);
                first + second
            })
            .collect()
    }
}

/// Φ_a(z, w) = Σ_{n=0}^{k−5/2} [C(k−2, n)(iNz)^n w^{a−n}
///   + i^k N^{−1/4} C(k−2, n+1/2)(iz)^n (−Nw)^{2k−9/2−a−n}], principal branches.
pub fn phi_kernel(p: &KernelParams, z: Complex64, w: Complex64) -> Complex64 {
    Poly::new(p.kernel_coefficients(w)).eval(z)
}

/// A period polynomial with the parameters it was built from.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodPolynomial {
    pub poly: Poly,
    pub k_times_two: i64,
    pub level: u64,
    pub a: Rational64,
}

/// JSON form of a period polynomial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolynomialRecord {
    pub degree_bound: usize,
    pub coefficients: Vec<Pair>,
    pub k_times_two: i64,
    pub level: u64,
    pub a: String,
}

impl PeriodPolynomial {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.poly.eval(z)
    }

    pub fn degree(&self) -> usize {
        self.poly.degree_bound()
    }

    pub fn to_record(&self) -> PolynomialRecord {
        PolynomialRecord {
            degree_bound: self.degree(),
            coefficients: self.poly.coeffs.iter().map(|&c| pair(c)).collect(),
            k_times_two: self.k_times_two,
            level: self.level,
            a: self.a.to_string(),
        }
    }

    pub fn from_record(r: &PolynomialRecord) -> Result<Self> {
        let a: Rational64 = r.a.parse().map_err(|e| Error::Parse(format!("a = {:?}: {e}", r.a)))?;
        if r.coefficients.len() != r.degree_bound + 1 {
            return Err(Error::Parse("coefficient count does not match degree bound".into()));
        }
        Ok(PeriodPolynomial {
            poly: Poly::new(r.coefficients.iter().map(|&p| unpair(p)).collect()),
            k_times_two: r.k_times_two,
            level: r.level,
            a,
        })
    }

    /// z ↦ P(2z/√N), the version transported to level 4.
    pub fn hat(&self) -> Poly {
        self.poly.rescale(Complex64::new(2.0 / (self.level as f64).sqrt(), 0.0))
    }
}

fn check_params(ev: &LSeriesEvaluator, p: &KernelParams) -> Result<()> {
    let f = ev.form();
    if f.weight_times_two != p.k_times_two || f.level != p.level {
        return Err(Error::domain(format!(
            "kernel (2k = {}, N = {}) does not match form (2k = {}, N = {})",
            p.k_times_two, p.level, f.weight_times_two, f.level
        )));
    }
    Ok(())
}

/// P_a from L-values: coefficient of z^n is
/// i^{a+1}[C(k−2, n) N^n Λ(a+1−n) + C(k−2, n+1/2) N^{2k−a−n−19/4} i^{2n−k+1/2} Λ(2k−7/2−a−n)].
pub fn period_polynomial_from_lvalues(ev: &LSeriesEvaluator, p: &KernelParams) -> Result<PeriodPolynomial> {
    check_params(ev, p)?;
    let k = p.k();
    let a = p.a_f64();
    let n_lvl = p.level as f64;
    let front = i_pow(a + 1.0);
    let mut coeffs = Vec::with_capacity(p.degree() + 1);
    for (n, &(b1, b2)) in p.binoms.iter().enumerate() {
        let nf = n as f64;
        let l1 = ev.lambda_value(Complex64::new(a + 1.0 - nf, 0.0))?.value;
        let l2 = ev.lambda_value(Complex64::new(2.0 * k - 3.5 - a - nf, 0.0))?.value;
        let first = b1 * n_lvl.powi(n as i32) * l1;
        let second = p.second_sign * b2 * n_lvl.powf(2.0 * k - a - nf - 4.75) * i_pow(2.0 * nf - k + 0.5) * l2;
        coeffs.push(front * (first + second));
    }
    Ok(PeriodPolynomial {
        poly: Poly::new(coeffs),
        k_times_two: p.k_times_two,
        level: p.level,
        a: p.a,
    })
}

// ∫_0^{i∞} g(w) dw along the imaginary axis, split at t₀ with the lower piece
// mapped by t = 1/u.
fn integrate_imaginary_axis<G: Fn(Complex64) -> Complex64>(g: G, t0: f64, prec: &Precision) -> Result<QuadEstimate> {
    let i = Complex64::new(0.0, 1.0);
    let upper = integrate_vertical(|t| i * g(Complex64::new(0.0, t)), t0, 0.5, prec)?;
    let lower = integrate_vertical(
        |u| {
            let v = g(Complex64::new(0.0, 1.0 / u));
            if v == Complex64::new(0.0, 0.0) {
                return v;
            }
            i * v / (u * u)
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

/// P_a(z) = ∫_0^{i∞} f(w) Φ_a(z, w) dw by quadrature at the D+1 roots of unity,
/// with coefficients recovered by the discrete Fourier inverse.
pub fn period_polynomial_by_quadrature<F: Evaluate + Sync>(
    f: &F,
    p: &KernelParams,
    prec: &Precision,
) -> Result<PeriodPolynomial> {
    let m = p.degree() + 1;
    let t0 = 1.0 / (p.level as f64).sqrt();
    let nodes: Vec<Complex64> = (0..m)
        .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64))
        .collect();
    let values = nodes
        .iter()
        .map(|&z| integrate_imaginary_axis(|w| f.value(w) * phi_kernel(p, z, w), t0, prec).map(|q| q.value))
        .collect::<Result<Vec<_>>>()?;
    let coeffs = (0..m)
        .map(|n| {
            values
                .iter()
                .zip(&nodes)
                .map(|(v, z)| v * z.powi(-(n as i32)))
                .sum::<Complex64>()
                / m as f64
        })
        .collect();
    Ok(PeriodPolynomial {
        poly: Poly::new(coeffs),
        k_times_two: p.k_times_two,
        level: p.level,
        a: p.a,
    })
}

/// F_a(z) = ∫_z^{i∞} f(w) Φ_a(z, w) dw along w = z + it.
pub fn eichler_integral<F: Evaluate>(f: &F, p: &KernelParams, z: Complex64, prec: &Precision) -> Result<QuadEstimate> {
    if !(z.im > 0.0) {
        return Err(Error::domain(format!("Eichler integral needs Im z > 0, got {z}")));
    }
    let i = Complex64::new(0.0, 1.0);
    integrate_vertical(
        |t| {
            let w = z + i * t;
            i * f.value(w) * phi_kernel(p, z, w)
        },
        0.0,
        0.5,
        prec,
    )
}

/// (F|_{−D} W_N)(z) = (√N z)^D F(−1/(Nz)).
pub fn eichler_integral_fricke<F: Evaluate>(
    f: &F,
    p: &KernelParams,
    z: Complex64,
    prec: &Precision,
) -> Result<Complex64> {
    let w = GroupElement::fricke(p.level);
    let fz = eichler_integral(f, p, w.act(z), prec)?.value;
    Ok(w.cz_plus_d(z).powi(p.degree() as i32) * fz)
}

/// Checks F_a − i^{k−5/2} F_a|W_N = P_a at the samples and P_a|_{χ}(W_N + 1) = 0.
///
/// The slash of weight 5/2 − k = −D is the integral one, (√N z)^D P(−1/(Nz)) for
/// W_N, which is unambiguous for every k. Rows hold relative residuals; the last
/// row is max|coefficient of P|(W+1)| / max|coefficient of P|.
pub fn verify_eichler_relation(
    ev: &LSeriesEvaluator,
    p: &KernelParams,
    samples: &[Complex64],
    chi: &Character,
    tol: f64,
    prec: &Precision,
) -> Result<CheckReport> {
    let pa = period_polynomial_from_lvalues(ev, p)?;
    let f = ev.form();
    let phase = i_pow(p.degree() as f64);
    let mut rows = Vec::new();
    for &z in samples {
        let fa = eichler_integral(f, p, z, prec)?.value;
        let fw = eichler_integral_fricke(f, p, z, prec)?;
        let lhs = fa - phase * fw;
        let rhs = pa.eval(z);
        let scale = rhs.norm().max(fa.norm());
        rows.push(ReportRow::compare(
            format!("z = {z}"),
            lhs,
            rhs,
            (lhs - rhs).norm() / scale.max(1e-300),
        ));
    }
    let w = GroupElement::fricke(p.level);
    let image = pa.poly.add(&pa.poly.slash_chi(&w, chi)?);
    let scale = pa.poly.max_abs();
    let residual = if scale == 0.0 {
        image.max_abs()
    } else {
        image.max_abs() / scale
    };
    rows.push(ReportRow::new("P|(W+1)", residual));
    Ok(CheckReport::from_rows("Eichler integral relation", tol, rows))
}

/// ψ(x) = ∫_0^{i∞} f(w)(w − x)^{k−2} dw along the imaginary axis, x > 0.
pub fn psi_infty<F: Evaluate>(f: &F, level: u64, x: f64, prec: &Precision) -> Result<QuadEstimate> {
    if !(x > 0.0) {
        return Err(Error::domain(format!("ψ needs x > 0, got {x}")));
    }
    let e = f.weight() - 2.0;
    let t0 = 1.0 / (level as f64).sqrt();
    integrate_imaginary_axis(|w| f.value(w) * cpowf(w - x, e), t0, prec)
}

/// Remainder R(x) = P_{k−2}(ix) − ψ(Nx) + i^{1−2k} ψ(1/x)(√N x)^{k−5/2}, reported
/// as |R(x)|/x^{k−3/2} relative to its value at the smallest grid point.
pub fn verify_remainder_growth(
    ev: &LSeriesEvaluator,
    x_grid: &[f64],
    tol_factor: f64,
    prec: &Precision,
) -> Result<CheckReport> {
    if x_grid.is_empty() || x_grid.iter().any(|&x| !(x > 1.0)) {
        return Err(Error::domain("grid must be non-empty and lie in (1, ∞)"));
    }
    let f = ev.form();
    let k = f.weight();
    let n = f.level as f64;
    let p = KernelParams::canonical(f.weight_times_two, f.level)?;
    let pa = period_polynomial_from_lvalues(ev, &p)?;
    let phase = i_pow(1.0 - 2.0 * k);
    let mut ratios = Vec::new();
    for &x in x_grid {
        let lhs = pa.eval(Complex64::new(0.0, x));
        let rhs = psi_infty(f, f.level, n * x, prec)?.value
            - phase * psi_infty(f, f.level, 1.0 / x, prec)?.value * (n.sqrt() * x).powf(k - 2.5);
        ratios.push((x, lhs, rhs, (lhs - rhs).norm() / x.powf(k - 1.5)));
    }
    let x_min = ratios
        .iter()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .map(|r| r.3)
        .unwrap_or(0.0);
    let rows = ratios
        .into_iter()
        .map(|(x, lhs, rhs, r)| {
            let rel = if x_min == 0.0 {
                if r == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                r / x_min
            };
            ReportRow::compare(format!("x = {x}, |R|/x^(k-3/2) = {r:e}"), lhs, rhs, rel)
        })
        .collect();
    Ok(CheckReport::from_rows("remainder growth", tol_factor, rows))
}

/// Relative distance between two polynomials of the same length.
pub fn polynomial_distance(a: &Poly, b: &Poly) -> f64 {
    rel_dev_poly(a, b)
}

fn rel_dev_poly(a: &Poly, b: &Poly) -> f64 {
    a.coeffs
        .iter()
        .zip(&b.coeffs)
        .map(|(x, y)| rel_dev(*x, *y, b.max_abs().max(1e-300)))
        .fold(0.0, f64::max)
}
