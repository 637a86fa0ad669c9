//! Integral weight forms whose critical L-values reproduce those of a half-integral
//! weight form: the pairing polynomial at W₄, the two linear systems, the ρ-periods
//! of the theta-group form and the s-coefficients of its explicit inverse.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::cocycle::{induced_pi, CocycleOnGenerators, InducedVector};
use crate::error::{Error, Result};
use crate::forms::{slash_function, Evaluate, FormStatus, FourierExpansion};
use crate::group::{CosetRep, GroupElement};
use crate::lseries::{lambda_by_quadrature, LSeriesEvaluator};
use crate::period::{period_polynomial_from_lvalues, KernelParams, PeriodPolynomial};
use crate::poly::Poly;
use crate::report::{pair, CheckReport, Pair, ReportRow};
use crate::special::{binom_general, binom_int, gamma_real, i_pow, Precision};

fn cz() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn lambda_real(ev: &LSeriesEvaluator, s: f64) -> Result<Complex64> {
    Ok(ev.lambda_value(re(s))?.value)
}

/// 2k with 4 | (k − 5/2), the mode in which the character is trivial.
fn require_trivial_character_mode(k_times_two: i64) -> Result<()> {
    if k_times_two % 2 == 0 || k_times_two <= 5 || ((k_times_two - 5) / 2) % 4 != 0 {
        return Err(Error::Unsupported(format!(
            "the lift needs half-integral k with 4 | (k − 5/2), got 2k = {k_times_two}"
        )));
    }
    Ok(())
}

fn check_basis(f: &LSeriesEvaluator, basis: &[LSeriesEvaluator]) -> Result<()> {
    let wt2 = f.form().weight_times_two - 1;
    for b in basis {
        let g = b.form();
        if g.weight_times_two != wt2 || g.level != 4 {
            return Err(Error::domain(format!(
                "basis form {} must have weight {} and level 4",
                g.label,
                wt2 / 2
            )));
        }
        if g.status == FormStatus::Rejected {
            return Err(Error::domain(format!("basis form {} failed validation", g.label)));
        }
    }
    Ok(())
}

/// Coefficients of the polynomial φ(g, h̄)(W₄):
/// −Σ_n C(k−5/2, n)(−z)^n (i^{k−n−3/2} Λ_g(k−n−3/2) + i^{3/2+n−k} conj Λ_h(k−n−3/2)),
/// where g and h have weight k − 1/2.
pub fn es_pairing_w4(g: Option<&LSeriesEvaluator>, h: Option<&LSeriesEvaluator>, k_times_two: i64) -> Result<Poly> {
    let k = k_times_two as f64 / 2.0;
    let d = ((k_times_two - 5) / 2) as usize;
    let mut coeffs = Vec::with_capacity(d + 1);
    for n in 0..=d {
        let nf = n as f64;
        let s = k - nf - 1.5;
        let mut inner = cz();
        if let Some(g) = g {
            inner += i_pow(s) * lambda_real(g, s)?;
        }
        if let Some(h) = h {
            inner += i_pow(-s) * lambda_real(h, s)?.conj();
        }
        let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
        coeffs.push(sign * binom_int(d as u64, n as u64) * inner);
    }
    Ok(Poly::new(coeffs))
}

/// The same polynomial as the contour integral
/// ∫_0^{i∞} [conj h(w)(w̄ − z)^D − g(w)(w − z)^D] dw, interpolated at the D+1 roots of unity.
pub fn es_pairing_by_quadrature<G: Evaluate, H: Evaluate>(
    g: &G,
    h: &H,
    k_times_two: i64,
    prec: &Precision,
) -> Result<Poly> {
    let d = ((k_times_two - 5) / 2) as usize;
    let m = d + 1;
    let nodes: Vec<Complex64> = (0..m)
        .map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / m as f64))
        .collect();
    let mut values = Vec::with_capacity(m);
    for &z in &nodes {
        // along w = it the integrand is i·[…](it)
        let integrand = |t: f64| {
            let w = Complex64::new(0.0, t);
            let gv = g.value(w);
            let hv = h.value(w);
            let mut acc = cz();
            if gv != cz() {
                acc -= gv * (w - z).powi(d as i32);
            }
            if hv != cz() {
                acc += hv.conj() * (w.conj() - z).powi(d as i32);
            }
            Complex64::i() * acc
        };
        values.push(integrate_half_line(integrand, prec)?);
    }
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
    Ok(Poly::new(coeffs))
}

// ∫_0^∞ over [0, 1] and [1, ∞) with t = 1/u on the first piece
fn integrate_half_line<F: Fn(f64) -> Complex64>(f: F, prec: &Precision) -> Result<Complex64> {
    let upper = crate::special::integrate_semi_infinite(&f, 1.0, prec)?;
    let lower = crate::special::integrate_semi_infinite(
        |u: f64| {
            let v = f(1.0 / u);
            if v == cz() {
                v
            } else {
                v / (u * u)
            }
        },
        1.0,
        prec,
    )?;
    Ok(upper.value + lower.value)
}

/// Left-hand sides of the pair lift for n = 0..D:
/// i^{a+1} 2^n (C(k−2, n) N^{n/2} Λ_f(a+1−n)
///   + i^{2n+1/2−k} C(k−2, n+1/2) N^{2k−a−3n/2−19/4} Λ_f(2k−7/2−a−n)).
pub fn pair_lift_lhs(ev: &LSeriesEvaluator, a: Rational64) -> Result<Vec<Complex64>> {
    let f = ev.form();
    let p = KernelParams::new(f.weight_times_two, f.level, a)?;
    let k = p.k();
    let af = p.a_f64();
    let n_lvl = f.level as f64;
    let front = i_pow(af + 1.0);
    let mut out = Vec::with_capacity(p.degree() + 1);
    for (n, &(b1, b2)) in p.binomials().iter().enumerate() {
        let nf = n as f64;
        let first = b1 * n_lvl.powf(nf / 2.0) * lambda_real(ev, af + 1.0 - nf)?;
        let second = i_pow(2.0 * nf + 0.5 - k)
            * b2
            * n_lvl.powf(2.0 * k - af - 1.5 * nf - 4.75)
            * lambda_real(ev, 2.0 * k - 3.5 - af - nf)?;
        out.push(front * 2f64.powi(n as i32) * (first + second));
    }
    Ok(out)
}

/// The level-4 left-hand side with a = k − 9/4 in factorial form, for n = 0..D:
/// (2^{2n}/(n! Γ(k−1−n)) + (−1)^{n+1} 2^{2k−5−2n}/((k−5/2−n)! Γ(n+3/2))) Λ_f(k−5/4−n).
pub fn lhs_vector_level_four(ev: &LSeriesEvaluator) -> Result<Vec<Complex64>> {
    let f = ev.form();
    if f.level != 4 {
        return Err(Error::domain("the factorial form is stated for level 4"));
    }
    let k = f.weight();
    let d = ((f.weight_times_two - 5) / 2) as usize;
    (0..=d)
        .map(|n| {
            let nf = n as f64;
            let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
            let factor = 4f64.powi(n as i32) / (gamma_real(nf + 1.0)? * gamma_real(k - 1.0 - nf)?)
                + sign * 2f64.powf(2.0 * k - 5.0 - 2.0 * nf) / (gamma_real(k - 1.5 - nf)? * gamma_real(nf + 1.5)?);
            Ok(factor * lambda_real(ev, k - 1.25 - nf)?)
        })
        .collect()
}

/// Compares the pair-lift left-hand side at N = 4, a = k − 9/4 with
/// i^{k−5/4} Γ(k−1) times the factorial form.
pub fn check_specialization(ev: &LSeriesEvaluator, tol: f64) -> Result<CheckReport> {
    let k = ev.form().weight();
    let a = Rational64::new(ev.form().weight_times_two * 2 - 9, 4);
    let general = pair_lift_lhs(ev, a)?;
    let special = lhs_vector_level_four(ev)?;
    let scale = i_pow(k - 1.25) * gamma_real(k - 1.0)?;
    let norm = general.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    let rows = general
        .iter()
        .zip(&special)
        .enumerate()
        .map(|(n, (g, s))| {
            let rhs = scale * s;
            ReportRow::compare(format!("n = {n}"), *g, rhs, (g - rhs).norm() / norm)
        })
        .collect();
    Ok(CheckReport::from_rows("level-4 specialization", tol, rows))
}

/// One linear equation of a lift system.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquationRow {
    pub n: usize,
    pub lhs: Pair,
    pub rhs: Pair,
    pub residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LiftMode {
    Pair,
    Odd,
}

/// A least-squares lift. `h_coords` are the coordinates of h itself (the system is
/// solved for their conjugates) and are empty for the odd lift.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftSolution {
    pub mode: LiftMode,
    pub basis_g: Vec<String>,
    pub basis_h: Vec<String>,
    pub g_coords: Vec<Pair>,
    pub h_coords: Vec<Pair>,
    /// ‖Ax − b‖/‖b‖, or ‖Ax‖ when b = 0.
    pub residual_norm: f64,
    pub rank: usize,
    pub condition_estimate: f64,
    pub underdetermined: bool,
    pub equations: Vec<EquationRow>,
}

impl LiftSolution {
    pub fn g(&self) -> Vec<Complex64> {
        self.g_coords.iter().map(|&p| crate::report::unpair(p)).collect()
    }

    pub fn h(&self) -> Vec<Complex64> {
        self.h_coords.iter().map(|&p| crate::report::unpair(p)).collect()
    }
}

/// The rows n, matrix and right-hand side of a lift system, with unknowns
/// (g-coordinates, conjugated h-coordinates).
#[derive(Clone, Debug)]
pub struct LiftSystem {
    pub mode: LiftMode,
    pub rows: Vec<usize>,
    pub matrix: DMatrix<Complex64>,
    pub rhs: DVector<Complex64>,
    pub basis_g: Vec<String>,
    pub basis_h: Vec<String>,
}

impl LiftSystem {
    /// Replaces the right-hand side by A·x for given g- and h-coordinates.
    pub fn synthesize(&self, g: &[Complex64], h: &[Complex64]) -> Result<DVector<Complex64>> {
        if g.len() != self.basis_g.len() || h.len() != self.basis_h.len() {
            return Err(Error::domain("coordinate count does not match the basis"));
        }
        let x = DVector::from_iterator(g.len() + h.len(), g.iter().copied().chain(h.iter().map(|z| z.conj())));
        Ok(&self.matrix * x)
    }
}

/// The (D+1) equations of the pair lift; columns are the pairing polynomials of
/// the basis forms, whose z^n coefficient is C(D, n)(i^{n+1/2+k} Λ_g + i^{−n−1/2−k} conj Λ_h).
pub fn pair_system(
    ev: &LSeriesEvaluator,
    a: Rational64,
    basis_g: &[LSeriesEvaluator],
    basis_h: &[LSeriesEvaluator],
) -> Result<LiftSystem> {
    let k2 = ev.form().weight_times_two;
    require_trivial_character_mode(k2)?;
    check_basis(ev, basis_g)?;
    check_basis(ev, basis_h)?;
    let lhs = pair_lift_lhs(ev, a)?;
    let d = lhs.len();
    let mut columns = Vec::new();
    for g in basis_g {
        columns.push(es_pairing_w4(Some(g), None, k2)?);
    }
    for h in basis_h {
        columns.push(es_pairing_w4(None, Some(h), k2)?);
    }
    let matrix = DMatrix::from_fn(d, columns.len(), |n, j| columns[j].coeff(n));
    Ok(LiftSystem {
        mode: LiftMode::Pair,
        rows: (0..d).collect(),
        matrix,
        rhs: DVector::from_vec(lhs),
        basis_g: basis_g.iter().map(|b| b.form().label.clone()).collect(),
        basis_h: basis_h.iter().map(|b| b.form().label.clone()).collect(),
    })
}

/// Left-hand side of the odd lift at n:
/// i^{a+1}(C(k−2, n) N^{n/2} Λ_f(a+1−n) + (−1)^{n+1} C(k−2, n+1/2) N^{2k−a−3n/2−19/4} Λ_f(2k−7/2−a−n)).
fn odd_lhs(ev: &LSeriesEvaluator, p: &KernelParams, n: usize) -> Result<Complex64> {
    let k = p.k();
    let af = p.a_f64();
    let nf = n as f64;
    let n_lvl = p.level as f64;
    let (b1, b2) = p.binomials()[n];
    let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
    let first = b1 * n_lvl.powf(nf / 2.0) * lambda_real(ev, af + 1.0 - nf)?;
    let second = sign * b2 * n_lvl.powf(2.0 * k - af - 1.5 * nf - 4.75) * lambda_real(ev, 2.0 * k - 3.5 - af - nf)?;
    Ok(i_pow(af + 1.0) * (first + second))
}

/// The odd-n equations n = 1, 3, …, k − 7/2 with right-hand side
/// C(k−5/2, n) i^{−1−n} 2^{k−3/2−n} Λ_g(k−3/2−n).
pub fn odd_system(ev: &LSeriesEvaluator, a: Rational64, basis: &[LSeriesEvaluator]) -> Result<LiftSystem> {
    let f = ev.form();
    require_trivial_character_mode(f.weight_times_two)?;
    check_basis(ev, basis)?;
    let p = KernelParams::new(f.weight_times_two, f.level, a)?;
    let k = p.k();
    let d = p.degree();
    let rows: Vec<usize> = (1..d).step_by(2).collect();
    let mut rhs = Vec::with_capacity(rows.len());
    let mut matrix = DMatrix::from_element(rows.len(), basis.len(), cz());
    for (r, &n) in rows.iter().enumerate() {
        let nf = n as f64;
        rhs.push(odd_lhs(ev, &p, n)?);
        for (j, g) in basis.iter().enumerate() {
            matrix[(r, j)] = binom_int(d as u64, n as u64)
                * i_pow(-1.0 - nf)
                * 2f64.powf(k - 1.5 - nf)
                * lambda_real(g, k - 1.5 - nf)?;
        }
    }
    Ok(LiftSystem {
        mode: LiftMode::Odd,
        rows,
        matrix,
        rhs: DVector::from_vec(rhs),
        basis_g: basis.iter().map(|b| b.form().label.clone()).collect(),
        basis_h: Vec::new(),
    })
}

/// Least squares by SVD. Fails with the solution attached when the relative
/// residual exceeds tol.
pub fn solve_system(sys: &LiftSystem, tol: f64) -> Result<LiftSolution> {
    let unknowns = sys.matrix.ncols();
    let rows = sys.matrix.nrows();
    let (x, rank, condition) = if unknowns == 0 || rows == 0 {
        (DVector::zeros(unknowns), 0, f64::INFINITY)
    } else {
        let svd = sys.matrix.clone().svd(true, true);
        let sv = &svd.singular_values;
        let smax = sv.iter().copied().fold(0.0, f64::max);
        let cutoff = smax * 1e-12 * rows.max(unknowns) as f64;
        let rank = sv.iter().filter(|&&s| s > cutoff).count();
        let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
        let condition = if rank < unknowns || smin == 0.0 {
            f64::INFINITY
        } else {
            smax / smin
        };
        let x = svd
            .solve(&sys.rhs, cutoff.max(f64::MIN_POSITIVE))
            .map_err(|e| Error::Invariant(format!("SVD solve failed: {e}")))?;
        (x, rank, condition)
    };
    let fitted = &sys.matrix * &x;
    let bnorm = sys.rhs.norm();
    let rnorm = (&fitted - &sys.rhs).norm();
    let residual_norm = if bnorm == 0.0 { rnorm } else { rnorm / bnorm };
    let scale = sys.rhs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let equations = sys
        .rows
        .iter()
        .enumerate()
        .map(|(r, &n)| {
            let lhs = sys.rhs[r];
            let rhs = fitted[r];
            EquationRow {
                n,
                lhs: pair(lhs),
                rhs: pair(rhs),
                residual: if scale == 0.0 {
                    (lhs - rhs).norm()
                } else {
                    (lhs - rhs).norm() / scale
                },
            }
        })
        .collect();
    let ng = sys.basis_g.len();
    let solution = LiftSolution {
        mode: sys.mode,
        basis_g: sys.basis_g.clone(),
        basis_h: sys.basis_h.clone(),
        g_coords: x.iter().take(ng).map(|&z| pair(z)).collect(),
        h_coords: x.iter().skip(ng).map(|&z| pair(z.conj())).collect(),
        residual_norm,
        rank,
        condition_estimate: condition,
        underdetermined: rank < unknowns,
        equations,
    };
    if !(residual_norm <= tol) {
        return Err(Error::Inconsistent {
            residual: residual_norm,
            tol,
            solution: Box::new(solution),
        });
    }
    Ok(solution)
}

pub fn solve_lift_pair(
    ev: &LSeriesEvaluator,
    a: Rational64,
    basis_g: &[LSeriesEvaluator],
    basis_h: &[LSeriesEvaluator],
    tol: f64,
) -> Result<LiftSolution> {
    solve_system(&pair_system(ev, a, basis_g, basis_h)?, tol)
}

pub fn solve_lift_odd(
    ev: &LSeriesEvaluator,
    a: Rational64,
    basis: &[LSeriesEvaluator],
    tol: f64,
) -> Result<LiftSolution> {
    solve_system(&odd_system(ev, a, basis)?, tol)
}

/// r_{γ,n}(g₁) = i^{n+1} ∫_0^∞ (g₁|γ)(it) t^n dt for n = 0..D, by quadrature.
pub fn r_values<F: Evaluate>(g1: &F, gamma: CosetRep, prec: &Precision) -> Result<Vec<Complex64>> {
    let wt2 = g1.weight_times_two();
    if wt2 % 2 != 0 || wt2 < 6 {
        return Err(Error::domain("ρ-periods need an integral weight ≥ 3"));
    }
    let d = (wt2 / 2 - 2) as usize;
    let slashed = slash_function(g1, &gamma.matrix(), wt2, 1)?;
    (0..=d)
        .map(|n| {
            let s = re(n as f64 + 1.0);
            Ok(i_pow(n as f64 + 1.0) * lambda_by_quadrature(&slashed, s, 1.0, prec)?.value)
        })
        .collect()
}

/// ρ_{g₁}(γ)(z) = Σ_n (−1)^n C(D, n) r_{γ,n} z^{D−n}.
pub fn rho_lvalue_polynomial<F: Evaluate>(g1: &F, gamma: CosetRep, prec: &Precision) -> Result<Poly> {
    let r = r_values(g1, gamma, prec)?;
    let d = r.len() - 1;
    let mut coeffs = vec![cz(); d + 1];
    for (n, rn) in r.iter().enumerate() {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        coeffs[d - n] = sign * binom_int(d as u64, n as u64) * rn;
    }
    Ok(Poly::new(coeffs))
}

/// ρ_{g₁} as an element of the induced module.
pub fn rho_vector<F: Evaluate>(g1: &F, prec: &Precision) -> Result<InducedVector> {
    InducedVector::from_fn(|x| rho_lvalue_polynomial(g1, x, prec))
}

/// r^−_{γ,j} read off the odd part of a polynomial p = Σ (−1)^j C(D, j) r_j z^{D−j}.
pub fn r_minus_from_polynomial(p: &Poly) -> Vec<Complex64> {
    let d = p.degree_bound();
    (0..=d)
        .map(|j| {
            if (d - j) % 2 == 0 {
                cz()
            } else {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                p.coeff(d - j) / (sign * binom_int(d as u64, j as u64))
            }
        })
        .collect()
}

/// s_n = Σ_{j ≤ n} C(n, j)(−1)^{n−j} r_j.
pub fn binomial_transform(r: &[Complex64]) -> Vec<Complex64> {
    (0..r.len())
        .map(|n| {
            (0..=n)
                .map(|j| {
                    let sign = if (n - j) % 2 == 0 { 1.0 } else { -1.0 };
                    sign * binom_int(n as u64, j as u64) * r[j]
                })
                .sum()
        })
        .collect()
}

/// s^−_{1,n} and s^−_{T,n} from the period polynomial coefficients α_j:
/// s^−_{1,n} = (−1)^n Σ_{odd j ≤ n} C(n, j) C(D, j)^{−1} α_{D−j} / N^{(D−j)/2},
/// s^−_{T,n} = (−1)^{n+1} Σ_{odd j ≤ n} C(n, j) C(D, j)^{−1} Σ_{ℓ ≥ D−j} (−1)^ℓ α_ℓ N^{−ℓ/2} C(ℓ, D−j).
///
/// α_j is the z^j coefficient of P_a, i.e. the displayed α with its index n read as j.
pub fn s_coefficients(ev: &LSeriesEvaluator, a: Rational64) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let f = ev.form();
    require_trivial_character_mode(f.weight_times_two)?;
    let p = KernelParams::new(f.weight_times_two, f.level, a)?;
    let alpha = period_polynomial_from_lvalues(ev, &p)?.poly.coeffs;
    Ok(s_from_alpha(&alpha, f.level))
}

fn s_from_alpha(alpha: &[Complex64], level: u64) -> (Vec<Complex64>, Vec<Complex64>) {
    let d = alpha.len() - 1;
    let n_lvl = level as f64;
    let scaled = |l: usize| alpha[l] / n_lvl.powf(l as f64 / 2.0);
    let mut s1 = vec![cz(); d + 1];
    let mut st = vec![cz(); d + 1];
    for n in 0..=d {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        for j in (1..=n).step_by(2) {
            let w = binom_int(n as u64, j as u64) / binom_int(d as u64, j as u64);
            s1[n] += sign * w * scaled(d - j);
            let inner: Complex64 = (d - j..=d)
                .map(|l| {
                    let sl = if l % 2 == 0 { 1.0 } else { -1.0 };
                    sl * scaled(l) * binom_int(l as u64, (d - j) as u64)
                })
                .sum();
            st[n] -= sign * w * inner;
        }
    }
    (s1, st)
}

/// Compares the s-coefficients with the binomial transform of the r^− values read
/// from `source` at the cosets 1 and T.
pub fn check_s_coefficients(
    ev: &LSeriesEvaluator,
    a: Rational64,
    source: &InducedVector,
    tol: f64,
) -> Result<CheckReport> {
    let (s1, st) = s_coefficients(ev, a)?;
    let t1 = binomial_transform(&r_minus_from_polynomial(source.get(CosetRep::One)));
    let tt = binomial_transform(&r_minus_from_polynomial(source.get(CosetRep::T)));
    let scale = s1.iter().chain(&st).map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    let mut rows = Vec::new();
    for (label, want, got) in [("1", &s1, &t1), ("T", &st, &tt)] {
        for (n, (w, g)) in want.iter().zip(got.iter()).enumerate() {
            rows.push(ReportRow::compare(
                format!("s_{label},{n}"),
                *w,
                *g,
                (w - g).norm() / scale,
            ));
        }
    }
    Ok(CheckReport::from_rows(
        "s-coefficients against binomial transform",
        tol,
        rows,
    ))
}

/// π_f(U) for the cocycle on H(2) built from P_a.
pub fn pi_u_vector(pa: &PeriodPolynomial) -> Result<InducedVector> {
    let cyc = CocycleOnGenerators::theta_from_period_polynomial(pa)?;
    induced_pi(&cyc, &GroupElement::u())
}

/// Odd coefficients of ρ^−_{g₁}(1), ρ^−_{g₁}(T) against those of π_f(U)(1), π_f(U)(T).
pub fn verify_basic<F: Evaluate>(
    ev: &LSeriesEvaluator,
    a: Rational64,
    g1: &F,
    tol: f64,
    prec: &Precision,
) -> Result<CheckReport> {
    let f = ev.form();
    let p = KernelParams::new(f.weight_times_two, f.level, a)?;
    let pa = period_polynomial_from_lvalues(ev, &p)?;
    let pi_u = pi_u_vector(&pa)?;
    let d = p.degree();
    let scale = pi_u.max_abs().max(1e-300);
    let mut rows = Vec::new();
    for x in [CosetRep::One, CosetRep::T] {
        let rho = rho_lvalue_polynomial(g1, x, prec)?;
        for j in (0..=d).filter(|j| j % 2 == 1) {
            let want = pi_u.get(x).coeff(j);
            let got = rho.coeff(j);
            rows.push(ReportRow::compare(
                format!("coset {} z^{j}", x.label()),
                want,
                got,
                (want - got).norm() / scale,
            ));
        }
    }
    Ok(CheckReport::from_rows("odd part of pi(U) against rho", tol, rows))
}

/// g = (2/3)(2i)^{3/2−k} Σ_n C(D, n)(s^−_{1,n} R^+_{U,n}(2z) + s^−_{T,n} R^+_{1,n}(2z)).
///
/// `r_plus` must hold R^+_{U,n} and R^+_{1,n} for every n = 0..D.
pub fn assemble_odd_lift_form(
    k_times_two: i64,
    s1: &[Complex64],
    st: &[Complex64],
    r_plus: &BTreeMap<(CosetRep, usize), FourierExpansion>,
) -> Result<FourierExpansion> {
    let k = k_times_two as f64 / 2.0;
    let d = ((k_times_two - 5) / 2) as usize;
    if s1.len() != d + 1 || st.len() != d + 1 {
        return Err(Error::domain(format!("expected {} s-coefficients", d + 1)));
    }
    let front = 2.0 / 3.0 * crate::special::cpowf(Complex64::new(0.0, 2.0), 1.5 - k);
    let mut acc: Option<FourierExpansion> = None;
    for n in 0..=d {
        let b = binom_int(d as u64, n as u64);
        for (x, s) in [(CosetRep::U, s1[n]), (CosetRep::One, st[n])] {
            let r = r_plus
                .get(&(x, n))
                .ok_or_else(|| Error::Unsupported(format!("missing R+ data for coset {} and n = {n}", x.label())))?;
            let term = r.compress(2)?.scale(front * b * s);
            acc = Some(match acc {
                None => term,
                Some(sum) => sum.add(&term)?,
            });
        }
    }
    let mut g = acc.ok_or_else(|| Error::domain("empty sum"))?;
    g.label = "explicit lift".into();
    Ok(g)
}

/// C_{k,N,n}·Λ_g(k−3/2−n) with the bracket cleared:
/// returns (B_n, C(k−5/2, n) 2^{−n}) where
/// B_n = C(k−2, n) N^{n/2} + (−1)^{n+1} C(k−2, n+1/2) N^{k−5/2−3n/2}, so that
/// B_n Λ_f(k−5/4−n) = C(k−5/2, n) 2^{−n}(i^{7/4+n} + λ i^{−n−1/4}) Λ_g(k−3/2−n).
pub fn corollary_factors(k_times_two: i64, level: u64, n: usize) -> Result<(f64, f64)> {
    let k = k_times_two as f64 / 2.0;
    let d = ((k_times_two - 5) / 2) as usize;
    let nf = n as f64;
    let n_lvl = level as f64;
    let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
    let bracket = binom_general(k - 2.0, nf)? * n_lvl.powf(nf / 2.0)
        + sign * binom_general(k - 2.0, nf + 0.5)? * n_lvl.powf(k - 2.5 - 1.5 * nf);
    Ok((bracket, binom_int(d as u64, n as u64) * 2f64.powi(-(n as i32))))
}

/// C_{k,N,n} as displayed; None when the bracket vanishes.
pub fn corollary_constant(k_times_two: i64, level: u64, n: usize, lambda: Complex64) -> Result<Option<Complex64>> {
    let (bracket, front) = corollary_factors(k_times_two, level, n)?;
    if bracket == 0.0 {
        return Ok(None);
    }
    let nf = n as f64;
    Ok(Some(front * (i_pow(1.75 + nf) + lambda * i_pow(-nf - 0.25)) / bracket))
}

/// Extracts λ_f from the row with the largest Λ_g data and checks the remaining rows
/// in cleared-denominator form, relative to the largest left side.
pub fn corollary_ratio(f: &LSeriesEvaluator, g: &LSeriesEvaluator, tol: f64) -> Result<(Complex64, CheckReport)> {
    let k2 = f.form().weight_times_two;
    require_trivial_character_mode(k2)?;
    check_basis(f, std::slice::from_ref(g))?;
    let k = f.form().weight();
    let d = ((k2 - 5) / 2) as usize;
    let mut data = Vec::with_capacity(d + 1);
    for n in 0..=d {
        let nf = n as f64;
        let (bracket, front) = corollary_factors(k2, f.form().level, n)?;
        let x = bracket * lambda_real(f, k - 1.25 - nf)?;
        let y = front * lambda_real(g, k - 1.5 - nf)?;
        data.push((n, x, y));
    }
    let xmax = data.iter().map(|r| r.1.norm()).fold(0.0, f64::max);
    if xmax <= 1e-12 {
        let rows = data
            .iter()
            .map(|&(n, _, _)| ReportRow::new(format!("n = {n}"), 0.0))
            .collect();
        return Ok((cz(), CheckReport::from_rows("corollary", tol, rows)));
    }
    let &(n0, x0, y0) = data
        .iter()
        .max_by(|a, b| a.2.norm().total_cmp(&b.2.norm()))
        .ok_or_else(|| Error::domain("empty corollary data"))?;
    if y0.norm() <= 1e-12 {
        return Err(Error::Indeterminate("all Λ_g reference values vanish".into()));
    }
    let n0f = n0 as f64;
    let lambda = (x0 / y0 - i_pow(1.75 + n0f)) * i_pow(n0f + 0.25);
    let rows = data
        .iter()
        .map(|&(n, x, y)| {
            let nf = n as f64;
            let rhs = y * (i_pow(1.75 + nf) + lambda * i_pow(-nf - 0.25));
            ReportRow::compare(format!("n = {n}"), x, rhs, (x - rhs).norm() / xmax)
        })
        .collect();
    Ok((lambda, CheckReport::from_rows("corollary", tol, rows)))
}

/// Consistency of λ_f with a pair solution (c, d): λ_f = conj(d)/c.
pub fn lambda_from_pair(sol: &LiftSolution) -> Option<Complex64> {
    let g = sol.g();
    let h = sol.h();
    if g.len() != 1 || h.len() != 1 || g[0].norm() == 0.0 {
        return None;
    }
    Some(h[0].conj() / g[0])
}

/// a = k − 9/4 as a rational.
pub fn corollary_exponent(k_times_two: i64) -> Rational64 {
    Rational64::new(2 * k_times_two - 9, 4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{bundled_forms, integral_eta, DEFAULT_TRUNCATION};

    fn evs() -> (LSeriesEvaluator, LSeriesEvaluator) {
        let mut forms = bundled_forms(DEFAULT_TRUNCATION).unwrap();
        let g = LSeriesEvaluator::new(forms.remove(1)).unwrap();
        let f = LSeriesEvaluator::new(forms.remove(0)).unwrap();
        (f, g)
    }

    fn zero_of(ev: &LSeriesEvaluator) -> LSeriesEvaluator {
        LSeriesEvaluator::new(FourierExpansion::zero_like(ev.form())).unwrap()
    }

    #[test]
    fn pairing_zero_and_linearity() {
        let (_, g) = evs();
        assert!(es_pairing_w4(None, None, 13).unwrap().is_zero());
        assert!(es_pairing_w4(Some(&zero_of(&g)), Some(&zero_of(&g)), 13)
            .unwrap()
            .is_zero());
        let g2 = LSeriesEvaluator::new(g.form().scale(re(2.0))).unwrap();
        let one = es_pairing_w4(Some(&g), None, 13).unwrap();
        let two = es_pairing_w4(Some(&g2), None, 13).unwrap();
        assert!(two.rel_distance(&one.scale(re(2.0)), 1e-300) < 1e-13);
    }

    #[test]
    fn pairing_matches_contour_integral() {
        let (_, g) = evs();
        let eta = integral_eta();
        let h = crate::forms::FnForm {
            weight_times_two: 12,
            f: |w: Complex64| eta.value(w) * Complex64::new(0.3, -0.7),
        };
        let hs = LSeriesEvaluator::new(g.form().scale(Complex64::new(0.3, -0.7))).unwrap();
        let by_l = es_pairing_w4(Some(&g), Some(&hs), 13).unwrap();
        let by_q = es_pairing_by_quadrature(&eta, &h, 13, &Precision::default().with_abs_tol(1e-14)).unwrap();
        assert!(
            by_q.rel_distance(&by_l, 1e-300) < 1e-6,
            "{}",
            by_q.rel_distance(&by_l, 1e-300)
        );
    }

    #[test]
    fn pair_lhs_is_hat_polynomial() {
        let (f, _) = evs();
        for a in [Rational64::new(17, 4), Rational64::new(9, 2), Rational64::new(3, 1)] {
            let lhs = pair_lift_lhs(&f, a).unwrap();
            let p = KernelParams::new(13, 4, a).unwrap();
            let hat = period_polynomial_from_lvalues(&f, &p).unwrap().hat();
            assert!(Poly::new(lhs).rel_distance(&hat, 1e-300) < 1e-12);
        }
        let zero = zero_of(&f);
        assert!(pair_lift_lhs(&zero, Rational64::new(17, 4))
            .unwrap()
            .iter()
            .all(|z| z.norm() == 0.0));
    }

    #[test]
    fn level_four_specialization() {
        let (f, _) = evs();
        let r = check_specialization(&f, 1e-12).unwrap();
        assert!(r.passed, "{:?}", r.rows);
    }

    #[test]
    fn forward_synthesis_recovers_coordinates() {
        let (f, g) = evs();
        let mut sys = pair_system(
            &f,
            Rational64::new(17, 4),
            std::slice::from_ref(&g),
            std::slice::from_ref(&g),
        )
        .unwrap();
        let c = Complex64::new(0.7, -0.2);
        let d = Complex64::new(-1.3, 0.4);
        sys.rhs = sys.synthesize(&[c], &[d]).unwrap();
        let sol = solve_system(&sys, 1e-10).unwrap();
        assert_eq!(sol.rank, 2);
        assert!((sol.g()[0] - c).norm() < 1e-8);
        assert!((sol.h()[0] - d).norm() < 1e-8);
        let lambda = lambda_from_pair(&sol).unwrap();
        assert!((lambda - d.conj() / c).norm() < 1e-8);
    }

    #[test]
    fn zero_form_gives_zero_lift() {
        let (f, g) = evs();
        let zero = zero_of(&f);
        let sol = solve_lift_pair(
            &zero,
            Rational64::new(17, 4),
            std::slice::from_ref(&g),
            std::slice::from_ref(&g),
            1e-6,
        )
        .unwrap();
        assert_eq!(sol.residual_norm, 0.0);
        assert!(sol.g()[0].norm() == 0.0 && sol.h()[0].norm() == 0.0);
        let odd = solve_lift_odd(&zero, Rational64::new(17, 4), std::slice::from_ref(&g), 1e-6).unwrap();
        assert_eq!(odd.g()[0].norm(), 0.0);
        let (s1, st) = s_coefficients(&zero, Rational64::new(17, 4)).unwrap();
        assert!(s1.iter().chain(&st).all(|z| z.norm() == 0.0));
        let (lambda, r) = corollary_ratio(&zero, &g, 1e-6).unwrap();
        assert_eq!(lambda, cz());
        assert!(r.passed);
    }

    #[test]
    fn odd_system_shape() {
        let (f, g) = evs();
        let sys = odd_system(&f, Rational64::new(17, 4), &[g]).unwrap();
        assert_eq!(sys.rows, vec![1, 3]);
        assert_eq!(sys.matrix.ncols(), 1);
    }

    #[test]
    fn solutions_scale_with_f() {
        let (f, g) = evs();
        let f2 = LSeriesEvaluator::new(f.form().scale(re(2.0))).unwrap();
        let a = Rational64::new(17, 4);
        let grab = |ev: &LSeriesEvaluator| match solve_lift_pair(
            ev,
            a,
            std::slice::from_ref(&g),
            std::slice::from_ref(&g),
            f64::INFINITY,
        ) {
            Ok(s) => s,
            Err(e) => panic!("{e}"),
        };
        let s1 = grab(&f);
        let s2 = grab(&f2);
        assert!((s2.g()[0] - 2.0 * s1.g()[0]).norm() < 1e-12 * s1.g()[0].norm().max(1e-300));
        assert!((s2.h()[0] - 2.0 * s1.h()[0]).norm() < 1e-12 * s1.h()[0].norm().max(1e-300));
        assert!((s2.residual_norm - s1.residual_norm).abs() < 1e-12);
    }

    #[test]
    fn theta_form_lvalues_double() {
        let (_, g) = evs();
        let g1 = LSeriesEvaluator::new(crate::forms::theta_lift_basis(DEFAULT_TRUNCATION).unwrap()).unwrap();
        for s in [2.0, 3.0, 4.0] {
            let l1 = lambda_real(&g1, s).unwrap();
            let l = lambda_real(&g, s).unwrap();
            assert!((l1 - 2f64.powf(s) * l).norm() < 1e-8 * l1.norm());
        }
    }

    #[test]
    fn rho_at_identity_matches_lvalues() {
        let g1 = crate::forms::EtaQuotient::new(1, &[(1, 12)]).unwrap();
        let ev = LSeriesEvaluator::new(crate::forms::theta_lift_basis(DEFAULT_TRUNCATION).unwrap()).unwrap();
        let r = r_values(&g1, CosetRep::One, &Precision::default()).unwrap();
        for (n, rn) in r.iter().enumerate() {
            let want = i_pow(n as f64 + 1.0) * lambda_real(&ev, n as f64 + 1.0).unwrap();
            assert!((rn - want).norm() < 1e-8 * want.norm(), "n = {n}");
        }
    }

    #[test]
    fn rho_lies_in_w_for_trivial_character() {
        // Δ = η^24 is invariant under all of PSL₂(ℤ) with weight 12
        let delta = crate::forms::EtaQuotient::new(1, &[(1, 24)]).unwrap();
        let v = rho_vector(&delta, &Precision::default()).unwrap();
        let r = crate::cocycle::check_w_membership(&v, 1e-7 * v.max_abs()).unwrap();
        assert!(r.passed, "{:?}", r.rows);
    }

    #[test]
    fn rho_of_eta_twelve_sees_its_character() {
        // η^12|S = −η^12, so ρ(1)|S = ρ(1) and v||(S+1) at the coset 1 is 2ρ(1)
        let g1 = crate::forms::EtaQuotient::new(1, &[(1, 12)]).unwrap();
        let v = rho_vector(&g1, &Precision::default()).unwrap();
        let vs = v.double_bar(&GroupElement::s()).unwrap();
        let one = v.get(CosetRep::One);
        assert!(vs.get(CosetRep::One).rel_distance(one, 1e-300) < 1e-8);
        assert!(!crate::cocycle::check_w_membership(&v, 1e-7).unwrap().passed);
    }

    #[test]
    fn s_coefficients_from_pi_u() {
        let (f, _) = evs();
        let a = Rational64::new(17, 4);
        let p = KernelParams::new(13, 4, a).unwrap();
        let pa = period_polynomial_from_lvalues(&f, &p).unwrap();
        let minus = pi_u_vector(&pa).unwrap().minus_part().unwrap();
        let r = check_s_coefficients(&f, a, &minus, 1e-10).unwrap();
        assert!(r.passed, "{:?}", r.rows);
        let (s1, st) = s_coefficients(&f, a).unwrap();
        assert_eq!(s1[0], cz());
        assert_eq!(st[0], cz());
    }

    #[test]
    fn explicit_assembly() {
        let base = integral_eta().expansion(50).unwrap().stretch(2).unwrap();
        let zero = FourierExpansion::zero_like(&base);
        let mut r_plus = BTreeMap::new();
        for n in 0..=4 {
            r_plus.insert((CosetRep::U, n), zero.clone());
            r_plus.insert((CosetRep::One, n), zero.clone());
        }
        let s = vec![re(1.0); 5];
        assert!(assemble_odd_lift_form(13, &s, &s, &r_plus).unwrap().is_zero());
        r_plus.insert((CosetRep::U, 2), base.clone());
        let out = assemble_odd_lift_form(13, &s, &s, &r_plus).unwrap();
        let c = 2.0 / 3.0 * crate::special::cpowf(Complex64::new(0.0, 2.0), -5.0) * 6.0;
        for n in 1..=40 {
            let want = if n % 2 == 0 { c * base.coefficient(n / 2) } else { cz() };
            assert!((out.coefficient(n) - want).norm() < 1e-12 * want.norm().max(1.0));
        }
        r_plus.remove(&(CosetRep::One, 3));
        assert!(matches!(
            assemble_odd_lift_form(13, &s, &s, &r_plus),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn corollary_constant_from_pair_pieces() {
        // B_n Λ_f = C(D,n)2^{−n}(…)Λ_g is the pair equation at a = k − 9/4 with c = 1,
        // conj d = λ, divided by i^{k−5/4} 2^n
        let (f, g) = evs();
        let lambda = Complex64::new(0.4, -1.1);
        let a = corollary_exponent(13);
        let lhs = pair_lift_lhs(&f, a).unwrap();
        let col_g = es_pairing_w4(Some(&g), None, 13).unwrap();
        let col_h = es_pairing_w4(None, Some(&g), 13).unwrap();
        for (n, &lhs_n) in lhs.iter().enumerate() {
            let nf = n as f64;
            let lf = lambda_real(&f, 6.5 - 1.25 - nf).unwrap();
            let lg = lambda_real(&g, 5.0 - nf).unwrap();
            let norm = i_pow(6.5 - 1.25) * 2f64.powi(n as i32);
            let lhs_factor = lhs_n / (norm * lf);
            let (bracket, _) = corollary_factors(13, 4, n).unwrap();
            assert!((lhs_factor - bracket).norm() < 1e-12 * bracket.abs().max(1.0));
            let rhs = (col_g.coeff(n) + lambda * col_h.coeff(n)) / (norm * lg);
            if let Some(c) = corollary_constant(13, 4, n, lambda).unwrap() {
                assert!((rhs / bracket - c).norm() < 1e-12 * c.norm());
            }
        }
        for level in [8, 12] {
            for n in 0..=4 {
                let (b, _) = corollary_factors(13, level, n).unwrap();
                let nf = n as f64;
                let direct = binom_general(4.5, nf).unwrap() * (level as f64).powf(nf / 2.0)
                    + (-1f64).powi(n as i32 + 1)
                        * binom_general(4.5, nf + 0.5).unwrap()
                        * (level as f64).powf(4.0 - 1.5 * nf);
                assert!((b - direct).abs() < 1e-12 * direct.abs().max(1.0));
            }
        }
    }

    #[test]
    fn rejects_wrong_mode() {
        assert!(require_trivial_character_mode(11).is_err());
        assert!(require_trivial_character_mode(12).is_err());
        assert!(require_trivial_character_mode(13).is_ok());
        assert!(require_trivial_character_mode(21).is_ok());
        let (f, g) = evs();
        let g4 = LSeriesEvaluator::new(crate::forms::theta_lift_basis(60).unwrap()).unwrap();
        assert!(pair_system(&f, Rational64::new(17, 4), &[g4], &[g]).is_err());
    }
}
