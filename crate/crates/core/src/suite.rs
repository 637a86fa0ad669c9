//! Named verification runs over a pair of forms: the half-integral form whose
//! periods are studied and an integral-weight basis form for the lifts.

use std::time::Instant;

use num_complex::Complex64;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cocycle::{check_coset_identities, check_w_membership, CocycleOnGenerators};
use crate::error::{Error, Result};
use crate::forms::{bundled_forms, theta_lift_basis, validate_form, Character, Evaluate, FnForm, DEFAULT_TRUNCATION};
use crate::group::{
    coset_times, decompose_gamma04star, decompose_psl2z, decompose_theta, kappa, CosetRep, Generator, GroupElement,
    GroupTag, Word,
};
use crate::kr::{kr_integral_representation, verify_kreich, KREvaluator};
use crate::lift::{
    check_s_coefficients, check_specialization, corollary_ratio, pair_system, pi_u_vector, solve_lift_odd,
    solve_lift_pair, solve_system, verify_basic, LiftSolution,
};
use crate::lseries::{verify_functional_equation, LSeriesEvaluator};
use crate::period::{
    period_polynomial_by_quadrature, period_polynomial_from_lvalues, phi_kernel, polynomial_distance,
    verify_eichler_relation, verify_remainder_growth, KernelParams,
};
use crate::report::{rel_dev, CheckReport, ReportRow};
use crate::special::{cpowf, incomplete_gamma_upper, Precision};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub gamma_recurrence: f64,
    pub validation: f64,
    pub functional_equation: f64,
    pub kernel_symmetry: f64,
    pub lvalue_quadrature: f64,
    pub eichler: f64,
    pub period_relation: f64,
    pub cocycle_relations: f64,
    pub coset_identities: f64,
    pub w_membership: f64,
    pub lift: f64,
    pub synthesis: f64,
    pub odd_lift: f64,
    pub specialization: f64,
    pub kreich: f64,
    pub kr_integral: f64,
    pub remainder_factor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            gamma_recurrence: 1e-10,
            validation: 1e-9,
            functional_equation: 1e-8,
            kernel_symmetry: 1e-10,
            lvalue_quadrature: 1e-6,
            eichler: 1e-6,
            period_relation: 1e-8,
            cocycle_relations: 1e-8,
            coset_identities: 1e-10,
            w_membership: 1e-8,
            lift: 1e-6,
            synthesis: 1e-8,
            odd_lift: 1e-6,
            specialization: 1e-12,
            kreich: 1e-5,
            kr_integral: 1e-4,
            remainder_factor: 10.0,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.gamma_recurrence,
            self.validation,
            self.functional_equation,
            self.kernel_symmetry,
            self.lvalue_quadrature,
            self.eichler,
            self.period_relation,
            self.cocycle_relations,
            self.coset_identities,
            self.w_membership,
            self.lift,
            self.synthesis,
            self.odd_lift,
            self.specialization,
            self.kreich,
            self.kr_integral,
            self.remainder_factor,
        ];
        if all.iter().all(|t| *t > 0.0) {
            Ok(())
        } else {
            Err(Error::domain("tolerances must be positive"))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteConfig {
    pub truncation: usize,
    pub seed: u64,
    /// Sample points for the Eichler relation.
    pub samples: usize,
    /// Random (z, w) pairs for the kernel symmetry.
    pub kernel_pairs: usize,
    /// Random words per group for the decomposition round trips.
    pub words: usize,
    /// Exponent a of the kernel for the cocycle and lift checks, written "17/4".
    #[serde(with = "rational_text")]
    pub a: Rational64,
    pub precision: Precision,
    pub tolerances: Tolerances,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            truncation: DEFAULT_TRUNCATION,
            seed: 0,
            samples: 10,
            kernel_pairs: 100,
            words: 1000,
            a: Rational64::new(17, 4),
            precision: Precision::default(),
            tolerances: Tolerances::default(),
        }
    }
}

mod rational_text {
    use num_rational::Rational64;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational64, D::Error> {
        let text = String::deserialize(d)?;
        text.trim()
            .parse()
            .map_err(|e| D::Error::custom(format!("rational {text:?}: {e}")))
    }
}

/// The forms a suite run works on.
#[derive(Clone, Debug)]
pub struct SuiteForms {
    pub f: LSeriesEvaluator,
    pub g: LSeriesEvaluator,
}

impl SuiteForms {
    pub fn bundled(truncation: usize) -> Result<Self> {
        let mut forms = bundled_forms(truncation)?;
        let g = LSeriesEvaluator::new(forms.remove(1))?;
        let f = LSeriesEvaluator::new(forms.remove(0))?;
        Ok(SuiteForms { f, g })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckId {
    GammaRecurrence,
    FormValidation,
    Fe,
    Transf,
    Lval,
    Eich,
    Words,
    Cocycle,
    WMembership,
    LiftPair,
    LiftOdd,
    Specialization,
    Corollary,
    Kreich,
    KrIntegral,
    Brug,
}

impl CheckId {
    pub fn name(self) -> &'static str {
        match self {
            CheckId::GammaRecurrence => "gamma-recurrence",
            CheckId::FormValidation => "form-validation",
            CheckId::Fe => "fe",
            CheckId::Transf => "transf",
            CheckId::Lval => "lval",
            CheckId::Eich => "eich",
            CheckId::Words => "words",
            CheckId::Cocycle => "cocycle",
            CheckId::WMembership => "w-membership",
            CheckId::LiftPair => "lift-pair",
            CheckId::LiftOdd => "lift-odd",
            CheckId::Specialization => "specialization",
            CheckId::Corollary => "corollary",
            CheckId::Kreich => "kreich",
            CheckId::KrIntegral => "kr-integral",
            CheckId::Brug => "brug",
        }
    }
}

/// A check report with its wall-clock time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimedReport {
    pub check: CheckId,
    pub seconds: f64,
    pub report: CheckReport,
}

pub fn run_check(id: CheckId, forms: &SuiteForms, cfg: &SuiteConfig) -> Result<TimedReport> {
    let start = Instant::now();
    let report = match id {
        CheckId::GammaRecurrence => check_gamma_recurrence(cfg.tolerances.gamma_recurrence)?,
        CheckId::FormValidation => check_form_validation(forms, cfg.tolerances.validation)?,
        CheckId::Fe => check_functional_equations(forms, cfg.tolerances.functional_equation)?,
        CheckId::Transf => check_kernel_symmetry(forms, cfg)?,
        CheckId::Lval => check_lvalue_quadrature(forms, cfg)?,
        CheckId::Eich => check_eichler(forms, cfg)?,
        CheckId::Words => check_words(cfg.seed, cfg.words)?,
        CheckId::Cocycle => check_cocycle(forms, cfg)?,
        CheckId::WMembership => check_pi_u_membership(forms, cfg)?,
        CheckId::LiftPair => check_lift_pair(forms, cfg)?.0,
        CheckId::LiftOdd => check_lift_odd(forms, cfg)?,
        CheckId::Specialization => check_specialization(&forms.f, cfg.tolerances.specialization)?,
        CheckId::Corollary => corollary_ratio(&forms.f, &forms.g, cfg.tolerances.lift)?.1,
        CheckId::Kreich => check_kreich(forms, cfg)?,
        CheckId::KrIntegral => check_kr_integral(forms, cfg)?,
        CheckId::Brug => verify_remainder_growth(
            &forms.f,
            &[2.0, 4.0, 8.0, 16.0],
            cfg.tolerances.remainder_factor,
            &cfg.precision,
        )?,
    };
    Ok(TimedReport {
        check: id,
        seconds: start.elapsed().as_secs_f64(),
        report,
    })
}

/// Runs the checks concurrently; reports come back in the order given.
pub fn run_checks(ids: &[CheckId], forms: &SuiteForms, cfg: &SuiteConfig) -> Vec<(CheckId, Result<TimedReport>)> {
    ids.par_iter().map(|&id| (id, run_check(id, forms, cfg))).collect()
}

/// Γ(s+1, x) = sΓ(s, x) + x^s e^{−x} for s ∈ {1/2, 1, …, 13/2}, x ∈ {0.1, 1, 10}.
pub fn check_gamma_recurrence(tol: f64) -> Result<CheckReport> {
    let mut rows = Vec::new();
    for j in 1..=13 {
        let s = j as f64 / 2.0;
        for x in [0.1, 1.0, 10.0] {
            let lhs = incomplete_gamma_upper(s + 1.0, x)?;
            let rhs = s * incomplete_gamma_upper(s, x)? + x.powf(s) * (-x).exp();
            rows.push(ReportRow::compare(
                format!("s = {s}, x = {x}"),
                Complex64::new(lhs, 0.0),
                Complex64::new(rhs, 0.0),
                ((lhs - rhs) / lhs).abs(),
            ));
        }
    }
    Ok(CheckReport::from_rows("incomplete gamma recurrence", tol, rows))
}

pub fn check_form_validation(forms: &SuiteForms, tol: f64) -> Result<CheckReport> {
    let mut parts = Vec::new();
    for ev in [&forms.f, &forms.g] {
        let mut f = ev.form().clone();
        parts.push(validate_form(&mut f, tol)?);
    }
    Ok(CheckReport::merge("form validation", parts))
}

/// Five points of s per form, real and off the real line.
pub fn functional_equation_grid(k: f64) -> Vec<Complex64> {
    vec![
        Complex64::new(k / 2.0 - 1.9, 0.0),
        Complex64::new(1.3, 0.7),
        Complex64::new(k / 2.0, 0.0),
        Complex64::new(k / 2.0 + 0.4, -1.5),
        Complex64::new(k - 0.6, 2.0),
    ]
}

pub fn check_functional_equations(forms: &SuiteForms, tol: f64) -> Result<CheckReport> {
    let parts = [&forms.f, &forms.g]
        .iter()
        .map(|ev| verify_functional_equation(ev, &functional_equation_grid(ev.weight()), tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(CheckReport::merge("functional equations", parts))
}

/// Random points with |Re z| ≤ 1/2 and 1/2 ≤ Im z ≤ 2.
pub fn sample_grid(n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.5..2.0)))
        .collect()
}

/// Φ_a(z, w) = −(i√N z)^{k−5/2} (−i√N w)^{k−2} Φ_a(W_N z, W_N w) at random points.
pub fn check_kernel_symmetry(forms: &SuiteForms, cfg: &SuiteConfig) -> Result<CheckReport> {
    let f = forms.f.form();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(1));
    let w_n = GroupElement::fricke(f.level);
    let root = (f.level as f64).sqrt();
    let mut rows = Vec::new();
    for a in [Rational64::new(9, 2), cfg.a] {
        let p = KernelParams::new(f.weight_times_two, f.level, a)?;
        let k = p.k();
        let mut worst: f64 = 0.0;
        for _ in 0..cfg.kernel_pairs {
            let mut pt = || Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(0.1..3.0));
            let (z, w) = (pt(), pt());
            let lhs = -cpowf(Complex64::new(0.0, root) * z, k - 2.5)
                * cpowf(Complex64::new(0.0, -root) * w, k - 2.0)
                * phi_kernel(&p, w_n.act(z), w_n.act(w));
            let rhs = phi_kernel(&p, z, w);
            worst = worst.max(rel_dev(lhs, rhs, 1e-300));
        }
        rows.push(ReportRow::new(format!("a = {a}, {} pairs", cfg.kernel_pairs), worst));
    }
    Ok(CheckReport::from_rows(
        "kernel symmetry",
        cfg.tolerances.kernel_symmetry,
        rows,
    ))
}

pub fn check_lvalue_quadrature(forms: &SuiteForms, cfg: &SuiteConfig) -> Result<CheckReport> {
    let f = forms.f.form();
    let mut rows = Vec::new();
    for a in [Rational64::new(9, 2), cfg.a] {
        let p = KernelParams::new(f.weight_times_two, f.level, a)?;
        let from_l = period_polynomial_from_lvalues(&forms.f, &p)?;
        let by_q = period_polynomial_by_quadrature(f, &p, &cfg.precision)?;
        rows.push(ReportRow::new(
            format!("a = {a}"),
            polynomial_distance(&by_q.poly, &from_l.poly),
        ));
    }
    Ok(CheckReport::from_rows(
        "period polynomial from L-values",
        cfg.tolerances.lvalue_quadrature,
        rows,
    ))
}

/// The Eichler relation at `cfg.samples` random points; a row's residual is the larger
/// of the absolute and relative deviations.
pub fn check_eichler(forms: &SuiteForms, cfg: &SuiteConfig) -> Result<CheckReport> {
    let f = forms.f.form();
    let p = KernelParams::new(f.weight_times_two, f.level, Rational64::new(9, 2))?;
    let chi = Character::for_weight(f.weight_times_two);
    let samples = sample_grid(cfg.samples, cfg.seed);
    let report = verify_eichler_relation(&forms.f, &p, &samples, &chi, cfg.tolerances.eichler, &cfg.precision)?;
    let mut relation = Vec::new();
    let mut period = Vec::new();
    for r in report.rows {
        match (r.lhs, r.rhs) {
            (Some(l), Some(rh)) => {
                let abs = (crate::report::unpair(l) - crate::report::unpair(rh)).norm();
                relation.push(ReportRow {
                    residual: r.residual.max(abs),
                    ..r
                });
            }
            _ => period.push(r),
        }
    }
    Ok(CheckReport::merge(
        "Eichler integral",
        vec![
            CheckReport::from_rows("relation", cfg.tolerances.eichler, relation),
            CheckReport::from_rows("period relation", cfg.tolerances.period_relation, period),
        ],
    ))
}

fn random_word(rng: &mut ChaCha8Rng, group: GroupTag, max_len: usize) -> Word {
    let gens = group.generators();
    let len = rng.gen_range(0..=max_len);
    let mut w = Word::empty(group);
    for _ in 0..len {
        let g = gens[rng.gen_range(0..gens.len())];
        let e = match g {
            Generator::NegOne | Generator::W4 | Generator::S => 1,
            _ => {
                let e = rng.gen_range(1..=3);
                if rng.gen_bool(0.5) {
                    e
                } else {
                    -e
                }
            }
        };
        w.push(g, e);
    }
    w
}

/// Word round trips in the three groups and the κ cocycle relation; residuals count failures.
pub fn check_words(seed: u64, count: usize) -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
    let mut rows = Vec::new();
    type Decompose = fn(&GroupElement) -> Result<Word>;
    let decomposers: [(GroupTag, Decompose); 3] = [
        (GroupTag::Gamma04Star, decompose_gamma04star),
        (GroupTag::H2, decompose_theta),
        (GroupTag::Psl2Z, decompose_psl2z),
    ];
    for (tag, decompose) in decomposers {
        let mut failures = 0usize;
        for _ in 0..count {
            let g = random_word(&mut rng, tag, 30).recompose();
            match decompose(&g) {
                Ok(w) if w.recompose() == g => {}
                _ => failures += 1,
            }
        }
        rows.push(ReportRow::new(
            format!("{tag:?} round trips ({count})"),
            failures as f64,
        ));
    }
    let mut failures = 0usize;
    for _ in 0..count {
        let g = random_word(&mut rng, GroupTag::Psl2Z, 8).recompose();
        let h = random_word(&mut rng, GroupTag::Psl2Z, 8).recompose();
        let x = CosetRep::ALL[rng.gen_range(0..3)];
        let lhs = kappa(x, &g.mul(&h))?;
        let rhs = kappa(x, &g)?.mul(&kappa(coset_times(x, &g)?, &h)?);
        if lhs != rhs {
            failures += 1;
        }
    }
    rows.push(ReportRow::new(
        format!("kappa cocycle relation ({count})"),
        failures as f64,
    ));
    Ok(CheckReport::from_rows("group words", 0.0, rows))
}

/// Relations of the cocycles on Γ₀*(4) and H(2) and the coset values of π_f(U).
pub fn check_cocycle(forms: &SuiteForms, cfg: &SuiteConfig) -> Result<CheckReport> {
    let f = forms.f.form();
    let p = KernelParams::new(f.weight_times_two, f.level, cfg.a)?;
    let pa = period_polynomial_from_lvalues(&forms.f, &p)?;
    let star = CocycleOnGenerators::from_period_polynomial(&pa, Character::for_weight(f.weight_times_two))?;
    let theta = CocycleOnGenerators::theta_from_period_polynomial(&pa)?;
    let pi_u = pi_u_vector(&pa)?;
    Ok(CheckReport::merge(
        "cocycle",
        vec![
            star.check_relations(cfg.tolerances.cocycle_relations)?,
            theta.check_relations(cfg.tolerances.cocycle_relations)?,
            check_coset_identities(&pa, &pi_u, cfg.tolerances.coset_identities),
        ],
    ))
}

pub fn check_pi_u_membership(forms: &SuiteForms, cfg: &SuiteConfig) -> Result<CheckReport> {
    let f = forms.f.form();
    let p = KernelParams::new(f.weight_times_two, f.level, cfg.a)?;
    let pa = period_polynomial_from_lvalues(&forms.f, &p)?;
    check_w_membership(&pi_u_vector(&pa)?, cfg.tolerances.w_membership)
}

fn equations_report(name: &str, sol: &LiftSolution, tol: f64) -> CheckReport {
    let mut rows: Vec<ReportRow> = sol
        .equations
        .iter()
        .map(|e| {
            ReportRow::compare(
                format!("n = {}", e.n),
                crate::report::unpair(e.lhs),
                crate::report::unpair(e.rhs),
                e.residual,
            )
        })
        .collect();
    rows.push(ReportRow::new("relative residual norm", sol.residual_norm));
    CheckReport::from_rows(name, tol, rows)
}

fn accept_inconsistent(r: Result<LiftSolution>) -> Result<LiftSolution> {
    match r {
        Err(Error::Inconsistent { solution, .. }) => Ok(*solution),
        other => other,
    }
}

/// The pair lift of f against the basis form, and recovery of known coordinates from
/// a synthesized right-hand side.
pub fn check_lift_pair(forms: &SuiteForms, cfg: &SuiteConfig) -> Result<(CheckReport, LiftSolution)> {
    let basis = [forms.g.clone()];
    let sol = accept_inconsistent(solve_lift_pair(&forms.f, cfg.a, &basis, &basis, cfg.tolerances.lift))?;
    let equations = equations_report("pair equations", &sol, cfg.tolerances.lift);
    let mut sys = pair_system(&forms.f, cfg.a, &basis, &basis)?;
    let c = Complex64::new(0.7, -0.2);
    let d = Complex64::new(-1.3, 0.4);
    sys.rhs = sys.synthesize(&[c], &[d])?;
    let known = accept_inconsistent(solve_system(&sys, cfg.tolerances.synthesis))?;
    let synthesis = CheckReport::from_rows(
        "synthesis recovery",
        cfg.tolerances.synthesis,
        vec![
            ReportRow::compare("g coordinate", known.g()[0], c, (known.g()[0] - c).norm()),
            ReportRow::compare("h coordinate", known.h()[0], d, (known.h()[0] - d).norm()),
        ],
    );
    Ok((CheckReport::merge("pair lift", vec![equations, synthesis]), sol))
}

/// The odd lift, its check against the periods of c·η(z)^{12}, and the s-coefficients.
pub fn check_lift_odd(forms: &SuiteForms, cfg: &SuiteConfig) -> Result<CheckReport> {
    let tol = cfg.tolerances.odd_lift;
    let basis = [forms.g.clone()];
    let sol = accept_inconsistent(solve_lift_odd(&forms.f, cfg.a, &basis, tol))?;
    let equations = equations_report("odd equations", &sol, tol);
    let c = sol.g()[0];
    let eta12 = theta_lift_basis(cfg.truncation)?;
    let g1 = FnForm {
        weight_times_two: eta12.weight_times_two,
        f: |z: Complex64| c * eta12.value(z),
    };
    let basic = verify_basic(&forms.f, cfg.a, &g1, tol, &cfg.precision)?;
    let f = forms.f.form();
    let p = KernelParams::new(f.weight_times_two, f.level, cfg.a)?;
    let pa = period_polynomial_from_lvalues(&forms.f, &p)?;
    let minus = pi_u_vector(&pa)?.minus_part()?;
    let s = check_s_coefficients(&forms.f, cfg.a, &minus, tol)?;
    Ok(CheckReport::merge("odd lift", vec![equations, basic, s]))
}

pub const KR_SAMPLES: [(f64, f64); 3] = [(0.0, 0.5), (1.0 / 3.0, 1.0), (0.0, 2.0)];

pub fn check_kreich(forms: &SuiteForms, cfg: &SuiteConfig) -> Result<CheckReport> {
    let ev = KREvaluator::new(forms.f.form().clone(), cfg.truncation.min(forms.f.form().truncation()))?;
    let zs: Vec<Complex64> = KR_SAMPLES.iter().map(|&(x, y)| Complex64::new(x, y)).collect();
    verify_kreich(&ev, &zs, cfg.tolerances.kreich)
}

pub fn check_kr_integral(forms: &SuiteForms, cfg: &SuiteConfig) -> Result<CheckReport> {
    let ev = KREvaluator::new(forms.f.form().clone(), cfg.truncation.min(forms.f.form().truncation()))?;
    let prec = cfg.precision.with_abs_tol(cfg.precision.target_abs_tol.max(1e-9));
    kr_integral_representation(&ev, Complex64::new(0.0, 1.0), cfg.tolerances.kr_integral, &prec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trips_and_fills_defaults() {
        let cfg = SuiteConfig::default();
        let json = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<SuiteConfig>(&json).unwrap(), cfg);
        let partial: SuiteConfig =
            serde_json::from_str(r#"{"seed": 7, "a": "9/2", "tolerances": {"lift": 0.5}}"#).unwrap();
        assert_eq!(partial.seed, 7);
        assert_eq!(partial.a, Rational64::new(9, 2));
        assert_eq!(partial.tolerances.lift, 0.5);
        assert_eq!(partial.tolerances.kreich, 1e-5);
        let bad = Tolerances {
            eichler: 0.0,
            ..Tolerances::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn sample_grid_is_seeded() {
        assert_eq!(sample_grid(4, 3), sample_grid(4, 3));
        assert_ne!(sample_grid(4, 3), sample_grid(4, 4));
        assert!(sample_grid(50, 0)
            .iter()
            .all(|z| z.re.abs() <= 0.5 && (0.5..=2.0).contains(&z.im)));
    }

    #[test]
    fn cheap_checks_pass() {
        let forms = SuiteForms::bundled(DEFAULT_TRUNCATION).unwrap();
        let cfg = SuiteConfig {
            words: 100,
            ..SuiteConfig::default()
        };
        for id in [
            CheckId::GammaRecurrence,
            CheckId::Fe,
            CheckId::Transf,
            CheckId::Words,
            CheckId::Specialization,
            CheckId::Kreich,
        ] {
            let r = run_check(id, &forms, &cfg).unwrap();
            assert!(r.report.passed, "{}: {:?}", id.name(), r.report.rows);
        }
    }

    #[test]
    fn checks_keep_their_order() {
        let forms = SuiteForms::bundled(DEFAULT_TRUNCATION).unwrap();
        let cfg = SuiteConfig::default();
        let ids = [CheckId::Specialization, CheckId::GammaRecurrence];
        let out = run_checks(&ids, &forms, &cfg);
        assert_eq!(out.iter().map(|(id, _)| *id).collect::<Vec<_>>(), ids);
    }
}
