mod config;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use halfint_core::forms::{
    bundled_forms, eta_search, read_form_file, validate_form, write_form_file, FormFile, FormStatus, FourierExpansion,
};
use halfint_core::kr::{kr_integral_representation, kreich_rows, KREvaluator, KrRow, DEFECT_SIGN};
use halfint_core::lift::{corollary_ratio, solve_lift_odd, solve_lift_pair, LiftSolution};
use halfint_core::lseries::{LSeriesEvaluator, LValueRecord};
use halfint_core::period::{period_polynomial_from_lvalues, KernelParams};
use halfint_core::report::CheckReport;
use halfint_core::suite::{run_checks, CheckId, SuiteConfig, SuiteForms, KR_SAMPLES};
use halfint_core::{Complex64, Error};
use num_rational::Rational64;
use serde::Serialize;

use config::RunConfig;
use output::{check_rows, summary_line, Artifacts};

pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_ACCURACY: u8 = 3;

#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Accuracy { .. } => EXIT_ACCURACY,
            Error::Inconsistent { .. } | Error::Indeterminate(_) => EXIT_FAIL,
            _ => EXIT_USAGE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "halfint",
    version,
    about = "L-values, period polynomials and lifts of half-integral weight cusp forms"
)]
struct Cli {
    /// JSON run configuration; flags given here override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for JSON and CSV artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Tolerance of the selected check.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Number of sample points for sampled checks.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Seed for randomized checks (default 0).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Form file of the half-integral weight form (bundled form if omitted).
    #[arg(long, global = true)]
    form: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List, search, validate and export forms.
    #[command(subcommand)]
    Forms(FormsCommand),
    /// Completed L-values Λ_f(s).
    Lvalue {
        /// Points s, e.g. 3.25 or 2+0.5i.
        #[arg(long = "s", required = false, num_args = 0..)]
        s: Vec<String>,
    },
    /// The period polynomial P_a.
    Period {
        /// Kernel parameter a as a rational, e.g. 17/4.
        #[arg(long)]
        a: String,
    },
    /// Numeric verification of the identities.
    Verify(VerifyArgs),
    /// Solve for the lift coordinates.
    Lift(LiftArgs),
    /// The incomplete-gamma Eichler function and its Fricke defect.
    Kr {
        /// Evaluation points (default i/2, 1/3 + i, 2i).
        #[arg(long, num_args = 1..)]
        z: Vec<String>,
        /// Also compare with the nested-integral representation at z = i.
        #[arg(long)]
        expensive: bool,
    },
}

#[derive(Subcommand)]
enum FormsCommand {
    /// The bundled forms.
    List,
    /// Holomorphic eta quotient cusp forms of a weight and level.
    EtaSearch {
        #[arg(long)]
        weight_times_two: i64,
        #[arg(long)]
        level: u64,
        #[arg(long, default_value_t = 24)]
        max_exponent: i64,
    },
    /// Run the modularity and Fricke checks and record the status in the file.
    Validate { path: PathBuf },
    /// Write the bundled forms as form files.
    Export,
}

#[derive(Args)]
struct VerifyArgs {
    /// fe, eich, transf, brug, cocycle, w-membership, kreich or all; the other
    /// suite checks are accepted by name as well.
    which: String,
    /// Basis form file for the lift checks.
    #[arg(long)]
    basis: Option<PathBuf>,
    /// Kernel parameter a (default from the config, 17/4).
    #[arg(long)]
    a: Option<String>,
    /// Include the nested-integral check of the Eichler function.
    #[arg(long)]
    expensive: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Pair,
    Odd,
}

#[derive(Args)]
struct LiftArgs {
    #[arg(long, value_enum)]
    mode: ModeArg,
    /// Kernel parameter a (default from the config, 17/4).
    #[arg(long)]
    a: Option<String>,
    /// Basis form files (bundled weight 6 form if omitted).
    #[arg(long, num_args = 1..)]
    basis: Vec<PathBuf>,
}

const ALL: [CheckId; 7] = [
    CheckId::Fe,
    CheckId::Eich,
    CheckId::Transf,
    CheckId::Brug,
    CheckId::Cocycle,
    CheckId::WMembership,
    CheckId::Kreich,
];

const NAMED: [CheckId; 16] = [
    CheckId::GammaRecurrence,
    CheckId::FormValidation,
    CheckId::Fe,
    CheckId::Transf,
    CheckId::Lval,
    CheckId::Eich,
    CheckId::Words,
    CheckId::Cocycle,
    CheckId::WMembership,
    CheckId::LiftPair,
    CheckId::LiftOdd,
    CheckId::Specialization,
    CheckId::Corollary,
    CheckId::Kreich,
    CheckId::KrIntegral,
    CheckId::Brug,
];

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn parse_rational(text: &str) -> Result<Rational64, CliError> {
    text.trim()
        .parse()
        .map_err(|e| CliError::usage(format!("cannot read {text:?} as a rational: {e}")))
}

fn parse_complex(text: &str) -> Result<Complex64, CliError> {
    text.trim()
        .parse()
        .map_err(|e| CliError::usage(format!("cannot read {text:?} as a complex number: {e}")))
}

/// Loads a form file, refusing anything that has not passed validation.
fn load_validated(path: &Path) -> Result<FourierExpansion, CliError> {
    let f = read_form_file(path)?;
    match f.status {
        FormStatus::Validated => Ok(f),
        FormStatus::Unvalidated => Err(CliError::usage(format!(
            "{} has not been validated; run `halfint forms validate {}` first",
            path.display(),
            path.display()
        ))),
        FormStatus::Rejected => Err(CliError::usage(format!(
            "{} failed validation and cannot be used",
            path.display()
        ))),
    }
}

struct Context {
    cfg: RunConfig,
    tol: Option<f64>,
}

impl Context {
    fn new(cli: &Cli) -> Result<Self, CliError> {
        let mut cfg = match &cli.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(o) = &cli.out {
            cfg.out = Some(o.clone());
        }
        if let Some(s) = cli.samples {
            cfg.suite.samples = s;
        }
        if let Some(s) = cli.seed {
            cfg.suite.seed = s;
        }
        if let Some(f) = &cli.form {
            cfg.form = Some(f.clone());
        }
        if let Some(t) = cli.tol {
            if !(t > 0.0) {
                return Err(CliError::usage("--tol must be positive"));
            }
        }
        cfg.check()?;
        Ok(Context { cfg, tol: cli.tol })
    }

    fn suite(&self) -> &SuiteConfig {
        &self.cfg.suite
    }

    fn bundled(&self) -> Result<Vec<FourierExpansion>, CliError> {
        Ok(bundled_forms(self.suite().truncation)?)
    }

    fn half_form(&self) -> Result<FourierExpansion, CliError> {
        match &self.cfg.form {
            Some(p) => load_validated(p),
            None => Ok(self.bundled()?.remove(0)),
        }
    }

    fn basis(&self, extra: &[PathBuf]) -> Result<Vec<LSeriesEvaluator>, CliError> {
        let paths: Vec<PathBuf> = if extra.is_empty() {
            self.cfg.basis.clone()
        } else {
            extra.to_vec()
        };
        if paths.is_empty() {
            return Ok(vec![LSeriesEvaluator::new(self.bundled()?.remove(1))?]);
        }
        paths
            .iter()
            .map(|p| Ok(LSeriesEvaluator::new(load_validated(p)?)?))
            .collect()
    }

    fn artifacts(&self) -> Result<Artifacts, CliError> {
        Artifacts::new(&self.cfg.out_dir())
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let ctx = Context::new(&cli)?;
    match cli.command {
        Command::Forms(c) => cmd_forms(&ctx, c),
        Command::Lvalue { s } => cmd_lvalue(&ctx, &s),
        Command::Period { a } => cmd_period(&ctx, &a),
        Command::Verify(v) => cmd_verify(&ctx, v),
        Command::Lift(l) => cmd_lift(&ctx, l),
        Command::Kr { z, expensive } => cmd_kr(&ctx, &z, expensive),
    }
}

#[derive(Serialize)]
struct FormSummary {
    label: String,
    weight_times_two: i64,
    level: u64,
    cusp_width: String,
    truncation: usize,
    source: String,
    status: FormStatus,
}

impl From<&FourierExpansion> for FormSummary {
    fn from(f: &FourierExpansion) -> Self {
        FormSummary {
            label: f.label.clone(),
            weight_times_two: f.weight_times_two,
            level: f.level,
            cusp_width: f.cusp_width.to_string(),
            truncation: f.truncation(),
            source: f.source.clone(),
            status: f.status,
        }
    }
}

#[derive(Serialize)]
struct EtaRow {
    level: u64,
    weight_times_two: i64,
    exponents: String,
    name: String,
}

fn cmd_forms(ctx: &Context, c: FormsCommand) -> Result<u8, CliError> {
    match c {
        FormsCommand::List => {
            let rows: Vec<FormSummary> = ctx.bundled()?.iter().map(FormSummary::from).collect();
            for r in &rows {
                println!(
                    "{:<10} 2k = {:<3} N = {:<3} {:<10} {}",
                    r.label,
                    r.weight_times_two,
                    r.level,
                    format!("{:?}", r.status),
                    r.source
                );
            }
            let mut out = ctx.artifacts()?;
            out.json("forms-list", &rows)?;
            out.csv("forms-list", &rows)?;
            Ok(0)
        }
        FormsCommand::EtaSearch {
            weight_times_two,
            level,
            max_exponent,
        } => {
            if level % 4 != 0 {
                return Err(CliError::usage(format!("eta search needs 4 | level, got {level}")));
            }
            let found = eta_search(level, weight_times_two, max_exponent)?;
            let rows: Vec<EtaRow> = found
                .iter()
                .map(|q| EtaRow {
                    level: q.level,
                    weight_times_two,
                    exponents: q
                        .exponents
                        .iter()
                        .map(|(d, r)| format!("{d}:{r}"))
                        .collect::<Vec<_>>()
                        .join(" "),
                    name: q.to_string(),
                })
                .collect();
            for r in &rows {
                println!("{}", r.name);
            }
            println!("{} candidates", rows.len());
            let mut out = ctx.artifacts()?;
            out.json("eta-search", &found)?;
            out.csv("eta-search", &rows)?;
            Ok(0)
        }
        FormsCommand::Validate { path } => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
            let file = FormFile::from_json(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
            let mut f = file.to_expansion()?;
            let tol = ctx.tol.unwrap_or(ctx.suite().tolerances.validation);
            let report = validate_form(&mut f, tol)?;
            write_form_file(&path, &f)?;
            println!("{}", summary_line(&report));
            println!("status of {} is now {:?}", path.display(), f.status);
            let mut out = ctx.artifacts()?;
            out.json("validate", &report)?;
            out.csv("validate", &check_rows(std::slice::from_ref(&report)))?;
            Ok(if report.passed { 0 } else { EXIT_FAIL })
        }
        FormsCommand::Export => {
            let dir = ctx.cfg.out_dir();
            std::fs::create_dir_all(&dir).map_err(|e| CliError::usage(e.to_string()))?;
            for f in ctx.bundled()? {
                let path = dir.join(format!("{}.json", f.label));
                write_form_file(&path, &f)?;
                println!("wrote {}", path.display());
            }
            Ok(0)
        }
    }
}

#[derive(Serialize)]
struct LValueCsv {
    s_re: f64,
    s_im: f64,
    lambda_re: f64,
    lambda_im: f64,
    abs_err_bound: f64,
}

fn cmd_lvalue(ctx: &Context, s_list: &[String]) -> Result<u8, CliError> {
    let ev = LSeriesEvaluator::new(ctx.half_form()?)?;
    let points = s_list.iter().map(|s| parse_complex(s)).collect::<Result<Vec<_>, _>>()?;
    let mut records = Vec::new();
    for s in points {
        let v = ev.lambda_value(s)?;
        println!("Λ({s}) = {} ± {:.1e}", v.value, v.abs_err_bound);
        records.push(LValueRecord::new(s, v));
    }
    let rows: Vec<LValueCsv> = records
        .iter()
        .map(|r| LValueCsv {
            s_re: r.s[0],
            s_im: r.s[1],
            lambda_re: r.lambda[0],
            lambda_im: r.lambda[1],
            abs_err_bound: r.abs_err_bound,
        })
        .collect();
    let mut out = ctx.artifacts()?;
    out.json("lvalue", &records)?;
    out.csv("lvalue", &rows)?;
    Ok(0)
}

#[derive(Serialize)]
struct CoefficientCsv {
    n: usize,
    re: f64,
    im: f64,
}

fn cmd_period(ctx: &Context, a: &str) -> Result<u8, CliError> {
    let a = parse_rational(a)?;
    let f = ctx.half_form()?;
    let p = KernelParams::new(f.weight_times_two, f.level, a)?;
    let ev = LSeriesEvaluator::new(f)?;
    let pa = period_polynomial_from_lvalues(&ev, &p)?;
    println!("P_{a}(z) = {}", pa.poly);
    let rows: Vec<CoefficientCsv> = pa
        .poly
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| CoefficientCsv { n, re: c.re, im: c.im })
        .collect();
    let mut out = ctx.artifacts()?;
    out.json("period", &pa.to_record())?;
    out.csv("period", &rows)?;
    Ok(0)
}

fn check_by_name(name: &str) -> Option<CheckId> {
    NAMED.iter().copied().find(|c| c.name() == name)
}

/// Replaces the main tolerance of a check by `tol`.
fn override_tol(cfg: &mut SuiteConfig, id: CheckId, tol: f64) {
    let t = &mut cfg.tolerances;
    match id {
        CheckId::GammaRecurrence => t.gamma_recurrence = tol,
        CheckId::FormValidation => t.validation = tol,
        CheckId::Fe => t.functional_equation = tol,
        CheckId::Transf => t.kernel_symmetry = tol,
        CheckId::Lval => t.lvalue_quadrature = tol,
        CheckId::Eich => t.eichler = tol,
        CheckId::Words => {}
        CheckId::Cocycle => t.cocycle_relations = tol,
        CheckId::WMembership => t.w_membership = tol,
        CheckId::LiftPair | CheckId::Corollary => t.lift = tol,
        CheckId::LiftOdd => t.odd_lift = tol,
        CheckId::Specialization => t.specialization = tol,
        CheckId::Kreich => t.kreich = tol,
        CheckId::KrIntegral => t.kr_integral = tol,
        CheckId::Brug => t.remainder_factor = tol,
    }
}

#[derive(Serialize)]
struct VerifyArtifact<'a> {
    which: &'a str,
    seed: u64,
    passed: bool,
    config: &'a SuiteConfig,
    reports: &'a [CheckReport],
    errors: Vec<String>,
}

fn cmd_verify(ctx: &Context, v: VerifyArgs) -> Result<u8, CliError> {
    let mut ids: Vec<CheckId> = if v.which == "all" {
        ALL.to_vec()
    } else {
        vec![check_by_name(&v.which).ok_or_else(|| {
            let names: Vec<&str> = NAMED.iter().map(|c| c.name()).collect();
            CliError::usage(format!(
                "unknown check {:?}; expected all or one of {}",
                v.which,
                names.join(", ")
            ))
        })?]
    };
    if v.expensive && !ids.contains(&CheckId::KrIntegral) {
        ids.push(CheckId::KrIntegral);
    }
    let mut cfg = ctx.suite().clone();
    if let Some(a) = &v.a {
        cfg.a = parse_rational(a)?;
    }
    if let Some(t) = ctx.tol {
        for &id in &ids {
            override_tol(&mut cfg, id, t);
        }
    }
    let basis = match &v.basis {
        Some(p) => vec![p.clone()],
        None => Vec::new(),
    };
    let forms = SuiteForms {
        f: LSeriesEvaluator::new(ctx.half_form()?)?,
        g: ctx.basis(&basis)?.remove(0),
    };
    let results = run_checks(&ids, &forms, &cfg);
    let mut reports = Vec::new();
    let mut errors = Vec::new();
    let mut code = 0u8;
    for (id, r) in results {
        match r {
            Ok(t) => {
                println!("{}  [{:.2}s]", summary_line(&t.report), t.seconds);
                if !t.report.passed {
                    code = code.max(EXIT_FAIL);
                }
                reports.push(t.report);
            }
            Err(e) => {
                let e = CliError::from(e);
                println!("ERR  {:<40} {}", id.name(), e.message);
                code = code.max(e.code);
                errors.push(format!("{}: {}", id.name(), e.message));
            }
        }
    }
    let stem = format!("verify-{}", v.which);
    let mut out = ctx.artifacts()?;
    out.json(
        &stem,
        &VerifyArtifact {
            which: &v.which,
            seed: cfg.seed,
            passed: code == 0,
            config: &cfg,
            reports: &reports,
            errors,
        },
    )?;
    out.csv(&stem, &check_rows(&reports))?;
    Ok(code)
}

#[derive(Serialize)]
struct EquationCsv {
    n: usize,
    lhs_re: f64,
    lhs_im: f64,
    rhs_re: f64,
    rhs_im: f64,
    residual: f64,
}

fn cmd_lift(ctx: &Context, l: LiftArgs) -> Result<u8, CliError> {
    let f = LSeriesEvaluator::new(ctx.half_form()?)?;
    let basis = ctx.basis(&l.basis)?;
    let a = match &l.a {
        Some(a) => parse_rational(a)?,
        None => ctx.suite().a,
    };
    let tol = ctx.tol.unwrap_or(match l.mode {
        ModeArg::Pair => ctx.suite().tolerances.lift,
        ModeArg::Odd => ctx.suite().tolerances.odd_lift,
    });
    let (stem, result) = match l.mode {
        ModeArg::Pair => ("lift-pair", solve_lift_pair(&f, a, &basis, &basis, tol)),
        ModeArg::Odd => ("lift-odd", solve_lift_odd(&f, a, &basis, tol)),
    };
    let (solution, code): (LiftSolution, u8) = match result {
        Ok(s) => (s, 0),
        Err(Error::Inconsistent { solution, .. }) => (*solution, EXIT_FAIL),
        Err(e) => return Err(e.into()),
    };
    println!(
        "{} lift: residual {:.3e} (tol {tol:.1e}), rank {}, condition {:.3e}",
        stem, solution.residual_norm, solution.rank, solution.condition_estimate
    );
    for (i, c) in solution.g().iter().enumerate() {
        println!("  g[{i}] = {c}");
    }
    for (i, c) in solution.h().iter().enumerate() {
        println!("  h[{i}] = {c}");
    }
    let mut out = ctx.artifacts()?;
    out.json(stem, &solution)?;
    let rows: Vec<EquationCsv> = solution
        .equations
        .iter()
        .map(|e| EquationCsv {
            n: e.n,
            lhs_re: e.lhs[0],
            lhs_im: e.lhs[1],
            rhs_re: e.rhs[0],
            rhs_im: e.rhs[1],
            residual: e.residual,
        })
        .collect();
    out.csv(stem, &rows)?;
    let mut code = code;
    if matches!(l.mode, ModeArg::Pair) && basis.len() == 1 {
        let (lambda, report) = corollary_ratio(&f, &basis[0], tol)?;
        println!("{}  ratio λ = {lambda}", summary_line(&report));
        out.json("lift-pair-corollary", &report)?;
        if !report.passed {
            code = EXIT_FAIL;
        }
    }
    Ok(code)
}

#[derive(Serialize)]
struct KrArtifact {
    rows: Vec<KrRow>,
    tol: f64,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    integral: Option<CheckReport>,
}

#[derive(Serialize)]
struct KrCsv {
    z_re: f64,
    z_im: f64,
    lhs_re: f64,
    lhs_im: f64,
    rhs_re: f64,
    rhs_im: f64,
    rel_residual: f64,
}

fn cmd_kr(ctx: &Context, z: &[String], expensive: bool) -> Result<u8, CliError> {
    let f = ctx.half_form()?;
    let ev = KREvaluator::new(f.clone(), ctx.suite().truncation.min(f.truncation()))?;
    let zs: Vec<Complex64> = if z.is_empty() {
        KR_SAMPLES.iter().map(|&(x, y)| Complex64::new(x, y)).collect()
    } else {
        z.iter().map(|s| parse_complex(s)).collect::<Result<_, _>>()?
    };
    let tol = ctx.tol.unwrap_or(ctx.suite().tolerances.kreich);
    let rows = kreich_rows(&ev, &zs, DEFECT_SIGN)?;
    let mut passed = true;
    for r in &rows {
        println!(
            "z = {:<24} defect {:<44} L-value sum {:<44} rel {:.3e}",
            halfint_core::report::unpair(r.z).to_string(),
            halfint_core::report::unpair(r.lhs).to_string(),
            halfint_core::report::unpair(r.rhs).to_string(),
            r.rel_residual
        );
        passed &= r.rel_residual <= tol;
    }
    let integral = if expensive {
        let prec = ctx
            .suite()
            .precision
            .with_abs_tol(ctx.suite().precision.target_abs_tol.max(1e-9));
        let report =
            kr_integral_representation(&ev, Complex64::new(0.0, 1.0), ctx.suite().tolerances.kr_integral, &prec)?;
        println!("{}", summary_line(&report));
        passed &= report.passed;
        Some(report)
    } else {
        None
    };
    let csv: Vec<KrCsv> = rows
        .iter()
        .map(|r| KrCsv {
            z_re: r.z[0],
            z_im: r.z[1],
            lhs_re: r.lhs[0],
            lhs_im: r.lhs[1],
            rhs_re: r.rhs[0],
            rhs_im: r.rhs[1],
            rel_residual: r.rel_residual,
        })
        .collect();
    let mut out = ctx.artifacts()?;
    out.json(
        "kr",
        &KrArtifact {
            rows,
            tol,
            passed,
            integral,
        },
    )?;
    out.csv("kr", &csv)?;
    Ok(if passed { 0 } else { EXIT_FAIL })
}
