use halfint_core::error::Error;
use halfint_core::forms::{bundled_forms, theta_lift_basis, EtaQuotient, FnForm, DEFAULT_TRUNCATION};
use halfint_core::lift::{
    check_s_coefficients, corollary_ratio, odd_system, pair_system, pi_u_vector, solve_lift_odd, solve_lift_pair,
    solve_system, verify_basic, LiftSolution,
};
use halfint_core::lseries::LSeriesEvaluator;
use halfint_core::period::{period_polynomial_from_lvalues, KernelParams};
use halfint_core::special::Precision;
use halfint_core::Complex64;
use num_rational::Rational64;
use proptest::prelude::*;

fn evs() -> (LSeriesEvaluator, LSeriesEvaluator) {
    let mut forms = bundled_forms(DEFAULT_TRUNCATION).unwrap();
    let g = LSeriesEvaluator::new(forms.remove(1)).unwrap();
    let f = LSeriesEvaluator::new(forms.remove(0)).unwrap();
    (f, g)
}

fn unwrap_solution(r: Result<LiftSolution, Error>) -> LiftSolution {
    match r {
        Ok(s) => s,
        Err(Error::Inconsistent { solution, .. }) => *solution,
        Err(e) => panic!("unexpected error {e}"),
    }
}

#[test]
fn pair_solution_reports_every_equation() {
    let (f, g) = evs();
    let a = Rational64::new(17, 4);
    let sol = unwrap_solution(solve_lift_pair(
        &f,
        a,
        std::slice::from_ref(&g),
        std::slice::from_ref(&g),
        1e-6,
    ));
    assert_eq!(sol.equations.len(), 5);
    assert_eq!(sol.rank, 2);
    assert!(!sol.underdetermined);
    assert!(sol.condition_estimate.is_finite());
    let json = serde_json::to_string(&sol).unwrap();
    let back: LiftSolution = serde_json::from_str(&json).unwrap();
    assert_eq!(back, sol);
    for key in [
        "g_coords",
        "h_coords",
        "residual_norm",
        "rank",
        "condition_estimate",
        "equations",
    ] {
        assert!(json.contains(key));
    }
}

#[test]
fn pair_system_rows_alternate_in_sign() {
    // with a single real-coefficient basis form the columns at n and n+2 are negatives
    // of each other up to the positive ratio C(D,n+2)Λ_g(k−n−7/2) / C(D,n)Λ_g(k−n−3/2)
    let (f, g) = evs();
    let sys = pair_system(
        &f,
        Rational64::new(17, 4),
        std::slice::from_ref(&g),
        std::slice::from_ref(&g),
    )
    .unwrap();
    for n in 0..3 {
        for j in 0..2 {
            let ratio = sys.matrix[(n + 2, j)] / sys.matrix[(n, j)];
            assert!(ratio.im.abs() < 1e-12 * ratio.norm());
            assert!(ratio.re < 0.0);
        }
    }
}

#[test]
fn odd_solution_shape() {
    let (f, g) = evs();
    let sys = odd_system(&f, Rational64::new(17, 4), std::slice::from_ref(&g)).unwrap();
    let sol = unwrap_solution(solve_system(&sys, 1e-6));
    assert_eq!(sol.equations.iter().map(|e| e.n).collect::<Vec<_>>(), vec![1, 3]);
    assert!(sol.h_coords.is_empty());
    let again = unwrap_solution(solve_lift_odd(&f, Rational64::new(17, 4), &[g], 1e-6));
    assert_eq!(again, sol);
}

#[test]
fn basic_check_runs_on_solved_form() {
    let (f, g) = evs();
    let a = Rational64::new(17, 4);
    let sol = unwrap_solution(solve_lift_odd(&f, a, &[g], 1e-6));
    let c = sol.g()[0];
    let eta = EtaQuotient::new(1, &[(1, 12)]).unwrap();
    let g1 = FnForm {
        weight_times_two: 12,
        f: |w: Complex64| c * halfint_core::forms::Evaluate::value(&eta, w),
    };
    let report = verify_basic(&f, a, &g1, 1e-6, &Precision::default()).unwrap();
    assert_eq!(report.rows.len(), 4);
    assert!(report.rows.iter().all(|r| r.residual.is_finite()));
}

#[test]
fn s_coefficients_agree_with_cocycle() {
    let (f, _) = evs();
    for a in [Rational64::new(17, 4), Rational64::new(9, 2)] {
        let p = KernelParams::new(13, 4, a).unwrap();
        let pa = period_polynomial_from_lvalues(&f, &p).unwrap();
        let minus = pi_u_vector(&pa).unwrap().minus_part().unwrap();
        assert!(check_s_coefficients(&f, a, &minus, 1e-10).unwrap().passed);
    }
}

#[test]
fn corollary_reports_all_rows() {
    let (f, g) = evs();
    let (lambda, report) = corollary_ratio(&f, &g, 1e-6).unwrap();
    assert!(lambda.norm().is_finite());
    assert_eq!(report.rows.len(), 5);
}

#[test]
fn theta_basis_lvalues_double() {
    let (_, g) = evs();
    let g1 = LSeriesEvaluator::new(theta_lift_basis(DEFAULT_TRUNCATION).unwrap()).unwrap();
    for s in [2.0, 3.0, 4.0] {
        let s = Complex64::new(s, 0.0);
        let a = g1.lambda_value(s).unwrap().value;
        let b = g.lambda_value(s).unwrap().value * 2f64.powf(s.re);
        assert!((a - b).norm() < 1e-8 * a.norm());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn lambda_is_linear(re in -3.0f64..3.0, im in -3.0f64..3.0, s in 1.0f64..5.5) {
        let (f, _) = evs();
        let c = Complex64::new(re, im);
        let cf = LSeriesEvaluator::new(f.form().scale(c)).unwrap();
        let s = Complex64::new(s, 0.0);
        let lhs = cf.lambda_value(s).unwrap().value;
        let rhs = c * f.lambda_value(s).unwrap().value;
        prop_assert!((lhs - rhs).norm() <= 1e-13 * rhs.norm().max(1e-300));
    }

    #[test]
    fn pair_solution_is_linear_in_f(scale in 0.1f64..10.0) {
        let (f, g) = evs();
        let a = Rational64::new(17, 4);
        let fs = LSeriesEvaluator::new(f.form().scale(Complex64::new(scale, 0.0))).unwrap();
        let one = unwrap_solution(solve_lift_pair(&f, a, std::slice::from_ref(&g), std::slice::from_ref(&g), f64::INFINITY));
        let many = unwrap_solution(solve_lift_pair(&fs, a, std::slice::from_ref(&g), std::slice::from_ref(&g), f64::INFINITY));
        for (x, y) in one.g().iter().chain(&one.h()).zip(many.g().iter().chain(&many.h())) {
            prop_assert!((y - x * scale).norm() <= 1e-10 * (x * scale).norm().max(1e-300));
        }
    }
}
