use halfint_core::cocycle::{check_coset_identities, check_w_membership, induced_pi, CocycleOnGenerators};
use halfint_core::forms::{bundled_forms, Character, DEFAULT_TRUNCATION};
use halfint_core::group::{CosetRep, Generator, GroupElement, GroupTag, Word};
use halfint_core::lseries::LSeriesEvaluator;
use halfint_core::period::{period_polynomial_from_lvalues, KernelParams, PeriodPolynomial};
use num_complex::Complex64;
use num_rational::Rational64;

fn period(a: Rational64) -> PeriodPolynomial {
    let f = bundled_forms(DEFAULT_TRUNCATION).unwrap().remove(0);
    let ev = LSeriesEvaluator::new(f).unwrap();
    let p = KernelParams::new(13, 4, a).unwrap();
    period_polynomial_from_lvalues(&ev, &p).unwrap()
}

#[test]
fn hat_polynomial_rescaling() {
    let pa = period(Rational64::new(17, 4));
    assert_eq!(pa.hat(), pa.poly);
    let mut p16 = pa.clone();
    p16.level = 16;
    let z = Complex64::i();
    let h = p16.hat();
    assert!((h.eval(z) - pa.eval(z * 0.5)).norm() < 1e-14 * pa.eval(z * 0.5).norm());
    for (j, (x, y)) in h.coeffs.iter().zip(&pa.poly.coeffs).enumerate() {
        assert!((x - y * 0.5f64.powi(j as i32)).norm() <= 1e-15 * y.norm());
    }
}

#[test]
fn gamma_star_cocycle_is_well_defined() {
    for a in [Rational64::new(17, 4), Rational64::new(9, 2)] {
        let pa = period(a);
        let cyc = CocycleOnGenerators::from_period_polynomial(&pa, Character::for_weight(13)).unwrap();
        let report = cyc.check_relations(1e-8).unwrap();
        assert!(report.passed, "a = {a}: {:?}", report.rows);
        let mut w = Word::empty(GroupTag::Gamma04Star);
        w.letters = vec![(Generator::W4, 1), (Generator::W4, 1)];
        assert!(cyc.eval_word(&w).unwrap().max_abs() < 1e-8);
    }
}

#[test]
fn theta_cocycle_coset_values() {
    let pa = period(Rational64::new(17, 4));
    let cyc = CocycleOnGenerators::theta_from_period_polynomial(&pa).unwrap();
    assert!(cyc.check_relations(1e-8).unwrap().passed);
    let pi_u = induced_pi(&cyc, &GroupElement::u()).unwrap();
    let report = check_coset_identities(&pa, &pi_u, 1e-10);
    assert!(report.passed, "{:?}", report.rows);
}

#[test]
fn induced_cocycle_on_translation() {
    // π(T) is determined by π′ through κ; report it for the record
    let pa = period(Rational64::new(17, 4));
    let cyc = CocycleOnGenerators::theta_from_period_polynomial(&pa).unwrap();
    let pi_t = induced_pi(&cyc, &GroupElement::t()).unwrap();
    let pi_s = induced_pi(&cyc, &GroupElement::s()).unwrap();
    let pi_u = induced_pi(&cyc, &GroupElement::u()).unwrap();
    // U = TS
    let rhs = pi_t.double_bar(&GroupElement::s()).unwrap().add(&pi_s);
    assert!(pi_u.sub(&rhs).max_abs() < 1e-10 * pi_u.max_abs());
}

#[test]
fn w_membership_defect_comes_from_translation() {
    // For any cocycle, π(U)||(S+1) = π(T)||(1+S) while π(U)||(U²+U+1) = 0.
    let pa = period(Rational64::new(17, 4));
    let cyc = CocycleOnGenerators::theta_from_period_polynomial(&pa).unwrap();
    let pi_u = induced_pi(&cyc, &GroupElement::u()).unwrap();
    let pi_t = induced_pi(&cyc, &GroupElement::t()).unwrap();
    let s = GroupElement::s();
    let defect = pi_u.double_bar(&s).unwrap().add(&pi_u);
    let via_t = pi_t.double_bar(&s).unwrap().add(&pi_t);
    assert!(defect.sub(&via_t).max_abs() < 1e-10 * defect.max_abs());
    let report = check_w_membership(&pi_u, 1e-8).unwrap();
    assert!(report.rows[1].residual < 1e-10);
    // π(T) vanishes on the cosets 1 and T only
    assert!(pi_t.get(CosetRep::One).is_zero());
    assert!(pi_t.get(CosetRep::T).is_zero());
    assert!(pi_t.get(CosetRep::U).coeff(4).norm() > 1e-3 * pi_t.max_abs());
}
