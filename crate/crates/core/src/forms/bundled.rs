use super::{validate_form, EtaQuotient, FormStatus, FourierExpansion};
use crate::error::{Error, Result};

pub const DEFAULT_TRUNCATION: usize = 300;

const VALIDATION_TOL: f64 = 1e-10;

/// η(z)^{−2} η(2z)^{17} η(4z)^{−2}: weight 13/2, level 4, Fricke eigenvalue 1.
pub fn half_integral_eta() -> EtaQuotient {
    EtaQuotient::new(4, &[(1, -2), (2, 17), (4, -2)]).expect("static exponents")
}

/// η(2z)^{12}: weight 6, level 4, Fricke eigenvalue 1.
pub fn integral_eta() -> EtaQuotient {
    EtaQuotient::new(4, &[(2, 12)]).expect("static exponents")
}

fn ensure_validated(f: &mut FourierExpansion) -> Result<()> {
    let report = validate_form(f, VALIDATION_TOL)?;
    if f.status != FormStatus::Validated {
        let worst = report
            .rows
            .iter()
            .max_by(|a, b| a.residual.total_cmp(&b.residual))
            .map(|r| r.label.clone())
            .unwrap_or_default();
        return Err(Error::Invariant(format!(
            "bundled form {} failed validation (max residual {:e} at {worst})",
            f.label, report.max_residual
        )));
    }
    Ok(())
}

fn build(q: &EtaQuotient, label: &str, m: usize) -> Result<FourierExpansion> {
    let mut f = q
        .expansion(m)?
        .with_label(label)
        .with_source(format!("eta-quotient:{q}"));
    ensure_validated(&mut f)?;
    Ok(f)
}

/// The bundled weight 13/2 and weight 6 forms, validated, truncated at m.
pub fn bundled_forms(m: usize) -> Result<Vec<FourierExpansion>> {
    Ok(vec![
        build(&half_integral_eta(), "f13", m)?,
        build(&integral_eta(), "g6", m)?,
    ])
}

/// η(z)^{12} = g(z/2) as a width-2 expansion on the theta group.
///
/// It transforms under T² and S with g₁(−1/z) = (−iz)^6 g₁(z), so it is stored
/// with level 1 and Fricke eigenvalue 1.
pub fn theta_lift_basis(m: usize) -> Result<FourierExpansion> {
    let mut g1 = integral_eta().expansion(m)?.stretch(2)?.with_label("g6_theta");
    g1.source = "eta-quotient:eta(z)^12".into();
    ensure_validated(&mut g1)?;
    Ok(g1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{check_modularity, modularity_generators, Evaluate};
    use num_complex::Complex64;

    #[test]
    fn bundled_forms_validate() {
        let forms = bundled_forms(DEFAULT_TRUNCATION).unwrap();
        assert_eq!(forms[0].weight_times_two, 13);
        assert_eq!(forms[1].weight_times_two, 12);
        for f in &forms {
            assert_eq!(f.status, FormStatus::Validated);
            assert_eq!(f.fricke_eigenvalue, Some(Complex64::new(1.0, 0.0)));
        }
    }

    #[test]
    fn theta_basis_is_eta_twelve() {
        let g1 = theta_lift_basis(120).unwrap();
        assert_eq!(g1.level, 1);
        let z = Complex64::new(0.13, 0.8);
        let direct = crate::forms::dedekind_eta(z).unwrap().powi(12);
        assert!((g1.value(z) - direct).norm() < 1e-13 * direct.norm());
    }

    #[test]
    fn wrong_weight_fails_modularity() {
        let mut f = half_integral_eta().expansion(200).unwrap();
        f.weight_times_two = 11;
        let gens = modularity_generators(4, f.cusp_width).unwrap();
        assert!(!check_modularity(&f, &gens, 1e-8).unwrap().passed);
    }
}
