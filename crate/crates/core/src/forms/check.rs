use num_complex::Complex64;
use num_rational::Rational64;

use super::{slash_function, Evaluate, FormStatus, FourierExpansion, SeriesOnly};
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::report::{rel_dev, CheckReport, ReportRow};
use crate::special::cpowf;

/// Fixed sample points in the box |Re z| ≤ 1/2, 1/2 ≤ Im z ≤ 2.
pub fn sample_points() -> Vec<Complex64> {
    [
        (-0.41, 0.5),
        (-0.17, 0.63),
        (0.05, 0.5),
        (0.29, 0.77),
        (0.46, 1.0),
        (-0.33, 1.2),
        (0.12, 1.55),
        (-0.02, 2.0),
        (0.37, 0.9),
        (-0.48, 1.7),
    ]
    .iter()
    .map(|&(x, y)| Complex64::new(x, y))
    .collect()
}

/// Group elements whose invariance is tested for a form of the given type.
///
/// Width 1 and 4 | N: T, (1, 0; N, 1), (−1, 0; N, −1) and (N−1, N−2; N, N−1), the
/// last two with d ≡ 3 (mod 4) so the ε_d factor is exercised. Width 2 and level 1
/// (theta group): T² here, with S covered by the Fricke check since
/// η(z)^{12}|S = −η(z)^{12} under the plain integral slash.
pub fn modularity_generators(level: u64, cusp_width: Rational64) -> Result<Vec<GroupElement>> {
    let n = level as i64;
    if cusp_width == Rational64::from_integer(1) && level % 4 == 0 {
        Ok(vec![
            GroupElement::t(),
            GroupElement::new(1, 0, n, 1)?,
            GroupElement::new(-1, 0, n, -1)?,
            GroupElement::new(n - 1, n - 2, n, n - 1)?,
        ])
    } else if cusp_width == Rational64::from_integer(2) && level == 1 {
        Ok(vec![GroupElement::t().pow(2)])
    } else if cusp_width == Rational64::from_integer(1) {
        Ok(vec![GroupElement::t(), GroupElement::new(1, 0, n, 1)?])
    } else {
        Err(Error::Unsupported(format!(
            "no generator set for level {level} with cusp width {cusp_width}"
        )))
    }
}

/// Maximum relative deviation of f|γ from f over the sample points, per γ.
pub fn check_modularity(f: &FourierExpansion, gammas: &[GroupElement], tol: f64) -> Result<CheckReport> {
    let series = SeriesOnly(f);
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for gamma in gammas {
        let slashed = slash_function(&series, gamma, f.weight_times_two, f.level)?;
        for z in sample_points() {
            let lhs = slashed.value(z);
            let rhs = series.value(z);
            let gz = gamma.act(z);
            let tail = f.tail_bound(gz.im);
            let scale = f.series_value(gz).norm();
            if tail > 1e-3 * tol * scale {
                warnings.push(format!("tail bound {tail:e} at γz = {gz} for γ = {gamma}"));
            }
            rows.push(ReportRow::compare(
                format!("{gamma} at {z}"),
                lhs,
                rhs,
                rel_dev(lhs, rhs, 1e-300),
            ));
        }
    }
    Ok(CheckReport::from_rows(format!("modularity of {}", f.label), tol, rows).with_warnings(warnings))
}

/// Checks f(−1/(Nz)) = ε (−i√N z)^k f(z) on the sample points, series only.
pub fn check_fricke(f: &FourierExpansion, tol: f64) -> Result<CheckReport> {
    let eps = f
        .fricke_eigenvalue
        .ok_or_else(|| Error::domain(format!("{} has no Fricke eigenvalue", f.label)))?;
    let n = f.level as f64;
    let mut rows = Vec::new();
    for z in sample_points() {
        let lhs = f.series_value(-1.0 / (n * z));
        let rhs = eps * cpowf(Complex64::new(0.0, -n.sqrt()) * z, f.weight()) * f.series_value(z);
        rows.push(ReportRow::compare(
            format!("z = {z}"),
            lhs,
            rhs,
            rel_dev(lhs, rhs, 1e-300),
        ));
    }
    Ok(CheckReport::from_rows(
        format!("Fricke relation of {}", f.label),
        tol,
        rows,
    ))
}

/// Runs the modularity and Fricke checks and records the verdict on the form.
pub fn validate_form(f: &mut FourierExpansion, tol: f64) -> Result<CheckReport> {
    let gens = modularity_generators(f.level, f.cusp_width)?;
    let mut parts = vec![check_modularity(f, &gens, tol)?];
    if f.fricke_eigenvalue.is_some() {
        parts.push(check_fricke(f, tol)?);
    }
    let report = CheckReport::merge(format!("validation of {}", f.label), parts);
    f.status = if report.passed {
        FormStatus::Validated
    } else {
        FormStatus::Rejected
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::EtaQuotient;

    #[test]
    fn samples_in_box() {
        for z in sample_points() {
            assert!(z.re.abs() <= 0.5 && (0.5..=2.0).contains(&z.im));
        }
    }

    #[test]
    fn level_four_generators_in_gamma0() {
        for g in modularity_generators(4, Rational64::from_integer(1)).unwrap() {
            assert!(g.in_gamma0(4));
        }
        assert!(modularity_generators(4, Rational64::new(1, 3)).is_err());
    }

    #[test]
    fn perturbed_coefficient_is_rejected() {
        let mut f = EtaQuotient::new(4, &[(2, 12)]).unwrap().expansion(200).unwrap();
        let a3 = f.coefficient(3);
        f.set_coefficient(3, a3 + 1e-3).unwrap();
        let r = validate_form(&mut f, 1e-10).unwrap();
        assert!(!r.passed);
        assert_eq!(f.status, FormStatus::Rejected);
    }
}
