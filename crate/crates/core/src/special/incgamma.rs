use num_complex::Complex64;

use super::gamma::{gamma_complex, gamma_real};
use crate::error::{Error, Result};

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const MAX_ITER: usize = 100_000;

/// Lower incomplete gamma by its power series, returned without the e^{-x} x^s factor.
fn lower_series_reduced(s: Complex64, x: Complex64) -> Result<Complex64> {
    let mut ap = s;
    let mut del = 1.0 / s;
    let mut sum = del;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.norm() < sum.norm() * EPS {
            return Ok(sum);
        }
    }
    Err(Error::accuracy(
        "incomplete gamma series did not converge",
        sum,
        del.norm(),
    ))
}

/// Legendre continued fraction for the upper incomplete gamma, modified Lentz.
///
/// Returns `h` with Γ(s, x) = e^{-x} x^s h, so large arguments never overflow.
/// Converges for x off the negative real axis; fastest when |x| is not small.
pub fn upper_gamma_scaled_cf(s: Complex64, x: Complex64) -> Result<Complex64> {
    let tiny = Complex64::new(FPMIN, 0.0);
    let mut b = x + 1.0 - s;
    let mut c = Complex64::new(1.0 / FPMIN, 0.0);
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let fi = i as f64;
        let an = -fi * (fi - s);
        b += 2.0;
        d = an * d + b;
        if d.norm() < FPMIN {
            d = tiny;
        }
        c = b + an / c;
        if c.norm() < FPMIN {
            c = tiny;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).norm() < EPS {
            return Ok(h);
        }
    }
    Err(Error::accuracy(
        "incomplete gamma continued fraction did not converge",
        h,
        f64::NAN,
    ))
}

// x^s e^{-x}, avoiding the rounding of exp(s ln x - x) when both factors are representable
fn power_exp(s: f64, x: f64) -> f64 {
    let direct = x.powf(s) * (-x).exp();
    if direct.is_normal() {
        direct
    } else {
        (-x + s * x.ln()).exp()
    }
}

/// Upper incomplete gamma Γ(s, x) for real s and x ≥ 0.
///
/// Series for x < s + 1, continued fraction otherwise.
pub fn incomplete_gamma_upper(s: f64, x: f64) -> Result<f64> {
    if !(x >= 0.0) || !s.is_finite() || !x.is_finite() {
        return Err(Error::domain(format!(
            "incomplete gamma needs finite s and x >= 0, got ({s}, {x})"
        )));
    }
    if x == 0.0 {
        if s > 0.0 {
            return gamma_real(s);
        }
        return Err(Error::domain("incomplete gamma diverges at x = 0 for s <= 0"));
    }
    let sc = Complex64::new(s, 0.0);
    let xc = Complex64::new(x, 0.0);
    let prefactor = power_exp(s, x);
    if s > 0.0 && x < s + 1.0 {
        let lower = prefactor * lower_series_reduced(sc, xc)?.re;
        return Ok(gamma_real(s)? - lower);
    }
    Ok(prefactor * upper_gamma_scaled_cf(sc, xc)?.re)
}

/// Upper incomplete gamma Γ(s, x) for complex order s and real x > 0.
pub fn incomplete_gamma_upper_complex(s: Complex64, x: f64) -> Result<Complex64> {
    if s.im == 0.0 {
        return incomplete_gamma_upper(s.re, x).map(|v| Complex64::new(v, 0.0));
    }
    if !(x > 0.0) {
        return Err(Error::domain("complex-order incomplete gamma needs x > 0"));
    }
    let xc = Complex64::new(x, 0.0);
    let prefactor = (-xc + s * x.ln()).exp();
    if s.re > 0.0 && x < s.re + 1.0 {
        let lower = prefactor * lower_series_reduced(s, xc)?;
        return Ok(gamma_complex(s)? - lower);
    }
    Ok(prefactor * upper_gamma_scaled_cf(s, xc)?)
}

/// Γ(1/2, w) for complex w with Re w > 0, principal branch of w^{1/2}.
pub fn incomplete_gamma_half_complex(w: Complex64) -> Result<Complex64> {
    if !(w.re > 0.0) {
        return Err(Error::domain(format!("Γ(1/2, w) needs Re w > 0, got {w}")));
    }
    let half = Complex64::new(0.5, 0.0);
    let prefactor = (-w).exp() * w.sqrt();
    if w.norm() < 2.0 {
        let lower = prefactor * lower_series_reduced(half, w)?;
        return Ok(std::f64::consts::PI.sqrt() - lower);
    }
    Ok(prefactor * upper_gamma_scaled_cf(half, w)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::integrate;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn closed_forms() {
        for &x in &[0.01, 0.5, 1.0, 3.0, 20.0, 200.0] {
            let v = incomplete_gamma_upper(1.0, x).unwrap();
            assert!(rel(v, (-x).exp()) < 1e-14, "x = {x}: {v} vs {}", (-x).exp());
        }
        assert!(rel(incomplete_gamma_upper(0.5, 0.0).unwrap(), std::f64::consts::PI.sqrt()) < 1e-15);
        assert!(incomplete_gamma_upper(-0.5, 0.0).is_err());
        assert!(incomplete_gamma_upper(1.0, -1.0).is_err());
    }

    #[test]
    fn matches_quadrature_oracle() {
        let s = 6.5;
        let x = 2.0 * std::f64::consts::PI;
        // substitute t = x + u/(1-u) to map to a finite interval
        let f = |u: f64| {
            if u >= 1.0 {
                return Complex64::new(0.0, 0.0);
            }
            let t = x + u / (1.0 - u);
            let jac = 1.0 / ((1.0 - u) * (1.0 - u));
            Complex64::new((-t).exp() * t.powf(s - 1.0) * jac, 0.0)
        };
        let q = integrate(f, 0.0, 1.0, 1e-14, 1e-14, 40).unwrap();
        let v = incomplete_gamma_upper(s, x).unwrap();
        assert!(rel(v, q.value.re) < 1e-10);
    }

    #[test]
    fn recurrence_grid() {
        for j in 0..=6 {
            let s = 0.5 + j as f64;
            for &x in &[0.1, 1.0, 10.0] {
                let lhs = incomplete_gamma_upper(s + 1.0, x).unwrap();
                let rhs = s * incomplete_gamma_upper(s, x).unwrap() + x.powf(s) * (-x).exp();
                assert!(rel(lhs, rhs) < 1e-10, "s = {s}, x = {x}");
            }
        }
    }

    #[test]
    fn nonpositive_orders_use_continued_fraction() {
        // Γ(0, x) = E1(x); E1(1) = 0.21938393439552027
        let v = incomplete_gamma_upper(0.0, 1.0).unwrap();
        assert!(rel(v, 0.219_383_934_395_520_27) < 1e-12);
        let s = -0.5;
        let x = 3.0;
        let lhs = incomplete_gamma_upper(s + 1.0, x).unwrap();
        let rhs = s * incomplete_gamma_upper(s, x).unwrap() + x.powf(s) * (-x).exp();
        assert!(rel(lhs, rhs) < 1e-12);
    }

    #[test]
    fn half_order_complex() {
        for &x in &[0.3, 1.9, 2.1, 7.0, 40.0] {
            let c = incomplete_gamma_half_complex(Complex64::new(x, 0.0)).unwrap();
            let r = incomplete_gamma_upper(0.5, x).unwrap();
            assert!(rel(c.re, r) < 1e-13 && c.im.abs() < 1e-14 * r.abs(), "x = {x}");
        }
        for &w in &[
            Complex64::new(1.0, 1.0),
            Complex64::new(0.2, -3.0),
            Complex64::new(5.0, 30.0),
        ] {
            let a = incomplete_gamma_half_complex(w.conj()).unwrap();
            let b = incomplete_gamma_half_complex(w).unwrap().conj();
            assert!((a - b).norm() < 1e-14 * b.norm());
        }
        assert!(incomplete_gamma_half_complex(Complex64::new(0.0, 1.0)).is_err());
    }

    #[test]
    fn half_order_complex_against_defining_integral() {
        // Γ(1/2, w) = w^{1/2} ∫_1^∞ e^{-wt} t^{-1/2} dt, with t = 1 + u/(1-u)
        let w = Complex64::new(1.0, 1.0);
        let f = |u: f64| {
            if u >= 1.0 {
                return Complex64::new(0.0, 0.0);
            }
            let t = 1.0 + u / (1.0 - u);
            let jac = 1.0 / ((1.0 - u) * (1.0 - u));
            (-w * t).exp() * t.powf(-0.5) * jac
        };
        let q = integrate(f, 0.0, 1.0, 1e-14, 1e-14, 40).unwrap();
        let want = w.sqrt() * q.value;
        let got = incomplete_gamma_half_complex(w).unwrap();
        assert!((got - want).norm() < 1e-10 * want.norm());
    }

    #[test]
    fn complex_order_reduces_to_real() {
        let s = Complex64::new(2.25, 0.0);
        let a = incomplete_gamma_upper_complex(s, 1.7).unwrap();
        assert!(rel(a.re, incomplete_gamma_upper(2.25, 1.7).unwrap()) < 1e-15);
        // recurrence for complex order
        let s = Complex64::new(1.3, 2.0);
        for &x in &[0.4, 2.5, 9.0] {
            let lhs = incomplete_gamma_upper_complex(s + 1.0, x).unwrap();
            let rhs = s * incomplete_gamma_upper_complex(s, x).unwrap() + (s * x.ln()).exp() * (-x).exp();
            assert!((lhs - rhs).norm() < 1e-11 * lhs.norm(), "x = {x}");
        }
    }
}
