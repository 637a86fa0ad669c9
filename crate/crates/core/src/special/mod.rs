//! Gamma-family special functions and quadrature primitives.
//!
//! Everything here works in double precision with the principal branch of
//! complex powers and logarithms (`-π < arg z ≤ π`).

mod gamma;
mod incgamma;
mod quad;

pub use gamma::{binom_general, binom_int, gamma_complex, gamma_real};
pub use incgamma::{
    incomplete_gamma_half_complex, incomplete_gamma_upper, incomplete_gamma_upper_complex, upper_gamma_scaled_cf,
};
pub use quad::{integrate, integrate_semi_infinite, integrate_vertical, QuadEstimate};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance and work limits shared by the numeric routines.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Precision {
    pub target_abs_tol: f64,
    pub target_rel_tol: f64,
    /// Upper bound on series terms (also the default q-expansion truncation).
    pub max_terms: usize,
    /// Maximum bisection depth for adaptive quadrature.
    pub max_quad_depth: usize,
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            target_abs_tol: 1e-13,
            target_rel_tol: 1e-12,
            max_terms: 300,
            max_quad_depth: 40,
        }
    }
}

impl Precision {
    pub fn new(abs_tol: f64, rel_tol: f64, max_terms: usize, max_quad_depth: usize) -> Result<Self> {
        let p = Precision {
            target_abs_tol: abs_tol,
            target_rel_tol: rel_tol,
            max_terms,
            max_quad_depth,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.target_abs_tol > 0.0) || !(self.target_rel_tol > 0.0) {
            return Err(Error::domain("tolerances must be positive"));
        }
        if self.max_terms < 16 {
            return Err(Error::domain("max_terms must be at least 16"));
        }
        if self.max_quad_depth == 0 {
            return Err(Error::domain("max_quad_depth must be positive"));
        }
        Ok(())
    }

    pub fn with_abs_tol(mut self, tol: f64) -> Self {
        self.target_abs_tol = tol;
        self
    }

    pub fn with_rel_tol(mut self, tol: f64) -> Self {
        self.target_rel_tol = tol;
        self
    }
}

/// Principal-branch complex power `z^w`. `0^w` is 0 for `Re w > 0`.
pub fn cpow(z: num_complex::Complex64, w: num_complex::Complex64) -> num_complex::Complex64 {
    if z == num_complex::Complex64::new(0.0, 0.0) {
        return num_complex::Complex64::new(0.0, 0.0);
    }
    (w * z.ln()).exp()
}

/// Principal-branch `z^x` for a real exponent.
pub fn cpowf(z: num_complex::Complex64, x: f64) -> num_complex::Complex64 {
    if z == num_complex::Complex64::new(0.0, 0.0) {
        return num_complex::Complex64::new(0.0, 0.0);
    }
    (z.ln() * x).exp()
}

/// `i^x = e^{iπx/2}` for real `x`. Exponents that are exact multiples of 1/2 map to
/// exact unit values so that repeated products do not drift.
pub fn i_pow(x: f64) -> num_complex::Complex64 {
    let twice = 2.0 * x;
    if twice == twice.round() {
        let r = (twice.round() as i64).rem_euclid(8);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        return match r {
            0 => num_complex::Complex64::new(1.0, 0.0),
            1 => num_complex::Complex64::new(h, h),
            2 => num_complex::Complex64::new(0.0, 1.0),
            3 => num_complex::Complex64::new(-h, h),
            4 => num_complex::Complex64::new(-1.0, 0.0),
            5 => num_complex::Complex64::new(-h, -h),
            6 => num_complex::Complex64::new(0.0, -1.0),
            _ => num_complex::Complex64::new(h, -h),
        };
    }
    let theta = std::f64::consts::FRAC_PI_2 * x;
    num_complex::Complex64::new(theta.cos(), theta.sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn i_pow_matches_exponential() {
        for k in -20..20 {
            let x = k as f64 * 0.25;
            let want = (Complex64::i() * std::f64::consts::FRAC_PI_2 * x).exp();
            assert!((i_pow(x) - want).norm() < 1e-15, "x = {x}");
        }
    }

    #[test]
    fn precision_rejects_bad_values() {
        assert!(Precision::new(0.0, 1e-10, 100, 10).is_err());
        assert!(Precision::new(1e-10, 1e-10, 8, 10).is_err());
        assert!(Precision::new(1e-10, 1e-10, 16, 10).is_ok());
    }

    #[test]
    fn cpow_principal_branch() {
        let z = Complex64::new(-1.0, 0.0);
        let r = cpowf(z, 0.5);
        assert!((r - Complex64::i()).norm() < 1e-15);
        let z = Complex64::new(-1.0, -1e-300);
        assert!((cpowf(z, 0.5) + Complex64::i()).norm() < 1e-12);
    }
}
