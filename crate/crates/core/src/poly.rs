//! Complex polynomials of bounded degree with the integral-weight slash action.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::Character;
use crate::group::GroupElement;

/// Σ c_j z^j, j = 0..len−1. The length is the degree bound plus one and is kept
/// fixed under the slash action.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Poly {
    pub coeffs: Vec<Complex64>,
}

fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

impl Poly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Poly { coeffs }
    }

    pub fn zero(len: usize) -> Self {
        Poly {
            coeffs: vec![czero(); len],
        }
    }

    pub fn monomial(len: usize, j: usize) -> Self {
        let mut p = Poly::zero(len);
        p.coeffs[j] = Complex64::new(1.0, 0.0);
        p
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// D with deg ≤ D.
    pub fn degree_bound(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(czero(), |acc, c| acc * z + c)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.len().max(o.len());
        Poly {
            coeffs: (0..n).map(|j| self.coeff(j) + o.coeff(j)).collect(),
        }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn coeff(&self, j: usize) -> Complex64 {
        self.coeffs.get(j).copied().unwrap_or_else(czero)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm() == 0.0)
    }

    /// Product truncated to `len` coefficients.
    pub fn mul_trunc(&self, o: &Poly, len: usize) -> Poly {
        let mut out = vec![czero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                if i + j < len {
                    out[i + j] += a * b;
                }
            }
        }
        Poly { coeffs: out }
    }

    /// P(s z).
    pub fn rescale(&self, s: Complex64) -> Poly {
        let mut pw = Complex64::new(1.0, 0.0);
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let v = c * pw;
                pw *= s;
                v
            })
            .collect();
        Poly { coeffs }
    }

    /// P(z + h).
    pub fn translate(&self, h: Complex64) -> Poly {
        self.compose_linear(Complex64::new(1.0, 0.0), h, czero(), Complex64::new(1.0, 0.0))
    }

    // Σ c_j (αz + β)^j (γz + δ)^{D−j}
    fn compose_linear(&self, alpha: Complex64, beta: Complex64, gamma: Complex64, delta: Complex64) -> Poly {
        let len = self.len();
        let d = self.degree_bound();
        let num = Poly::new(vec![beta, alpha]);
        let den = Poly::new(vec![delta, gamma]);
        let mut num_pows = vec![Poly::monomial(len, 0)];
        let mut den_pows = vec![Poly::monomial(len, 0)];
        for _ in 0..d {
            num_pows.push(num_pows.last().unwrap().mul_trunc(&num, len));
            den_pows.push(den_pows.last().unwrap().mul_trunc(&den, len));
        }
        let mut out = Poly::zero(len);
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.norm() == 0.0 {
                continue;
            }
            let term = num_pows[j].mul_trunc(&den_pows[d - j], len);
            out = out.add(&term.scale(*c));
        }
        out
    }

    /// P|_{−D} γ = (cz + d)^D P(γz) for the determinant-normalized real matrix of γ,
    /// D = degree bound. Again a polynomial of degree ≤ D; for W_N this sends
    /// c_j z^j to c_j (−1)^j N^{D/2−j} z^{D−j}.
    pub fn slash(&self, gamma: &GroupElement) -> Poly {
        let [a, b, c, d] = gamma.entries_f64();
        let r = |x: f64| Complex64::new(x, 0.0);
        self.compose_linear(r(a), r(b), r(c), r(d))
    }

    /// P|_{−D, χ} γ = conj(χ(γ)) P|_{−D} γ.
    pub fn slash_chi(&self, gamma: &GroupElement, chi: &Character) -> Result<Poly> {
        Ok(self.slash(gamma).scale(chi.eval(gamma)?.conj()))
    }

    /// max|coefficient of self − other| / max(max|other|, floor).
    pub fn rel_distance(&self, other: &Poly, floor: f64) -> f64 {
        self.sub(other).max_abs() / other.max_abs().max(floor)
    }

    pub fn check_len(&self, len: usize) -> Result<()> {
        if self.len() != len {
            return Err(Error::domain(format!(
                "polynomial has {} coefficients, expected {len}",
                self.len()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| format!("({:.6e}{:+.6e}i)z^{j}", c.re, c.im))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample() -> Poly {
        Poly::new(vec![c(1.0, 0.5), c(-2.0, 0.0), c(0.0, 3.0), c(0.25, -1.0), c(4.0, 0.0)])
    }

    #[test]
    fn slash_matches_pointwise_definition() {
        let p = sample();
        let z = c(0.3, 1.7);
        for g in [
            GroupElement::identity(),
            GroupElement::t(),
            GroupElement::s(),
            GroupElement::new(3, 2, 4, 3).unwrap(),
            GroupElement::fricke(4),
        ] {
            let want = g.cz_plus_d(z).powi(4) * p.eval(g.act(z));
            let got = p.slash(&g).eval(z);
            assert!((want - got).norm() < 1e-11 * want.norm(), "{g}");
        }
    }

    #[test]
    fn fricke_monomial_reflection() {
        let len = 5;
        for j in 0..len {
            let m = Poly::monomial(len, j).slash(&GroupElement::fricke(4));
            let want = (-1f64).powi(j as i32) * 4f64.powf(2.0 - j as f64);
            for (i, x) in m.coeffs.iter().enumerate() {
                if i == 4 - j {
                    assert!((x - c(want, 0.0)).norm() < 1e-14);
                } else {
                    assert_eq!(x.norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn double_fricke_is_sign_power() {
        for d in 0..7 {
            let p = Poly::new((0..=d).map(|j| c(j as f64 + 1.0, -(j as f64))).collect());
            let w = GroupElement::fricke(4);
            let twice = p.slash(&w).slash(&w);
            let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
            assert!(twice.rel_distance(&p.scale(c(sign, 0.0)), 1e-300) < 1e-12);
        }
    }

    #[test]
    fn slash_is_a_right_action() {
        let p = sample();
        let g = GroupElement::new(2, 1, 1, 1).unwrap();
        let h = GroupElement::new(1, -3, 0, 1).unwrap();
        let lhs = p.slash(&g.mul(&h));
        let rhs = p.slash(&g).slash(&h);
        assert!(lhs.rel_distance(&rhs, 1e-300) < 1e-12);
    }

    #[test]
    fn translate_and_rescale() {
        let p = sample();
        let z = c(-0.4, 0.9);
        assert!((p.translate(c(1.0, 0.0)).eval(z) - p.eval(z + 1.0)).norm() < 1e-12);
        assert!((p.rescale(c(0.5, 0.0)).eval(z) - p.eval(z * 0.5)).norm() < 1e-12);
    }
}
