use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Evaluate;
use crate::error::{Error, Result};
use crate::group::{decompose_gamma04star, Generator, GroupElement, Word};
use crate::special::{cpowf, i_pow};

// Jacobi symbol (a/n) for odd n > 0 and a ≥ 0.
fn jacobi(mut a: i64, mut n: i64) -> i32 {
    let mut t = 1;
    a %= n;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// The Kronecker symbol (c/d).
pub fn kronecker_symbol(c: i64, d: i64) -> i32 {
    if d == 0 {
        return i32::from(c == 1 || c == -1);
    }
    let mut sign = 1;
    let mut d = d;
    if d < 0 {
        d = -d;
        if c < 0 {
            sign = -1;
        }
    }
    while d % 2 == 0 {
        d /= 2;
        match c.rem_euclid(8) {
            1 | 7 => {}
            3 | 5 => sign = -sign,
            _ => return 0,
        }
    }
    if d == 1 {
        return sign;
    }
    sign * jacobi(c.rem_euclid(d), d)
}

/// ε_d = 1 for d ≡ 1 (mod 4) and i for d ≡ 3 (mod 4).
pub fn epsilon_d(d: i64) -> Result<Complex64> {
    match d.rem_euclid(4) {
        1 => Ok(Complex64::new(1.0, 0.0)),
        3 => Ok(Complex64::new(0.0, 1.0)),
        _ => Err(Error::domain(format!("ε_d needs odd d, got {d}"))),
    }
}

/// A character of Γ₀*(4) given by its values on T, W₄ and −1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Character {
    pub value_t: Complex64,
    pub value_w: Complex64,
    pub value_neg1: Complex64,
}

impl Character {
    pub fn trivial() -> Self {
        let one = Complex64::new(1.0, 0.0);
        Character {
            value_t: one,
            value_w: one,
            value_neg1: one,
        }
    }

    /// χ(T) = 1, χ(W₄) = i^{5/2 − k}, χ(−1) = χ(W₄)².
    pub fn for_weight(weight_times_two: i64) -> Self {
        let w = i_pow((5 - weight_times_two) as f64 / 2.0);
        Character {
            value_t: Complex64::new(1.0, 0.0),
            value_w: w,
            value_neg1: w * w,
        }
    }

    pub fn new(value_t: Complex64, value_w: Complex64, value_neg1: Complex64) -> Result<Self> {
        let c = Character {
            value_t,
            value_w,
            value_neg1,
        };
        c.validate()?;
        Ok(c)
    }

    /// Unimodular values with χ(W₄)⁴ = 1, χ(−1)² = 1 and χ(W₄)² = χ(−1).
    pub fn validate(&self) -> Result<()> {
        let tol = 1e-12;
        for v in [self.value_t, self.value_w, self.value_neg1] {
            if (v.norm() - 1.0).abs() > tol {
                return Err(Error::domain(format!("character value {v} is not unimodular")));
            }
        }
        let one = Complex64::new(1.0, 0.0);
        if (self.value_w.powi(4) - one).norm() > tol {
            return Err(Error::domain("χ(W₄)⁴ must be 1"));
        }
        if (self.value_neg1.powi(2) - one).norm() > tol {
            return Err(Error::domain("χ(−1)² must be 1"));
        }
        if (self.value_w.powi(2) - self.value_neg1).norm() > tol {
            return Err(Error::domain("W₄² = −1 forces χ(W₄)² = χ(−1)"));
        }
        Ok(())
    }

    pub fn is_trivial(&self) -> bool {
        *self == Character::trivial()
    }

    pub fn eval_word(&self, word: &Word) -> Result<Complex64> {
        let mut acc = Complex64::new(1.0, 0.0);
        for &(g, e) in &word.letters {
            let base = match g {
                Generator::T => self.value_t,
                // V = W₄ T⁻¹ W₄⁻¹
                Generator::V => self.value_t.inv(),
                Generator::W4 => self.value_w,
                Generator::NegOne => self.value_neg1,
                _ => {
                    return Err(Error::Membership(format!("{g:?} is not a generator of Γ₀*(4)")));
                }
            };
            acc *= base.powi(e as i32);
        }
        Ok(acc)
    }

    pub fn eval(&self, gamma: &GroupElement) -> Result<Complex64> {
        self.eval_word(&decompose_gamma04star(gamma)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum SlashKind {
    Integral,
    HalfIntegralGamma0 { multiplier: Complex64 },
    HalfIntegralFricke { level: f64 },
}

/// f|_k γ as a pointwise evaluator.
pub struct Slashed<F: Evaluate> {
    form: F,
    gamma: GroupElement,
    weight_times_two: i64,
    kind: SlashKind,
}

/// Builds f|_k γ for weight k = weight_times_two / 2.
///
/// Integral k: (cz + d)^{−k} f(γz) with the determinant-normalized real matrix.
/// Half-integral k and γ ∈ Γ₀(N): (c/d) ε_d^{2k} (cz + d)^{−k} f(γz).
/// Half-integral k and γ = W_N: (−i√N z)^{−k} f(−1/(Nz)). Principal branches throughout.
pub fn slash_function<F: Evaluate>(
    form: F,
    gamma: &GroupElement,
    weight_times_two: i64,
    level: u64,
) -> Result<Slashed<F>> {
    let kind = if weight_times_two % 2 == 0 {
        SlashKind::Integral
    } else if gamma.is_fricke(level) {
        SlashKind::HalfIntegralFricke { level: level as f64 }
    } else if level % 4 == 0 && gamma.in_gamma0(level) {
        let [_, _, c, d] = gamma
            .entries_i64()
            .ok_or_else(|| Error::Unsupported(format!("entries of {gamma} exceed i64")))?;
        let eps = epsilon_d(d)?;
        let multiplier = kronecker_symbol(c, d) as f64 * eps.powi(weight_times_two as i32);
        SlashKind::HalfIntegralGamma0 { multiplier }
    } else {
        return Err(Error::domain(format!(
            "half-integral slash needs γ ∈ Γ₀({level}) or W_{level}, got {gamma}"
        )));
    };
    Ok(Slashed {
        form,
        gamma: gamma.clone(),
        weight_times_two,
        kind,
    })
}

impl<F: Evaluate> Slashed<F> {
    pub fn gamma(&self) -> &GroupElement {
        &self.gamma
    }
}

impl<F: Evaluate> Evaluate for Slashed<F> {
    fn weight_times_two(&self) -> i64 {
        self.weight_times_two
    }

    fn value(&self, z: Complex64) -> Complex64 {
        let k = self.weight_times_two as f64 / 2.0;
        let gz = self.gamma.act(z);
        match self.kind {
            SlashKind::Integral => {
                let j = self.gamma.cz_plus_d(z);
                j.powi(-(self.weight_times_two / 2) as i32) * self.form.value(gz)
            }
            SlashKind::HalfIntegralGamma0 { multiplier } => {
                multiplier * cpowf(self.gamma.cz_plus_d(z), -k) * self.form.value(gz)
            }
            SlashKind::HalfIntegralFricke { level } => {
                let j = Complex64::new(0.0, -level.sqrt()) * z;
                cpowf(j, -k) * self.form.value(gz)
            }
        }
    }
}
