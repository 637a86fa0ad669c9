use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{Evaluate, FormStatus, FourierExpansion};
use crate::error::{Error, Result};

/// Dedekind η(τ) for Im τ > 0.
///
/// τ is first moved into the standard fundamental domain with
/// η(τ + 1) = e^{πi/12} η(τ) and η(−1/τ) = √(−iτ) η(τ); the pentagonal series
/// then converges after a handful of terms.
pub fn dedekind_eta(tau: Complex64) -> Result<Complex64> {
    if !(tau.im > 0.0) || !tau.re.is_finite() {
        return Err(Error::domain(format!("η needs Im τ > 0, got {tau}")));
    }
    let mut t = tau;
    let mut factor = Complex64::new(1.0, 0.0);
    for _ in 0..10_000 {
        let m = t.re.round();
        if m != 0.0 {
            t -= m;
            factor *= Complex64::from_polar(1.0, PI * m / 12.0);
        }
        if t.norm_sqr() < 1.0 - 1e-15 {
            factor /= (Complex64::new(0.0, -1.0) * t).sqrt();
            t = -1.0 / t;
        } else {
            return Ok(factor * eta_series(t));
        }
    }
    Err(Error::accuracy(
        "η reduction did not terminate",
        Complex64::new(f64::NAN, 0.0),
        f64::INFINITY,
    ))
}

// q^{1/24} Σ_k (−1)^k q^{k(3k−1)/2}, for τ with Im τ ≳ 0.8
fn eta_series(tau: Complex64) -> Complex64 {
    let q = (Complex64::new(0.0, 2.0 * PI) * tau).exp();
    let mut sum = Complex64::new(1.0, 0.0);
    for k in 1..40i32 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let e1 = k * (3 * k - 1) / 2;
        let e2 = k * (3 * k + 1) / 2;
        let term = q.powi(e1) + q.powi(e2);
        sum += sign * term;
        if term.norm() < 1e-18 {
            break;
        }
    }
    (Complex64::new(0.0, PI / 12.0) * tau).exp() * sum
}

/// Π_{δ | N} η(δz)^{r_δ}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EtaQuotient {
    pub level: u64,
    /// δ ↦ r_δ, zero exponents omitted.
    pub exponents: BTreeMap<u64, i64>,
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

impl EtaQuotient {
    pub fn new(level: u64, exponents: &[(u64, i64)]) -> Result<Self> {
        if level == 0 {
            return Err(Error::domain("level must be positive"));
        }
        let mut map = BTreeMap::new();
        for &(d, r) in exponents {
            if d == 0 || level % d != 0 {
                return Err(Error::domain(format!("{d} does not divide the level {level}")));
            }
            if r != 0 {
                *map.entry(d).or_insert(0) += r;
            }
        }
        map.retain(|_, r| *r != 0);
        Ok(EtaQuotient { level, exponents: map })
    }

    pub fn exponent(&self, d: u64) -> i64 {
        self.exponents.get(&d).copied().unwrap_or(0)
    }

    pub fn weight_times_two(&self) -> i64 {
        self.exponents.values().sum()
    }

    /// 24 × the order at ∞ in q = e^{2πiz}, and the same at 0 measured in q_N.
    pub fn integrality_sums(&self) -> (i64, i64) {
        let n = self.level as i64;
        let inf = self.exponents.iter().map(|(&d, &r)| d as i64 * r).sum();
        let zero = self.exponents.iter().map(|(&d, &r)| (n / d as i64) * r).sum();
        (inf, zero)
    }

    /// Orders of vanishing at the cusps 1/c for c | N, in the local parameter of each cusp.
    pub fn cusp_orders(&self) -> Vec<(u64, Rational64)> {
        let n = self.level;
        divisors(n)
            .into_iter()
            .map(|c| {
                let g = c.gcd(&(n / c));
                let mut total = Rational64::zero();
                for (&d, &r) in &self.exponents {
                    let gd = c.gcd(&d) as i64;
                    total += Rational64::new(n as i64 * gd * gd * r, 24 * g as i64 * c as i64 * d as i64);
                }
                (c, total)
            })
            .collect()
    }

    /// Checks integrality of the exponent at ∞ and 0 and positive order at every cusp.
    pub fn check_cusp_form(&self) -> Result<()> {
        let (inf, zero) = self.integrality_sums();
        if inf % 24 != 0 || zero % 24 != 0 {
            return Err(Error::domain(format!(
                "{self} fails the integrality conditions (Σδr = {inf}, Σ(N/δ)r = {zero})"
            )));
        }
        for (c, ord) in self.cusp_orders() {
            if ord <= Rational64::zero() {
                return Err(Error::NotHolomorphic {
                    cusp: format!("1/{c}"),
                    order: ord.to_string(),
                });
            }
        }
        Ok(())
    }

    /// The image under W_N and the scalar ε with
    /// f(−1/(Nz)) = ε (−i√N z)^k f̃(z), where f̃ has exponents δ ↦ r_{N/δ}.
    pub fn fricke_image(&self) -> (EtaQuotient, f64) {
        let n = self.level;
        let image: BTreeMap<u64, i64> = self.exponents.iter().map(|(&d, &r)| (n / d, r)).collect();
        let log_eps: f64 = self
            .exponents
            .iter()
            .map(|(&d, &r)| r as f64 / 2.0 * ((n / d) as f64).ln())
            .sum::<f64>()
            - self.weight_times_two() as f64 / 4.0 * (n as f64).ln();
        (
            EtaQuotient {
                level: n,
                exponents: image,
            },
            log_eps.exp(),
        )
    }

    /// The raw product q^v Π Π(1 − q^{δn})^{r_δ} as (v, coefficients of q^{v+i}), i < len.
    ///
    /// No holomorphy check: the empty quotient gives the constant series 1.
    pub fn q_series(&self, len: usize) -> Result<(i64, Vec<BigInt>)> {
        let (inf, _) = self.integrality_sums();
        if inf % 24 != 0 {
            return Err(Error::domain(format!("{self} has a fractional order at ∞")));
        }
        let mut series = vec![BigInt::zero(); len];
        if len == 0 {
            return Ok((inf / 24, series));
        }
        series[0] = BigInt::from(1);
        for (&d, &r) in &self.exponents {
            let pent = pentagonal_terms(len - 1, d as usize);
            for _ in 0..r.unsigned_abs() {
                if r > 0 {
                    series = mul_sparse(&series, &pent);
                } else {
                    div_sparse(&mut series, &pent);
                }
            }
        }
        Ok((inf / 24, series))
    }

    /// Exact integer coefficients a(1), …, a(m).
    pub fn exact_coefficients(&self, m: usize) -> Result<Vec<BigInt>> {
        let (lead, _) = self.q_series(0)?;
        if lead < 1 {
            return Err(Error::NotHolomorphic {
                cusp: "∞".into(),
                order: lead.to_string(),
            });
        }
        let lead = lead as usize;
        let mut out = vec![BigInt::zero(); m];
        if lead > m {
            return Ok(out);
        }
        let (_, series) = self.q_series(m - lead + 1)?;
        for (i, c) in series.into_iter().enumerate() {
            out[lead + i - 1] = c;
        }
        Ok(out)
    }

    /// The q-expansion to m terms, after checking it is a cusp form.
    ///
    /// The Fricke eigenvalue is recorded when the quotient is its own W_N image.
    pub fn expansion(&self, m: usize) -> Result<FourierExpansion> {
        self.check_cusp_form()?;
        let coeffs = self
            .exact_coefficients(m)?
            .iter()
            .map(|c| Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0))
            .collect();
        let (image, eps) = self.fricke_image();
        let fricke = (image == *self).then(|| Complex64::new(eps, 0.0));
        let mut f = FourierExpansion::new(
            self.weight_times_two(),
            self.level,
            Rational64::from_integer(1),
            coeffs,
            fricke,
        )?
        .with_label(self.to_string())
        .with_source("eta-quotient");
        f.status = FormStatus::Unvalidated;
        Ok(f)
    }
}

impl Evaluate for EtaQuotient {
    fn weight_times_two(&self) -> i64 {
        EtaQuotient::weight_times_two(self)
    }

    /// Direct product of η values; NaN outside the upper half-plane.
    fn value(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for (&d, &r) in &self.exponents {
            match dedekind_eta(z * d as f64) {
                Ok(e) => acc *= e.powi(r as i32),
                Err(_) => return Complex64::new(f64::NAN, f64::NAN),
            }
        }
        acc
    }
}

impl fmt::Display for EtaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .exponents
            .iter()
            .map(|(&d, &r)| {
                let arg = if d == 1 { "z".to_string() } else { format!("{d}z") };
                format!("eta({arg})^{r}")
            })
            .collect();
        if parts.is_empty() {
            return write!(f, "1");
        }
        write!(f, "{}", parts.join(" "))
    }
}

// Nonzero terms (degree, sign) of Π(1 − q^{dn}) up to `deg`.
fn pentagonal_terms(deg: usize, d: usize) -> Vec<(usize, i8)> {
    let mut out = vec![(0usize, 1i8)];
    for k in 1usize.. {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let e1 = d * k * (3 * k - 1) / 2;
        let e2 = d * k * (3 * k + 1) / 2;
        if e1 > deg {
            break;
        }
        out.push((e1, sign));
        if e2 <= deg {
            out.push((e2, sign));
        }
    }
    out
}

fn mul_sparse(a: &[BigInt], p: &[(usize, i8)]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len()];
    for (n, slot) in out.iter_mut().enumerate() {
        for &(e, s) in p {
            if e > n {
                continue;
            }
            if s > 0 {
                *slot += &a[n - e];
            } else {
                *slot -= &a[n - e];
            }
        }
    }
    out
}

// In place a ← a / p, using p(0) = 1.
fn div_sparse(a: &mut [BigInt], p: &[(usize, i8)]) {
    for n in 0..a.len() {
        let mut acc = a[n].clone();
        for &(e, s) in &p[1..] {
            if e > n {
                continue;
            }
            if s > 0 {
                acc -= &a[n - e];
            } else {
                acc += &a[n - e];
            }
        }
        a[n] = acc;
    }
}

/// All holomorphic eta quotient cusp forms of the given level and weight with
/// exponents bounded by `max_abs_exponent`.
pub fn eta_search(level: u64, weight_times_two: i64, max_abs_exponent: i64) -> Result<Vec<EtaQuotient>> {
    if level == 0 || max_abs_exponent < 0 {
        return Err(Error::domain("eta search needs a positive level and a bound >= 0"));
    }
    let divs = divisors(level);
    let span = (2 * max_abs_exponent + 1) as f64;
    if span.powi(divs.len() as i32 - 1) > 5e7 {
        return Err(Error::Unsupported(format!(
            "search space for level {level} with bound {max_abs_exponent} is too large"
        )));
    }
    let mut found = Vec::new();
    let free = divs.len() - 1;
    let mut current = vec![-max_abs_exponent; free];
    loop {
        let partial: i64 = current.iter().sum();
        let last = weight_times_two - partial;
        if last.abs() <= max_abs_exponent {
            let mut exps: Vec<(u64, i64)> = divs[..free].iter().copied().zip(current.iter().copied()).collect();
            exps.push((divs[free], last));
            if let Ok(q) = EtaQuotient::new(level, &exps) {
                if q.check_cusp_form().is_ok() {
                    found.push(q);
                }
            }
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == free {
                return Ok(found);
            }
            current[i] += 1;
            if current[i] > max_abs_exponent {
                current[i] = -max_abs_exponent;
                i += 1;
            } else {
                break;
            }
        }
    }
}
