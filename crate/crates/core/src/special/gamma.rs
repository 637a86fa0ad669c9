use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_complex(z: Complex64) -> Complex64 {
    // valid for Re z >= 1/2
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// Γ(x) for real x, extended to negative non-integers by reflection.
fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma_unchecked(1.0 - x));
    }
    // Integers and half-integers up to a moderate size are done by exact products,
    // which keeps frequently used constants like Γ(k-1) free of Lanczos noise.
    if x <= 30.0 && (2.0 * x) == (2.0 * x).round() {
        let mut acc = if x == x.round() { 1.0 } else { PI.sqrt() };
        let mut y = if x == x.round() { 1.0 } else { 0.5 };
        while y < x {
            acc *= y;
            y += 1.0;
        }
        return acc;
    }
    let z = x - 1.0;
    let mut s = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        s += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * s
}

/// Γ(x) for real x > 0.
pub fn gamma_real(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("gamma_real needs x > 0, got {x}")));
    }
    Ok(gamma_unchecked(x))
}

/// Γ(z) for complex z away from the poles.
pub fn gamma_complex(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && is_nonpositive_integer(z.re) {
        return Err(Error::domain(format!("gamma pole at {}", z.re)));
    }
    if z.im == 0.0 {
        return Ok(Complex64::new(gamma_unchecked(z.re), 0.0));
    }
    if z.re < 0.5 {
        let s = (Complex64::new(PI, 0.0) * z).sin();
        return Ok(PI / (s * lanczos_complex(1.0 - z)));
    }
    Ok(lanczos_complex(z))
}

/// Generalized binomial coefficient Γ(z+1) / (Γ(w+1) Γ(z−w+1)).
///
/// A non-positive integer argument in the denominator makes the value 0 in the
/// limit; that case is reported as a domain error like a numerator pole, since no
/// formula here relies on the limit.
pub fn binom_general(z: f64, w: f64) -> Result<f64> {
    let args = [z + 1.0, w + 1.0, z - w + 1.0];
    if let Some(bad) = args.iter().find(|a| is_nonpositive_integer(**a)) {
        return Err(Error::domain(format!(
            "binomial ({z} choose {w}) hits a gamma pole at {bad}"
        )));
    }
    if z == z.round() && w == w.round() && w >= 0.0 && z >= w {
        return Ok(binom_int(z as u64, w as u64));
    }
    Ok(gamma_unchecked(args[0]) / (gamma_unchecked(args[1]) * gamma_unchecked(args[2])))
}

/// Ordinary binomial coefficient as a float (exact below 2^53).
pub fn binom_int(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn classical_values() {
        assert!(rel(gamma_real(0.5).unwrap(), PI.sqrt()) < 1e-15);
        assert_eq!(gamma_real(5.0).unwrap(), 24.0);
        assert!(gamma_real(0.0).is_err());
        assert!(gamma_real(-1.5).is_err());
    }

    #[test]
    fn lanczos_agrees_with_product_oracle() {
        // Γ(11/2) = (9/2)(7/2)(5/2)(3/2)(1/2)√π, computed independently of the product path
        let oracle = 4.5 * 3.5 * 2.5 * 1.5 * 0.5 * PI.sqrt();
        let z = Complex64::new(5.5, 1e-300);
        let lz = lanczos_complex(z).re;
        assert!(rel(lz, oracle) < 1e-13);
        assert!(rel(gamma_real(5.5).unwrap(), oracle) < 1e-15);
    }

    #[test]
    fn recurrence_on_half_integer_grid() {
        for j in 0..=10 {
            let x = 0.5 + j as f64;
            let lhs = gamma_real(x + 1.0).unwrap();
            let rhs = x * gamma_real(x).unwrap();
            assert!(rel(lhs, rhs) < 1e-12, "x = {x}");
        }
        for j in 1..40 {
            let x = 0.37 * j as f64;
            let lhs = gamma_real(x + 1.0).unwrap();
            let rhs = x * gamma_real(x).unwrap();
            assert!(rel(lhs, rhs) < 1e-13, "x = {x}");
        }
    }

    #[test]
    fn complex_gamma_reflection_and_real_restriction() {
        let z = Complex64::new(0.3, 0.7);
        let lhs = gamma_complex(z).unwrap() * gamma_complex(1.0 - z).unwrap();
        let rhs = PI / (z * PI).sin();
        assert!((lhs - rhs).norm() / rhs.norm() < 1e-13);
        let g = gamma_complex(Complex64::new(3.7, 0.0)).unwrap();
        assert!(rel(g.re, gamma_real(3.7).unwrap()) < 1e-15);
        assert!(gamma_complex(Complex64::new(-2.0, 0.0)).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binom_general(4.0, 2.0).unwrap(), 6.0);
        let k = 6.5;
        for n in 0..=4 {
            let n = n as f64;
            let a = binom_general(k - 2.0, k - 2.5 - n).unwrap();
            let b = binom_general(k - 2.0, n + 0.5).unwrap();
            assert!(rel(a, b) < 1e-14);
        }
        let want = gamma_real(5.5).unwrap() / (gamma_real(2.5).unwrap() * gamma_real(4.0).unwrap());
        assert!(rel(binom_general(4.5, 1.5).unwrap(), want) < 1e-12);
        assert!(binom_general(-1.0, 0.5).is_err());
        assert_eq!(binom_int(10, 3), 120.0);
        assert_eq!(binom_int(3, 5), 0.0);
    }
}
