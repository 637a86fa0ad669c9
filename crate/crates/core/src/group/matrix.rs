use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An exact 2×2 matrix `m / √scale` with integer entries and det m = scale.
///
/// `scale = 1` covers SL₂(ℤ); `scale = N` covers Atkin–Lehner type elements such
/// as the Fricke involution W_N = (0, −1; N, 0)/√N.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
    scale: u64,
}

impl GroupElement {
    /// An SL₂(ℤ) element; fails unless ad − bc = 1.
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::from_big(a.into(), b.into(), c.into(), d.into(), 1)
    }

    pub fn from_big(a: BigInt, b: BigInt, c: BigInt, d: BigInt, scale: u64) -> Result<Self> {
        if scale == 0 {
            return Err(Error::domain("group element scale must be positive"));
        }
        let det = &a * &d - &b * &c;
        if det != BigInt::from(scale) {
            return Err(Error::domain(format!("determinant {det} does not match scale {scale}")));
        }
        Ok(GroupElement { a, b, c, d, scale })
    }

    fn raw(a: BigInt, b: BigInt, c: BigInt, d: BigInt, scale: u64) -> Self {
        GroupElement { a, b, c, d, scale }
    }

    pub fn identity() -> Self {
        Self::raw(One::one(), Zero::zero(), Zero::zero(), One::one(), 1)
    }

    pub fn neg_one() -> Self {
        Self::raw(-BigInt::one(), Zero::zero(), Zero::zero(), -BigInt::one(), 1)
    }

    /// T = (1, 1; 0, 1)
    pub fn t() -> Self {
        Self::raw(One::one(), One::one(), Zero::zero(), One::one(), 1)
    }

    /// S = (0, −1; 1, 0)
    pub fn s() -> Self {
        Self::raw(Zero::zero(), -BigInt::one(), One::one(), Zero::zero(), 1)
    }

    /// U = TS = (1, −1; 1, 0)
    pub fn u() -> Self {
        Self::raw(One::one(), -BigInt::one(), One::one(), Zero::zero(), 1)
    }

    /// V = (1, 0; 4, 1), the second free generator of Γ₀(4)/±1.
    pub fn v() -> Self {
        Self::raw(One::one(), Zero::zero(), BigInt::from(4), One::one(), 1)
    }

    /// The Fricke involution W_N.
    pub fn fricke(n: u64) -> Self {
        Self::raw(Zero::zero(), -BigInt::one(), BigInt::from(n), Zero::zero(), n)
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }
    pub fn scale(&self) -> u64 {
        self.scale
    }

    pub fn is_sl2z(&self) -> bool {
        self.scale == 1
    }

    /// True for SL₂(ℤ) elements with N | c.
    pub fn in_gamma0(&self, n: u64) -> bool {
        self.scale == 1 && self.c.is_multiple_of(&BigInt::from(n))
    }

    /// True for the Fricke involution itself.
    pub fn is_fricke(&self, n: u64) -> bool {
        *self == Self::fricke(n)
    }

    /// Entries as i64, when they fit.
    pub fn entries_i64(&self) -> Option<[i64; 4]> {
        Some([self.a.to_i64()?, self.b.to_i64()?, self.c.to_i64()?, self.d.to_i64()?])
    }

    /// Entries of the real matrix m/√scale.
    pub fn entries_f64(&self) -> [f64; 4] {
        let r = (self.scale as f64).sqrt();
        let f = |x: &BigInt| x.to_f64().unwrap_or(f64::NAN) / r;
        [f(&self.a), f(&self.b), f(&self.c), f(&self.d)]
    }

    /// Möbius action z ↦ (az + b)/(cz + d).
    pub fn act(&self, z: Complex64) -> Complex64 {
        let [a, b, c, d] = self.entries_f64();
        (z * a + b) / (z * c + d)
    }

    /// The automorphy factor cz + d of the normalized real matrix.
    pub fn cz_plus_d(&self, z: Complex64) -> Complex64 {
        let [_, _, c, d] = self.entries_f64();
        z * c + d
    }

    pub fn mul(&self, o: &GroupElement) -> GroupElement {
        let a = &self.a * &o.a + &self.b * &o.c;
        let b = &self.a * &o.b + &self.b * &o.d;
        let c = &self.c * &o.a + &self.d * &o.c;
        let d = &self.c * &o.b + &self.d * &o.d;
        let scale = self.scale * o.scale;
        // Products of two scale-N elements are N times an integral matrix when both
        // normalize the same level; divide out common square factors when exact.
        let g = a.gcd(&b).gcd(&c).gcd(&d);
        let mut divisor = BigInt::one();
        let mut rem_scale = scale;
        for p in small_square_divisors(scale) {
            let pb = BigInt::from(p);
            if (&g % (&pb * &divisor)).is_zero() {
                divisor *= &pb;
                rem_scale /= p * p;
            }
        }
        Self::raw(a / &divisor, b / &divisor, c / &divisor, d / &divisor, rem_scale)
    }

    pub fn inverse(&self) -> GroupElement {
        Self::raw(
            self.d.clone(),
            -self.b.clone(),
            -self.c.clone(),
            self.a.clone(),
            self.scale,
        )
    }

    pub fn pow(&self, e: i64) -> GroupElement {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut acc = GroupElement::identity();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    pub fn neg(&self) -> GroupElement {
        Self::raw(
            -self.a.clone(),
            -self.b.clone(),
            -self.c.clone(),
            -self.d.clone(),
            self.scale,
        )
    }

    /// Sign-normalized representative in PSL: the first nonzero of (c, d) positive.
    pub fn psl_normal(&self) -> GroupElement {
        let flip = if !self.c.is_zero() {
            self.c.is_negative()
        } else {
            self.d.is_negative()
        };
        if flip {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Equality in PSL (up to sign).
    pub fn eq_psl(&self, o: &GroupElement) -> bool {
        self == o || *self == o.neg()
    }

    /// Entries reduced mod 2, as (a, b, c, d) bits.
    pub fn mod2(&self) -> [u8; 4] {
        let two = BigInt::from(2);
        let r = |x: &BigInt| if x.mod_floor(&two).is_zero() { 0u8 } else { 1u8 };
        [r(&self.a), r(&self.b), r(&self.c), r(&self.d)]
    }

    /// Membership in the theta group: ≡ I or ≡ S mod 2.
    pub fn in_theta_group(&self) -> bool {
        self.scale == 1 && matches!(self.mod2(), [1, 0, 0, 1] | [0, 1, 1, 0])
    }
}

// p with p² | n, in increasing order of p, repeated per multiplicity.
fn small_square_divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        while m % (p * p) == 0 {
            out.push(p);
            m /= p * p;
        }
        while m % p == 0 {
            m /= p;
        }
        p += 1;
    }
    out
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scale == 1 {
            write!(f, "({}, {}; {}, {})", self.a, self.b, self.c, self.d)
        } else {
            write!(f, "({}, {}; {}, {})/√{}", self.a, self.b, self.c, self.d, self.scale)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_checked() {
        assert!(GroupElement::new(1, 1, 0, 1).is_ok());
        assert!(GroupElement::new(2, 1, 0, 1).is_err());
    }

    #[test]
    fn fricke_squares_to_minus_one() {
        let w = GroupElement::fricke(4);
        let w2 = w.mul(&w);
        assert_eq!(w2, GroupElement::neg_one());
        assert_eq!(w2.mul(&w2), GroupElement::identity());
    }

    #[test]
    fn fricke_conjugates_translation() {
        let w = GroupElement::fricke(4);
        let conj = w.mul(&GroupElement::t()).mul(&w.inverse());
        assert_eq!(conj, GroupElement::v().inverse());
    }

    #[test]
    fn atkin_lehner_products_normalize() {
        let w = GroupElement::fricke(4);
        let g = GroupElement::new(1, 0, 4, 1).unwrap();
        let x = w.mul(&g).mul(&w);
        assert_eq!(x.scale(), 1);
        assert!(x.in_gamma0(4));
    }

    #[test]
    fn u_relations() {
        let u = GroupElement::u();
        assert_eq!(u, GroupElement::t().mul(&GroupElement::s()));
        assert!(u.pow(3).eq_psl(&GroupElement::identity()));
        assert!(GroupElement::s().pow(2).eq_psl(&GroupElement::identity()));
    }

    #[test]
    fn theta_membership_mod2() {
        assert!(GroupElement::s().in_theta_group());
        assert!(!GroupElement::t().in_theta_group());
        assert!(GroupElement::t().pow(2).in_theta_group());
        assert!(!GroupElement::u().in_theta_group());
    }

    #[test]
    fn mobius_action() {
        let z = Complex64::new(0.3, 1.1);
        let s = GroupElement::s();
        assert!((s.act(z) + 1.0 / z).norm() < 1e-15);
        let w = GroupElement::fricke(4);
        assert!((w.act(z) + 1.0 / (4.0 * z)).norm() < 1e-15);
    }
}
