use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::GroupElement;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Generator {
    NegOne,
    T,
    /// (1, 0; 4, 1)
    V,
    /// Fricke involution of level 4
    W4,
    /// T²
    T2,
    S,
}

impl Generator {
    pub fn matrix(self) -> GroupElement {
        match self {
            Generator::NegOne => GroupElement::neg_one(),
            Generator::T => GroupElement::t(),
            Generator::V => GroupElement::v(),
            Generator::W4 => GroupElement::fricke(4),
            Generator::T2 => GroupElement::t().pow(2),
            Generator::S => GroupElement::s(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupTag {
    Gamma04Star,
    H2,
    Psl2Z,
}

impl GroupTag {
    pub fn generators(self) -> &'static [Generator] {
        match self {
            GroupTag::Gamma04Star => &[Generator::NegOne, Generator::T, Generator::V, Generator::W4],
            GroupTag::H2 => &[Generator::NegOne, Generator::T2, Generator::S],
            GroupTag::Psl2Z => &[Generator::NegOne, Generator::T, Generator::S],
        }
    }
}

/// A word in the generators of one of the three groups, with nonzero exponents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Word {
    pub group: GroupTag,
    pub letters: Vec<(Generator, i64)>,
}

impl Word {
    pub fn empty(group: GroupTag) -> Self {
        Word {
            group,
            letters: Vec::new(),
        }
    }

    /// Appends a letter, merging with an equal trailing generator.
    pub fn push(&mut self, g: Generator, e: i64) {
        if e == 0 {
            return;
        }
        if let Some(last) = self.letters.last_mut() {
            if last.0 == g {
                last.1 += e;
                if last.1 == 0 {
                    self.letters.pop();
                }
                return;
            }
        }
        self.letters.push((g, e));
    }

    pub fn recompose(&self) -> GroupElement {
        self.letters
            .iter()
            .fold(GroupElement::identity(), |acc, &(g, e)| acc.mul(&g.matrix().pow(e)))
    }

    pub fn inverse(&self) -> Word {
        let mut w = Word::empty(self.group);
        for &(g, e) in self.letters.iter().rev() {
            w.push(g, -e);
        }
        w
    }

    /// Rewrites S-powers as S^{±1} = ±S, collecting all signs into one trailing −1.
    fn canonicalize_s(self) -> Word {
        let mut negative = false;
        let mut out = Word::empty(self.group);
        for (g, e) in self.letters {
            match g {
                Generator::NegOne => negative ^= e.rem_euclid(2) == 1,
                Generator::S => {
                    let r = e.rem_euclid(4);
                    negative ^= r >= 2;
                    if r % 2 == 1 {
                        if out.letters.last() == Some(&(Generator::S, 1)) {
                            // S·S = −1
                            out.letters.pop();
                            negative ^= true;
                        } else {
                            out.push(Generator::S, 1);
                        }
                    }
                }
                _ => out.push(g, e),
            }
        }
        if negative {
            out.push(Generator::NegOne, 1);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|(g, e)| {
                if *e == 1 {
                    format!("{g:?}")
                } else {
                    format!("{g:?}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("·"))
    }
}

fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64()
        .ok_or_else(|| Error::Unsupported("word exponent does not fit in 64 bits".into()))
}

// nearest integer to p/q, ties away from zero
fn round_div(p: &BigInt, q: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    let (fl, _) = (p * &two + q).div_mod_floor(&(q * &two));
    fl
}

/// Closes a reduction that ended at ±T^b: appends the T-part and the sign.
fn finish_translation(word: &mut Word, m: &GroupElement, t_gen: Generator, step: i64) -> Result<()> {
    let sign_neg = m.a().is_negative();
    // m = ±(1, b'; 0, 1)
    let b = if sign_neg { -m.b().clone() } else { m.b().clone() };
    let b = to_i64(&b)?;
    if b % step != 0 {
        return Err(Error::Membership(format!(
            "translation part {b} is not a multiple of {step}"
        )));
    }
    word.push(t_gen, b / step);
    if sign_neg {
        word.push(Generator::NegOne, 1);
    }
    Ok(())
}

/// Word for γ ∈ Γ₀(4), or γ = W₄·(element of Γ₀(4)), in {−1, T, V, W₄}.
pub fn decompose_gamma04star(gamma: &GroupElement) -> Result<Word> {
    let mut word = Word::empty(GroupTag::Gamma04Star);
    let body = match gamma.scale() {
        1 => gamma.clone(),
        4 => {
            let rest = GroupElement::fricke(4).inverse().mul(gamma);
            if rest.scale() != 1 {
                return Err(Error::Membership(format!("{gamma} is not in Γ₀*(4)")));
            }
            word.push(Generator::W4, 1);
            rest
        }
        _ => return Err(Error::Membership(format!("{gamma} is not in Γ₀*(4)"))),
    };
    if !body.in_gamma0(4) {
        return Err(Error::Membership(format!("{gamma} is not in Γ₀*(4)")));
    }
    // Left-multiply by powers of T and V until c = 0. Since a is odd and 4 | c,
    // each pair of steps strictly shrinks |a|.
    let mut m = body;
    let four = BigInt::from(4);
    while !m.c().is_zero() {
        let k = to_i64(&-round_div(m.a(), m.c()))?;
        if k != 0 {
            m = GroupElement::t().pow(k).mul(&m);
            word.push(Generator::T, -k);
        }
        if m.c().is_zero() {
            break;
        }
        let k = to_i64(&-round_div(m.c(), &(m.a() * &four)))?;
        if k != 0 {
            m = GroupElement::v().pow(k).mul(&m);
            word.push(Generator::V, -k);
        }
    }
    finish_translation(&mut word, &m, Generator::T, 1)?;
    Ok(word)
}

/// Word for an element of the theta group H(2) in {−1, T², S}.
pub fn decompose_theta(gamma: &GroupElement) -> Result<Word> {
    if !gamma.in_theta_group() {
        return Err(Error::Membership(format!("{gamma} is not in the theta group")));
    }
    let mut word = Word::empty(GroupTag::H2);
    let mut m = gamma.clone();
    let two = BigInt::from(2);
    // a and c have opposite parity, so reducing a mod 2c gives |a| < |c|;
    // the S-step then swaps them and |c| strictly drops.
    while !m.c().is_zero() {
        let k = to_i64(&-round_div(m.a(), &(m.c() * &two)))?;
        if k != 0 {
            m = GroupElement::t().pow(2 * k).mul(&m);
            word.push(Generator::T2, -k);
        }
        if m.c().is_zero() {
            break;
        }
        m = GroupElement::s().mul(&m);
        word.push(Generator::S, -1);
    }
    finish_translation(&mut word, &m, Generator::T2, 2)?;
    Ok(word.canonicalize_s())
}

/// Word for an SL₂(ℤ) element in {−1, T, S}.
pub fn decompose_psl2z(gamma: &GroupElement) -> Result<Word> {
    if !gamma.is_sl2z() {
        return Err(Error::Membership(format!("{gamma} is not in SL₂(ℤ)")));
    }
    let mut word = Word::empty(GroupTag::Psl2Z);
    let mut m = gamma.clone();
    while !m.c().is_zero() {
        let k = to_i64(&-round_div(m.a(), m.c()))?;
        if k != 0 {
            m = GroupElement::t().pow(k).mul(&m);
            word.push(Generator::T, -k);
        }
        if m.c().is_zero() {
            break;
        }
        m = GroupElement::s().mul(&m);
        word.push(Generator::S, -1);
    }
    finish_translation(&mut word, &m, Generator::T, 1)?;
    Ok(word.canonicalize_s())
}

/// The coset representatives {1, T, U} of H(2)\PSL₂(ℤ).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CosetRep {
    One,
    T,
    U,
}

impl CosetRep {
    pub const ALL: [CosetRep; 3] = [CosetRep::One, CosetRep::T, CosetRep::U];

    pub fn matrix(self) -> GroupElement {
        match self {
            CosetRep::One => GroupElement::identity(),
            CosetRep::T => GroupElement::t(),
            CosetRep::U => GroupElement::u(),
        }
    }

    pub fn index(self) -> usize {
        match self {
            CosetRep::One => 0,
            CosetRep::T => 1,
            CosetRep::U => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            CosetRep::One => "1",
            CosetRep::T => "T",
            CosetRep::U => "U",
        }
    }
}

/// The representative u(x) of the coset H(2)x, read off from x mod 2.
pub fn coset_u(x: &GroupElement) -> Result<CosetRep> {
    if !x.is_sl2z() {
        return Err(Error::Membership(format!("{x} is not in SL₂(ℤ)")));
    }
    for r in CosetRep::ALL {
        if x.mul(&r.matrix().inverse()).in_theta_group() {
            return Ok(r);
        }
    }
    Err(Error::Invariant(format!("{x} lies in no coset of H(2)")))
}

/// κ_{x,g} = u(x) g u(xg)^{-1}, an element of H(2).
pub fn kappa(x: CosetRep, g: &GroupElement) -> Result<GroupElement> {
    let xm = x.matrix();
    let target = coset_u(&xm.mul(g))?;
    let k = xm.mul(g).mul(&target.matrix().inverse());
    if !k.in_theta_group() {
        return Err(Error::Invariant(format!(
            "kappa({}, {g}) = {k} left the theta group",
            x.label()
        )));
    }
    Ok(k)
}

/// The coset reached from x by right multiplication with g.
pub fn coset_times(x: CosetRep, g: &GroupElement) -> Result<CosetRep> {
    coset_u(&x.matrix().mul(g))
}
