//! Polynomial cocycles on Γ₀*(4) and H(2), the cocycle on PSL₂(ℤ) they induce in
//! the three-coset module, its ||-action, the ε-involution and W/C membership.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::forms::Character;
use crate::group::{
    coset_times, coset_u, decompose_gamma04star, decompose_psl2z, decompose_theta, kappa, CosetRep, Generator,
    GroupElement, GroupTag, Word,
};
use crate::period::PeriodPolynomial;
use crate::poly::Poly;
use crate::report::{pair, unpair, CheckReport, Pair, ReportRow};

/// A 1-cocycle given by its values on the defining generators of its group:
/// {−1, T, W₄} for Γ₀*(4) and {−1, T², S} for H(2). Unlisted generators map to 0.
///
/// On Γ₀*(4) the action is |_{5/2−k, χ}; on H(2) and PSL₂(ℤ) it is the plain
/// |_{5/2−k}.
#[derive(Clone, Debug, PartialEq)]
pub struct CocycleOnGenerators {
    pub group: GroupTag,
    pub values: BTreeMap<Generator, Poly>,
    pub character: Character,
    len: usize,
}

impl CocycleOnGenerators {
    pub fn new(group: GroupTag, len: usize, values: Vec<(Generator, Poly)>, character: Character) -> Result<Self> {
        if group != GroupTag::Gamma04Star && !character.is_trivial() {
            return Err(Error::Unsupported("characters are only carried on Γ₀*(4)".into()));
        }
        let mut map = BTreeMap::new();
        for (g, p) in values {
            if !group.generators().contains(&g) || g == Generator::V {
                return Err(Error::domain(format!("{g:?} is not a defining generator of {group:?}")));
            }
            p.check_len(len)?;
            map.insert(g, p);
        }
        Ok(CocycleOnGenerators {
            group,
            values: map,
            character,
            len,
        })
    }

    /// π̂(W₄) = P̂_a, π̂(−1) = π̂(T) = 0 on Γ₀*(4).
    pub fn from_period_polynomial(pa: &PeriodPolynomial, character: Character) -> Result<Self> {
        let hat = pa.hat();
        Self::new(GroupTag::Gamma04Star, hat.len(), vec![(Generator::W4, hat)], character)
    }

    /// π′(S) = P̂_a(z/2), π′(T²) = 0 on H(2).
    pub fn theta_from_period_polynomial(pa: &PeriodPolynomial) -> Result<Self> {
        let p = pa.hat().rescale(Complex64::new(0.5, 0.0));
        Self::new(GroupTag::H2, p.len(), vec![(Generator::S, p)], Character::trivial())
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn act(&self, p: &Poly, gamma: &GroupElement) -> Result<Poly> {
        match self.group {
            GroupTag::Gamma04Star => p.slash_chi(gamma, &self.character),
            _ => Ok(p.slash(gamma)),
        }
    }

    fn value(&self, g: Generator) -> Result<Poly> {
        if g == Generator::V {
            // V = W₄ T⁻¹ W₄⁻¹
            let mut w = Word::empty(GroupTag::Gamma04Star);
            w.push(Generator::W4, 1);
            w.push(Generator::T, -1);
            w.push(Generator::W4, -1);
            return self.eval_word(&w);
        }
        Ok(self.values.get(&g).cloned().unwrap_or_else(|| Poly::zero(self.len)))
    }

    // σ(g^e) by σ(g^{e}) = σ(g^{e−1})|g + σ(g) and σ(g^{−1}) = −σ(g)|g^{−1}
    fn power_value(&self, g: Generator, e: i64) -> Result<Poly> {
        let base = self.value(g)?;
        let m = g.matrix();
        let (step, step_value) = if e > 0 {
            (m.clone(), base)
        } else {
            let inv = m.inverse();
            let v = self.act(&base, &inv)?.scale(Complex64::new(-1.0, 0.0));
            (inv, v)
        };
        let mut acc = Poly::zero(self.len);
        for _ in 0..e.unsigned_abs() {
            acc = self.act(&acc, &step)?.add(&step_value);
        }
        Ok(acc)
    }

    /// Folds σ(w g^e) = σ(w)|g^e + σ(g^e) over the letters.
    pub fn eval_word(&self, word: &Word) -> Result<Poly> {
        let mut acc = Poly::zero(self.len);
        for &(g, e) in &word.letters {
            let ge = g.matrix().pow(e);
            acc = self.act(&acc, &ge)?.add(&self.power_value(g, e)?);
        }
        Ok(acc)
    }

    /// σ(γ), with γ decomposed in the generators of the cocycle's group.
    pub fn eval(&self, gamma: &GroupElement) -> Result<Poly> {
        let word = match self.group {
            GroupTag::Gamma04Star => decompose_gamma04star(gamma)?,
            GroupTag::H2 => decompose_theta(gamma)?,
            GroupTag::Psl2Z => decompose_psl2z(gamma)?,
        };
        self.eval_word(&word)
    }

    /// Coefficient norms of the defining relations: (−1)² = 1, and W₄² = −1 on
    /// Γ₀*(4) or S² = −1 on H(2), each evaluated letter by letter.
    pub fn relation_residuals(&self) -> Result<Vec<(String, f64)>> {
        let mut out = Vec::new();
        let mut neg_sq = Word::empty(self.group);
        neg_sq.letters = vec![(Generator::NegOne, 1), (Generator::NegOne, 1)];
        out.push(("(-1)^2".to_string(), self.eval_word(&neg_sq)?.max_abs()));
        let order_four = match self.group {
            GroupTag::Gamma04Star => Some(Generator::W4),
            GroupTag::H2 | GroupTag::Psl2Z => Some(Generator::S),
        };
        if let Some(g) = order_four {
            let mut sq = Word::empty(self.group);
            sq.letters = vec![(g, 1), (g, 1)];
            let neg = self.value(Generator::NegOne)?;
            out.push((format!("{g:?}^2 - (-1)"), self.eval_word(&sq)?.sub(&neg).max_abs()));
        }
        Ok(out)
    }

    pub fn check_relations(&self, tol: f64) -> Result<CheckReport> {
        let rows = self
            .relation_residuals()?
            .into_iter()
            .map(|(l, r)| ReportRow::new(l, r))
            .collect();
        Ok(CheckReport::from_rows(
            format!("{:?} cocycle relations", self.group),
            tol,
            rows,
        ))
    }
}

/// An element of the induced module: one polynomial per coset of H(2)\PSL₂(ℤ).
#[derive(Clone, Debug, PartialEq)]
pub struct InducedVector {
    pub polys: [Poly; 3],
}

#[derive(Serialize, Deserialize)]
struct InducedRecord {
    #[serde(rename = "1")]
    one: Vec<Pair>,
    #[serde(rename = "T")]
    t: Vec<Pair>,
    #[serde(rename = "U")]
    u: Vec<Pair>,
}

impl Serialize for InducedVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let c = |p: &Poly| p.coeffs.iter().map(|&z| pair(z)).collect();
        InducedRecord {
            one: c(&self.polys[0]),
            t: c(&self.polys[1]),
            u: c(&self.polys[2]),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for InducedVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = InducedRecord::deserialize(d)?;
        let p = |v: Vec<Pair>| Poly::new(v.into_iter().map(unpair).collect());
        let v = InducedVector {
            polys: [p(r.one), p(r.t), p(r.u)],
        };
        if v.polys.iter().any(|q| q.len() != v.polys[0].len()) {
            return Err(serde::de::Error::custom("coset polynomials differ in length"));
        }
        Ok(v)
    }
}

// ε x ε with ε = diag(−1, 1)
fn conjugate_by_epsilon(x: &GroupElement) -> Result<GroupElement> {
    GroupElement::from_big(x.a().clone(), -x.b().clone(), -x.c().clone(), x.d().clone(), x.scale())
}

impl InducedVector {
    pub fn zero(len: usize) -> Self {
        InducedVector {
            polys: [Poly::zero(len), Poly::zero(len), Poly::zero(len)],
        }
    }

    pub fn from_fn(mut f: impl FnMut(CosetRep) -> Result<Poly>) -> Result<Self> {
        Ok(InducedVector {
            polys: [f(CosetRep::One)?, f(CosetRep::T)?, f(CosetRep::U)?],
        })
    }

    pub fn get(&self, x: CosetRep) -> &Poly {
        &self.polys[x.index()]
    }

    pub fn len(&self) -> usize {
        self.polys[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys[0].is_empty()
    }

    pub fn add(&self, o: &InducedVector) -> InducedVector {
        InducedVector {
            polys: [0, 1, 2].map(|i| self.polys[i].add(&o.polys[i])),
        }
    }

    pub fn sub(&self, o: &InducedVector) -> InducedVector {
        self.add(&o.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> InducedVector {
        InducedVector {
            polys: [0, 1, 2].map(|i| self.polys[i].scale(c)),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.polys.iter().map(Poly::max_abs).fold(0.0, f64::max)
    }

    /// (v||g)(x) = v(x g⁻¹)|_{5/2−k} g.
    pub fn double_bar(&self, g: &GroupElement) -> Result<InducedVector> {
        if !g.is_sl2z() {
            return Err(Error::Membership(format!("{g} is not in SL₂(ℤ)")));
        }
        let g_inv = g.inverse();
        InducedVector::from_fn(|x| Ok(self.get(coset_times(x, &g_inv)?).slash(g)))
    }

    /// (v||ε)(x) = v(εxε)|ε, which is v(εxε)(−z).
    pub fn epsilon(&self) -> Result<InducedVector> {
        InducedVector::from_fn(|x| {
            let y = coset_u(&conjugate_by_epsilon(&x.matrix())?)?;
            Ok(self.get(y).rescale(Complex64::new(-1.0, 0.0)))
        })
    }

    /// (v ± v||ε)/2.
    pub fn plus_part(&self) -> Result<InducedVector> {
        Ok(self.add(&self.epsilon()?).scale(Complex64::new(0.5, 0.0)))
    }

    pub fn minus_part(&self) -> Result<InducedVector> {
        Ok(self.sub(&self.epsilon()?).scale(Complex64::new(0.5, 0.0)))
    }
}

/// π(g)(x) = π′(κ_{x, g⁻¹}⁻¹)|_{5/2−k} x for the cocycle π′ on H(2).
pub fn induced_pi(c: &CocycleOnGenerators, g: &GroupElement) -> Result<InducedVector> {
    if c.group != GroupTag::H2 {
        return Err(Error::domain("induction needs a cocycle on H(2)"));
    }
    if !g.is_sl2z() {
        return Err(Error::Membership(format!("{g} is not in SL₂(ℤ)")));
    }
    let g_inv = g.inverse();
    InducedVector::from_fn(|x| {
        let k = kappa(x, &g_inv)?.inverse();
        Ok(c.eval(&k)?.slash(&x.matrix()))
    })
}

/// Coefficient norms of v||(S+1) and v||(U²+U+1); passes iff both are below tol.
pub fn check_w_membership(v: &InducedVector, tol: f64) -> Result<CheckReport> {
    let s = GroupElement::s();
    let u = GroupElement::u();
    let s_part = v.double_bar(&s)?.add(v);
    let u1 = v.double_bar(&u)?;
    let u2 = u1.double_bar(&u)?;
    let u_part = u2.add(&u1).add(v);
    let rows = vec![
        ReportRow::new("v||(S+1)", s_part.max_abs()),
        ReportRow::new("v||(U^2+U+1)", u_part.max_abs()),
    ];
    Ok(CheckReport::from_rows("W membership", tol, rows))
}

/// P||(1 − S) for a T-invariant P, an element of the coboundary space C.
pub fn check_c_membership_form(p: &InducedVector) -> Result<InducedVector> {
    let pt = p.double_bar(&GroupElement::t())?;
    let dev = pt.sub(p).max_abs();
    if dev > 1e-10 * p.max_abs().max(1.0) {
        return Err(Error::domain(format!("vector is not T-invariant (deviation {dev:e})")));
    }
    Ok(p.sub(&p.double_bar(&GroupElement::s())?))
}

/// The identities π(U)(1) = P_a(z/√N), π(U)(T) = P_a((z − 1)/√N), π(U)(U) = 0,
/// as coefficient norms.
pub fn check_coset_identities(pa: &PeriodPolynomial, pi_u: &InducedVector, tol: f64) -> CheckReport {
    let r = Complex64::new(1.0 / (pa.level as f64).sqrt(), 0.0);
    let at_one = pa.poly.rescale(r);
    let at_t = at_one.translate(Complex64::new(-1.0, 0.0));
    let rows = vec![
        ReportRow::new("pi(U)(1) - P(z/sqrt N)", pi_u.get(CosetRep::One).sub(&at_one).max_abs()),
        ReportRow::new("pi(U)(T) - P((z-1)/sqrt N)", pi_u.get(CosetRep::T).sub(&at_t).max_abs()),
        ReportRow::new("pi(U)(U)", pi_u.get(CosetRep::U).max_abs()),
    ];
    CheckReport::from_rows("coset values of pi(U)", tol, rows)
}
