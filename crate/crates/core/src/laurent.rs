//! Sparse Laurent polynomials with exponents in `(1/d) Z^N`, products of
//! factors `1 - t^c`, Taylor coefficients of their quotients, and the
//! multivariable Euclidean division.
//!
//! Coefficients are integers: every numerator in the pipeline is integral and
//! the divisor always has leading coefficient `±1`, so division never leaves
//! the integers.

use std::collections::BTreeMap;

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Exponent numerators over the polynomial's denominator.
pub type Exponent = SmallVec<[i64; 4]>;

fn checked_add(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or(Error::Overflow("polynomial coefficients"))
}

fn checked_mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::Overflow("polynomial coefficients"))
}

fn add_exp(a: &[i64], b: &[i64]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub_exp(a: &[i64], b: &[i64]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `a >= b` in every coordinate.
pub fn dominates(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y)
}

/// `b <_S a`: `b_s < a_s` for every `s` in `subset`.
pub fn less_on(b: &[i64], a: &[i64], subset: &[usize]) -> bool {
    subset.iter().all(|&s| b[s] < a[s])
}

pub fn format_exponent(e: &[i64], den: i64) -> String {
    let parts: Vec<String> = e
        .iter()
        .map(|&x| Rational::new(i128::from(x), i128::from(den)).to_string())
        .collect();
    format!("({})", parts.join(","))
}

/// A sparse Laurent polynomial in `nvars` variables with exponents `num/den`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    nvars: usize,
    den: i64,
    terms: BTreeMap<Exponent, i128>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize, den: i64) -> Self {
        assert!(den > 0, "exponent denominator must be positive");
        LaurentPoly {
            nvars,
            den,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize, den: i64) -> Self {
        Self::monomial(nvars, den, SmallVec::from_elem(0, nvars), 1)
    }

    pub fn monomial(nvars: usize, den: i64, exp: Exponent, coeff: i128) -> Self {
        let mut p = Self::zero(nvars, den);
        p.add_term(exp, coeff);
        p
    }

    /// One-variable polynomial `Σ coeffs[i] t^i`.
    pub fn from_dense(coeffs: &[i128]) -> Self {
        let mut p = Self::zero(1, 1);
        for (i, &c) in coeffs.iter().enumerate() {
            p.add_term(SmallVec::from_elem(i as i64, 1), c);
        }
        p
    }

    /// Builds from `(exponent, coefficient)` pairs, merging repeats.
    pub fn from_terms(nvars: usize, den: i64, terms: impl IntoIterator<Item = (Exponent, i128)>) -> Self {
        let mut p = Self::zero(nvars, den);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &i128)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[i64]) -> i128 {
        self.terms.get(e).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, exp: Exponent, coeff: i128) {
        assert_eq!(exp.len(), self.nvars, "exponent length");
        if coeff == 0 {
            return;
        }
        let entry = self.terms.entry(exp);
        match entry {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars || self.den != other.den {
            return Err(Error::VariableMismatch(format!(
                "{} variables over {} vs {} variables over {}",
                self.nvars, self.den, other.nvars, other.den
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            let cur = out.coeff(e);
            let v = checked_add(cur, c)?;
            out.terms.remove(e);
            out.add_term(e.clone(), v);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            den: self.den,
            terms: self.terms.iter().map(|(e, &c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut acc: rustc_hash::FxHashMap<Exponent, i128> = Default::default();
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &other.terms {
                let slot = acc.entry(add_exp(e1, e2)).or_insert(0);
                *slot = checked_add(*slot, checked_mul(c1, c2)?)?;
            }
        }
        Ok(Self::from_terms(self.nvars, self.den, acc))
    }

    pub fn scale(&self, k: i128) -> Result<Self> {
        let mut out = Self::zero(self.nvars, self.den);
        for (e, &c) in &self.terms {
            out.add_term(e.clone(), checked_mul(c, k)?);
        }
        Ok(out)
    }

    /// Multiplication by the monomial `t^shift`.
    pub fn shift(&self, shift: &[i64]) -> Result<Self> {
        if shift.len() != self.nvars {
            return Err(Error::VariableMismatch("shift length".into()));
        }
        Ok(LaurentPoly {
            nvars: self.nvars,
            den: self.den,
            terms: self.terms.iter().map(|(e, &c)| (add_exp(e, shift), c)).collect(),
        })
    }

    /// Sum of coefficients.
    pub fn evaluate_at_one(&self) -> Rational {
        Rational::from_integer(self.terms.values().sum())
    }

    /// Coefficient list of a one-variable polynomial with integral,
    /// nonnegative exponents.
    pub fn to_dense(&self) -> Option<Vec<i128>> {
        if self.nvars != 1 {
            return None;
        }
        let mut out = Vec::new();
        for (e, &c) in &self.terms {
            if e[0] < 0 || e[0] % self.den != 0 {
                return None;
            }
            let i = (e[0] / self.den) as usize;
            if out.len() <= i {
                out.resize(i + 1, 0);
            }
            out[i] = c;
        }
        Some(out)
    }

    /// Keeps the terms whose exponent satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&[i64]) -> bool) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            den: self.den,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, &c)| (e.clone(), c))
                .collect(),
        }
    }

    /// Human-readable form, e.g. `1 - t^(2) + 3*t^(1/7,-1)`.
    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (e, &c)) in self.terms.iter().enumerate() {
            let sign = if c < 0 { "-" } else { "+" };
            if i > 0 {
                s.push_str(&format!(" {sign} "));
            } else if c < 0 {
                s.push('-');
            }
            let a = c.unsigned_abs();
            if e.iter().all(|&x| x == 0) {
                s.push_str(&a.to_string());
            } else {
                if a != 1 {
                    s.push_str(&format!("{a}*"));
                }
                s.push_str(&format!("t^{}", format_exponent(e, self.den)));
            }
        }
        s
    }
}

struct ExpJson<'a> {
    num: &'a [i64],
    den: i64,
}

impl Serialize for ExpJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("num", self.num)?;
        m.serialize_entry("den", &self.den)?;
        m.end()
    }
}

struct TermJson<'a> {
    exp: ExpJson<'a>,
    coeff: i128,
}

impl Serialize for TermJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("exp", &self.exp)?;
        m.serialize_entry("coeff", &self.coeff)?;
        m.end()
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (e, &c) in &self.terms {
            seq.serialize_element(&TermJson {
                exp: ExpJson { num: e, den: self.den },
                coeff: c,
            })?;
        }
        seq.end()
    }
}

/// A multiset of exponents `c_k`, each positive in every coordinate,
/// standing for `Π_k (1 - t^{c_k})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DenominatorFactors {
    nvars: usize,
    den: i64,
    factors: Vec<Exponent>,
}

impl DenominatorFactors {
    pub fn new(nvars: usize, den: i64, factors: Vec<Exponent>) -> Result<Self> {
        for c in &factors {
            if c.len() != nvars {
                return Err(Error::VariableMismatch("factor length".into()));
            }
            if c.iter().any(|&x| x <= 0) {
                return Err(Error::InvalidFactor(format!(
                    "{} is not positive in every coordinate",
                    format_exponent(c, den)
                )));
            }
        }
        Ok(DenominatorFactors { nvars, den, factors })
    }

    pub fn factors(&self) -> &[Exponent] {
        &self.factors
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// `a = Σ c_k`, the exponent of the unique maximal term of the product.
    pub fn total(&self) -> Exponent {
        self.factors
            .iter()
            .fold(SmallVec::from_elem(0, self.nvars), |acc, c| add_exp(&acc, c))
    }

    /// The expanded product `Π (1 - t^{c_k})`.
    pub fn product(&self) -> Result<LaurentPoly> {
        let mut p = LaurentPoly::one(self.nvars, self.den);
        for c in &self.factors {
            let mut f = LaurentPoly::one(self.nvars, self.den);
            f.add_term(c.clone(), -1);
            p = p.mul(&f)?;
        }
        Ok(p)
    }
}

/// `(Σ_{j<k} t^{jc}, k c)`, so that the numerator over `1 - t^{kc}` equals
/// `1/(1 - t^c)`.
pub fn geometric_lift(c: &[i64], den: i64, k: u32) -> Result<(LaurentPoly, Exponent)> {
    if k == 0 {
        return Err(Error::InvalidArgument("lift factor must be positive".into()));
    }
    let n = c.len();
    let mut p = LaurentPoly::zero(n, den);
    for j in 0..i64::from(k) {
        p.add_term(c.iter().map(|x| x * j).collect(), 1);
    }
    Ok((p, c.iter().map(|x| x * i64::from(k)).collect()))
}

/// Taylor coefficients of `numerator / Π(1 - t^{c_k})` at all exponents that
/// are not `>= bound`, i.e. outside the orthant cornered at `bound`.
///
/// `cap` bounds the number of enumerated terms.
pub fn taylor_coefficients(
    numerator: &LaurentPoly,
    factors: &DenominatorFactors,
    bound: &[i64],
    cap: u64,
) -> Result<BTreeMap<Exponent, i128>> {
    numerator.check(&LaurentPoly::zero(factors.nvars, factors.den))?;
    if bound.len() != factors.nvars {
        return Err(Error::VariableMismatch("box corner length".into()));
    }
    let mut out: BTreeMap<Exponent, i128> = BTreeMap::new();
    let mut count = 0u64;

    #[allow(clippy::too_many_arguments)]
    fn rec(
        i: usize,
        cur: &mut Exponent,
        coeff: i128,
        fs: &[Exponent],
        bound: &[i64],
        out: &mut BTreeMap<Exponent, i128>,
        count: &mut u64,
        cap: u64,
    ) -> Result<()> {
        if dominates(cur, bound) {
            return Ok(());
        }
        if i == fs.len() {
            *count += 1;
            if *count > cap {
                return Err(Error::BudgetExceeded(cap));
            }
            *out.entry(cur.clone()).or_insert(0) += coeff;
            return Ok(());
        }
        let c = &fs[i];
        let mut steps = 0usize;
        while !dominates(cur, bound) {
            rec(i + 1, cur, coeff, fs, bound, out, count, cap)?;
            for (x, y) in cur.iter_mut().zip(c) {
                *x += y;
            }
            steps += 1;
        }
        for (x, y) in cur.iter_mut().zip(c) {
            *x -= y * steps as i64;
        }
        Ok(())
    }

    for (e, &c) in numerator.terms() {
        let mut cur = e.clone();
        rec(0, &mut cur, c, &factors.factors, bound, &mut out, &mut count, cap)?;
    }
    out.retain(|_, c| *c != 0);
    Ok(out)
}

/// Processing order of qualifying monomials inside [`divide`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DivisionOrder {
    /// Largest coordinate sum first, ties broken lexicographically.
    #[default]
    GradedLex,
    /// Lexicographically largest first.
    Lex,
}

/// `B = C A + R` with `A = Π(1 - t^{c_k})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisionResult {
    pub quotient: LaurentPoly,
    pub remainder: LaurentPoly,
    pub subset: Vec<usize>,
}

/// Multivariable Euclidean division of `b` by `Π(1 - t^{c_k})` with respect
/// to the coordinates in `subset`.
///
/// A monomial `t^e` is reduced whenever `e_s >= a_s` for some `s` in
/// `subset`, where `a = Σ c_k` is the exponent of the maximal term of the
/// divisor; all other monomials end up in the remainder.
pub fn divide(
    b: &LaurentPoly,
    factors: &DenominatorFactors,
    subset: &[usize],
    order: DivisionOrder,
) -> Result<DivisionResult> {
    b.check(&LaurentPoly::zero(factors.nvars, factors.den))?;
    if subset.is_empty() {
        return Err(Error::InvalidArgument("comparison subset is empty".into()));
    }
    if let Some(&s) = subset.iter().find(|&&s| s >= factors.nvars) {
        return Err(Error::InvalidArgument(format!("subset index {s} out of range")));
    }
    let mut subset = subset.to_vec();
    subset.sort_unstable();
    subset.dedup();
    if factors.is_empty() {
        return Ok(DivisionResult {
            quotient: b.clone(),
            remainder: LaurentPoly::zero(b.nvars, b.den),
            subset,
        });
    }
    let a = factors.total();
    let divisor = factors.product()?;
    let lead = divisor.coeff(&a);
    debug_assert_eq!(lead.abs(), 1);
    let tail: Vec<(Exponent, i128)> = divisor
        .terms()
        .filter(|(e, _)| **e != a)
        .map(|(e, &c)| (e.clone(), c))
        .collect();

    let key = |e: &Exponent| -> (i64, Exponent) {
        match order {
            DivisionOrder::GradedLex => (e.iter().sum(), e.clone()),
            DivisionOrder::Lex => (0, e.clone()),
        }
    };

    let mut quotient = LaurentPoly::zero(b.nvars, b.den);
    let mut remainder: rustc_hash::FxHashMap<Exponent, i128> = Default::default();
    let mut work: BTreeMap<(i64, Exponent), i128> = BTreeMap::new();
    for (e, &c) in b.terms() {
        if less_on(e, &a, &subset) {
            remainder.insert(e.clone(), c);
        } else {
            work.insert(key(e), c);
        }
    }
    while let Some(((_, e), c)) = work.pop_last() {
        if c == 0 {
            continue;
        }
        let q = c * lead;
        let qe = sub_exp(&e, &a);
        for (t, tc) in &tail {
            let spawned = add_exp(&qe, t);
            let v = checked_mul(-q, *tc)?;
            if less_on(&spawned, &a, &subset) {
                let slot = remainder.entry(spawned).or_insert(0);
                *slot = checked_add(*slot, v)?;
            } else {
                let slot = work.entry(key(&spawned)).or_insert(0);
                *slot = checked_add(*slot, v)?;
            }
        }
        quotient.add_term(qe, q);
    }
    Ok(DivisionResult {
        quotient,
        remainder: LaurentPoly::from_terms(b.nvars, b.den, remainder),
        subset,
    })
}

impl DivisionResult {
    /// Checks `B = C A + R` by multiplication.
    pub fn reconstructs(&self, b: &LaurentPoly, factors: &DenominatorFactors) -> Result<bool> {
        let ca = self.quotient.mul(&factors.product()?)?;
        Ok(ca.add(&self.remainder)? == *b)
    }
}
