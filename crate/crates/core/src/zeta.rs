//! The reduced zeta-function, its polynomial parts, and Seiberg-Witten
//! invariants with the counting-function oracle.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::Serialize;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::graph::{OrbifoldGraph, PlumbingGraph};
use crate::laurent::{self, DenominatorFactors, DivisionOrder, DivisionResult, Exponent, LaurentPoly};
use crate::lattice::{Class, Lattice, RationalVector};
use crate::rational::{self, Rational};

/// Mixed-radix arithmetic on class indices.
#[derive(Debug, Clone)]
struct ClassIndex {
    radix: Vec<usize>,
}

impl ClassIndex {
    fn add(&self, a: usize, b: usize) -> usize {
        if self.radix.len() == 1 {
            return (a + b) % self.radix[0];
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for &d in self.radix.iter().rev() {
            out += ((a % d + b % d) % d) * place;
            place *= d;
            a /= d;
            b /= d;
        }
        out
    }

    fn scale(&self, a: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.add(acc, a))
    }
}

/// Per class `h`: the numerator `B_h` over the shared factors
/// `Π_{ends} (1 - t^{o_v π(E*_v)})`.
#[derive(Debug, Clone)]
pub struct ReducedZeta {
    lattice: Lattice,
    classes: Vec<Class>,
    numerators: Vec<LaurentPoly>,
    factors: DenominatorFactors,
    /// `(end vertex, order of [E*_v])`.
    end_orders: Vec<(usize, i64)>,
}

impl ReducedZeta {
    pub fn build(lattice: &Lattice) -> Result<Self> {
        Self::build_capped(lattice, crate::term_cap_from_env())
    }

    /// Like [`build`](Self::build), giving up once one step of the expansion
    /// would produce more than `cap` products.
    pub fn build_capped(lattice: &Lattice, cap: u64) -> Result<Self> {
        let g = lattice.graph();
        let nodes = lattice.nodes();
        if nodes.is_empty() {
            return Err(Error::NoNodes);
        }
        let group = lattice.group();
        let nv = nodes.len();
        let den = lattice.det();
        let classes = group.classes();
        let arith = ClassIndex {
            radix: group.factors.iter().map(|&d| d as usize).collect(),
        };
        let arith_ref = &arith;

        // (class index, node exponent) -> coefficient
        type Key = (u32, Exponent);
        let mut acc: FxHashMap<Key, i128> = FxHashMap::default();
        acc.insert((0, SmallVec::from_elem(0, nv)), 1);

        let mul = |acc: FxHashMap<Key, i128>, factor: &[(usize, Exponent, i128)]| -> Result<FxHashMap<Key, i128>> {
            if (acc.len() as u128) * (factor.len() as u128) > u128::from(cap) {
                return Err(Error::BudgetExceeded(cap));
            }
            let mut out: FxHashMap<Key, i128> =
                FxHashMap::with_capacity_and_hasher(acc.len() * factor.len(), Default::default());
            for ((c, e), &k) in &acc {
                for (fc, fe, fk) in factor {
                    let key = (
                        arith_ref.add(*c as usize, *fc) as u32,
                        e.iter().zip(fe).map(|(x, y)| x + y).collect(),
                    );
                    let slot = out.entry(key).or_insert(0);
                    *slot = slot
                        .checked_add(k.checked_mul(*fk).ok_or(Error::Overflow("zeta numerator"))?)
                        .ok_or(Error::Overflow("zeta numerator"))?;
                }
            }
            out.retain(|_, c| *c != 0);
            Ok(out)
        };

        for &n in nodes {
            let cls = group.index(&lattice.class_of_dual(n));
            let exp = lattice.projected_dual(n);
            let factor = [(0, SmallVec::from_elem(0, nv), 1), (cls, exp, -1)];
            for _ in 0..g.valency(n) - 2 {
                acc = mul(acc, &factor)?;
            }
        }
        let mut end_orders = Vec::new();
        let mut denominators = Vec::new();
        for v in g.ends() {
            let c = lattice.class_of_dual(v);
            let o = group.order_of(&c);
            let cls = group.index(&c);
            let exp = lattice.projected_dual(v);
            let factor: Vec<(usize, Exponent, i128)> = (0..o as usize)
                .map(|j| (arith.scale(cls, j), exp.iter().map(|x| x * j as i64).collect(), 1))
                .collect();
            acc = mul(acc, &factor)?;
            end_orders.push((v, o));
            denominators.push(exp.iter().map(|x| x * o).collect());
        }

        let mut numerators: Vec<LaurentPoly> = classes.iter().map(|_| LaurentPoly::zero(nv, den)).collect();
        for ((c, e), k) in acc {
            numerators[c as usize].add_term(e, k);
        }
        Ok(ReducedZeta {
            lattice: lattice.clone(),
            classes,
            numerators,
            factors: DenominatorFactors::new(nv, den, denominators)?,
            end_orders,
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn classes(&self) -> &[Class] {
        &self.classes
    }

    pub fn numerator(&self, h: usize) -> &LaurentPoly {
        &self.numerators[h]
    }

    pub fn numerators(&self) -> &[LaurentPoly] {
        &self.numerators
    }

    pub fn factors(&self) -> &DenominatorFactors {
        &self.factors
    }

    pub fn end_orders(&self) -> &[(usize, i64)] {
        &self.end_orders
    }

    pub fn nvars(&self) -> usize {
        self.factors.nvars()
    }

    pub fn class_index(&self, c: &Class) -> Result<usize> {
        let i = self.lattice.group().index(c);
        if self.classes.get(i) != Some(c) {
            return Err(Error::InvalidArgument(format!("{:?} is not a class of H", c.0)));
        }
        Ok(i)
    }

    /// `f(t_N)` without class splitting: node factors in the numerator and one
    /// unlifted factor `1 - t^{π(E*_v)}` per end.
    pub fn unsplit(&self) -> Result<(LaurentPoly, DenominatorFactors)> {
        let l = &self.lattice;
        let g = l.graph();
        let nv = self.nvars();
        let den = l.det();
        let mut num = LaurentPoly::one(nv, den);
        for &n in l.nodes() {
            let mut f = LaurentPoly::one(nv, den);
            f.add_term(l.projected_dual(n), -1);
            for _ in 0..g.valency(n) - 2 {
                num = num.mul(&f)?;
            }
        }
        let fs = g.ends().into_iter().map(|v| l.projected_dual(v)).collect();
        Ok((num, DenominatorFactors::new(nv, den, fs)?))
    }

    /// Division of `B_h` with respect to the node subset `subset`.
    pub fn divide(&self, h: usize, subset: &[usize], order: DivisionOrder) -> Result<DivisionResult> {
        laurent::divide(&self.numerators[h], &self.factors, subset, order)
    }

    /// `P^+_h`, the quotient of the division with respect to all nodes.
    pub fn polynomial_plus(&self, h: usize) -> Result<LaurentPoly> {
        let all: Vec<usize> = (0..self.nvars()).collect();
        Ok(self.divide(h, &all, DivisionOrder::GradedLex)?.quotient)
    }

    /// The combination `Σ_{edges} P^{n,n'}_h - Σ_n (δ_{n,N} - 1) P^n_h` of
    /// divisions with respect to single nodes and orbifold edges.
    pub fn polynomial_part_via_pairs(&self, h: usize, orb: &OrbifoldGraph) -> Result<LaurentPoly> {
        let mut total = LaurentPoly::zero(self.nvars(), self.lattice.det());
        for &(a, b) in &orb.edges {
            total = total.add(&self.divide(h, &[a, b], DivisionOrder::GradedLex)?.quotient)?;
        }
        for n in 0..orb.len() {
            let w = orb.valency[n] as i128 - 1;
            if w != 0 {
                let q = self.divide(h, &[n], DivisionOrder::GradedLex)?.quotient;
                total = total.sub(&q.scale(w)?)?;
            }
        }
        Ok(total)
    }
}

/// `𝔰(β) = [β_{n0} >= 0] + #{oriented edges n -> n' : β_n >= 0 > β_{n'}}`.
pub fn multiplicity(beta: &[i64], orb: &OrbifoldGraph) -> Result<u32> {
    if beta.len() != orb.len() {
        return Err(Error::VariableMismatch(format!(
            "exponent has {} coordinates, orbifold graph {} nodes",
            beta.len(),
            orb.len()
        )));
    }
    let root = u32::from(beta[orb.root] >= 0);
    let edges = orb
        .edges
        .iter()
        .filter(|&&(n, m)| beta[n] >= 0 && beta[m] < 0)
        .count() as u32;
    Ok(root + edges)
}

/// One monomial `p_β t^β` of `P^+_h` with its multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartTerm {
    pub exp: Exponent,
    pub coeff: i128,
    pub multiplicity: u32,
}

/// `P^+_h` together with `P_h = Σ 𝔰(β) p_β t^β`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialPart {
    pub plus: LaurentPoly,
    pub weighted: LaurentPoly,
    pub terms: Vec<PartTerm>,
}

pub fn polynomial_part(plus: &LaurentPoly, orb: &OrbifoldGraph) -> Result<PolynomialPart> {
    let mut weighted = LaurentPoly::zero(plus.nvars(), plus.den());
    let mut terms = Vec::with_capacity(plus.len());
    for (e, &c) in plus.terms() {
        let s = multiplicity(e, orb)?;
        weighted.add_term(e.clone(), c * i128::from(s));
        terms.push(PartTerm {
            exp: e.clone(),
            coeff: c,
            multiplicity: s,
        });
    }
    Ok(PolynomialPart {
        plus: plus.clone(),
        weighted,
        terms,
    })
}

/// Along a bamboo order, the nonnegative coordinates of `β` form one
/// nonempty consecutive block.
pub fn bamboo_sign_pattern(beta: &[i64], order: &[usize]) -> bool {
    let signs: Vec<bool> = order.iter().map(|&i| beta[i] >= 0).collect();
    let first = signs.iter().position(|&s| s);
    let last = signs.iter().rposition(|&s| s);
    match (first, last) {
        (Some(a), Some(b)) => signs[a..=b].iter().all(|&s| s),
        _ => false,
    }
}

/// Sums of Taylor coefficients of `Z(t)` in all variables over the exponents
/// `l' ≱ x`, one sum per class of `H` (indexed like [`DiscriminantGroup::classes`]).
///
/// [`DiscriminantGroup::classes`]: crate::lattice::DiscriminantGroup::classes
pub fn counting_all(lattice: &Lattice, x: &RationalVector, cap: u64) -> Result<Vec<i128>> {
    let g = lattice.graph();
    let group = lattice.group();
    let arith = ClassIndex {
        radix: group.factors.iter().map(|&d| d as usize).collect(),
    };
    let nclass = group.order() as usize;
    if x.den != lattice.det() || x.len() != lattice.dim() {
        return Err(Error::InvalidArgument("counting point must be a lattice vector".into()));
    }

    // numerator terms of Π_nodes (1 - t^{E*_n})^{δ_n - 2}
    let mut num: FxHashMap<(usize, Vec<i64>), i128> = FxHashMap::default();
    num.insert((0, vec![0; lattice.dim()]), 1);
    for v in 0..g.len() {
        if g.valency(v) < 3 {
            continue;
        }
        let d = lattice.dual(v).num;
        let c = group.index(&lattice.class_of_dual(v));
        for _ in 0..g.valency(v) - 2 {
            let mut next: FxHashMap<(usize, Vec<i64>), i128> = FxHashMap::default();
            for ((cl, e), &k) in &num {
                *next.entry((*cl, e.clone())).or_insert(0) += k;
                let e2: Vec<i64> = e.iter().zip(&d).map(|(a, b)| a + b).collect();
                *next.entry((arith.add(*cl, c), e2)).or_insert(0) -= k;
            }
            next.retain(|_, k| *k != 0);
            num = next;
        }
    }
    // denominator generators: ends once, an isolated vertex twice
    let mut gens: Vec<Generator> = (0..g.len())
        .flat_map(|v| {
            let times = 2usize.saturating_sub(g.valency(v));
            let cls = lattice.class_of_dual(v);
            let gen = Generator {
                class: group.index(&cls),
                order: group.order_of(&cls) as usize,
                exp: lattice.dual(v).num,
            };
            std::iter::repeat_n(gen, times)
        })
        .collect();
    // the innermost generator is summed in closed form; let it be the one
    // with the longest runs below x
    let reach = |gen: &Generator| x.num.iter().zip(&gen.exp).map(|(a, c)| a / c).max().unwrap_or(0);
    gens.sort_by_key(reach);

    let mut starts: Vec<(usize, Vec<i64>, i128)> = num.into_iter().map(|((c, e), k)| (c, e, k)).collect();
    starts.sort();

    let counter = AtomicU64::new(0);
    let ctx = Ctx {
        gens: &gens,
        bound: &x.num,
        arith: &arith,
        counter: &counter,
        cap,
    };
    let parts: Vec<Vec<i128>> = starts
        .into_par_iter()
        .map(|(c, mut e, k)| {
            let mut acc = vec![0i128; nclass];
            let mut local = 0u64;
            count_rec(&ctx, 0, &mut e, c, k, &mut acc, &mut local)?;
            ctx.counter.fetch_add(local, Ordering::Relaxed);
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    if counter.load(Ordering::Relaxed) > cap {
        return Err(Error::BudgetExceeded(cap));
    }
    let mut out = vec![0i128; nclass];
    for p in parts {
        for (o, v) in out.iter_mut().zip(p) {
            *o += v;
        }
    }
    Ok(out)
}

#[derive(Clone)]
struct Generator {
    class: usize,
    order: usize,
    exp: Vec<i64>,
}

struct Ctx<'a> {
    gens: &'a [Generator],
    bound: &'a [i64],
    arith: &'a ClassIndex,
    counter: &'a AtomicU64,
    cap: u64,
}

fn dominated(e: &[i64], b: &[i64]) -> bool {
    e.iter().zip(b).all(|(x, y)| x >= y)
}

fn tick(ctx: &Ctx, local: &mut u64) -> Result<()> {
    *local += 1;
    if *local >= 4096 {
        let total = ctx.counter.fetch_add(*local, Ordering::Relaxed) + *local;
        *local = 0;
        if total > ctx.cap {
            return Err(Error::BudgetExceeded(ctx.cap));
        }
    }
    Ok(())
}

fn count_rec(
    ctx: &Ctx,
    i: usize,
    cur: &mut Vec<i64>,
    cls: usize,
    coeff: i128,
    acc: &mut [i128],
    local: &mut u64,
) -> Result<()> {
    if dominated(cur, ctx.bound) {
        return Ok(());
    }
    if i == ctx.gens.len() {
        acc[cls] += coeff;
        return tick(ctx, local);
    }
    let gen = &ctx.gens[i];
    if i + 1 == ctx.gens.len() {
        // cur + k c ≱ x exactly for 0 <= k < runs
        let runs = cur
            .iter()
            .zip(ctx.bound)
            .zip(&gen.exp)
            .filter(|((s, x), _)| s < x)
            .map(|((s, x), c)| (x - s - 1) / c + 1)
            .max()
            .unwrap_or(0) as usize;
        let mut c = cls;
        for j in 0..runs.min(gen.order) {
            let hits = (runs - j).div_ceil(gen.order) as i128;
            acc[c] += coeff * hits;
            c = ctx.arith.add(c, gen.class);
        }
        return tick(ctx, local);
    }
    let mut steps = 0i64;
    let mut c = cls;
    while !dominated(cur, ctx.bound) {
        count_rec(ctx, i + 1, cur, c, coeff, acc, local)?;
        for (a, b) in cur.iter_mut().zip(&gen.exp) {
            *a += b;
        }
        c = ctx.arith.add(c, gen.class);
        steps += 1;
    }
    for (a, b) in cur.iter_mut().zip(&gen.exp) {
        *a -= b * steps;
    }
    Ok(())
}

/// `Q_h(x) = Σ_{l' ≱ x, [l'] = h} p_{l'}`.
pub fn counting_function(lattice: &Lattice, h: &Class, x: &RationalVector, cap: u64) -> Result<Rational> {
    let i = lattice.group().index(h);
    Ok(Rational::from_integer(counting_all(lattice, x, cap)?[i]))
}

/// `Q_h(x) - χ_{K + 2 r_h}(x)` for every class; `x` must satisfy
/// `(x + K, E_v) < 0` for all `v`.
pub fn sw_norm_by_counting(lattice: &Lattice, x: &RationalVector, cap: u64) -> Result<Vec<Rational>> {
    if !lattice.is_deep(x) {
        return Err(Error::InvalidArgument("counting point is not in -K + int(S')".into()));
    }
    let q = counting_all(lattice, x, cap)?;
    lattice
        .group()
        .classes()
        .iter()
        .zip(q)
        .map(|(c, qh)| {
            let r = lattice.representative(c)?;
            let k = lattice.canonical_class().add(&r.scale(2));
            Ok(Rational::from_integer(qh) - lattice.chi(&k, x))
        })
        .collect()
}

/// Checks `taylor(P^+) + taylor(R/A) = taylor(B/A)` outside the orthant at `bound`.
pub fn taylor_decomposition_holds(
    b: &LaurentPoly,
    factors: &DenominatorFactors,
    division: &DivisionResult,
    bound: &[i64],
    cap: u64,
) -> Result<bool> {
    let lhs = laurent::taylor_coefficients(b, factors, bound, cap)?;
    let mut rhs = laurent::taylor_coefficients(&division.remainder, factors, bound, cap)?;
    for (e, &c) in division.quotient.terms() {
        if !laurent::dominates(e, bound) {
            *rhs.entry(e.clone()).or_insert(0) += c;
        }
    }
    rhs.retain(|_, c| *c != 0);
    Ok(lhs == rhs)
}

/// Which classes to compute and which oracles to run.
#[derive(Debug, Clone)]
pub struct InvariantOptions {
    /// `None` means every class.
    pub classes: Option<Vec<Class>>,
    /// Run the counting-function and pair-division oracles.
    pub oracle: bool,
    /// Recompute `P_h` for every choice of root.
    pub root_check: bool,
    /// Deep-point margin whose node projection is the Taylor-check corner.
    pub taylor_box: Option<i64>,
    pub root: Option<String>,
    pub term_cap: u64,
    pub timing: bool,
}

impl Default for InvariantOptions {
    fn default() -> Self {
        InvariantOptions {
            classes: None,
            oracle: true,
            root_check: true,
            taylor_box: None,
            root: None,
            term_cap: crate::term_cap_from_env(),
            timing: false,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ClassChecks {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub countf: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairs_oracle: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub root_invariance: Option<bool>,
    /// `P_h(1) = P^+_h(1)`.
    pub p_equals_p_plus_at_1: bool,
    /// Every `β` of `P^+_h` has `𝔰(β) >= 1`.
    pub multiplicity_positive: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub taylor: Option<bool>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ClassReport {
    pub h: Class,
    #[serde(skip)]
    pub index: usize,
    /// Counting-function value when the oracle ran, otherwise `P_h(1)`.
    #[serde(serialize_with = "rational::serialize")]
    pub sw_norm: Rational,
    #[serde(serialize_with = "rational::serialize")]
    pub p_at_1: Rational,
    #[serde(serialize_with = "rational::serialize")]
    pub p_plus_at_1: Rational,
    /// `Q_h(x) - χ_{K+2r_h}(x)` at the two deep points.
    #[serde(skip_serializing_if = "Vec::is_empty", serialize_with = "serialize_rats")]
    pub countf: Vec<Rational>,
    /// The unnormalized invariant `-sw_norm - ((K + 2 r_h)^2 + |V|) / 8`.
    #[serde(serialize_with = "rational::serialize")]
    pub sw: Rational,
    pub r_h: RationalVector,
    #[serde(rename = "P_plus")]
    pub p_plus: LaurentPoly,
    #[serde(rename = "P")]
    pub p: LaurentPoly,
    /// Exponents with `𝔰(β) >= 2`, as `(β, p_β, 𝔰(β))`.
    #[serde(serialize_with = "serialize_multi")]
    pub higher_multiplicity: Vec<PartTerm>,
    pub checks: ClassChecks,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

fn serialize_rats<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

fn serialize_multi<S: serde::Serializer>(v: &[PartTerm], s: S) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct T<'a> {
        exp: &'a [i64],
        coeff: i128,
        multiplicity: u32,
    }
    s.collect_seq(v.iter().map(|t| T {
        exp: &t.exp,
        coeff: t.coeff,
        multiplicity: t.multiplicity,
    }))
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct InvariantReport {
    pub det: i64,
    pub group: Vec<i64>,
    pub nodes: Vec<String>,
    pub root: String,
    pub bamboo: bool,
    /// All computed routes agree for every class.
    pub consistent: bool,
    pub classes: Vec<ClassReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

/// Runs the full pipeline on a graph.
pub fn sw_invariants(graph: &PlumbingGraph, opts: &InvariantOptions) -> Result<InvariantReport> {
    let lattice = Lattice::new(graph)?;
    let zeta = ReducedZeta::build(&lattice)?;
    sw_invariants_with(&zeta, opts)
}

pub fn sw_invariants_with(zeta: &ReducedZeta, opts: &InvariantOptions) -> Result<InvariantReport> {
    let start = Instant::now();
    let lattice = zeta.lattice();
    let graph = lattice.graph();
    let orb = graph.orbifold_graph(opts.root.as_deref())?;
    let other_roots: Vec<OrbifoldGraph> = if opts.root_check {
        (0..orb.len())
            .filter(|&r| r != orb.root)
            .map(|r| graph.orbifold_graph(Some(&orb.ids[r])))
            .collect::<Result<_>>()?
    } else {
        Vec::new()
    };

    let selected: Vec<usize> = match &opts.classes {
        None => (0..zeta.classes().len()).collect(),
        Some(cs) => cs.iter().map(|c| zeta.class_index(c)).collect::<Result<_>>()?,
    };

    let countf: Option<Vec<Vec<Rational>>> = if opts.oracle {
        let a = sw_norm_by_counting(lattice, &lattice.deep_point(1)?, opts.term_cap)?;
        let b = sw_norm_by_counting(lattice, &lattice.second_deep_point()?, opts.term_cap)?;
        Some(a.into_iter().zip(b).map(|(x, y)| vec![x, y]).collect())
    } else {
        None
    };
    let bound = match opts.taylor_box {
        Some(m) => Some(lattice.project_to_nodes(&lattice.deep_point(m)?)?),
        None => None,
    };
    let nverts = Rational::from_integer(lattice.dim() as i128);

    let classes: Vec<ClassReport> = selected
        .par_iter()
        .map(|&h| -> Result<ClassReport> {
            let t0 = Instant::now();
            let all: Vec<usize> = (0..zeta.nvars()).collect();
            let division = zeta.divide(h, &all, DivisionOrder::GradedLex)?;
            let part = polynomial_part(&division.quotient, &orb)?;
            let p_at_1 = part.weighted.evaluate_at_one();
            let p_plus_at_1 = part.plus.evaluate_at_one();

            let root_invariance = if opts.root_check {
                let mut ok = true;
                for o in &other_roots {
                    ok &= polynomial_part(&division.quotient, o)?.weighted == part.weighted;
                }
                Some(ok)
            } else {
                None
            };
            let pairs_oracle = if opts.oracle {
                Some(zeta.polynomial_part_via_pairs(h, &orb)? == part.weighted)
            } else {
                None
            };
            let taylor = match &bound {
                Some(b) => Some(taylor_decomposition_holds(
                    zeta.numerator(h),
                    zeta.factors(),
                    &division,
                    b,
                    opts.term_cap,
                )?),
                None => None,
            };
            let cf = countf.as_ref().map(|v| v[h].clone()).unwrap_or_default();
            let countf_ok = if cf.is_empty() {
                None
            } else {
                Some(cf.iter().all(|&v| v == p_at_1))
            };
            let sw_norm = cf.first().copied().unwrap_or(p_at_1);

            let class = zeta.classes()[h].clone();
            let r = lattice.representative(&class)?;
            let k = lattice.canonical_class().add(&r.scale(2));
            let sw = -sw_norm - (lattice.pair(&k, &k) + nverts) / 8;
            let higher: Vec<PartTerm> = part.terms.iter().filter(|t| t.multiplicity >= 2).cloned().collect();
            Ok(ClassReport {
                h: class,
                index: h,
                sw_norm,
                p_at_1,
                p_plus_at_1,
                countf: cf,
                sw,
                r_h: r,
                checks: ClassChecks {
                    countf: countf_ok,
                    pairs_oracle,
                    root_invariance,
                    p_equals_p_plus_at_1: p_at_1 == p_plus_at_1,
                    multiplicity_positive: part.terms.iter().all(|t| t.multiplicity >= 1),
                    taylor,
                },
                p_plus: part.plus,
                p: part.weighted,
                higher_multiplicity: higher,
                millis: opts.timing.then(|| t0.elapsed().as_millis() as u64),
            })
        })
        .collect::<Result<_>>()?;

    let consistent = classes.iter().all(|c| {
        let ch = &c.checks;
        ch.countf.unwrap_or(true)
            && ch.pairs_oracle.unwrap_or(true)
            && ch.root_invariance.unwrap_or(true)
            && ch.taylor.unwrap_or(true)
            && ch.multiplicity_positive
    });
    Ok(InvariantReport {
        det: lattice.det(),
        group: lattice.group().factors.clone(),
        nodes: orb.ids.clone(),
        root: orb.ids[orb.root].clone(),
        bamboo: orb.is_bamboo(),
        consistent,
        classes,
        millis: opts.timing.then(|| start.elapsed().as_millis() as u64),
    })
}
