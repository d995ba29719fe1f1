//! Algebraic knots, their semigroups and Alexander polynomials, the plumbing
//! graph of `(-p/q)`-surgery along a connected sum of algebraic knots, and
//! the Alexander-polynomial route to its Seiberg-Witten invariants.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use smallvec::smallvec;

use crate::error::{Error, Result};
use crate::graph::PlumbingGraph;
use crate::laurent::{self, DenominatorFactors, DivisionOrder, LaurentPoly};
use crate::lattice::{Lattice, RationalVector};
use crate::rational::{self, Rational};
use crate::zeta::{self, ReducedZeta};

/// Linking pairs `(p_i, a_i)` from Newton pairs `(p_i, q_i)`.
pub fn linking_pairs(newton: &[(i64, i64)]) -> Result<Vec<(i64, i64)>> {
    if newton.is_empty() {
        return Err(Error::InvalidNewtonPairs("no pairs".into()));
    }
    for (i, &(p, q)) in newton.iter().enumerate() {
        if p < 2 || q < 1 {
            return Err(Error::InvalidNewtonPairs(format!("pair ({p},{q}) needs p >= 2, q >= 1")));
        }
        if p.gcd(&q) != 1 {
            return Err(Error::InvalidNewtonPairs(format!("pair ({p},{q}) is not coprime")));
        }
        if i == 0 && q <= p {
            return Err(Error::InvalidNewtonPairs(format!("first pair ({p},{q}) needs q > p")));
        }
    }
    let mut out = Vec::with_capacity(newton.len());
    let mut a = newton[0].1;
    out.push((newton[0].0, a));
    for w in newton.windows(2) {
        let (p, _) = w[0];
        let (p1, q1) = w[1];
        a = a
            .checked_mul(p)
            .and_then(|x| x.checked_mul(p1))
            .and_then(|x| x.checked_add(q1))
            .ok_or(Error::Overflow("linking pairs"))?;
        out.push((p1, a));
    }
    Ok(out)
}

/// The link of an irreducible plane curve singularity, given by its Newton
/// pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraicKnot {
    newton: Vec<(i64, i64)>,
    #[serde(skip)]
    linking: Vec<(i64, i64)>,
}

impl AlgebraicKnot {
    pub fn new(newton: &[(i64, i64)]) -> Result<Self> {
        Ok(AlgebraicKnot {
            linking: linking_pairs(newton)?,
            newton: newton.to_vec(),
        })
    }

    /// Parses `"p1,q1;p2,q2;..."`.
    pub fn parse(s: &str) -> Result<Self> {
        let pairs = s
            .split(';')
            .filter(|t| !t.trim().is_empty())
            .map(|t| {
                let (p, q) = t
                    .split_once(',')
                    .ok_or_else(|| Error::InvalidNewtonPairs(format!("`{t}` is not `p,q`")))?;
                let p = p.trim().parse().map_err(|_| Error::InvalidNewtonPairs(format!("bad integer in `{t}`")))?;
                let q = q.trim().parse().map_err(|_| Error::InvalidNewtonPairs(format!("bad integer in `{t}`")))?;
                Ok((p, q))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(&pairs)
    }

    pub fn newton_pairs(&self) -> &[(i64, i64)] {
        &self.newton
    }

    pub fn linking_pairs(&self) -> &[(i64, i64)] {
        &self.linking
    }

    pub fn len(&self) -> usize {
        self.newton.len()
    }

    pub fn is_empty(&self) -> bool {
        self.newton.is_empty()
    }

    /// `m_f = a_r p_r`, the multiplicity of the `(-1)`-vertex.
    pub fn multiplicity(&self) -> i64 {
        let &(p, a) = self.linking.last().expect("nonempty");
        a * p
    }

    /// `p_{i} p_{i+1} ... p_r` (1-based `i`; empty product for `i > r`).
    pub fn p_tail(&self, i: usize) -> i64 {
        self.linking[i.saturating_sub(1)..].iter().map(|x| x.0).product()
    }

    /// Milnor number by `μ_i = (a_i - 1)(p_i - 1) + p_i μ_{i-1}`.
    pub fn milnor(&self) -> i64 {
        self.linking.iter().fold(0, |mu, &(p, a)| (a - 1) * (p - 1) + p * mu)
    }

    /// Hilbert basis `p_1...p_r, a_i p_{i+1}...p_r, a_r`.
    pub fn semigroup_generators(&self) -> Vec<i64> {
        let r = self.linking.len();
        let mut g = vec![self.p_tail(1)];
        for i in 1..=r {
            g.push(self.linking[i - 1].1 * self.p_tail(i + 1));
        }
        g
    }

    pub fn semigroup(&self) -> NumericalSemigroup {
        NumericalSemigroup::new(&self.semigroup_generators())
    }

    /// Alexander polynomial from the product formula over the linking pairs.
    pub fn alexander(&self) -> Result<Vec<i128>> {
        let r = self.linking.len();
        let mut num = vec![1i128, -1];
        let mut den = one_minus(self.p_tail(1));
        for i in 1..=r {
            let a = self.linking[i - 1].1;
            num = dense_mul(&num, &one_minus(a * self.p_tail(i)))?;
            den = dense_mul(&den, &one_minus(a * self.p_tail(i + 1)))?;
        }
        dense_div_exact(&num, &den)
    }

    pub fn alexander_poly(&self) -> Result<LaurentPoly> {
        Ok(LaurentPoly::from_dense(&self.alexander()?))
    }

    /// `-Σ_{gaps} t^l`.
    pub fn monodromy_polynomial_part(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero(1, 1);
        for g in self.semigroup().gaps {
            p.add_term(smallvec![g], -1);
        }
        p
    }

    /// Quotient of the division of `Δ(t)` by `1 - t`.
    pub fn monodromy_part_by_division(&self) -> Result<LaurentPoly> {
        let fs = DenominatorFactors::new(1, 1, vec![smallvec![1]])?;
        Ok(laurent::divide(&self.alexander_poly()?, &fs, &[0], DivisionOrder::GradedLex)?.quotient)
    }

    pub fn resolution_graph(&self) -> Result<KnotGraph> {
        knot_resolution_graph(self)
    }
}

fn one_minus(k: i64) -> Vec<i128> {
    let mut v = vec![0i128; k as usize + 1];
    v[0] = 1;
    v[k as usize] -= 1;
    v
}

fn dense_mul(a: &[i128], b: &[i128]) -> Result<Vec<i128>> {
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = x
                .checked_mul(y)
                .and_then(|z| z.checked_add(out[i + j]))
                .ok_or(Error::Overflow("polynomial product"))?;
        }
    }
    Ok(trim(out))
}

fn trim(mut v: Vec<i128>) -> Vec<i128> {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    v
}

/// Exact division; the divisor's leading coefficient must be `±1`.
fn dense_div_exact(num: &[i128], den: &[i128]) -> Result<Vec<i128>> {
    let den = trim(den.to_vec());
    let lead = *den.last().unwrap();
    if lead.abs() != 1 {
        return Err(Error::Internal("divisor is not monic".into()));
    }
    let mut rem = trim(num.to_vec());
    if rem.len() < den.len() {
        return if rem.iter().all(|&x| x == 0) {
            Ok(vec![0])
        } else {
            Err(Error::Internal("inexact polynomial division".into()))
        };
    }
    let mut quot = vec![0i128; rem.len() - den.len() + 1];
    for k in (0..quot.len()).rev() {
        let c = rem[k + den.len() - 1] * lead;
        quot[k] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[k + j] -= c * d;
        }
    }
    if rem.iter().any(|&x| x != 0) {
        return Err(Error::Internal("inexact polynomial division".into()));
    }
    Ok(trim(quot))
}

/// A numerical semigroup with its gaps, computed by the coin-problem
/// recursion until a run of `min(generators)` consecutive members appears.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NumericalSemigroup {
    pub generators: Vec<i64>,
    pub gaps: Vec<i64>,
    /// Smallest `c` with `[c, ∞)` inside the semigroup.
    pub conductor: i64,
    pub frobenius: i64,
}

impl NumericalSemigroup {
    pub fn new(generators: &[i64]) -> Self {
        let g0 = *generators.iter().min().expect("generators");
        assert!(g0 > 0 && generators.iter().fold(0, |a, &b| a.gcd(&b)) == 1);
        let mut member = vec![true];
        let mut run = 1i64;
        let mut n = 0i64;
        while run < g0 {
            n += 1;
            let m = generators.iter().any(|&g| g <= n && member[(n - g) as usize]);
            member.push(m);
            run = if m { run + 1 } else { 0 };
        }
        let conductor = n - g0 + 1;
        let gaps: Vec<i64> = (0..conductor).filter(|&k| !member[k as usize]).collect();
        NumericalSemigroup {
            generators: generators.to_vec(),
            frobenius: conductor - 1,
            conductor,
            gaps,
        }
    }

    pub fn contains(&self, l: i64) -> bool {
        l >= 0 && self.gaps.binary_search(&l).is_err()
    }

    /// `l ∈ M ⇔ c - 1 - l ∉ M` for all `0 <= l <= c - 1`.
    pub fn is_symmetric(&self) -> bool {
        (0..self.conductor).all(|l| self.contains(l) != self.contains(self.conductor - 1 - l))
    }
}

/// Hirzebruch continued fraction `p/q = k_0 - 1/(k_1 - 1/(... - 1/k_s))`.
pub fn negative_continued_fraction(p: i64, q: i64) -> Result<Vec<i64>> {
    if p <= 0 || q <= 0 || p.gcd(&q) != 1 {
        return Err(Error::InvalidSurgery(format!("need p, q > 0 coprime, got {p}/{q}")));
    }
    let (mut p, mut q) = (p, q);
    let mut out = Vec::new();
    loop {
        let k = Integer::div_ceil(&p, &q);
        out.push(k);
        let r = k * q - p;
        if r == 0 {
            return Ok(out);
        }
        p = q;
        q = r;
    }
}

/// Evaluates `[k_0, ..., k_s]` back to a reduced fraction `(p, q)`.
pub fn evaluate_continued_fraction(ks: &[i64]) -> (i64, i64) {
    let mut num = *ks.last().expect("nonempty");
    let mut den = 1;
    for &k in ks.iter().rev().skip(1) {
        // k - den/num
        let n = k * num - den;
        den = num;
        num = n;
    }
    let g = num.gcd(&den);
    (num / g, den / g)
}

/// The minimal embedded resolution graph of an algebraic knot.
#[derive(Debug, Clone)]
pub struct KnotGraph {
    pub graph: PlumbingGraph,
    /// The nodes `v_1, ..., v_r`; `v_r` is the `(-1)`-vertex carrying the knot.
    pub nodes: Vec<usize>,
}

impl KnotGraph {
    pub fn center(&self) -> usize {
        *self.nodes.last().unwrap()
    }
}

#[derive(Default)]
struct BlowUps {
    weights: Vec<i64>,
    edges: BTreeSet<(usize, usize)>,
}

impl BlowUps {
    /// Blows up the point where the curve meets `a` and `b` (when present).
    fn blow_up(&mut self, a: Option<usize>, b: Option<usize>) -> usize {
        let e = self.weights.len();
        self.weights.push(-1);
        for d in [a, b].into_iter().flatten() {
            self.weights[d] -= 1;
            self.edges.insert((d.min(e), d.max(e)));
        }
        if let (Some(a), Some(b)) = (a, b) {
            self.edges.remove(&(a.min(b), a.max(b)));
        }
        e
    }
}

/// Builds the resolution graph by simulating the blow-ups of the curve.
///
/// In local coordinates the curve is `y^m = x^n`, `A = {y = 0}` and
/// `B = {x = 0}`; each Newton pair restarts with `B` the last node.
pub fn knot_resolution_graph(knot: &AlgebraicKnot) -> Result<KnotGraph> {
    let mut bu = BlowUps::default();
    let mut nodes = Vec::new();
    let mut last: Option<usize> = None;
    for &(p, q) in knot.newton_pairs() {
        let (mut a, mut b, mut m, mut n) = (None, last, p, q);
        loop {
            let e = bu.blow_up(a, b);
            if m == n {
                debug_assert_eq!(m, 1);
                nodes.push(e);
                last = Some(e);
                break;
            } else if m < n {
                b = Some(e);
                n -= m;
            } else {
                a = Some(e);
                m -= n;
            }
        }
    }
    // ids: nodes v1..vr, other vertices u1, u2, ... in creation order
    let mut ids = vec![String::new(); bu.weights.len()];
    for (i, &v) in nodes.iter().enumerate() {
        ids[v] = format!("v{}", i + 1);
    }
    let mut k = 0;
    for id in ids.iter_mut().filter(|s| s.is_empty()) {
        k += 1;
        *id = format!("u{k}");
    }
    let graph = PlumbingGraph::from_parts(
        ids.iter().cloned().zip(bu.weights.iter().copied()).collect(),
        bu.edges.iter().map(|&(x, y)| (ids[x].clone(), ids[y].clone())).collect(),
    )?;
    let kg = KnotGraph { graph, nodes };
    let report = validate_knot_graph(knot, &kg)?;
    if !report.passed() {
        return Err(Error::Internal(format!("knot graph failed validation: {report:?}")));
    }
    Ok(kg)
}

/// Machine-checkable properties of a knot resolution graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KnotGraphCheck {
    pub det_one: bool,
    pub center_weight_minus_one: bool,
    pub negative_definite: bool,
    /// `-(E*_c, E*_c) = a_r p_r`.
    pub center_self_pairing: bool,
    /// Legs at `v_1` have determinants `{p_1, a_1}`, at `v_i` (i > 1) `{p_i}`.
    pub leg_determinants: bool,
    /// The branch at `v_i` toward `v_{i-1}` has determinant `a_i`.
    pub inner_branch_determinants: bool,
}

impl KnotGraphCheck {
    pub fn passed(&self) -> bool {
        self.det_one
            && self.center_weight_minus_one
            && self.negative_definite
            && self.center_self_pairing
            && self.leg_determinants
            && self.inner_branch_determinants
    }
}

pub fn validate_knot_graph(knot: &AlgebraicKnot, kg: &KnotGraph) -> Result<KnotGraphCheck> {
    let g = &kg.graph;
    let c = kg.center();
    let negative_definite = g.validate().negative_definite;
    let det_one = g.determinant()? == 1;
    let center_self_pairing = if negative_definite {
        let l = Lattice::new(g)?;
        -l.pairing(c, c) == Rational::from_integer(i128::from(knot.multiplicity()))
    } else {
        false
    };
    let node_set: BTreeSet<usize> = kg.nodes.iter().copied().collect();
    let mut legs_ok = true;
    let mut inner_ok = true;
    for (i, &v) in kg.nodes.iter().enumerate() {
        let (p, a) = knot.linking_pairs()[i];
        let mut legs = Vec::new();
        for comp in g.components_without(&[v]) {
            let adjacent = g.neighbors(v).iter().any(|w| comp.contains(w));
            if !adjacent {
                continue;
            }
            if comp.iter().any(|w| node_set.contains(w)) {
                if i > 0 && comp.contains(&kg.nodes[i - 1]) {
                    inner_ok &= g.subgraph_determinant(&comp)? == i128::from(a);
                }
            } else {
                legs.push(g.subgraph_determinant(&comp)?);
            }
        }
        legs.sort_unstable();
        let mut expect: Vec<i128> = if i == 0 { vec![p.into(), a.into()] } else { vec![p.into()] };
        expect.sort_unstable();
        legs_ok &= legs == expect;
    }
    Ok(KnotGraphCheck {
        det_one,
        center_weight_minus_one: g.euler(c) == -1,
        negative_definite,
        center_self_pairing,
        leg_determinants: legs_ok,
        inner_branch_determinants: inner_ok,
    })
}

/// `(-p/q)`-surgery along the connected sum of the given knots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurgerySpec {
    pub knots: Vec<AlgebraicKnot>,
    pub p: i64,
    pub q: i64,
}

/// JSON form `{"knots":[{"newton_pairs":[[2,3]]}],"p":7,"q":2}`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SurgeryFile {
    knots: Vec<KnotFile>,
    p: i64,
    q: i64,
}

/// JSON form `{"newton_pairs":[[2,3],[2,1]]}`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KnotFile {
    pub newton_pairs: Vec<(i64, i64)>,
}

pub fn parse_knot(text: &str) -> Result<AlgebraicKnot> {
    let f: KnotFile = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    AlgebraicKnot::new(&f.newton_pairs)
}

impl SurgerySpec {
    pub fn new(knots: Vec<AlgebraicKnot>, p: i64, q: i64) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::InvalidSurgery("no knots".into()));
        }
        negative_continued_fraction(p, q)?;
        Ok(SurgerySpec { knots, p, q })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let f: SurgeryFile = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        let knots = f
            .knots
            .iter()
            .map(|k| AlgebraicKnot::new(&k.newton_pairs))
            .collect::<Result<_>>()?;
        Self::new(knots, f.p, f.q)
    }

    pub fn continued_fraction(&self) -> Vec<i64> {
        negative_continued_fraction(self.p, self.q).expect("validated")
    }

    /// `m = Σ_j a^{(j)}_r p^{(j)}_r`.
    pub fn m(&self) -> i64 {
        self.knots.iter().map(AlgebraicKnot::multiplicity).sum()
    }

    /// `μ = Σ_j μ^{(j)}`.
    pub fn milnor(&self) -> i64 {
        self.knots.iter().map(AlgebraicKnot::milnor).sum()
    }
}

/// The surgery plumbing with its distinguished vertices.
#[derive(Debug, Clone)]
pub struct SurgeryGraph {
    pub spec: SurgerySpec,
    pub graph: PlumbingGraph,
    pub plus: usize,
    /// `v_{+1}, ..., v_{+s}`.
    pub chain: Vec<usize>,
    /// `v^{(j)}_i` per knot.
    pub knot_nodes: Vec<Vec<usize>>,
}

impl SurgeryGraph {
    /// `v_{+s}`, or `v_+` when the chain is empty.
    pub fn generator_vertex(&self) -> usize {
        self.chain.last().copied().unwrap_or(self.plus)
    }

    /// `D^{(j)}_i`: determinant of the branch of `Γ - v^{(j)}_i` containing `v_+`
    /// (1-based `i`).
    pub fn d(&self, j: usize, i: usize) -> Result<i128> {
        let v = self.knot_nodes[j][i - 1];
        let comp = self
            .graph
            .components_without(&[v])
            .into_iter()
            .find(|c| c.contains(&self.plus))
            .expect("v_+ survives");
        self.graph.subgraph_determinant(&comp)
    }
}

pub fn surgery_graph(spec: &SurgerySpec) -> Result<SurgeryGraph> {
    let ks = spec.continued_fraction();
    let mut vertices: Vec<(String, i64)> = vec![("v+".into(), -ks[0] - spec.m())];
    let mut edges: Vec<(String, String)> = Vec::new();
    let mut knot_ids = Vec::new();
    for (j, knot) in spec.knots.iter().enumerate() {
        let kg = knot.resolution_graph()?;
        let g = &kg.graph;
        let prefix = |id: &str| format!("k{}.{}", j + 1, id);
        for v in 0..g.len() {
            vertices.push((prefix(g.id(v)), g.euler(v)));
        }
        for &(a, b) in g.edges() {
            edges.push((prefix(g.id(a)), prefix(g.id(b))));
        }
        edges.push(("v+".into(), prefix(g.id(kg.center()))));
        knot_ids.push(kg.nodes.iter().map(|&v| prefix(g.id(v))).collect::<Vec<_>>());
    }
    let mut prev = "v+".to_string();
    for (i, &k) in ks.iter().enumerate().skip(1) {
        let id = format!("v+{i}");
        vertices.push((id.clone(), -k));
        edges.push((prev, id.clone()));
        prev = id;
    }
    let graph = PlumbingGraph::from_parts(vertices, edges)?;
    let plus = graph.index_of("v+")?;
    let chain = (1..ks.len())
        .map(|i| graph.index_of(&format!("v+{i}")))
        .collect::<Result<_>>()?;
    let knot_nodes = knot_ids
        .iter()
        .map(|ids| ids.iter().map(|id| graph.index_of(id)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    graph.require_negative_definite()?;
    Ok(SurgeryGraph {
        spec: spec.clone(),
        graph,
        plus,
        chain,
        knot_nodes,
    })
}

/// The Alexander-polynomial data of a surgery.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QPolynomial {
    /// Coefficients of `Δ = Π Δ^{(j)}`.
    pub delta: Vec<i128>,
    pub mu: i64,
    /// `𝔮_0, ..., 𝔮_{μ-2}` with `Δ = 1 + (μ/2)(t-1) + (t-1)^2 𝒬`.
    pub q_coeffs: Vec<i128>,
    /// `𝒬_h` for `0 <= h < p`, as coefficient lists (repeated indices add up).
    pub parts: Vec<Vec<i128>>,
}

impl QPolynomial {
    /// `𝒬_h(1)`.
    pub fn part_at_one(&self, h: usize) -> i128 {
        self.parts[h].iter().sum()
    }

    /// `Σ_h 𝒬_h` coefficientwise.
    pub fn parts_sum(&self) -> Vec<i128> {
        let mut out = vec![0i128; self.q_coeffs.len()];
        for part in &self.parts {
            for (o, &c) in out.iter_mut().zip(part) {
                *o += c;
            }
        }
        out
    }

    /// `𝔮_{μ-2-i} = 𝔮_i + i + 1 - μ/2` for all `i`.
    pub fn symmetric(&self) -> bool {
        let n = self.q_coeffs.len();
        let half = i128::from(self.mu / 2);
        (0..n).all(|i| self.q_coeffs[n - 1 - i] == self.q_coeffs[i] + i as i128 + 1 - half)
    }
}

pub fn q_route(spec: &SurgerySpec) -> Result<QPolynomial> {
    let mut delta = vec![1i128];
    for k in &spec.knots {
        delta = dense_mul(&delta, &k.alexander()?)?;
    }
    let mu = spec.milnor();
    if delta.len() as i64 != mu + 1 {
        return Err(Error::Internal("Alexander polynomial degree differs from μ".into()));
    }
    // Δ - 1 - (μ/2)(t - 1), then divide by (t - 1)^2
    let mut rest = delta.clone();
    rest[0] -= 1 - i128::from(mu / 2);
    if rest.len() < 2 {
        rest.resize(2, 0);
    }
    rest[1] -= i128::from(mu / 2);
    let q_coeffs = if mu >= 2 {
        dense_div_exact(&rest, &[1, -2, 1])?
    } else {
        if rest.iter().any(|&x| x != 0) {
            return Err(Error::Internal("nonzero remainder for μ < 2".into()));
        }
        Vec::new()
    };
    let top = mu - 2;
    let parts = (0..spec.p)
        .map(|h| {
            let mut part = vec![0i128; q_coeffs.len()];
            let mut i = 0i64;
            loop {
                let idx = Integer::div_floor(&(i * spec.p + h), &spec.q);
                if idx > top {
                    break;
                }
                part[idx as usize] += q_coeffs[idx as usize];
                i += 1;
            }
            part
        })
        .collect();
    Ok(QPolynomial {
        delta,
        mu,
        q_coeffs,
        parts,
    })
}

/// Per-class outcome of the structure checks; class `h` is `[h E*_{+s}]`.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ClassCheck {
    pub h: i64,
    /// Smith coordinates of `[h E*_{+s}]`.
    pub class: Vec<i64>,
    #[serde(serialize_with = "rational::serialize")]
    pub p_at_1: Rational,
    #[serde(serialize_with = "rational::serialize")]
    pub p_plus_at_1: Rational,
    #[serde(serialize_with = "rational::serialize")]
    pub p_vplus_at_1: Rational,
    pub q_h_at_1: i128,
    /// `χ(r_{[hE*_{+s}]}) - χ(h E*_{+s})`.
    #[serde(serialize_with = "rational::serialize")]
    pub chi_difference: Rational,
    /// No `𝔰 >= 2` among `β_+ >= 0`, and `P_{β+>=0} = P^+_{β+>=0} = P^{v+}`.
    pub plus_part_simple: Option<bool>,
    /// At `h = 0`: `P_0 = P^+_0` and no `β_+ < 0`.
    pub canonical_clean: Option<bool>,
    /// `𝒟_h(1) = P_h(1) - P^{v+}_h(1)` equals the χ-difference.
    pub difference_identity: Option<bool>,
    /// `β^{(j)}_i < a_i p_i ... p_r (β_+ + 1)`.
    pub node_bound: Option<bool>,
    /// `sw_norm = 𝒬_h(1) + χ-difference`.
    pub q_identity: bool,
    /// `P^{v+}_h(1) = 𝒬_h(1)`.
    pub p_vplus_is_q: Option<bool>,
}

impl ClassCheck {
    fn structure_ok(&self) -> bool {
        self.plus_part_simple.unwrap_or(true) && self.canonical_clean.unwrap_or(true) && self.node_bound.unwrap_or(true)
    }

    fn chi_ok(&self) -> bool {
        self.q_identity && self.difference_identity.unwrap_or(true)
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CheckReport {
    pub p: i64,
    pub q: i64,
    pub continued_fraction: Vec<i64>,
    pub det: i64,
    pub det_equals_p: bool,
    /// `H` is cyclic of order `p`, generated by `[E*_{+s}]`.
    pub cyclic_generated: bool,
    pub center_is_node: bool,
    pub branch_determinants: bool,
    pub branch_recursion: bool,
    pub q_symmetric: bool,
    /// `Σ_h 𝒬_h = 𝒬`.
    pub q_parts_sum_to_q: bool,
    /// `Σ_h 𝒬_h = q 𝒬`.
    pub q_parts_sum_to_q_times_q: bool,
    pub classes: Vec<ClassCheck>,
    /// det, cyclicity, both determinant identities, 𝒬 symmetry and the three per-class structure checks.
    pub structure_pass: bool,
    /// The two identities that use the literal vector `h E*_{+s}`.
    pub chi_identity_pass: bool,
    pub all_pass: bool,
}

/// Runs the structure checks on a surgery graph; `sw_norm` is read off the
/// zeta route as `P_h(1)`.
pub fn structure_checks(sg: &SurgeryGraph, zeta: &ReducedZeta) -> Result<CheckReport> {
    let spec = &sg.spec;
    let lattice = zeta.lattice();
    let g = &sg.graph;
    let det = lattice.det();
    let group = lattice.group();
    let gen = sg.generator_vertex();
    let gen_dual = lattice.dual(gen);
    let gen_class = lattice.class_of_dual(gen);
    let cyclic_generated = group.is_cyclic() && group.order() == spec.p && group.order_of(&gen_class) == spec.p;

    let mut branch_determinants = true;
    let mut branch_recursion = true;
    for (j, knot) in spec.knots.iter().enumerate() {
        let lp = knot.linking_pairs();
        let r = lp.len();
        let ds = (1..=r).map(|i| sg.d(j, i)).collect::<Result<Vec<_>>>()?;
        for i in 1..=r {
            let (p_i, a_i) = lp[i - 1];
            let tail = i128::from(knot.p_tail(i + 1));
            let expect = i128::from(spec.p) + i128::from(a_i * p_i) * tail * tail * i128::from(spec.q);
            branch_determinants &= ds[i - 1] == expect;
            if i < r {
                let (p_n, a_n) = lp[i];
                let q_n = knot.newton_pairs()[i].1;
                branch_recursion &= i128::from(a_n) * ds[i - 1]
                    == i128::from(q_n) * i128::from(spec.p) + i128::from(a_i * p_i * p_n) * ds[i];
            }
        }
    }

    let qp = q_route(spec)?;
    let sum = qp.parts_sum();
    let q_parts_sum_to_q = sum == qp.q_coeffs;
    let q_parts_sum_to_q_times_q = sum.iter().zip(&qp.q_coeffs).all(|(&s, &c)| s == c * i128::from(spec.q));

    let orb = g.orbifold_graph(None)?;
    let nodes = lattice.nodes();
    let pos = |v: usize| nodes.iter().position(|&n| n == v);
    let plus_pos = pos(sg.plus);
    let center_is_node = plus_pos.is_some();
    let orb_plus = match plus_pos {
        Some(_) => Some(g.orbifold_graph(Some("v+"))?),
        None => None,
    };

    let all: Vec<usize> = (0..zeta.nvars()).collect();
    // β over every class, for the node-coordinate bound
    let mut pluses = Vec::with_capacity(zeta.classes().len());
    for h in 0..zeta.classes().len() {
        pluses.push(zeta.divide(h, &all, DivisionOrder::GradedLex)?.quotient);
    }
    let bound_ok = |beta: &[i64], pp: usize| -> bool {
        spec.knots.iter().enumerate().all(|(j, knot)| {
            (1..=knot.len()).all(|i| match pos(sg.knot_nodes[j][i - 1]) {
                Some(np) => {
                    let (p_i, a_i) = knot.linking_pairs()[i - 1];
                    let coef = i128::from(a_i * p_i * knot.p_tail(i + 1));
                    i128::from(beta[np]) < coef * (i128::from(beta[pp]) + i128::from(det))
                }
                None => true,
            })
        })
    };

    let mut classes = Vec::with_capacity(spec.p as usize);
    for h in 0..spec.p {
        let hv: RationalVector = gen_dual.scale(h);
        let class = lattice.class_of(&hv)?;
        let idx = zeta.class_index(&class)?;
        let r = lattice.representative(&class)?;
        let chi_difference = lattice.chi_canonical(&r) - lattice.chi_canonical(&hv);
        let plus = &pluses[idx];
        let part = zeta::polynomial_part(plus, orb_plus.as_ref().unwrap_or(&orb))?;
        let p_at_1 = part.weighted.evaluate_at_one();
        let q_h_at_1 = qp.part_at_one(h as usize);
        let q_identity = p_at_1 == Rational::from_integer(q_h_at_1) + chi_difference;

        let (mut plus_part_simple, mut canonical_clean, mut difference_identity, mut node_bound, mut p_vplus_is_q) = (None, None, None, None, None);
        let mut p_vplus_at_1 = Rational::from_integer(0);
        if let Some(pp) = plus_pos {
            let vplus = zeta.divide(idx, &[pp], DivisionOrder::GradedLex)?.quotient;
            p_vplus_at_1 = vplus.evaluate_at_one();
            let nonneg = |e: &[i64]| e[pp] >= 0;
            let a = part.terms.iter().filter(|t| t.exp[pp] >= 0).all(|t| t.multiplicity == 1)
                && part.weighted.filter(nonneg) == plus.filter(nonneg)
                && plus.filter(nonneg) == vplus;
            plus_part_simple = Some(a);
            if h == 0 {
                canonical_clean = Some(part.weighted == *plus && plus.terms().all(|(e, _)| e[pp] >= 0));
            }
            difference_identity = Some(p_at_1 - p_vplus_at_1 == chi_difference);
            node_bound = Some(plus.terms().all(|(e, _)| bound_ok(e, pp)));
            p_vplus_is_q = Some(p_vplus_at_1 == Rational::from_integer(q_h_at_1));
        }
        classes.push(ClassCheck {
            h,
            class: class.0.to_vec(),
            p_at_1,
            p_plus_at_1: plus.evaluate_at_one(),
            p_vplus_at_1,
            q_h_at_1,
            chi_difference,
            plus_part_simple,
            canonical_clean,
            difference_identity,
            node_bound,
            q_identity,
            p_vplus_is_q,
        });
    }
    let det_equals_p = det == spec.p;
    let q_symmetric = qp.symmetric();
    let structure_pass = det_equals_p
        && cyclic_generated
        && branch_determinants
        && branch_recursion
        && q_symmetric
        && classes.iter().all(ClassCheck::structure_ok);
    let chi_identity_pass = classes.iter().all(ClassCheck::chi_ok);
    Ok(CheckReport {
        p: spec.p,
        q: spec.q,
        continued_fraction: spec.continued_fraction(),
        det,
        det_equals_p,
        cyclic_generated,
        center_is_node,
        branch_determinants,
        branch_recursion,
        q_symmetric,
        q_parts_sum_to_q,
        q_parts_sum_to_q_times_q,
        classes,
        structure_pass,
        chi_identity_pass,
        all_pass: structure_pass && chi_identity_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linking_pair_examples() {
        assert_eq!(linking_pairs(&[(2, 3)]).unwrap(), vec![(2, 3)]);
        assert_eq!(linking_pairs(&[(2, 3), (2, 1)]).unwrap(), vec![(2, 3), (2, 13)]);
        assert!(linking_pairs(&[(3, 2)]).is_err());
        assert!(linking_pairs(&[(2, 4)]).is_err());
        assert!(linking_pairs(&[(1, 3)]).is_err());
    }

    #[test]
    fn semigroups() {
        let t = AlgebraicKnot::new(&[(2, 3)]).unwrap().semigroup();
        assert_eq!(t.generators, vec![2, 3]);
        assert_eq!(t.gaps, vec![1]);
        assert_eq!(t.frobenius, 1);
        let s = AlgebraicKnot::new(&[(2, 5)]).unwrap().semigroup();
        assert_eq!(s.gaps, vec![1, 3]);
        assert_eq!(s.conductor, 4);
        let k = AlgebraicKnot::new(&[(2, 3), (2, 1)]).unwrap();
        assert_eq!(k.semigroup_generators(), vec![4, 6, 13]);
        assert_eq!(k.semigroup().conductor, k.milnor());
    }

    #[test]
    fn alexander_examples() {
        let t = AlgebraicKnot::new(&[(2, 3)]).unwrap();
        assert_eq!(t.alexander().unwrap(), vec![1, -1, 1]);
        let s = AlgebraicKnot::new(&[(2, 5)]).unwrap();
        assert_eq!(s.alexander().unwrap(), vec![1, -1, 1, -1, 1]);
        assert_eq!(t.monodromy_polynomial_part(), LaurentPoly::from_dense(&[0, -1]));
        assert_eq!(t.monodromy_part_by_division().unwrap(), t.monodromy_polynomial_part());
    }

    #[test]
    fn continued_fractions() {
        assert_eq!(negative_continued_fraction(7, 2).unwrap(), vec![4, 2]);
        assert_eq!(negative_continued_fraction(5, 1).unwrap(), vec![5]);
        assert_eq!(negative_continued_fraction(5, 2).unwrap(), vec![3, 2]);
        assert_eq!(evaluate_continued_fraction(&[4, 2]), (7, 2));
        assert!(negative_continued_fraction(0, 1).is_err());
        assert!(negative_continued_fraction(4, 2).is_err());
    }

    #[test]
    fn trefoil_graph() {
        let kg = AlgebraicKnot::new(&[(2, 3)]).unwrap().resolution_graph().unwrap();
        let g = &kg.graph;
        assert_eq!(g.len(), 3);
        assert_eq!(g.euler(kg.center()), -1);
        let mut legs: Vec<i64> = g.neighbors(kg.center()).iter().map(|&v| g.euler(v)).collect();
        legs.sort();
        assert_eq!(legs, vec![-3, -2]);
    }

    #[test]
    fn q_of_trefoils() {
        let one = SurgerySpec::new(vec![AlgebraicKnot::new(&[(2, 3)]).unwrap()], 1, 1).unwrap();
        assert_eq!(q_route(&one).unwrap().q_coeffs, vec![1]);
        let three = SurgerySpec::new(vec![AlgebraicKnot::new(&[(2, 3)]).unwrap(); 3], 7, 2).unwrap();
        let qp = q_route(&three).unwrap();
        assert_eq!(qp.delta, vec![1, -3, 6, -7, 6, -3, 1]);
        assert_eq!(qp.q_coeffs, vec![3, 0, 3, -1, 1]);
        assert_eq!(qp.part_at_one(0), 2);
        assert!(qp.symmetric());
    }
}
