//! The lattice `L` of a plumbing, its dual `L'`, the discriminant group
//! `H = L'/L`, the canonical class and the projection to node coordinates.
//!
//! Every element of `L'` has coordinates in `(1/det) Z`, so vectors are
//! stored as integer numerators over the shared denominator `det`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::graph::PlumbingGraph;
use crate::laurent::Exponent;
use crate::linalg::{self, Matrix};
use crate::rational::Rational;

pub(crate) fn to_i64(x: i128) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Overflow("lattice coordinates"))
}

/// A vector of `L ⊗ Q` in the `E_v` basis: `num[v] / den`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalVector {
    pub num: Vec<i64>,
    pub den: i64,
}

impl RationalVector {
    pub fn zero(n: usize, den: i64) -> Self {
        RationalVector { num: vec![0; n], den }
    }

    pub fn len(&self) -> usize {
        self.num.len()
    }

    pub fn is_empty(&self) -> bool {
        self.num.is_empty()
    }

    pub fn coord(&self, v: usize) -> Rational {
        Rational::new(i128::from(self.num[v]), i128::from(self.den))
    }

    pub fn is_integral(&self) -> bool {
        self.num.iter().all(|&x| x % self.den == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.den, other.den, "vectors over different denominators");
        RationalVector {
            num: self.num.iter().zip(&other.num).map(|(a, b)| a + b).collect(),
            den: self.den,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Self {
        RationalVector {
            num: self.num.iter().map(|a| a * k).collect(),
            den: self.den,
        }
    }

    /// Componentwise ceiling, as a vector over the same denominator.
    pub fn ceil(&self) -> Self {
        let d = self.den;
        RationalVector {
            num: self.num.iter().map(|&a| Integer::div_ceil(&a, &d) * d).collect(),
            den: d,
        }
    }

    /// Componentwise floor.
    pub fn floor(&self) -> Self {
        let d = self.den;
        RationalVector {
            num: self.num.iter().map(|&a| Integer::div_floor(&a, &d) * d).collect(),
            den: d,
        }
    }

    /// `self - floor(self)`, every coordinate in `[0,1)`.
    pub fn fractional(&self) -> Self {
        RationalVector {
            num: self.num.iter().map(|&a| a.mod_floor(&self.den)).collect(),
            den: self.den,
        }
    }

    /// `self >= other` componentwise.
    pub fn dominates(&self, other: &Self) -> bool {
        self.num.iter().zip(&other.num).all(|(a, b)| a >= b)
    }
}

/// An element of `H`, given by its coordinates in the nontrivial invariant
/// factors of the Smith normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Class(pub SmallVec<[i64; 2]>);

/// `H = coker(I)` via the Smith form `U I V = diag(d)`.
#[derive(Debug, Clone)]
pub struct DiscriminantGroup {
    /// Nontrivial invariant factors `d_1 | d_2 | ...`.
    pub factors: Vec<i64>,
    /// Row `k` of `U` for each nontrivial factor.
    rows: Vec<Vec<i128>>,
    /// Column of `U^{-1}` for each nontrivial factor.
    cols: Vec<Vec<i128>>,
}

impl DiscriminantGroup {
    fn new(intersection: &Matrix) -> Result<Self> {
        let smith = linalg::smith_normal_form(intersection)?;
        let n = intersection.len();
        let mut factors = Vec::new();
        let mut rows = Vec::new();
        let mut cols = Vec::new();
        for k in 0..n {
            let d = smith.diag[k];
            if d == 0 {
                return Err(Error::Internal("singular intersection form".into()));
            }
            if d > 1 {
                factors.push(to_i64(d)?);
                rows.push(smith.left[k].clone());
                cols.push((0..n).map(|i| smith.left_inv[i][k]).collect());
            }
        }
        Ok(DiscriminantGroup { factors, rows, cols })
    }

    pub fn order(&self) -> i64 {
        self.factors.iter().product()
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() <= 1
    }

    pub fn zero(&self) -> Class {
        Class(self.factors.iter().map(|_| 0).collect())
    }

    /// All classes, lexicographic in the factor coordinates.
    pub fn classes(&self) -> Vec<Class> {
        (0..self.order() as usize).map(|i| self.class_at(i)).collect()
    }

    /// Position of a class in [`DiscriminantGroup::classes`].
    pub fn index(&self, c: &Class) -> usize {
        c.0.iter()
            .zip(&self.factors)
            .fold(0usize, |acc, (&x, &d)| acc * d as usize + x as usize)
    }

    pub fn class_at(&self, mut i: usize) -> Class {
        let mut coords: SmallVec<[i64; 2]> = self.factors.iter().map(|_| 0).collect();
        for k in (0..self.factors.len()).rev() {
            let d = self.factors[k] as usize;
            coords[k] = (i % d) as i64;
            i /= d;
        }
        Class(coords)
    }

    pub fn add(&self, a: &Class, b: &Class) -> Class {
        Class(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.factors)
                .map(|((x, y), d)| (x + y).mod_floor(d))
                .collect(),
        )
    }

    pub fn scale(&self, a: &Class, k: i64) -> Class {
        Class(
            a.0.iter()
                .zip(&self.factors)
                .map(|(x, d)| (x * k.mod_floor(d)).mod_floor(d))
                .collect(),
        )
    }

    pub fn order_of(&self, a: &Class) -> i64 {
        a.0.iter()
            .zip(&self.factors)
            .map(|(&x, &d)| d / x.gcd(&d))
            .fold(1, |acc, o| acc.lcm(&o))
    }

    /// Class of the element `y` of `Z^n` viewed in `coker(I)`.
    fn class_of_image(&self, y: &[i128]) -> Class {
        Class(
            self.rows
                .iter()
                .zip(&self.factors)
                .map(|(row, &d)| {
                    let s: i128 = row.iter().zip(y).map(|(a, b)| a * b).sum();
                    s.rem_euclid(i128::from(d)) as i64
                })
                .collect(),
        )
    }
}

/// Lattice data of a negative definite plumbing graph.
#[derive(Debug, Clone)]
pub struct Lattice {
    graph: PlumbingGraph,
    intersection: Matrix,
    /// `adj(-I)`; column `v` is `det * E*_v`.
    adj: Matrix,
    det: i64,
    group: DiscriminantGroup,
    canonical: RationalVector,
    nodes: Vec<usize>,
}

impl Lattice {
    pub fn new(graph: &PlumbingGraph) -> Result<Self> {
        graph.require_negative_definite()?;
        let intersection = graph.intersection_matrix();
        let neg: Matrix = intersection.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        let (adj, det) = linalg::adjugate(&neg)?;
        let det64 = to_i64(det)?;
        for row in &adj {
            for &x in row {
                to_i64(x)?;
            }
        }
        let group = DiscriminantGroup::new(&intersection)?;
        if group.order() != det64 {
            return Err(Error::Internal("Smith factors disagree with det".into()));
        }
        let n = graph.len();
        // I K = (-e_v - 2)_v, so K = -adj(-I)(-e - 2)/det... with I^{-1} = -adj(-I)/det
        let rhs: Vec<i128> = (0..n).map(|v| -i128::from(graph.euler(v)) - 2).collect();
        let canonical = RationalVector {
            num: (0..n)
                .map(|i| to_i64(-(0..n).map(|j| adj[i][j] * rhs[j]).sum::<i128>()))
                .collect::<Result<_>>()?,
            den: det64,
        };
        Ok(Lattice {
            nodes: graph.nodes(),
            graph: graph.clone(),
            intersection,
            adj,
            det: det64,
            group,
            canonical,
        })
    }

    pub fn graph(&self) -> &PlumbingGraph {
        &self.graph
    }

    pub fn dim(&self) -> usize {
        self.graph.len()
    }

    /// `det(-I) = |H|`, also the shared denominator of all vectors.
    pub fn det(&self) -> i64 {
        self.det
    }

    pub fn group(&self) -> &DiscriminantGroup {
        &self.group
    }

    /// Node vertices, in graph order; these index exponent coordinates.
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn zero(&self) -> RationalVector {
        RationalVector::zero(self.dim(), self.det)
    }

    /// The base vector `E_v`.
    pub fn e(&self, v: usize) -> RationalVector {
        let mut x = self.zero();
        x.num[v] = self.det;
        x
    }

    pub fn from_integers(&self, coords: &[i64]) -> RationalVector {
        RationalVector {
            num: coords.iter().map(|c| c * self.det).collect(),
            den: self.det,
        }
    }

    /// `E*_v`, defined by `(E*_v, E_w) = -δ_vw`.
    pub fn dual(&self, v: usize) -> RationalVector {
        RationalVector {
            num: (0..self.dim()).map(|i| self.adj[i][v] as i64).collect(),
            den: self.det,
        }
    }

    /// `(E*_v, E*_w)` from the inverse matrix.
    pub fn pairing(&self, v: usize, w: usize) -> Rational {
        Rational::new(-self.adj[v][w], i128::from(self.det))
    }

    /// `(E*_v, E*_w) = -det(Γ \ [v,w]) / det(Γ)`, from subgraph determinants.
    pub fn pairing_via_determinants(&self, v: usize, w: usize) -> Result<Rational> {
        let path = self.graph.path_vertices(v, w, true, true)?;
        let mut keep = vec![true; self.dim()];
        for p in path {
            keep[p] = false;
        }
        let rest: Vec<usize> = (0..self.dim()).filter(|&i| keep[i]).collect();
        let d = self.graph.subgraph_determinant(&rest)?;
        Ok(Rational::new(-d, i128::from(self.det)))
    }

    /// `(I x)_v` scaled by `den`.
    fn image_num(&self, x: &RationalVector) -> Vec<i128> {
        self.intersection
            .iter()
            .map(|row| row.iter().zip(&x.num).map(|(a, &b)| a * i128::from(b)).sum())
            .collect()
    }

    /// `(x, E_v)`.
    pub fn pair_with_base(&self, x: &RationalVector, v: usize) -> Rational {
        let s: i128 = self.intersection[v].iter().zip(&x.num).map(|(a, &b)| a * i128::from(b)).sum();
        Rational::new(s, i128::from(x.den))
    }

    /// The intersection form on `L ⊗ Q`.
    pub fn pair(&self, x: &RationalVector, y: &RationalVector) -> Rational {
        let ix = self.image_num(x);
        let s: i128 = ix.iter().zip(&y.num).map(|(a, &b)| a * i128::from(b)).sum();
        Rational::new(s, i128::from(x.den) * i128::from(y.den))
    }

    pub fn in_dual_lattice(&self, x: &RationalVector) -> bool {
        self.image_num(x).iter().all(|s| s % i128::from(x.den) == 0)
    }

    /// The class `[x] ∈ H` of an element of `L'`.
    pub fn class_of(&self, x: &RationalVector) -> Result<Class> {
        let d = i128::from(x.den);
        let ix = self.image_num(x);
        if ix.iter().any(|s| s % d != 0) {
            return Err(Error::NotInDualLattice);
        }
        let y: Vec<i128> = ix.iter().map(|s| s / d).collect();
        Ok(self.group.class_of_image(&y))
    }

    /// `[E*_v]`; since `I E*_v = -E_v` this reads off column `v` of `-U`.
    pub fn class_of_dual(&self, v: usize) -> Class {
        let mut y = vec![0i128; self.dim()];
        y[v] = -1;
        self.group.class_of_image(&y)
    }

    /// Some element of `L'` in class `c`.
    pub fn lift(&self, c: &Class) -> Result<RationalVector> {
        let n = self.dim();
        let mut y = vec![0i128; n];
        for (col, &x) in self.group.cols.iter().zip(c.0.iter()) {
            for i in 0..n {
                y[i] += col[i] * i128::from(x);
            }
        }
        // x = I^{-1} y = -adj(-I) y / det
        let num = (0..n)
            .map(|i| to_i64(-(0..n).map(|j| self.adj[i][j] * y[j]).sum::<i128>()))
            .collect::<Result<_>>()?;
        Ok(RationalVector { num, den: self.det })
    }

    /// The representative `r_h` with coordinates in `[0,1)`.
    pub fn representative(&self, c: &Class) -> Result<RationalVector> {
        Ok(self.lift(c)?.fractional())
    }

    /// `r_{[x]}` for `x ∈ L'`.
    pub fn representative_of(&self, x: &RationalVector) -> Result<RationalVector> {
        if !self.in_dual_lattice(x) {
            return Err(Error::NotInDualLattice);
        }
        Ok(x.fractional())
    }

    /// `K`, with `(K + E_v, E_v) = -2` for all `v`.
    pub fn canonical_class(&self) -> &RationalVector {
        &self.canonical
    }

    /// `χ_k(x) = -(k + x, x) / 2`.
    pub fn chi(&self, k: &RationalVector, x: &RationalVector) -> Rational {
        let kx = if k.den == x.den {
            k.add(x)
        } else {
            // bring both to the lattice denominator
            let l = (k.den).lcm(&x.den);
            RationalVector {
                num: k
                    .num
                    .iter()
                    .zip(&x.num)
                    .map(|(a, b)| a * (l / k.den) + b * (l / x.den))
                    .collect(),
                den: l,
            }
        };
        -self.pair(&kx, x) / 2
    }

    /// `χ(l') = -(K + l', l') / 2`.
    pub fn chi_canonical(&self, x: &RationalVector) -> Rational {
        self.chi(&self.canonical, x)
    }

    /// The smallest integral `x` with `(x, E_v) <= -b_v` for all `v`, where
    /// `b_v = max(1, -e_v - 1) + margin - 1`; margin 1 gives the minimal point
    /// passing [`Lattice::is_deep`]. Starts from `ceil(Σ b_v E*_v)`, a lower
    /// bound, and raises violating coordinates (Laufer's algorithm).
    pub fn deep_point(&self, margin: i64) -> Result<RationalVector> {
        if margin <= 0 {
            return Err(Error::InvalidArgument("deep point margin must be positive".into()));
        }
        let b: Vec<i64> = (0..self.dim()).map(|v| (-self.graph.euler(v) - 1).max(1) + margin - 1).collect();
        self.climb(&b)
    }

    /// Smallest integral `x >= ceil(Σ b_v E*_v)` with `(x, E_v) <= -b_v`.
    fn climb(&self, b: &[i64]) -> Result<RationalVector> {
        let n = self.dim();
        let g = &self.graph;
        let y = (0..n).fold(self.zero(), |acc, v| acc.add(&self.dual(v).scale(b[v])));
        let mut x: Vec<i64> = y.ceil().num.iter().map(|c| c / y.den).collect();
        let pair = |x: &[i64], v: usize| -> i64 { g.euler(v) * x[v] + g.neighbors(v).iter().map(|&w| x[w]).sum::<i64>() };
        let mut queue: Vec<usize> = (0..n).collect();
        while let Some(v) = queue.pop() {
            if pair(&x, v) > -b[v] {
                x[v] = x[v].checked_add(1).ok_or(Error::Overflow("deep point"))?;
                queue.push(v);
                queue.extend_from_slice(g.neighbors(v));
            }
        }
        let x = self.from_integers(&x);
        debug_assert!(self.is_deep(&x));
        Ok(x)
    }

    /// Artin's fundamental cycle: the smallest nonzero `Z ∈ L` with
    /// `(Z, E_v) <= 0` for all `v`, by Laufer's algorithm.
    pub fn fundamental_cycle(&self) -> RationalVector {
        let n = self.dim();
        let mut z = self.from_integers(&vec![1; n]);
        while let Some(v) = (0..n).find(|&v| self.pair_with_base(&z, v) > Rational::from_integer(0)) {
            z.num[v] += self.det;
        }
        z
    }

    /// A second point of `(-K + int S') ∩ L`, different from `deep_point(1)`:
    /// the climb with the bound raised by one at a single vertex, taking the
    /// smallest result. Falls back to adding the fundamental cycle.
    pub fn second_deep_point(&self) -> Result<RationalVector> {
        let x1 = self.deep_point(1)?;
        let base: Vec<i64> = (0..self.dim()).map(|v| (-self.graph.euler(v) - 1).max(1)).collect();
        let mut best: Option<(i64, RationalVector)> = None;
        for v in 0..self.dim() {
            let mut b = base.clone();
            b[v] += 1;
            let x = self.climb(&b)?;
            let size: i64 = x.num.iter().sum();
            if x != x1 && best.as_ref().is_none_or(|(s, _)| size < *s) {
                best = Some((size, x));
            }
        }
        match best {
            Some((_, x)) => Ok(x),
            None => Ok(x1.add(&self.fundamental_cycle())),
        }
    }

    /// `(x + K, E_v) < 0` and `(x, E_v) < 0` for every `v`. The second set of
    /// inequalities follows from the first unless some `e_v = -1`; without it
    /// the counting identity fails on graphs with `(-1)`-nodes.
    pub fn is_deep(&self, x: &RationalVector) -> bool {
        let xk = x.add(&self.canonical);
        let zero = Rational::from_integer(0);
        x.is_integral() && (0..self.dim()).all(|v| self.pair_with_base(&xk, v) < zero && self.pair_with_base(x, v) < zero)
    }

    /// Node coordinates of `x`, as numerators over `x.den`.
    pub fn project_to_nodes(&self, x: &RationalVector) -> Result<Exponent> {
        if self.nodes.is_empty() {
            return Err(Error::NoNodes);
        }
        Ok(self.nodes.iter().map(|&n| x.num[n]).collect())
    }

    /// Orbifold Euler-type data: `E*_v` projected to the nodes.
    pub fn projected_dual(&self, v: usize) -> Exponent {
        self.nodes.iter().map(|&n| self.adj[n][v] as i64).collect()
    }

    pub fn rational_to_string_vec(&self, x: &RationalVector) -> Vec<String> {
        (0..x.len()).map(|i| x.coord(i).to_string()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e8() -> PlumbingGraph {
        PlumbingGraph::build(
            &[("c", -2), ("a1", -2), ("b1", -2), ("b2", -2), ("d1", -2), ("d2", -2), ("d3", -2), ("d4", -2)],
            &[("c", "a1"), ("c", "b1"), ("b1", "b2"), ("c", "d1"), ("d1", "d2"), ("d2", "d3"), ("d3", "d4")],
        )
        .unwrap()
    }

    #[test]
    fn single_vertex() {
        let g = PlumbingGraph::build(&[("a", -2)], &[]).unwrap();
        let l = Lattice::new(&g).unwrap();
        assert_eq!(l.dual(0), RationalVector { num: vec![1], den: 2 });
        assert_eq!(l.pairing(0, 0), Rational::new(-1, 2));
        assert_eq!(l.group().factors, vec![2]);
        let h = l.class_of_dual(0);
        assert_eq!(l.representative(&h).unwrap().coord(0), Rational::new(1, 2));
        assert_eq!(l.representative(&l.group().zero()).unwrap(), l.zero());

        let g3 = PlumbingGraph::build(&[("a", -3)], &[]).unwrap();
        let l3 = Lattice::new(&g3).unwrap();
        assert_eq!(l3.canonical_class().coord(0), Rational::new(-1, 3));
        assert_eq!(l3.pair_with_base(l3.canonical_class(), 0), Rational::from_integer(1));
    }

    #[test]
    fn e8_lattice() {
        let g = e8();
        let l = Lattice::new(&g).unwrap();
        assert_eq!(l.det(), 1);
        assert!(l.group().factors.is_empty());
        assert_eq!(l.dual(0).coord(0), Rational::from_integer(30));
        assert_eq!(l.pairing(0, 0), Rational::from_integer(-30));
        assert_eq!(l.canonical_class(), &l.zero());
        let e = l.e(3);
        assert_eq!(l.chi(&l.zero(), &e), Rational::from_integer(1));
        let x = l.deep_point(1).unwrap();
        assert!(x.is_integral());
        let xk = x.add(l.canonical_class());
        assert!((0..8).all(|v| l.pair_with_base(&xk, v) < Rational::from_integer(0)));
        for v in 0..8 {
            for w in 0..8 {
                assert_eq!(l.pairing(v, w), l.pairing_via_determinants(v, w).unwrap());
            }
        }
    }

    #[test]
    fn cyclic_chain_group() {
        // chain -2,-2,-2: det 4, H = Z/4
        let g = PlumbingGraph::build(&[("a", -2), ("b", -2), ("c", -2)], &[("a", "b"), ("b", "c")]).unwrap();
        let l = Lattice::new(&g).unwrap();
        assert_eq!(l.group().factors, vec![4]);
        let c = l.class_of_dual(0);
        assert_eq!(l.group().order_of(&c), 4);
        for v in 0..3 {
            assert_eq!(l.class_of(&l.e(v)).unwrap(), l.group().zero());
        }
        for cls in l.group().classes() {
            let r = l.representative(&cls).unwrap();
            assert_eq!(l.class_of(&r).unwrap(), cls);
        }
    }

    #[test]
    fn noncyclic_group() {
        // D4: center -2 with three -2 legs, H = Z/2 x Z/2
        let g = PlumbingGraph::build(
            &[("c", -2), ("x", -2), ("y", -2), ("z", -2)],
            &[("c", "x"), ("c", "y"), ("c", "z")],
        )
        .unwrap();
        let l = Lattice::new(&g).unwrap();
        assert_eq!(l.group().factors, vec![2, 2]);
        let classes: std::collections::BTreeSet<Class> = (0..4).map(|v| l.class_of_dual(v)).collect();
        assert_eq!(classes.len(), 4);
        for cls in l.group().classes() {
            assert_eq!(l.class_of(&l.lift(&cls).unwrap()).unwrap(), cls);
        }
    }
}
