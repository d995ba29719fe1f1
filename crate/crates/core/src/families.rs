//! Seeded random generators for test and scan families.

use std::ops::RangeInclusive;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::PlumbingGraph;
use crate::knot::{negative_continued_fraction, AlgebraicKnot, SurgerySpec};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random reduced fraction `α/ω` with `2 <= α <= max_alpha`, `0 < ω < α`.
fn random_leg<R: Rng>(rng: &mut R, max_alpha: i64) -> (i64, i64) {
    loop {
        let a = rng.gen_range(2..=max_alpha.max(2));
        let w = rng.gen_range(1..a);
        if a.gcd(&w) == 1 {
            return (a, w);
        }
    }
}

struct Builder {
    vertices: Vec<(String, i64)>,
    edges: Vec<(String, String)>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            vertices: Vec::new(),
            edges: Vec::new(),
        }
    }

    fn vertex(&mut self, e: i64) -> String {
        let id = format!("x{}", self.vertices.len());
        self.vertices.push((id.clone(), e));
        id
    }

    fn edge(&mut self, a: &str, b: &str) {
        self.edges.push((a.to_string(), b.to_string()));
    }

    /// Hangs the chain of `α/ω` off `at`.
    fn leg(&mut self, at: &str, (a, w): (i64, i64)) {
        let mut prev = at.to_string();
        for k in negative_continued_fraction(a, w).expect("coprime") {
            let v = self.vertex(-k);
            self.edge(&prev, &v);
            prev = v;
        }
    }

    fn build(self) -> Result<PlumbingGraph> {
        PlumbingGraph::from_parts(self.vertices, self.edges)
    }
}

/// Star-shaped graph: one node with `legs` Seifert legs, central weight
/// `-b` where `b` exceeds `Σ ω_i/α_i` by a random margin.
pub fn random_seifert<R: Rng>(rng: &mut R, legs: RangeInclusive<usize>, max_alpha: i64) -> Result<PlumbingGraph> {
    let n = rng.gen_range(legs).max(3);
    let ls: Vec<(i64, i64)> = (0..n).map(|_| random_leg(rng, max_alpha)).collect();
    let lcm = ls.iter().fold(1i64, |l, &(a, _)| l.lcm(&a));
    let num: i64 = ls.iter().map(|&(a, w)| w * (lcm / a)).sum();
    let b = num / lcm + 1 + rng.gen_range(0..=1);
    let mut bld = Builder::new();
    let c = bld.vertex(-b);
    for l in ls {
        bld.leg(&c, l);
    }
    bld.build()
}

/// Graph whose orbifold graph is a path of `nodes` nodes. Nodes are joined by
/// short chains; weights on nodes are lowered until the form is negative
/// definite.
pub fn random_bamboo<R: Rng>(rng: &mut R, nodes: RangeInclusive<usize>, max_alpha: i64) -> Result<PlumbingGraph> {
    let k = rng.gen_range(nodes).max(2);
    let links: Vec<Vec<i64>> = (1..k)
        .map(|_| (0..rng.gen_range(0..=2)).map(|_| -rng.gen_range(2..=3)).collect())
        .collect();
    let legs: Vec<Vec<(i64, i64)>> = (0..k)
        .map(|i| {
            let need = if i == 0 || i == k - 1 { 2 } else { 1 };
            let n = need + usize::from(rng.gen_bool(0.3));
            (0..n).map(|_| random_leg(rng, max_alpha)).collect()
        })
        .collect();
    let mut node_w: Vec<i64> = (0..k).map(|_| -rng.gen_range(1..=3)).collect();
    loop {
        let mut bld = Builder::new();
        let ids: Vec<String> = node_w.iter().map(|&w| bld.vertex(w)).collect();
        for (i, chain) in links.iter().enumerate() {
            let mut prev = ids[i].clone();
            for &w in chain {
                let v = bld.vertex(w);
                bld.edge(&prev, &v);
                prev = v;
            }
            bld.edge(&prev, &ids[i + 1]);
        }
        for (i, ls) in legs.iter().enumerate() {
            for &l in ls {
                bld.leg(&ids[i], l);
            }
        }
        let g = bld.build()?;
        if g.validate().negative_definite {
            return Ok(g);
        }
        for w in &mut node_w {
            *w -= 1;
        }
    }
}

/// A small menu of Newton pair sequences with `r <= 2`.
const KNOTS: &[&[(i64, i64)]] = &[&[(2, 3)], &[(2, 5)], &[(3, 4)], &[(2, 3), (2, 1)], &[(3, 5)], &[(2, 7)]];

/// Random surgery data with `ν` knots, `r <= max_pairs` and `p <= max_p`.
pub fn random_surgery<R: Rng>(
    rng: &mut R,
    knots: RangeInclusive<usize>,
    max_pairs: usize,
    max_p: i64,
) -> Result<SurgerySpec> {
    let menu: Vec<&[(i64, i64)]> = KNOTS.iter().copied().filter(|k| k.len() <= max_pairs).collect();
    let nu = rng.gen_range(knots).max(1);
    let ks = (0..nu)
        .map(|_| AlgebraicKnot::new(menu[rng.gen_range(0..menu.len())]))
        .collect::<Result<Vec<_>>>()?;
    let p = rng.gen_range(1..=max_p.max(1));
    let q = loop {
        let q = rng.gen_range(1..=p);
        if p.gcd(&q) == 1 {
            break q;
        }
    };
    SurgerySpec::new(ks, p, q)
}

/// Family descriptor shared by the scan command and the tests.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FamilySpec {
    Seifert {
        legs: (usize, usize),
        max_alpha: i64,
    },
    BambooOrbifold {
        nodes: (usize, usize),
        max_alpha: i64,
    },
    Surgery {
        knots: (usize, usize),
        max_pairs: usize,
        max_p: i64,
    },
}

/// One generated instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub label: String,
    pub graph: PlumbingGraph,
    pub surgery: Option<SurgerySpec>,
}

impl FamilySpec {
    /// True when a parameter range is empty, so nothing can be generated.
    pub fn is_empty(&self) -> bool {
        match *self {
            FamilySpec::Seifert { legs, max_alpha } => legs.0 > legs.1 || legs.1 < 3 || max_alpha < 2,
            FamilySpec::BambooOrbifold { nodes, max_alpha } => nodes.0 > nodes.1 || nodes.1 < 2 || max_alpha < 2,
            FamilySpec::Surgery {
                knots,
                max_pairs,
                max_p,
            } => knots.0 > knots.1 || knots.1 < 1 || max_pairs < 1 || max_p < 1,
        }
    }

    pub fn generate<R: Rng>(&self, rng: &mut R) -> Result<Instance> {
        match self {
            FamilySpec::Seifert { legs, max_alpha } => Ok(Instance {
                label: "seifert".into(),
                graph: random_seifert(rng, legs.0..=legs.1, *max_alpha)?,
                surgery: None,
            }),
            FamilySpec::BambooOrbifold { nodes, max_alpha } => Ok(Instance {
                label: "bamboo".into(),
                graph: random_bamboo(rng, nodes.0..=nodes.1, *max_alpha)?,
                surgery: None,
            }),
            FamilySpec::Surgery {
                knots,
                max_pairs,
                max_p,
            } => {
                let spec = random_surgery(rng, knots.0..=knots.1, *max_pairs, *max_p)?;
                let sg = crate::knot::surgery_graph(&spec)?;
                let label = format!(
                    "surgery p={} q={} knots={}",
                    spec.p,
                    spec.q,
                    spec.knots
                        .iter()
                        .map(|k| k.newton_pairs().iter().map(|(a, b)| format!("{a},{b}")).collect::<Vec<_>>().join(";"))
                        .collect::<Vec<_>>()
                        .join(" ")
                );
                Ok(Instance {
                    label,
                    graph: sg.graph,
                    surgery: Some(spec),
                })
            }
        }
    }
}

/// Acceptance filter for sampled instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Limits {
    pub max_det: i64,
    pub max_nodes: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_det: 1000,
            max_nodes: 4,
        }
    }
}

impl Limits {
    pub fn admits(&self, g: &PlumbingGraph) -> Result<bool> {
        Ok(g.nodes().len() <= self.max_nodes && g.determinant()? <= i128::from(self.max_det))
    }
}

/// Draws `count` admissible instances, giving up after `50 * count` attempts.
pub fn sample(family: &FamilySpec, seed: u64, count: usize, limits: Limits) -> Result<Vec<Instance>> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(count);
    if family.is_empty() {
        return Ok(out);
    }
    let mut attempts = 0;
    while out.len() < count && attempts < 50 * count.max(1) {
        attempts += 1;
        let inst = family.generate(&mut r)?;
        if limits.admits(&inst.graph)? {
            out.push(inst);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic_and_definite() {
        let fam = FamilySpec::BambooOrbifold {
            nodes: (2, 4),
            max_alpha: 5,
        };
        let a = sample(&fam, 7, 10, Limits::default()).unwrap();
        let b = sample(&fam, 7, 10, Limits::default()).unwrap();
        assert_eq!(a.len(), 10);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.graph, y.graph);
            assert!(x.graph.validate().negative_definite);
            assert!(x.graph.orbifold_graph(None).unwrap().is_bamboo());
        }
        let s = sample(&FamilySpec::Seifert { legs: (3, 4), max_alpha: 5 }, 1, 5, Limits { max_det: 10_000, max_nodes: 1 }).unwrap();
        assert!(s.iter().all(|i| i.graph.validate().negative_definite && i.graph.nodes().len() == 1));
    }
}
