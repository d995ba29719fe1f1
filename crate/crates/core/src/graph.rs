//! Plumbing trees: data model, JSON form, validation, subgraph determinants
//! and the rooted orbifold graph on the nodes.

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// A plumbing tree with genus-zero vertices decorated by Euler numbers.
///
/// Vertices are addressed by their position in the input order; ids are kept
/// for I/O. Construction guarantees a simple connected tree but not negative
/// definiteness, which [`PlumbingGraph::validate`] reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlumbingGraph {
    ids: Vec<String>,
    euler: Vec<i64>,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    index: FxHashMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexEntry {
    id: String,
    e: i64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    vertices: Vec<VertexEntry>,
    edges: Vec<(String, String)>,
}

/// Parses the JSON graph format `{"vertices":[{"id":..,"e":..}],"edges":[[a,b]]}`.
pub fn parse_graph(text: &str) -> Result<PlumbingGraph> {
    let file: GraphFile = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    PlumbingGraph::from_parts(
        file.vertices.into_iter().map(|v| (v.id, v.e)).collect(),
        file.edges,
    )
}

impl PlumbingGraph {
    pub fn from_parts(vertices: Vec<(String, i64)>, edges: Vec<(String, String)>) -> Result<Self> {
        let mut index = FxHashMap::default();
        let mut ids = Vec::with_capacity(vertices.len());
        let mut euler = Vec::with_capacity(vertices.len());
        for (id, e) in vertices {
            if id.is_empty() {
                return Err(Error::Malformed("empty vertex id".into()));
            }
            if index.insert(id.clone(), ids.len()).is_some() {
                return Err(Error::DuplicateId(id));
            }
            ids.push(id);
            euler.push(e);
        }
        if ids.is_empty() {
            return Err(Error::Malformed("graph has no vertices".into()));
        }
        let mut adj = vec![Vec::new(); ids.len()];
        let mut seen = FxHashSet::default();
        let mut idx_edges = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            let i = *index.get(&a).ok_or_else(|| Error::UnknownVertex(a.clone()))?;
            let j = *index.get(&b).ok_or_else(|| Error::UnknownVertex(b.clone()))?;
            if i == j {
                return Err(Error::InvalidEdge(format!("loop at `{a}`")));
            }
            if !seen.insert((i.min(j), i.max(j))) {
                return Err(Error::InvalidEdge(format!("repeated edge `{a}`-`{b}`")));
            }
            adj[i].push(j);
            adj[j].push(i);
            idx_edges.push((i, j));
        }
        let g = PlumbingGraph {
            ids,
            euler,
            edges: idx_edges,
            adj,
            index,
        };
        if g.edges.len() + 1 != g.len() {
            return Err(Error::NotATree(format!(
                "{} vertices but {} edges",
                g.len(),
                g.edges.len()
            )));
        }
        if !g.is_connected() {
            return Err(Error::NotATree("graph is disconnected".into()));
        }
        Ok(g)
    }

    /// Convenience constructor from string slices.
    pub fn build(vertices: &[(&str, i64)], edges: &[(&str, &str)]) -> Result<Self> {
        Self::from_parts(
            vertices.iter().map(|&(v, e)| (v.to_string(), e)).collect(),
            edges.iter().map(|&(a, b)| (a.to_string(), b.to_string())).collect(),
        )
    }

    pub fn to_json(&self) -> String {
        let file = GraphFile {
            vertices: self
                .ids
                .iter()
                .zip(&self.euler)
                .map(|(id, &e)| VertexEntry { id: id.clone(), e })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|&(a, b)| (self.ids[a].clone(), self.ids[b].clone()))
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("graph serializes")
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn euler(&self, v: usize) -> i64 {
        self.euler[v]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn valency(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Vertices of valency at least three, in input order.
    pub fn nodes(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.valency(v) >= 3).collect()
    }

    /// Vertices of valency one, in input order.
    pub fn ends(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.valency(v) == 1).collect()
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.len()
    }

    /// The intersection matrix `I`.
    pub(crate) fn intersection_matrix(&self) -> linalg::Matrix {
        let n = self.len();
        let mut m = vec![vec![0i128; n]; n];
        for (v, row) in m.iter_mut().enumerate() {
            row[v] = i128::from(self.euler[v]);
        }
        for &(a, b) in &self.edges {
            m[a][b] = 1;
            m[b][a] = 1;
        }
        m
    }

    /// `det(-I)` restricted to `subset`; the empty subset has determinant 1.
    pub fn subgraph_determinant(&self, subset: &[usize]) -> Result<i128> {
        let mut s: Vec<usize> = subset.to_vec();
        s.sort_unstable();
        s.dedup();
        if let Some(&bad) = s.iter().find(|&&v| v >= self.len()) {
            return Err(Error::UnknownVertex(format!("#{bad}")));
        }
        let pos: FxHashMap<usize, usize> = s.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut m = vec![vec![0i128; s.len()]; s.len()];
        for (i, &v) in s.iter().enumerate() {
            m[i][i] = -i128::from(self.euler[v]);
            for w in &self.adj[v] {
                if let Some(&j) = pos.get(w) {
                    m[i][j] = -1;
                }
            }
        }
        linalg::determinant(&m)
    }

    pub fn subgraph_determinant_ids(&self, subset: &[&str]) -> Result<i128> {
        let idx = subset.iter().map(|id| self.index_of(id)).collect::<Result<Vec<_>>>()?;
        self.subgraph_determinant(&idx)
    }

    /// `det_Γ = det(-I)`, the order of the discriminant group.
    pub fn determinant(&self) -> Result<i128> {
        let all: Vec<usize> = (0..self.len()).collect();
        self.subgraph_determinant(&all)
    }

    /// The tree path between `v` and `w`, endpoints included as requested.
    pub fn path_vertices(&self, v: usize, w: usize, include_v: bool, include_w: bool) -> Result<Vec<usize>> {
        if v >= self.len() || w >= self.len() {
            return Err(Error::UnknownVertex(format!("#{}", v.max(w))));
        }
        let mut parent = vec![usize::MAX; self.len()];
        parent[v] = v;
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            if x == w {
                break;
            }
            for &y in &self.adj[x] {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    stack.push(y);
                }
            }
        }
        let mut path = vec![w];
        let mut x = w;
        while x != v {
            x = parent[x];
            path.push(x);
        }
        path.reverse();
        if v == w {
            return Ok(if include_v && include_w { path } else { Vec::new() });
        }
        let start = usize::from(!include_v);
        let end = path.len() - usize::from(!include_w);
        Ok(path[start..end].to_vec())
    }

    pub fn path_vertices_ids(&self, v: &str, w: &str, include_v: bool, include_w: bool) -> Result<Vec<String>> {
        let p = self.path_vertices(self.index_of(v)?, self.index_of(w)?, include_v, include_w)?;
        Ok(p.into_iter().map(|x| self.ids[x].clone()).collect())
    }

    /// Connected components of the graph with `removed` deleted.
    pub fn components_without(&self, removed: &[usize]) -> Vec<Vec<usize>> {
        let mut dead = vec![false; self.len()];
        for &r in removed {
            dead[r] = true;
        }
        let mut comps = Vec::new();
        for s in 0..self.len() {
            if dead[s] {
                continue;
            }
            let mut comp = vec![s];
            dead[s] = true;
            let mut i = 0;
            while i < comp.len() {
                let x = comp[i];
                i += 1;
                for &y in &self.adj[x] {
                    if !dead[y] {
                        dead[y] = true;
                        comp.push(y);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Isomorphism of weighted trees, ignoring vertex ids.
    pub fn is_isomorphic(&self, other: &PlumbingGraph) -> bool {
        self.len() == other.len() && self.edges.len() == other.edges.len() && self.canonical_form() == other.canonical_form()
    }

    /// AHU encoding rooted at the tree center(s); the smaller one wins for
    /// bicentral trees.
    fn canonical_form(&self) -> String {
        fn encode(g: &PlumbingGraph, v: usize, parent: Option<usize>) -> String {
            let mut kids: Vec<String> = g.adj[v]
                .iter()
                .filter(|&&w| Some(w) != parent)
                .map(|&w| encode(g, w, Some(v)))
                .collect();
            kids.sort();
            format!("({}{})", g.euler[v], kids.concat())
        }
        if self.is_empty() {
            return String::new();
        }
        // peel leaves down to the center
        let mut deg: Vec<usize> = (0..self.len()).map(|v| self.adj[v].len()).collect();
        let mut layer: Vec<usize> = (0..self.len()).filter(|&v| deg[v] <= 1).collect();
        let mut left = self.len();
        while left > 2 {
            left -= layer.len();
            let mut next = Vec::new();
            for &v in &layer {
                for &w in &self.adj[v] {
                    deg[w] -= 1;
                    if deg[w] == 1 {
                        next.push(w);
                    }
                }
            }
            layer = next;
        }
        layer.iter().map(|&c| encode(self, c, None)).min().unwrap()
    }

    pub fn validate(&self) -> ValidationReport {
        let n = self.len();
        let neg = {
            let mut m = self.intersection_matrix();
            m.iter_mut().flatten().for_each(|x| *x = -*x);
            m
        };
        let mut minors = Vec::with_capacity(n);
        let mut overflow = false;
        for k in 1..=n {
            let sub: linalg::Matrix = neg[..k].iter().map(|r| r[..k].to_vec()).collect();
            match linalg::determinant(&sub) {
                Ok(d) => minors.push(d.to_string()),
                Err(_) => {
                    overflow = true;
                    break;
                }
            }
        }
        let negative_definite = !overflow && minors.iter().all(|d| !d.starts_with('-') && d != "0");
        let det = if overflow { None } else { minors.last().cloned() };
        let nodes: Vec<String> = self.nodes().into_iter().map(|v| self.ids[v].clone()).collect();
        let ends: Vec<String> = self.ends().into_iter().map(|v| self.ids[v].clone()).collect();
        let zeta_ready = negative_definite && !nodes.is_empty();
        ValidationReport {
            vertices: n,
            edges: self.edges.len(),
            connected: self.is_connected(),
            tree: self.edges.len() + 1 == n,
            negative_definite,
            det,
            leading_minors: minors,
            nodes,
            ends,
            zeta_ready,
            valid: negative_definite,
        }
    }

    /// Errors unless the intersection form is negative definite.
    pub fn require_negative_definite(&self) -> Result<()> {
        if self.validate().negative_definite {
            Ok(())
        } else {
            Err(Error::NotNegativeDefinite)
        }
    }

    /// The orbifold graph on the nodes, oriented toward `root` (default: the
    /// lexicographically smallest node id).
    pub fn orbifold_graph(&self, root: Option<&str>) -> Result<OrbifoldGraph> {
        let nodes = self.nodes();
        if nodes.is_empty() {
            return Err(Error::NoNodes);
        }
        let pos: FxHashMap<usize, usize> = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let root_pos = match root {
            Some(id) => {
                let v = self.index_of(id)?;
                *pos.get(&v)
                    .ok_or_else(|| Error::InvalidArgument(format!("root `{id}` is not a node")))?
            }
            None => (0..nodes.len())
                .min_by(|&a, &b| self.ids[nodes[a]].cmp(&self.ids[nodes[b]]))
                .expect("nonempty"),
        };

        let mut nbrs = vec![Vec::new(); nodes.len()];
        for (i, &n) in nodes.iter().enumerate() {
            for &first in &self.adj[n] {
                let (mut prev, mut cur) = (n, first);
                while self.valency(cur) == 2 {
                    let next = if self.adj[cur][0] == prev { self.adj[cur][1] } else { self.adj[cur][0] };
                    prev = cur;
                    cur = next;
                }
                if let Some(&j) = pos.get(&cur) {
                    nbrs[i].push(j);
                }
            }
        }

        let mut parent = vec![None; nodes.len()];
        let mut order = vec![root_pos];
        let mut seen = vec![false; nodes.len()];
        seen[root_pos] = true;
        let mut k = 0;
        while k < order.len() {
            let x = order[k];
            k += 1;
            for &y in &nbrs[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some(x);
                    order.push(y);
                }
            }
        }
        if order.len() != nodes.len() {
            return Err(Error::Internal("orbifold graph is disconnected".into()));
        }
        let edges = (0..nodes.len())
            .filter_map(|i| parent[i].map(|p| (i, p)))
            .collect();
        let valency = nbrs.iter().map(Vec::len).collect();
        Ok(OrbifoldGraph {
            ids: nodes.iter().map(|&v| self.ids[v].clone()).collect(),
            nodes,
            root: root_pos,
            edges,
            parent,
            valency,
        })
    }
}

/// Result of [`PlumbingGraph::validate`]. Determinants are decimal strings so
/// that large values survive JSON round trips.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ValidationReport {
    pub vertices: usize,
    pub edges: usize,
    pub connected: bool,
    pub tree: bool,
    pub negative_definite: bool,
    pub det: Option<String>,
    pub leading_minors: Vec<String>,
    pub nodes: Vec<String>,
    pub ends: Vec<String>,
    /// Negative definite with at least one node.
    pub zeta_ready: bool,
    pub valid: bool,
}

/// The tree on the nodes, edges oriented toward the root.
///
/// Node positions `0..nodes.len()` index exponent coordinates everywhere in
/// the pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbifoldGraph {
    /// Graph vertex of each node position.
    pub nodes: Vec<usize>,
    pub ids: Vec<String>,
    pub root: usize,
    /// Oriented edges `(n, n')` with `n'` one step closer to the root.
    pub edges: Vec<(usize, usize)>,
    pub parent: Vec<Option<usize>>,
    /// Orbifold valency of each node.
    pub valency: Vec<usize>,
}

impl OrbifoldGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn is_bamboo(&self) -> bool {
        self.valency.iter().all(|&d| d <= 2)
    }

    /// Node positions along the bamboo, starting from the end with the
    /// smaller position; `None` if the graph branches.
    pub fn bamboo_order(&self) -> Option<Vec<usize>> {
        if !self.is_bamboo() {
            return None;
        }
        if self.len() == 1 {
            return Some(vec![0]);
        }
        let mut nbrs = vec![Vec::new(); self.len()];
        for &(a, b) in &self.edges {
            nbrs[a].push(b);
            nbrs[b].push(a);
        }
        let start = (0..self.len()).find(|&i| nbrs[i].len() == 1)?;
        let mut order = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while let Some(&next) = nbrs[cur].iter().find(|&&x| x != prev) {
            prev = cur;
            cur = next;
            order.push(cur);
        }
        Some(order)
    }

    /// Number of oriented edges arriving at `n`.
    pub fn in_degree(&self, n: usize) -> usize {
        self.edges.iter().filter(|e| e.1 == n).count()
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
    fn parse_single_vertex_and_errors() {
        let g = parse_graph(r#"{"vertices":[{"id":"a","e":-2}],"edges":[]}"#).unwrap();
        assert_eq!(g.len(), 1);
        let r = g.validate();
        assert!(r.negative_definite && !r.zeta_ready);
        assert_eq!(r.det.as_deref(), Some("2"));

        let zero = parse_graph(r#"{"vertices":[{"id":"a","e":0}],"edges":[]}"#).unwrap();
        assert!(!zero.validate().negative_definite);

        let two = parse_graph(r#"{"vertices":[{"id":"a","e":-2},{"id":"b","e":-2}],"edges":[]}"#);
        assert!(matches!(two, Err(Error::NotATree(_))));
        let dup = parse_graph(r#"{"vertices":[{"id":"a","e":-2},{"id":"a","e":-2}],"edges":[["a","a"]]}"#);
        assert!(matches!(dup, Err(Error::DuplicateId(_))));
        let unk = parse_graph(r#"{"vertices":[{"id":"a","e":-2}],"edges":[["a","b"]]}"#);
        assert!(matches!(unk, Err(Error::UnknownVertex(_))));
        let extra = parse_graph(r#"{"vertices":[{"id":"a","e":-2,"g":0}],"edges":[]}"#);
        assert!(matches!(extra, Err(Error::Malformed(_))));
    }

    #[test]
    fn e8_determinants_and_paths() {
        let g = e8();
        let r = g.validate();
        assert!(r.valid && r.zeta_ready);
        assert_eq!(r.nodes, vec!["c"]);
        assert_eq!(g.determinant().unwrap(), 1);
        assert_eq!(g.subgraph_determinant(&[]).unwrap(), 1);
        // legs of the center are A1, A2, A4 chains
        assert_eq!(g.subgraph_determinant_ids(&["d1", "d2", "d3", "d4"]).unwrap(), 5);
        let path = g.path_vertices_ids("d4", "c", true, true).unwrap();
        assert_eq!(path, vec!["d4", "d3", "d2", "d1", "c"]);
        assert!(g.path_vertices_ids("c", "a1", false, false).unwrap().is_empty());
        assert_eq!(g.path_vertices_ids("b2", "b2", true, true).unwrap(), vec!["b2"]);
        assert_eq!(g.path_vertices_ids("b2", "a1", false, true).unwrap(), vec!["b1", "c", "a1"]);
        let sum: i64 = (0..g.len()).map(|v| g.valency(v) as i64 - 2).sum();
        assert_eq!(sum, -2);
    }

    #[test]
    fn orbifold_of_two_node_chain() {
        let g = PlumbingGraph::build(
            &[("n", -2), ("m", -2), ("x", -3), ("a", -2), ("b", -3), ("c", -2), ("d", -5)],
            &[("n", "x"), ("x", "m"), ("n", "a"), ("n", "b"), ("m", "c"), ("m", "d")],
        )
        .unwrap();
        let orb = g.orbifold_graph(None).unwrap();
        assert_eq!(orb.ids, vec!["n", "m"]);
        assert_eq!(orb.root, 1);
        assert_eq!(orb.edges, vec![(0, 1)]);
        assert!(orb.is_bamboo());
        let orb = g.orbifold_graph(Some("n")).unwrap();
        assert_eq!(orb.edges, vec![(1, 0)]);
        assert!(g.orbifold_graph(Some("x")).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = e8();
        assert_eq!(parse_graph(&g.to_json()).unwrap(), g);
    }
}
