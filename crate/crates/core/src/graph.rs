//! Finite weighted bipartite multigraphs with an edge-reversal involution.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

/// Absolute tolerance used by equality checks unless configured otherwise.
pub const DEFAULT_TOL: f64 = 1e-9;

const PF_TOL: f64 = 1e-12;
const PF_MAX_ITER: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexSpec {
    pub id: String,
    pub parity: Parity,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight2: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub u: String,
    pub v: String,
    #[serde(default = "one")]
    pub mult: usize,
}

fn one() -> usize {
    1
}

/// Undirected description of a graph, as read from a graph file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    pub vertices: Vec<VertexSpec>,
    #[serde(default)]
    pub edges: Vec<EdgeSpec>,
}

impl GraphSpec {
    /// Parses JSON when the text starts with `{`, TOML otherwise.
    pub fn parse(text: &str) -> Result<GraphSpec> {
        if text.trim_start().starts_with('{') {
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
        } else {
            toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Vertex {
    pub name: String,
    pub parity: Parity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub start: VertexId,
    pub finish: VertexId,
    pub reversal: EdgeId,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    mu2: Vec<f64>,
    mu: Vec<f64>,
    star: Option<VertexId>,
    out: Vec<Vec<EdgeId>>,
}

/// A path: start vertex plus a sequence of composable edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub start: VertexId,
    pub edges: Vec<EdgeId>,
}

impl Path {
    pub fn trivial(v: VertexId) -> Path {
        Path { start: v, edges: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Edge `i`, 1-based.
    pub fn edge(&self, i: usize) -> EdgeId {
        self.edges[i - 1]
    }

    /// Vertex `v_i`: the start for `i = 0`, otherwise the finish of edge `i`.
    pub fn vertex(&self, g: &Graph, i: usize) -> VertexId {
        if i == 0 {
            self.start
        } else {
            g.edges[self.edges[i - 1]].finish
        }
    }

    pub fn finish(&self, g: &Graph) -> VertexId {
        self.vertex(g, self.len())
    }

    /// Sub-path between vertex indices `i` and `j`.
    pub fn sub(&self, g: &Graph, i: usize, j: usize) -> Path {
        Path { start: self.vertex(g, i), edges: self.edges[i..j].to_vec() }
    }

    /// Concatenation; `None` when the endpoints do not match.
    pub fn concat(&self, g: &Graph, other: &Path) -> Option<Path> {
        if self.finish(g) != other.start {
            return None;
        }
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Some(Path { start: self.start, edges })
    }

    pub fn reverse(&self, g: &Graph) -> Path {
        Path { start: self.finish(g), edges: self.edges.iter().rev().map(|&e| g.edges[e].reversal).collect() }
    }

    pub fn is_loop(&self, g: &Graph) -> bool {
        self.start == self.finish(g)
    }

    /// Vertex names joined by commas, with `:k` marking parallel edge k (from 0) when k > 0.
    pub fn display(&self, g: &Graph) -> String {
        let mut s = g.vertices[self.start].name.clone();
        for &e in &self.edges {
            let ed = g.edges[e];
            let rank = g.out[ed.start].iter().filter(|&&f| g.edges[f].finish == ed.finish && f < e).count();
            s.push(',');
            s.push_str(&g.vertices[ed.finish].name);
            if rank > 0 {
                s.push_str(&format!(":{rank}"));
            }
        }
        s
    }
}

impl Graph {
    /// Builds the topology from a spec; weights are taken from `weight2` when every
    /// vertex has one, and from the Perron-Frobenius eigenvector when none has.
    pub fn build(spec: &GraphSpec) -> Result<Graph> {
        let g = Graph::topology(spec)?;
        let given: Vec<Option<f64>> = spec.vertices.iter().map(|v| v.weight2).collect();
        if given.iter().all(Option::is_some) && !given.is_empty() {
            let w: Vec<f64> = given.into_iter().map(Option::unwrap).collect();
            g.with_weights(&w)
        } else if given.iter().all(Option::is_none) {
            Ok(g.pf_weighting()?.0)
        } else {
            Err(Error::PartialWeights)
        }
    }

    /// Topology only; weights are uniform until replaced.
    pub fn topology(spec: &GraphSpec) -> Result<Graph> {
        let mut index: HashMap<&str, VertexId> = HashMap::new();
        let mut vertices = Vec::with_capacity(spec.vertices.len());
        for (i, v) in spec.vertices.iter().enumerate() {
            if index.insert(v.id.as_str(), i).is_some() {
                return Err(Error::DuplicateVertex(v.id.clone()));
            }
            vertices.push(Vertex { name: v.id.clone(), parity: v.parity });
        }
        let mut edges = Vec::new();
        for e in &spec.edges {
            let a = *index.get(e.u.as_str()).ok_or_else(|| Error::UnknownVertex(e.u.clone()))?;
            let b = *index.get(e.v.as_str()).ok_or_else(|| Error::UnknownVertex(e.v.clone()))?;
            if vertices[a].parity == vertices[b].parity {
                return Err(Error::NotBipartite { u: e.u.clone(), v: e.v.clone() });
            }
            if e.mult == 0 {
                return Err(Error::ZeroMultiplicity { u: e.u.clone(), v: e.v.clone() });
            }
            let (even, odd) = if vertices[a].parity == Parity::Even { (a, b) } else { (b, a) };
            for _ in 0..e.mult {
                let id = edges.len();
                edges.push(Edge { start: even, finish: odd, reversal: id + 1 });
                edges.push(Edge { start: odd, finish: even, reversal: id });
            }
        }
        let n = vertices.len();
        Ok(Graph::assemble(vertices, edges, vec![1.0 / n.max(1) as f64; n], None))
    }

    fn assemble(vertices: Vec<Vertex>, edges: Vec<Edge>, mu2: Vec<f64>, star: Option<VertexId>) -> Graph {
        let mut out = vec![Vec::new(); vertices.len()];
        for (id, e) in edges.iter().enumerate() {
            out[e.start].push(id);
        }
        let mu = mu2.iter().map(|x| x.sqrt()).collect();
        Graph { vertices, edges, mu2, mu, star, out }
    }

    /// Replaces the weights; raw values are normalized to sum 1.
    pub fn with_weights(&self, raw: &[f64]) -> Result<Graph> {
        if raw.len() != self.vertices.len() {
            return Err(Error::Invalid(format!("expected {} weights, got {}", self.vertices.len(), raw.len())));
        }
        if let Some(i) = raw.iter().position(|&w| !w.is_finite() || w <= 0.0) {
            return Err(Error::NonpositiveWeight(self.vertices[i].name.clone()));
        }
        let total: f64 = raw.iter().sum();
        let mu2 = raw.iter().map(|w| w / total).collect();
        Ok(Graph::assemble(self.vertices.clone(), self.edges.clone(), mu2, self.star))
    }

    pub fn with_star(&self, star: VertexId) -> Graph {
        let mut g = self.clone();
        g.star = Some(star);
        g
    }

    /// Adjacency matrix counting edge multiplicities.
    pub fn adjacency(&self) -> Vec<Vec<f64>> {
        let n = self.vertices.len();
        let mut a = vec![vec![0.0; n]; n];
        for e in &self.edges {
            a[e.start][e.finish] += 1.0;
        }
        a
    }

    pub fn is_connected(&self) -> bool {
        self.component_of(0).len() == self.vertices.len()
    }

    fn component_of(&self, v: VertexId) -> BTreeSet<VertexId> {
        let mut seen = BTreeSet::new();
        if self.vertices.is_empty() {
            return seen;
        }
        let mut queue = VecDeque::from([v]);
        seen.insert(v);
        while let Some(x) = queue.pop_front() {
            for &e in &self.out[x] {
                let y = self.edges[e].finish;
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    /// Perron-Frobenius weighting: μ² is the positive eigenvector of the adjacency
    /// matrix normalized to sum 1. Returns the graph and the eigenvalue δ.
    pub fn pf_weighting(&self) -> Result<(Graph, f64)> {
        let n = self.vertices.len();
        if n == 0 || !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let a = self.adjacency();
        // Shift by the identity: the spectrum of a bipartite graph is symmetric, so
        // unshifted iteration oscillates between ±δ.
        let mut x = vec![1.0 / n as f64; n];
        let mut lambda_prev = f64::NAN;
        for _ in 0..PF_MAX_ITER {
            let mut y: Vec<f64> = (0..n).map(|i| x[i] + (0..n).map(|j| a[i][j] * x[j]).sum::<f64>()).collect();
            let lambda = dot(&x, &y) / dot(&x, &x);
            let s: f64 = y.iter().sum();
            y.iter_mut().for_each(|v| *v /= s);
            // The Rayleigh quotient converges quadratically faster than the vector, so the
            // vector step is tested as well.
            let step = x.iter().zip(&y).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            x = y;
            if (lambda - lambda_prev).abs() < PF_TOL && step < PF_TOL {
                let g = self.with_weights(&x)?;
                return Ok((g, lambda - 1.0));
            }
            lambda_prev = lambda;
        }
        Err(Error::NoConvergence(PF_MAX_ITER))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of undirected edges (reversal pairs).
    pub fn undirected_edge_count(&self) -> usize {
        self.edges.len() / 2
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> Edge {
        self.edges[e]
    }

    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out[v]
    }

    pub fn parity(&self, v: VertexId) -> Parity {
        self.vertices[v].parity
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.vertices[v].name
    }

    pub fn mu2(&self, v: VertexId) -> f64 {
        self.mu2[v]
    }

    pub fn mu(&self, v: VertexId) -> f64 {
        self.mu[v]
    }

    pub fn weights(&self) -> &[f64] {
        &self.mu2
    }

    pub fn star(&self) -> Option<VertexId> {
        self.star
    }

    pub fn vertex_id(&self, name: &str) -> Result<VertexId> {
        self.vertices.iter().position(|v| v.name == name).ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn vertices_of(&self, p: Parity) -> Vec<VertexId> {
        (0..self.vertices.len()).filter(|&v| self.vertices[v].parity == p).collect()
    }

    /// δ(v) = Σ over edges v→w of (μ(w)/μ(v))².
    pub fn delta_v(&self, v: VertexId) -> f64 {
        self.out[v].iter().map(|&e| self.mu2[self.edges[e].finish]).sum::<f64>() / self.mu2[v]
    }

    /// max_v δ(v).
    pub fn delta_max(&self) -> f64 {
        (0..self.vertices.len()).map(|v| self.delta_v(v)).fold(0.0, f64::max)
    }

    /// Every path of length `n`, optionally pinned at either end, in deterministic order.
    pub fn paths(&self, start: Option<VertexId>, n: usize, finish: Option<VertexId>) -> Vec<Path> {
        let starts: Vec<VertexId> = match start {
            Some(v) => vec![v],
            None => (0..self.vertices.len()).collect(),
        };
        let mut result = Vec::new();
        let mut stack = Vec::with_capacity(n);
        for s in starts {
            self.extend_paths(s, s, n, finish, &mut stack, &mut result);
        }
        result
    }

    fn extend_paths(
        &self,
        start: VertexId,
        at: VertexId,
        remaining: usize,
        finish: Option<VertexId>,
        stack: &mut Vec<EdgeId>,
        out: &mut Vec<Path>,
    ) {
        if remaining == 0 {
            if finish.is_none_or(|f| f == at) {
                out.push(Path { start, edges: stack.clone() });
            }
            return;
        }
        for &e in &self.out[at] {
            stack.push(e);
            self.extend_paths(start, self.edges[e].finish, remaining - 1, finish, stack, out);
            stack.pop();
        }
    }

    /// Every loop of length `n` based at `v`.
    pub fn loops(&self, v: VertexId, n: usize) -> Vec<Path> {
        self.paths(Some(v), n, Some(v))
    }

    /// Parses `a,b,c` (vertex names) with optional `:k` selecting parallel edge k, counted from 0.
    pub fn parse_path(&self, text: &str) -> Result<Path> {
        let mut parts = text.split(',').map(str::trim);
        let first = parts.next().ok_or_else(|| Error::Parse("empty path".into()))?;
        let start = self.vertex_id(first)?;
        let mut path = Path::trivial(start);
        let mut at = start;
        for part in parts {
            let (name, rank) = match part.split_once(':') {
                Some((n, k)) => (n, k.parse::<usize>().map_err(|e| Error::Parse(e.to_string()))?),
                None => (part, 0),
            };
            let to = self.vertex_id(name)?;
            let e = self.out[at]
                .iter()
                .copied()
                .filter(|&e| self.edges[e].finish == to)
                .nth(rank)
                .ok_or_else(|| Error::Parse(format!("no edge {}→{} with index {rank}", self.name(at), name)))?;
            path.edges.push(e);
            at = to;
        }
        Ok(path)
    }

    /// Induced subgraph with μ restricted and renormalized; also returns the
    /// renormalization constant γ = Σ of the kept μ².
    pub fn induced(&self, keep: &[bool]) -> (Graph, f64) {
        let mut map = vec![usize::MAX; self.vertices.len()];
        let mut vertices = Vec::new();
        let mut mu2 = Vec::new();
        for (v, &k) in keep.iter().enumerate() {
            if k {
                map[v] = vertices.len();
                vertices.push(self.vertices[v].clone());
                mu2.push(self.mu2[v]);
            }
        }
        let gamma: f64 = mu2.iter().sum();
        let mu2 = mu2.iter().map(|w| w / gamma).collect();
        let mut edges = Vec::new();
        for pair in self.edges.chunks(2) {
            let e = pair[0];
            if keep[e.start] && keep[e.finish] {
                let id = edges.len();
                edges.push(Edge { start: map[e.start], finish: map[e.finish], reversal: id + 1 });
                edges.push(Edge { start: map[e.finish], finish: map[e.start], reversal: id });
            }
        }
        let star = self.star.filter(|&s| keep[s]).map(|s| map[s]);
        (Graph::assemble(vertices, edges, mu2, star), gamma)
    }

    /// Γ_w: induced on the vertices of the opposite parity to `w` together with `w`.
    pub fn subgraph_star(&self, w: VertexId) -> Result<(Graph, f64)> {
        if w >= self.vertices.len() {
            return Err(Error::UnknownVertex(w.to_string()));
        }
        let pw = self.vertices[w].parity;
        let keep: Vec<bool> = (0..self.vertices.len()).map(|v| v == w || self.vertices[v].parity != pw).collect();
        Ok(self.induced(&keep))
    }

    pub fn connected_component(&self, v: VertexId) -> Result<(Graph, f64)> {
        if v >= self.vertices.len() {
            return Err(Error::UnknownVertex(v.to_string()));
        }
        let comp = self.component_of(v);
        let keep: Vec<bool> = (0..self.vertices.len()).map(|x| comp.contains(&x)).collect();
        Ok(self.induced(&keep))
    }

    /// Vertex sets of the connected components, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = vec![false; self.vertices.len()];
        let mut comps = Vec::new();
        for v in 0..self.vertices.len() {
            if !seen[v] {
                let c: Vec<VertexId> = self.component_of(v).into_iter().collect();
                c.iter().for_each(|&x| seen[x] = true);
                comps.push(c);
            }
        }
        comps
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Small named graphs used by tests, suites and the CLI.
pub mod families {
    use super::*;

    fn spec(vertices: &[(&str, Parity)], edges: &[(&str, &str, usize)]) -> GraphSpec {
        GraphSpec {
            vertices: vertices
                .iter()
                .map(|&(id, parity)| VertexSpec { id: id.into(), parity, weight2: None })
                .collect(),
            edges: edges.iter().map(|&(u, v, mult)| EdgeSpec { u: u.into(), v: v.into(), mult }).collect(),
        }
    }

    /// Path graph on `n` vertices `x1..xn`, odd indices even parity; PF weighted, star `x1`.
    pub fn a_n(n: usize) -> Graph {
        let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        let verts: Vec<(&str, Parity)> = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), if i % 2 == 0 { Parity::Even } else { Parity::Odd }))
            .collect();
        let edges: Vec<(&str, &str, usize)> = (1..n).map(|i| (names[i - 1].as_str(), names[i].as_str(), 1)).collect();
        Graph::build(&spec(&verts, &edges)).expect("path graph").with_star(0)
    }

    /// A₂ with vertices `v` (even) and `w` (odd).
    pub fn a2() -> Graph {
        Graph::build(&spec(&[("v", Parity::Even), ("w", Parity::Odd)], &[("v", "w", 1)])).expect("A2").with_star(0)
    }

    /// A₃ as `v1 – w – v2`, star `v1`.
    pub fn a3() -> Graph {
        Graph::build(&spec(
            &[("v1", Parity::Even), ("w", Parity::Odd), ("v2", Parity::Even)],
            &[("v1", "w", 1), ("w", "v2", 1)],
        ))
        .expect("A3")
        .with_star(0)
    }

    /// A₄ as `v1 – w1 – v2 – w2`, star `v1`.
    pub fn a4() -> Graph {
        Graph::build(&spec(
            &[("v1", Parity::Even), ("w1", Parity::Odd), ("v2", Parity::Even), ("w2", Parity::Odd)],
            &[("v1", "w1", 1), ("w1", "v2", 1), ("v2", "w2", 1)],
        ))
        .expect("A4")
        .with_star(0)
    }

    /// K(1,n): one odd centre `w` joined to even leaves `v1..vn`.
    pub fn k1n(n: usize) -> Graph {
        let names: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
        let mut verts = vec![("w", Parity::Odd)];
        verts.extend(names.iter().map(|s| (s.as_str(), Parity::Even)));
        let edges: Vec<(&str, &str, usize)> = names.iter().map(|s| ("w", s.as_str(), 1)).collect();
        Graph::build(&spec(&verts, &edges)).expect("K(1,n)").with_star(1)
    }

    /// Two vertices joined by `q` parallel edges, μ²(v) = α, μ²(w) = β.
    pub fn omega(q: usize, alpha: f64, beta: f64) -> Graph {
        Graph::topology(&spec(&[("v", Parity::Even), ("w", Parity::Odd)], &[("v", "w", q)]))
            .and_then(|g| g.with_weights(&[alpha, beta]))
            .expect("two-vertex graph")
            .with_star(0)
    }

    /// `v1 =w= v2` with a double edge between `v1` and `w`, PF weighted.
    pub fn double_edge() -> Graph {
        Graph::build(&spec(
            &[("v1", Parity::Even), ("w", Parity::Odd), ("v2", Parity::Even)],
            &[("v1", "w", 2), ("w", "v2", 1)],
        ))
        .expect("double-edge graph")
        .with_star(0)
    }

    /// Two odd vertices sharing the even vertex `v1`: `v2 – w1 – v1 – w2 – v3`, PF weighted.
    pub fn two_odd() -> Graph {
        Graph::build(&spec(
            &[
                ("v1", Parity::Even),
                ("v2", Parity::Even),
                ("v3", Parity::Even),
                ("w1", Parity::Odd),
                ("w2", Parity::Odd),
            ],
            &[("v2", "w1", 1), ("w1", "v1", 1), ("v1", "w2", 1), ("w2", "v3", 1)],
        ))
        .expect("two-odd graph")
        .with_star(0)
    }

    /// The graph set used by the isomorphism, trace and Gram suites.
    pub fn standard_set() -> Vec<(&'static str, Graph)> {
        vec![
            ("A2", a2()),
            ("A3", a3()),
            ("A4", a4()),
            ("K(1,2)", k1n(2)),
            ("K(1,3)", k1n(3)),
            ("double-edge", double_edge()),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::families::*;
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn a2_has_one_reversal_pair() {
        let g = a2();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.edge(0).reversal, 1);
        assert_eq!(g.edge(1).reversal, 0);
        assert_eq!(g.parity(g.edge(0).start), Parity::Even);
    }

    #[test]
    fn k14_shape() {
        let g = k1n(4);
        assert_eq!(g.vertices_of(Parity::Odd).len(), 1);
        assert_eq!(g.vertices_of(Parity::Even).len(), 4);
        assert_eq!(g.edge_count(), 8);
    }

    #[test]
    fn same_parity_edge_rejected() {
        let s = GraphSpec {
            vertices: vec![
                VertexSpec { id: "a".into(), parity: Parity::Even, weight2: None },
                VertexSpec { id: "b".into(), parity: Parity::Even, weight2: None },
            ],
            edges: vec![EdgeSpec { u: "a".into(), v: "b".into(), mult: 1 }],
        };
        assert!(matches!(Graph::topology(&s), Err(Error::NotBipartite { .. })));
    }

    #[test]
    fn pf_values() {
        let g = a2();
        assert!(close(g.mu2(0), 0.5) && close(g.mu2(1), 0.5));
        let (_, d) = a2().pf_weighting().unwrap();
        assert!(close(d, 1.0));
        let (g3, d3) = a3().pf_weighting().unwrap();
        let s2 = 2f64.sqrt();
        assert!(close(d3, s2));
        assert!(close(g3.mu2(0), 1.0 / (2.0 + s2)));
        assert!(close(g3.mu2(1), s2 / (2.0 + s2)));
        for n in 2..=5 {
            let (g, d) = k1n(n).pf_weighting().unwrap();
            assert!(close(d, (n as f64).sqrt()));
            let c = 1.0 / (1.0 + (n as f64).sqrt());
            assert!(close(g.mu2(0), c));
            for v in 1..=n {
                assert!(close(g.mu2(v) * (n as f64).sqrt(), c));
            }
        }
    }

    #[test]
    fn delta_v_examples() {
        let g = a3();
        assert!(close(g.delta_v(1), 2f64.sqrt()));
        let g = omega(1, 2.0 / 3.0, 1.0 / 3.0);
        assert!(close(g.delta_v(0), 0.5));
        let s = GraphSpec {
            vertices: vec![
                VertexSpec { id: "a".into(), parity: Parity::Even, weight2: Some(1.0) },
                VertexSpec { id: "b".into(), parity: Parity::Odd, weight2: Some(1.0) },
            ],
            edges: vec![],
        };
        let iso = Graph::build(&s).unwrap();
        assert_eq!(iso.delta_v(0), 0.0);
    }

    #[test]
    fn disconnected_pf_is_an_error() {
        let s = GraphSpec {
            vertices: vec![
                VertexSpec { id: "a".into(), parity: Parity::Even, weight2: None },
                VertexSpec { id: "b".into(), parity: Parity::Odd, weight2: None },
            ],
            edges: vec![],
        };
        assert_eq!(Graph::build(&s), Err(Error::Disconnected));
    }

    #[test]
    fn path_enumeration_examples() {
        let g = a2();
        assert_eq!(g.paths(Some(0), 2, Some(0)).len(), 1);
        let g = a3();
        assert_eq!(g.loops(0, 4).len(), 2);
        assert!(g.paths(Some(0), 3, Some(2)).is_empty());
    }

    #[test]
    fn star_subgraph_and_component() {
        let g = k1n(2);
        let (h, gamma) = g.subgraph_star(0).unwrap();
        assert!(close(gamma, 1.0));
        assert_eq!(h.edge_count(), g.edge_count());

        let base = Graph::topology(&GraphSpec {
            vertices: vec![
                VertexSpec { id: "v1".into(), parity: Parity::Even, weight2: None },
                VertexSpec { id: "w".into(), parity: Parity::Odd, weight2: None },
                VertexSpec { id: "v2".into(), parity: Parity::Even, weight2: None },
                VertexSpec { id: "u".into(), parity: Parity::Even, weight2: None },
            ],
            edges: vec![
                EdgeSpec { u: "v1".into(), v: "w".into(), mult: 1 },
                EdgeSpec { u: "w".into(), v: "v2".into(), mult: 1 },
            ],
        })
        .unwrap();
        let g = base.with_weights(&[0.3, 0.4, 0.2, 0.1]).unwrap();
        let (c, gamma) = g.connected_component(1).unwrap();
        assert!(close(gamma, 0.9));
        assert_eq!(c.vertex_count(), 3);
        let (c, _) = g.connected_component(3).unwrap();
        assert_eq!(c.edge_count(), 0);
    }

    #[test]
    fn spec_rejects_unknown_fields() {
        let bad = r#"{"vertices":[{"id":"v","parity":"even","colour":1}],"edges":[]}"#;
        assert!(GraphSpec::parse(bad).is_err());
        let good = "vertices = [{id = \"v\", parity = \"even\"}, {id = \"w\", parity = \"odd\"}]\nedges = [{u = \"v\", v = \"w\", mult = 1}]\n";
        let g = Graph::build(&GraphSpec::parse(good).unwrap()).unwrap();
        assert!(close(g.mu2(0), 0.5));
    }

    #[test]
    fn parse_path_selects_parallel_edges() {
        let g = double_edge();
        let p = g.parse_path("v1,w:1,v1").unwrap();
        assert_eq!(p.edges, vec![2, 1]);
        assert_eq!(p.display(&g), "v1,w:1,v1");
    }
}
