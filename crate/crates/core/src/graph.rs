//! Oriented dual graphs and p-adic edge cochains.
//!
//! Graphs are connected multigraphs without self-loops; parallel edges are
//! allowed. Each edge is stored once under its declared orientation and
//! handled through [`OrientedEdge`], whose reversal flips tail and head.
//! Cochains store one value per stored edge and answer queries on the
//! reversed edge with the negated value, so antisymmetry holds by
//! construction.
//!
//! The central operation is [`Cochain::decompose`]: every cochain on a
//! connected graph splits uniquely as a divergence-free (harmonic) part plus
//! a coboundary. The vertex potential is pinned to exact zero at the first
//! vertex and found by a fraction-free solve of the reduced graph Laplacian,
//! so the only divisions are by integers whose p-part is known exactly.

use crate::linalg::{solve_integer_system, LinalgError};
use crate::padic::{PadicError, PadicNumber};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::{HashMap, VecDeque};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("duplicate vertex name {0:?}")]
    DuplicateVertex(String),
    #[error("duplicate edge id {0:?}")]
    DuplicateEdge(String),
    #[error("edge {id:?} references unknown vertex {vertex:?}")]
    UnknownVertex { id: String, vertex: String },
    #[error("edge {0:?} is a self-loop")]
    SelfLoop(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("unknown edge id {0:?}")]
    UnknownEdgeId(String),
    #[error("cochain misses a value for edge {0:?}")]
    MissingEdgeValue(String),
    #[error("expected {expected} values, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("walk is not a closed cycle")]
    NotAClosedWalk,
    #[error("subdivision needs m >= 1")]
    BadSubdivision,
    #[error("distribution for edge {0:?} has the wrong length")]
    DistributionLength(String),
    #[error("distribution for edge {0:?} does not sum to the cochain value")]
    DistributionSum(String),
    #[error("cochain values must all share one prime")]
    MixedPrimes,
    #[error("cochain belongs to a different graph")]
    GraphMismatch,
    #[error(transparent)]
    Padic(#[from] PadicError),
}

impl From<LinalgError> for GraphError {
    fn from(e: LinalgError) -> Self {
        match e {
            // The reduced Laplacian of a connected graph is nonsingular, so
            // a singular solve can only mean a disconnected input.
            LinalgError::Singular => GraphError::Disconnected,
            LinalgError::Padic(p) => GraphError::Padic(p),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub tail: usize,
    pub head: usize,
}

/// An edge together with a direction of travel. `reversed: false` follows
/// the stored orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OrientedEdge {
    pub index: usize,
    pub reversed: bool,
}

impl OrientedEdge {
    pub fn forward(index: usize) -> Self {
        OrientedEdge {
            index,
            reversed: false,
        }
    }

    pub fn rev(self) -> Self {
        OrientedEdge {
            index: self.index,
            reversed: !self.reversed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_lookup: HashMap<String, usize>,
    edge_lookup: HashMap<String, usize>,
}

impl DualGraph {
    /// Build a graph from vertex names and `(id, tail, head)` triples.
    /// Self-loops are rejected; parallel edges are fine.
    pub fn new<S: AsRef<str>>(
        vertices: Vec<String>,
        edges: Vec<(String, S, S)>,
    ) -> Result<Self, GraphError> {
        if vertices.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut vertex_lookup = HashMap::new();
        for (i, name) in vertices.iter().enumerate() {
            if vertex_lookup.insert(name.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(name.clone()));
            }
        }
        let mut edge_lookup = HashMap::new();
        let mut built = Vec::with_capacity(edges.len());
        for (id, tail, head) in edges {
            let resolve = |name: &str| {
                vertex_lookup
                    .get(name)
                    .copied()
                    .ok_or_else(|| GraphError::UnknownVertex {
                        id: id.clone(),
                        vertex: name.to_string(),
                    })
            };
            let tail = resolve(tail.as_ref())?;
            let head = resolve(head.as_ref())?;
            if tail == head {
                return Err(GraphError::SelfLoop(id));
            }
            if edge_lookup.insert(id.clone(), built.len()).is_some() {
                return Err(GraphError::DuplicateEdge(id));
            }
            built.push(Edge { id, tail, head });
        }
        Ok(DualGraph {
            vertices,
            edges: built,
            vertex_lookup,
            edge_lookup,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertex_lookup.get(name).copied()
    }

    pub fn edge(&self, index: usize) -> &Edge {
        &self.edges[index]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edge_lookup.get(id).copied()
    }

    pub fn tail(&self, e: OrientedEdge) -> usize {
        let edge = &self.edges[e.index];
        if e.reversed {
            edge.head
        } else {
            edge.tail
        }
    }

    pub fn head(&self, e: OrientedEdge) -> usize {
        self.tail(e.rev())
    }

    /// All oriented edges leaving `v`.
    pub fn out_edges(&self, v: usize) -> Vec<OrientedEdge> {
        let mut out = Vec::new();
        for (i, edge) in self.edges.iter().enumerate() {
            if edge.tail == v {
                out.push(OrientedEdge::forward(i));
            }
            if edge.head == v {
                out.push(OrientedEdge::forward(i).rev());
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for e in self.out_edges(v) {
                let w = self.head(e);
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.vertices.len()
    }

    /// The graph Laplacian D - A as exact integers (parallel edges count
    /// with multiplicity).
    pub fn laplacian(&self) -> Vec<Vec<BigInt>> {
        let n = self.vertices.len();
        let mut l = vec![vec![BigInt::zero(); n]; n];
        for edge in &self.edges {
            l[edge.tail][edge.tail] += 1;
            l[edge.head][edge.head] += 1;
            l[edge.tail][edge.head] -= 1;
            l[edge.head][edge.tail] -= 1;
        }
        l
    }

    /// A breadth-first spanning tree rooted at vertex 0: for every non-root
    /// vertex the oriented edge that first reached it.
    fn spanning_tree(&self) -> Result<Vec<Option<OrientedEdge>>, GraphError> {
        let mut parent: Vec<Option<OrientedEdge>> = vec![None; self.vertices.len()];
        let mut seen = vec![false; self.vertices.len()];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for e in self.out_edges(v) {
                let w = self.head(e);
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(e);
                    queue.push_back(w);
                }
            }
        }
        if seen.iter().all(|&s| s) {
            Ok(parent)
        } else {
            Err(GraphError::Disconnected)
        }
    }

    /// Fundamental cycles of a spanning tree: one closed walk per non-tree
    /// edge, starting with that edge.
    pub fn cycle_basis(&self) -> Result<Vec<Vec<OrientedEdge>>, GraphError> {
        let parent = self.spanning_tree()?;
        let tree: Vec<usize> = parent
            .iter()
            .filter_map(|e| e.map(|e| e.index))
            .collect();
        let depth_of = |mut v: usize| {
            let mut d = 0;
            while let Some(e) = parent[v] {
                v = self.tail(e);
                d += 1;
            }
            d
        };
        let mut cycles = Vec::new();
        for i in 0..self.edges.len() {
            if tree.contains(&i) {
                continue;
            }
            let chord = OrientedEdge::forward(i);
            // Walk both endpoints up to their common ancestor.
            let (mut up, mut down) = (Vec::new(), Vec::new());
            let (mut a, mut b) = (self.head(chord), self.tail(chord));
            let (mut da, mut db) = (depth_of(a), depth_of(b));
            while da > db {
                let e = parent[a].unwrap();
                up.push(e.rev());
                a = self.tail(e);
                da -= 1;
            }
            while db > da {
                let e = parent[b].unwrap();
                down.push(e);
                b = self.tail(e);
                db -= 1;
            }
            while a != b {
                let ea = parent[a].unwrap();
                up.push(ea.rev());
                a = self.tail(ea);
                let eb = parent[b].unwrap();
                down.push(eb);
                b = self.tail(eb);
            }
            let mut walk = vec![chord];
            walk.extend(up);
            down.reverse();
            walk.extend(down);
            cycles.push(walk);
        }
        Ok(cycles)
    }

    /// Replace every edge by a path of `m` edges. Fresh names are derived
    /// from the edge id (`e:k` for sub-edges, `e:vk` for interior vertices);
    /// a clash with existing names surfaces as a construction error. Returns
    /// the new graph and, per original edge, its sub-edge indices in path
    /// order. `m = 1` rebuilds the graph unchanged.
    pub fn subdivide(&self, m: u32) -> Result<(DualGraph, Vec<Vec<usize>>), GraphError> {
        if m == 0 {
            return Err(GraphError::BadSubdivision);
        }
        let mut vertices = self.vertices.clone();
        let mut edges: Vec<(String, String, String)> = Vec::new();
        let mut map = Vec::with_capacity(self.edges.len());
        for edge in &self.edges {
            let mut path = Vec::with_capacity(m as usize);
            let mut prev = self.vertices[edge.tail].clone();
            for k in 1..=m {
                let next = if k == m {
                    self.vertices[edge.head].clone()
                } else {
                    let name = format!("{}:v{}", edge.id, k);
                    vertices.push(name.clone());
                    name
                };
                let id = if m == 1 {
                    edge.id.clone()
                } else {
                    format!("{}:{}", edge.id, k)
                };
                path.push(edges.len());
                edges.push((id, prev, next.clone()));
                prev = next;
            }
            map.push(path);
        }
        let graph = DualGraph::new(vertices, edges)?;
        Ok((graph, map))
    }
}

/// A p-adic function on oriented edges with c(-e) = -c(e).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain {
    graph: Arc<DualGraph>,
    values: Vec<PadicNumber>,
    p: u64,
}

impl Cochain {
    /// Values listed in stored-edge order.
    pub fn new(graph: Arc<DualGraph>, values: Vec<PadicNumber>) -> Result<Self, GraphError> {
        if values.len() != graph.edge_count() {
            return Err(GraphError::WrongLength {
                expected: graph.edge_count(),
                got: values.len(),
            });
        }
        let p = values.first().map(|v| v.prime()).ok_or(GraphError::Empty)?;
        if values.iter().any(|v| v.prime() != p) {
            return Err(GraphError::MixedPrimes);
        }
        Ok(Cochain { graph, values, p })
    }

    pub fn from_map(
        graph: Arc<DualGraph>,
        mut values: HashMap<String, PadicNumber>,
    ) -> Result<Self, GraphError> {
        let mut ordered = Vec::with_capacity(graph.edge_count());
        for edge in graph.edges() {
            let v = values
                .remove(&edge.id)
                .ok_or_else(|| GraphError::MissingEdgeValue(edge.id.clone()))?;
            ordered.push(v);
        }
        if let Some(extra) = values.into_keys().next() {
            return Err(GraphError::UnknownEdgeId(extra));
        }
        Cochain::new(graph, ordered)
    }

    pub fn from_integers(
        graph: Arc<DualGraph>,
        ctx: &crate::padic::PadicContext,
        values: &[i64],
    ) -> Result<Self, GraphError> {
        Cochain::new(graph, values.iter().map(|&v| ctx.int(v)).collect())
    }

    pub fn graph(&self) -> &Arc<DualGraph> {
        &self.graph
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn stored_values(&self) -> &[PadicNumber] {
        &self.values
    }

    pub fn value(&self, e: OrientedEdge) -> PadicNumber {
        if e.reversed {
            self.values[e.index].neg()
        } else {
            self.values[e.index].clone()
        }
    }

    /// div(c)(v) = Σ c(e) over oriented edges leaving v.
    pub fn divergence(&self) -> VertexFunction {
        let values = (0..self.graph.vertex_count())
            .map(|v| {
                let mut acc = PadicNumber::exact_zero(self.p);
                for e in self.graph.out_edges(v) {
                    acc = acc.add(&self.value(e));
                }
                acc
            })
            .collect();
        VertexFunction {
            graph: Arc::clone(&self.graph),
            values,
            p: self.p,
        }
    }

    /// Harmonic means divergence-free at every vertex, to the full tracked
    /// precision of the sums.
    pub fn is_harmonic(&self) -> bool {
        self.divergence().values.iter().all(|v| v.is_zero())
    }

    /// Sum the cochain along a closed walk of oriented edges.
    pub fn cycle_sum(&self, walk: &[OrientedEdge]) -> Result<PadicNumber, GraphError> {
        if walk.is_empty() {
            return Err(GraphError::NotAClosedWalk);
        }
        for pair in walk.windows(2) {
            if self.graph.head(pair[0]) != self.graph.tail(pair[1]) {
                return Err(GraphError::NotAClosedWalk);
            }
        }
        if self.graph.head(*walk.last().unwrap()) != self.graph.tail(walk[0]) {
            return Err(GraphError::NotAClosedWalk);
        }
        let mut acc = PadicNumber::exact_zero(self.p);
        for &e in walk {
            acc = acc.add(&self.value(e));
        }
        Ok(acc)
    }

    /// Split into the unique harmonic part and coboundary: `c = h + dγ` with
    /// γ pinned to exact zero at the first vertex. Solves the reduced
    /// Laplacian system L γ = -div(c) fraction-free over the integers.
    pub fn decompose(&self) -> Result<(Cochain, VertexFunction), GraphError> {
        if !self.graph.is_connected() {
            return Err(GraphError::Disconnected);
        }
        let n = self.graph.vertex_count();
        let div = self.divergence();
        let gamma = if n == 1 {
            vec![PadicNumber::exact_zero(self.p)]
        } else {
            let l = self.graph.laplacian();
            let reduced: Vec<Vec<BigInt>> = (1..n)
                .map(|i| (1..n).map(|j| l[i][j].clone()).collect())
                .collect();
            let rhs: Vec<PadicNumber> = (1..n).map(|i| div.values[i].neg()).collect();
            let mut gamma = Vec::with_capacity(n);
            gamma.push(PadicNumber::exact_zero(self.p));
            gamma.extend(solve_integer_system(reduced, rhs)?);
            gamma
        };
        let gamma = VertexFunction {
            graph: Arc::clone(&self.graph),
            values: gamma,
            p: self.p,
        };
        let coboundary = gamma.coboundary();
        let harmonic = Cochain {
            graph: Arc::clone(&self.graph),
            values: self
                .values
                .iter()
                .zip(&coboundary.values)
                .map(|(c, d)| c.sub(d))
                .collect(),
            p: self.p,
        };
        Ok((harmonic, gamma))
    }

    /// Spread each edge value over the sub-edges of a subdivision. Every
    /// distribution list must have length `m` and sum back to the original
    /// value at the tracked precision.
    pub fn lift(
        &self,
        subdivided: &Arc<DualGraph>,
        edge_map: &[Vec<usize>],
        distributions: &[Vec<PadicNumber>],
    ) -> Result<Cochain, GraphError> {
        if edge_map.len() != self.values.len() || distributions.len() != self.values.len() {
            return Err(GraphError::WrongLength {
                expected: self.values.len(),
                got: distributions.len(),
            });
        }
        let mut values = vec![PadicNumber::exact_zero(self.p); subdivided.edge_count()];
        for ((dist, path), (value, edge)) in distributions
            .iter()
            .zip(edge_map)
            .zip(self.values.iter().zip(self.graph.edges()))
        {
            if dist.len() != path.len() {
                return Err(GraphError::DistributionLength(edge.id.clone()));
            }
            let mut sum = PadicNumber::exact_zero(self.p);
            for part in dist {
                sum = sum.add(part);
            }
            if !sum.agrees(value) {
                return Err(GraphError::DistributionSum(edge.id.clone()));
            }
            for (&sub, part) in path.iter().zip(dist) {
                values[sub] = part.clone();
            }
        }
        Cochain::new(Arc::clone(subdivided), values)
    }
}

/// A p-adic function on vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexFunction {
    graph: Arc<DualGraph>,
    values: Vec<PadicNumber>,
    p: u64,
}

impl VertexFunction {
    pub fn new(graph: Arc<DualGraph>, values: Vec<PadicNumber>) -> Result<Self, GraphError> {
        if values.len() != graph.vertex_count() {
            return Err(GraphError::WrongLength {
                expected: graph.vertex_count(),
                got: values.len(),
            });
        }
        let p = values.first().map(|v| v.prime()).ok_or(GraphError::Empty)?;
        if values.iter().any(|v| v.prime() != p) {
            return Err(GraphError::MixedPrimes);
        }
        Ok(VertexFunction { graph, values, p })
    }

    pub fn graph(&self) -> &Arc<DualGraph> {
        &self.graph
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn value(&self, v: usize) -> &PadicNumber {
        &self.values[v]
    }

    pub fn values(&self) -> &[PadicNumber] {
        &self.values
    }

    /// dγ(e) = γ(head e) - γ(tail e).
    pub fn coboundary(&self) -> Cochain {
        let values = self
            .graph
            .edges()
            .iter()
            .map(|e| self.values[e.head].sub(&self.values[e.tail]))
            .collect();
        Cochain {
            graph: Arc::clone(&self.graph),
            values,
            p: self.p,
        }
    }
}
