//! φ⁴ Feynman multigraphs.
//!
//! A [`Graph`] is a purely combinatorial object: vertices, internal edges
//! (self-loops and parallel edges allowed) and unlabeled external legs. Legs
//! carry no momenta. Vertices are 4-valent, or 2-valent when they mark the
//! insertion point of a contracted self-energy subgraph.
//!
//! Subgraphs are edge subsets. A subgraph is *admissible* when every
//! connected component is 1PI and sees exactly 2 or 4 external edges, counting
//! both the parent's legs and the stubs of unselected internal edges.

use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::sync::{Arc, RwLock};
use thiserror::Error;

/// Largest vertex count accepted by [`canonical_form`] unless overridden.
pub const DEFAULT_CANONICAL_BOUND: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("edges[{index}]: vertex {vertex} out of range (graph has {vertices} vertices)")]
    EdgeOutOfRange {
        index: usize,
        vertex: usize,
        vertices: usize,
    },
    #[error("external[{index}]: vertex {vertex} out of range (graph has {vertices} vertices)")]
    LegOutOfRange {
        index: usize,
        vertex: usize,
        vertices: usize,
    },
    #[error("graph is disconnected: vertex {vertex} is not reachable from vertex 0")]
    Disconnected { vertex: usize },
    #[error("vertex {vertex} has degree {degree}; expected 4 (or 2 for an insertion vertex)")]
    BadDegree { vertex: usize, degree: usize },
    #[error("graph has {legs} external legs; generators need 2 or 4")]
    BadLegCount { legs: usize },
    #[error("graph is not one-particle irreducible: edges[{edge}] is a bridge")]
    NotOnePi { edge: usize },
    #[error("canonical form bound exceeded: {vertices} vertices > {bound}")]
    CanonicalBound { vertices: usize, bound: usize },
    #[error("inadmissible subgraph: {0}")]
    Inadmissible(String),
    #[error("{location}: {source}")]
    At {
        location: String,
        #[source]
        source: Box<GraphError>,
    },
    #[error("{0}")]
    Io(String),
    #[error("malformed graph file: {0}")]
    Parse(String),
}

impl GraphError {
    fn at(self, location: impl Into<String>) -> Self {
        GraphError::At {
            location: location.into(),
            source: Box::new(self),
        }
    }
}

/// A connected φ⁴ multigraph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    legs: Vec<usize>,
}

impl Graph {
    /// Builds a graph, checking range, connectivity and vertex degrees.
    pub fn new(
        vertex_count: usize,
        edges: Vec<(usize, usize)>,
        legs: Vec<usize>,
    ) -> Result<Self, GraphError> {
        if vertex_count == 0 {
            return Err(GraphError::Empty);
        }
        for (index, &(u, v)) in edges.iter().enumerate() {
            for vertex in [u, v] {
                if vertex >= vertex_count {
                    return Err(GraphError::EdgeOutOfRange {
                        index,
                        vertex,
                        vertices: vertex_count,
                    });
                }
            }
        }
        for (index, &vertex) in legs.iter().enumerate() {
            if vertex >= vertex_count {
                return Err(GraphError::LegOutOfRange {
                    index,
                    vertex,
                    vertices: vertex_count,
                });
            }
        }
        let edges = edges
            .into_iter()
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        let g = Graph {
            vertex_count,
            edges,
            legs,
        };
        if let Some(vertex) = g.unreachable_vertex(None) {
            return Err(GraphError::Disconnected { vertex });
        }
        for (vertex, degree) in g.degrees().into_iter().enumerate() {
            if degree != 4 && degree != 2 {
                return Err(GraphError::BadDegree { vertex, degree });
            }
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Internal edges as normalized `(min, max)` pairs, in input order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn legs(&self) -> &[usize] {
        &self.legs
    }

    pub fn internal_edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn external_leg_count(&self) -> usize {
        self.legs.len()
    }

    /// Legs attached to each vertex.
    pub fn legs_per_vertex(&self) -> Vec<usize> {
        let mut out = vec![0; self.vertex_count];
        for &v in &self.legs {
            out[v] += 1;
        }
        out
    }

    /// Internal half-edges plus legs at each vertex.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = self.legs_per_vertex();
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// `l = I − V + 1`.
    pub fn loop_number(&self) -> usize {
        self.edges.len() + 1 - self.vertex_count
    }

    /// Superficial degree of divergence `ω = 4l − 2I`.
    pub fn superficial_degree(&self) -> i64 {
        4 * self.loop_number() as i64 - 2 * self.edges.len() as i64
    }

    /// Connected after deleting any single internal edge.
    pub fn is_one_particle_irreducible(&self) -> bool {
        self.first_bridge().is_none()
    }

    /// Index of the first edge whose removal disconnects the graph.
    pub fn first_bridge(&self) -> Option<usize> {
        (0..self.edges.len()).find(|&e| self.unreachable_vertex(Some(e)).is_some())
    }

    /// Checks the extra invariants of a Hopf algebra generator.
    pub fn validate_generator(&self) -> Result<(), GraphError> {
        let legs = self.legs.len();
        if legs != 2 && legs != 4 {
            return Err(GraphError::BadLegCount { legs });
        }
        if let Some(edge) = self.first_bridge() {
            return Err(GraphError::NotOnePi { edge });
        }
        Ok(())
    }

    fn unreachable_vertex(&self, skip: Option<usize>) -> Option<usize> {
        let mut uf = UnionFind::new(self.vertex_count);
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if Some(i) != skip {
                uf.union(u, v);
            }
        }
        (1..self.vertex_count).find(|&v| uf.find(v) != uf.find(0))
    }

    /// Splits a subgraph into connected components.
    pub fn components(&self, sub: &Subgraph) -> Vec<Component> {
        let mut uf = UnionFind::new(self.vertex_count);
        let mut touched = vec![false; self.vertex_count];
        for &e in &sub.edges {
            let (u, v) = self.edges[e];
            uf.union(u, v);
            touched[u] = true;
            touched[v] = true;
        }
        let mut roots: Vec<usize> = Vec::new();
        let mut out: Vec<Component> = Vec::new();
        for v in (0..self.vertex_count).filter(|&v| touched[v]) {
            let r = uf.find(v);
            let idx = match roots.iter().position(|&x| x == r) {
                Some(i) => i,
                None => {
                    roots.push(r);
                    out.push(Component::default());
                    roots.len() - 1
                }
            };
            out[idx].vertices.push(v);
        }
        for &e in &sub.edges {
            let r = uf.find(self.edges[e].0);
            let idx = roots.iter().position(|&x| x == r).expect("edge root");
            out[idx].edges.push(e);
        }
        out
    }

    /// A component as a standalone graph; parent legs and stubs of
    /// unselected internal edges both become external legs.
    pub fn component_graph(&self, sub: &Subgraph, comp: &Component) -> Graph {
        let local = |v: usize| comp.vertices.iter().position(|&x| x == v);
        let mut legs = Vec::new();
        for &v in &self.legs {
            if let Some(l) = local(v) {
                legs.push(l);
            }
        }
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if sub.edges.binary_search(&i).is_ok() {
                continue;
            }
            for end in [u, v] {
                if let Some(l) = local(end) {
                    legs.push(l);
                }
            }
        }
        legs.sort_unstable();
        let edges = comp
            .edges
            .iter()
            .map(|&e| {
                let (u, v) = self.edges[e];
                (local(u).unwrap(), local(v).unwrap())
            })
            .collect();
        Graph {
            vertex_count: comp.vertices.len(),
            edges,
            legs,
        }
    }

    /// Why `sub` is not admissible, if it is not.
    pub fn admissibility_violation(&self, sub: &Subgraph) -> Option<String> {
        if sub.edges.is_empty() {
            return Some("subgraph is empty".into());
        }
        if sub.edges.len() >= self.edges.len() {
            return Some("subgraph is not proper".into());
        }
        if sub.edges.windows(2).any(|w| w[0] >= w[1]) {
            return Some("edge indices must be strictly increasing".into());
        }
        if let Some(&e) = sub.edges.iter().find(|&&e| e >= self.edges.len()) {
            return Some(format!("edge index {e} out of range"));
        }
        for (n, comp) in self.components(sub).iter().enumerate() {
            let g = self.component_graph(sub, comp);
            let legs = g.external_leg_count();
            if legs != 2 && legs != 4 {
                return Some(format!("component {n} has {legs} external edges"));
            }
            if !g.is_one_particle_irreducible() {
                return Some(format!("component {n} is not 1PI"));
            }
        }
        None
    }

    /// All admissible subgraphs, one per edge subset.
    pub fn admissible_subgraphs(&self) -> Vec<Subgraph> {
        let n = self.edges.len();
        assert!(n < 32, "too many internal edges for subset enumeration");
        let mut out = Vec::new();
        for mask in 1u32..(1u32 << n) - 1 {
            let sub = Subgraph {
                edges: (0..n).filter(|i| mask & (1 << i) != 0).collect(),
            };
            if self.admissibility_violation(&sub).is_none() {
                out.push(sub);
            }
        }
        out
    }

    /// Collapses every component of `sub` to a single vertex.
    pub fn contract(&self, sub: &Subgraph) -> Result<Graph, GraphError> {
        if let Some(reason) = self.admissibility_violation(sub) {
            return Err(GraphError::Inadmissible(reason));
        }
        let comps = self.components(sub);
        let mut new_index = vec![usize::MAX; self.vertex_count];
        for (c, comp) in comps.iter().enumerate() {
            for &v in &comp.vertices {
                new_index[v] = c;
            }
        }
        let mut next = comps.len();
        for slot in new_index.iter_mut() {
            if *slot == usize::MAX {
                *slot = next;
                next += 1;
            }
        }
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| sub.edges.binary_search(i).is_err())
            .map(|(_, &(u, v))| (new_index[u], new_index[v]))
            .collect();
        let legs = self.legs.iter().map(|&v| new_index[v]).collect();
        Graph::new(next, edges, legs)
    }

    /// Applies a vertex relabeling: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        Graph {
            vertex_count: self.vertex_count,
            edges: self
                .edges
                .iter()
                .map(|&(u, v)| {
                    let (a, b) = (perm[u], perm[v]);
                    (a.min(b), a.max(b))
                })
                .collect(),
            legs: self.legs.iter().map(|&v| perm[v]).collect(),
        }
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V={} edges=[", self.vertex_count)?;
        for (i, (u, v)) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{u}-{v}")?;
        }
        write!(f, "] legs={:?}", self.legs)
    }
}

/// Proper nonempty subset of a parent's internal edges (sorted indices).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgraph {
    pub edges: Vec<usize>,
}

impl Subgraph {
    pub fn new(mut edges: Vec<usize>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        Subgraph { edges }
    }

    /// Sum of component loop numbers.
    pub fn loop_number(&self, parent: &Graph) -> usize {
        parent
            .components(self)
            .iter()
            .map(|c| c.edges.len() + 1 - c.vertices.len())
            .sum()
    }

    /// Sum of component superficial degrees.
    pub fn superficial_degree(&self, parent: &Graph) -> i64 {
        parent
            .components(self)
            .iter()
            .map(|c| {
                let loops = (c.edges.len() + 1 - c.vertices.len()) as i64;
                4 * loops - 2 * c.edges.len() as i64
            })
            .sum()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Component {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Isomorphism-invariant encoding of a graph.
///
/// Layout: `[V, I, legs per vertex (V bytes), edge endpoints (2I bytes)]`,
/// minimized over all vertex orderings compatible with an invariant
/// refinement of the vertex partition. Byte order makes keys compare first by
/// vertex count, then by edge count.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Arc<[u8]>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn vertex_count(&self) -> usize {
        self.0[0] as usize
    }

    pub fn edge_count(&self) -> usize {
        self.0[1] as usize
    }

    pub fn loop_number(&self) -> usize {
        self.edge_count() + 1 - self.vertex_count()
    }

    pub fn external_leg_count(&self) -> usize {
        let v = self.vertex_count();
        self.0[2..2 + v].iter().map(|&x| x as usize).sum()
    }

    /// The canonically labeled representative.
    pub fn to_graph(&self) -> Graph {
        let v = self.vertex_count();
        let i = self.edge_count();
        let mut legs = Vec::new();
        for (vertex, &n) in self.0[2..2 + v].iter().enumerate() {
            legs.extend(std::iter::repeat_n(vertex, n as usize));
        }
        let edges = (0..i)
            .map(|k| {
                let base = 2 + v + 2 * k;
                (self.0[base] as usize, self.0[base + 1] as usize)
            })
            .collect();
        Graph {
            vertex_count: v,
            edges,
            legs,
        }
    }

    /// Short stable hex digest (FNV-1a) used for generated names.
    pub fn digest(&self) -> String {
        let mut h: u32 = 0x811c9dc5;
        for &b in self.0.iter() {
            h ^= b as u32;
            h = h.wrapping_mul(0x01000193);
        }
        format!("{h:08x}")
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey({})", self.to_graph())
    }
}

fn encode(g: &Graph, order: &[usize]) -> Vec<u8> {
    // order[pos] = original vertex placed at position pos
    let mut pos_of = vec![0usize; g.vertex_count];
    for (pos, &v) in order.iter().enumerate() {
        pos_of[v] = pos;
    }
    let lpv = g.legs_per_vertex();
    let mut out = Vec::with_capacity(2 + g.vertex_count + 2 * g.edges.len());
    out.push(g.vertex_count as u8);
    out.push(g.edges.len() as u8);
    out.extend(order.iter().map(|&v| lpv[v] as u8));
    let mut edges: Vec<(u8, u8)> = g
        .edges
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (pos_of[u], pos_of[v]);
            (a.min(b) as u8, a.max(b) as u8)
        })
        .collect();
    edges.sort_unstable();
    for (a, b) in edges {
        out.push(a);
        out.push(b);
    }
    out
}

/// Invariant vertex coloring refined until stable; colors are ranks.
fn refined_colors(g: &Graph) -> Vec<usize> {
    let n = g.vertex_count;
    let lpv = g.legs_per_vertex();
    let deg = g.degrees();
    let mut loops = vec![0usize; n];
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, v) in &g.edges {
        if u == v {
            loops[u] += 1;
        } else {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    let initial: Vec<(usize, usize, usize)> = (0..n).map(|v| (lpv[v], loops[v], deg[v])).collect();
    let mut colors = rank(&initial);
    let mut classes = count_distinct(&colors);
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = adj[v].iter().map(|&w| colors[w]).collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let next = rank(&sigs);
        let next_classes = count_distinct(&next);
        colors = next;
        if next_classes == classes {
            return colors;
        }
        classes = next_classes;
    }
}

fn rank<T: Ord + Clone>(items: &[T]) -> Vec<usize> {
    let mut sorted: Vec<T> = items.to_vec();
    sorted.sort();
    sorted.dedup();
    items
        .iter()
        .map(|x| sorted.binary_search(x).expect("present"))
        .collect()
}

fn count_distinct(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Canonical key by exhaustive search over partition-respecting orderings.
pub fn canonical_form(g: &Graph) -> Result<CanonicalKey, GraphError> {
    canonical_form_bounded(g, DEFAULT_CANONICAL_BOUND)
}

pub fn canonical_form_bounded(g: &Graph, bound: usize) -> Result<CanonicalKey, GraphError> {
    if g.vertex_count > bound {
        return Err(GraphError::CanonicalBound {
            vertices: g.vertex_count,
            bound,
        });
    }
    let colors = refined_colors(g);
    let ncolors = count_distinct(&colors);
    let cells: Vec<Vec<usize>> = (0..ncolors)
        .map(|c| (0..g.vertex_count).filter(|&v| colors[v] == c).collect())
        .collect();
    let mut best: Option<Vec<u8>> = None;
    let mut order = Vec::with_capacity(g.vertex_count);
    search_orders(g, &cells, 0, &mut vec![false; g.vertex_count], &mut order, &mut best);
    Ok(CanonicalKey(best.expect("at least one ordering").into()))
}

fn search_orders(
    g: &Graph,
    cells: &[Vec<usize>],
    cell: usize,
    used: &mut Vec<bool>,
    order: &mut Vec<usize>,
    best: &mut Option<Vec<u8>>,
) {
    if order.len() == g.vertex_count {
        let enc = encode(g, order);
        if best.as_ref().is_none_or(|b| enc < *b) {
            *best = Some(enc);
        }
        return;
    }
    let start: usize = cells[..cell].iter().map(Vec::len).sum();
    let cell = if order.len() - start == cells[cell].len() {
        cell + 1
    } else {
        cell
    };
    for &v in &cells[cell] {
        if used[v] {
            continue;
        }
        used[v] = true;
        order.push(v);
        search_orders(g, cells, cell, used, order, best);
        order.pop();
        used[v] = false;
    }
}

/// Memoizing canonicalizer, safe to share between threads.
#[derive(Debug, Default)]
pub struct Canonicalizer {
    bound: Option<usize>,
    memo: RwLock<HashMap<Graph, CanonicalKey>>,
}

impl Canonicalizer {
    pub fn with_bound(bound: usize) -> Self {
        Canonicalizer {
            bound: Some(bound),
            memo: RwLock::default(),
        }
    }

    pub fn key(&self, g: &Graph) -> Result<CanonicalKey, GraphError> {
        if let Some(k) = self.memo.read().expect("memo lock").get(g) {
            return Ok(k.clone());
        }
        let k = canonical_form_bounded(g, self.bound.unwrap_or(DEFAULT_CANONICAL_BOUND))?;
        self.memo
            .write()
            .expect("memo lock")
            .insert(g.clone(), k.clone());
        Ok(k)
    }
}

/// One entry of a graph file.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GraphRecord {
    pub name: String,
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
    pub external: Vec<usize>,
}

impl GraphRecord {
    pub fn from_graph(name: &str, g: &Graph) -> Self {
        GraphRecord {
            name: name.to_string(),
            vertices: g.vertex_count,
            edges: g.edges.iter().map(|&(u, v)| [u, v]).collect(),
            external: g.legs.clone(),
        }
    }

    pub fn to_graph(&self) -> Result<Graph, GraphError> {
        let g = Graph::new(
            self.vertices,
            self.edges.iter().map(|e| (e[0], e[1])).collect(),
            self.external.clone(),
        )?;
        g.validate_generator()?;
        Ok(g)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GraphFile {
    Many(Vec<GraphRecord>),
    One(GraphRecord),
}

/// Parses a graph file: one record or a list of records.
pub fn parse_graph_file(text: &str) -> Result<Vec<(String, Graph)>, GraphError> {
    let records = match serde_json::from_str::<GraphFile>(text) {
        Ok(GraphFile::Many(v)) => v,
        Ok(GraphFile::One(r)) => vec![r],
        Err(e) => return Err(GraphError::Parse(e.to_string())),
    };
    let mut out = Vec::with_capacity(records.len());
    for (i, r) in records.iter().enumerate() {
        let g = r
            .to_graph()
            .map_err(|e| e.at(format!("graph {:?} (entry {i})", r.name)))?;
        out.push((r.name.clone(), g));
    }
    Ok(out)
}

pub fn load_graph_file(path: &Path) -> Result<Vec<(String, Graph)>, GraphError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| GraphError::Io(format!("{}: {e}", path.display())))?;
    parse_graph_file(&text)
}

/// The desk-scale φ⁴ corpus used by the self-test.
pub mod corpus {
    use super::Graph;

    fn g(v: usize, e: &[(usize, usize)], legs: &[usize]) -> Graph {
        Graph::new(v, e.to_vec(), legs.to_vec()).expect("corpus graph")
    }

    /// One-loop four-point bubble.
    pub fn b1() -> Graph {
        g(2, &[(0, 1), (0, 1)], &[0, 0, 1, 1])
    }

    /// One-loop two-point tadpole.
    pub fn t1() -> Graph {
        g(1, &[(0, 0)], &[0, 0])
    }

    /// Two-loop sunset.
    pub fn sunset() -> Graph {
        g(2, &[(0, 1), (0, 1), (0, 1)], &[0, 1])
    }

    /// Two bubbles in a chain.
    pub fn b2() -> Graph {
        g(3, &[(0, 1), (0, 1), (1, 2), (1, 2)], &[0, 0, 2, 2])
    }

    /// Tadpole hanging off a bubble (two-point, two loops).
    pub fn d2() -> Graph {
        g(2, &[(0, 1), (0, 1), (1, 1)], &[0, 0])
    }

    /// Bubble-like four-point graph with a tadpole on one line.
    pub fn bt() -> Graph {
        g(3, &[(0, 1), (0, 2), (1, 2), (2, 2)], &[0, 0, 1, 1])
    }

    /// Three bubbles in a chain.
    pub fn b3() -> Graph {
        g(
            4,
            &[(0, 1), (0, 1), (1, 2), (1, 2), (2, 3), (2, 3)],
            &[0, 0, 3, 3],
        )
    }

    /// Two bubbles ending in a tadpole (two-point, three loops).
    pub fn c3() -> Graph {
        g(3, &[(0, 1), (0, 1), (1, 2), (1, 2), (2, 2)], &[0, 0])
    }

    /// Bubble with a tadpole inserted on the line (the insertion-vertex graph
    /// that appears when the tadpole of `d2` is contracted).
    pub fn i2() -> Graph {
        g(2, &[(0, 1), (0, 1)], &[0, 0])
    }

    /// Triangle with one insertion vertex, from contracting the tadpole of `bt`.
    pub fn i4() -> Graph {
        g(3, &[(0, 1), (0, 2), (1, 2)], &[0, 0, 1, 1])
    }

    /// Named corpus in registration order.
    pub fn all() -> Vec<(&'static str, Graph)> {
        vec![
            ("B1", b1()),
            ("T1", t1()),
            ("I2", i2()),
            ("I4", i4()),
            ("S", sunset()),
            ("B2", b2()),
            ("D2", d2()),
            ("BT", bt()),
            ("B3", b3()),
            ("C3", c3()),
        ]
    }
}
