//! Multigraphs with explicit edge identities.
//!
//! Loops and parallel edges are permitted everywhere; all containers are
//! ordered so that iteration (and therefore every construction built on top)
//! is deterministic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Identifier of a vertex.
#[derive(
    Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize, Default,
)]
pub struct VertexId(pub u32);

/// Identifier of an edge. Parallel edges carry distinct ids.
#[derive(
    Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize, Default,
)]
pub struct EdgeId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} already exists")]
    DuplicateVertex(VertexId),
    #[error("edge {0} already exists")]
    DuplicateEdge(EdgeId),
    #[error("vertex {0} does not exist")]
    MissingVertex(VertexId),
    #[error("edge {0} does not exist")]
    MissingEdge(EdgeId),
}

/// An undirected multigraph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    vertices: BTreeSet<VertexId>,
    edges: BTreeMap<EdgeId, (VertexId, VertexId)>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from an edge list, creating endpoint vertices on the fly.
    pub fn from_edges(edges: impl IntoIterator<Item = (u32, u32, u32)>) -> Self {
        let mut g = Graph::new();
        for (id, u, v) in edges {
            g.ensure_vertex(VertexId(u));
            g.ensure_vertex(VertexId(v));
            g.add_edge(EdgeId(id), VertexId(u), VertexId(v)).unwrap();
        }
        g
    }

    pub fn add_vertex(&mut self, v: VertexId) -> Result<(), GraphError> {
        if !self.vertices.insert(v) {
            return Err(GraphError::DuplicateVertex(v));
        }
        Ok(())
    }

    pub fn ensure_vertex(&mut self, v: VertexId) {
        self.vertices.insert(v);
    }

    pub fn add_edge(&mut self, e: EdgeId, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        if self.edges.contains_key(&e) {
            return Err(GraphError::DuplicateEdge(e));
        }
        if !self.vertices.contains(&u) {
            return Err(GraphError::MissingVertex(u));
        }
        if !self.vertices.contains(&v) {
            return Err(GraphError::MissingVertex(v));
        }
        self.edges.insert(e, (u, v));
        Ok(())
    }

    /// Adds an edge with the smallest unused id and returns it.
    pub fn add_fresh_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId, GraphError> {
        let id = self.fresh_edge_id();
        self.add_edge(id, u, v)?;
        Ok(id)
    }

    pub fn fresh_edge_id(&self) -> EdgeId {
        EdgeId(self.edges.keys().next_back().map_or(0, |e| e.0 + 1))
    }

    pub fn fresh_vertex_id(&self) -> VertexId {
        VertexId(self.vertices.iter().next_back().map_or(0, |v| v.0 + 1))
    }

    pub fn remove_edge(&mut self, e: EdgeId) -> Result<(), GraphError> {
        self.edges.remove(&e).ok_or(GraphError::MissingEdge(e))?;
        Ok(())
    }

    /// Removes a vertex together with all incident edges.
    pub fn remove_vertex(&mut self, v: VertexId) -> Result<(), GraphError> {
        if !self.vertices.remove(&v) {
            return Err(GraphError::MissingVertex(v));
        }
        self.edges.retain(|_, &mut (a, b)| a != v && b != v);
        Ok(())
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn has_edge(&self, e: EdgeId) -> bool {
        self.edges.contains_key(&e)
    }

    pub fn endpoints(&self, e: EdgeId) -> Option<(VertexId, VertexId)> {
        self.edges.get(&e).copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId)> + '_ {
        self.edges.iter().map(|(&e, &(u, v))| (e, u, v))
    }

    pub fn is_loop(&self, e: EdgeId) -> bool {
        self.endpoints(e).is_some_and(|(u, v)| u == v)
    }

    /// Edges incident to `v`, loops included once.
    pub fn incident_edges(&self, v: VertexId) -> Vec<EdgeId> {
        self.edges
            .iter()
            .filter(|(_, &(a, b))| a == v || b == v)
            .map(|(&e, _)| e)
            .collect()
    }

    /// Neighbours of `v` (with multiplicity, sorted).
    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        let mut out = Vec::new();
        for &(a, b) in self.edges.values() {
            if a == v {
                out.push(b);
            } else if b == v {
                out.push(a);
            }
        }
        out.sort_unstable();
        out
    }

    /// Degree counting loops twice.
    pub fn degree(&self, v: VertexId) -> usize {
        self.edges
            .values()
            .map(|&(a, b)| usize::from(a == v) + usize::from(b == v))
            .sum()
    }

    /// All edges between `u` and `v`, sorted by id.
    pub fn edges_between(&self, u: VertexId, v: VertexId) -> Vec<EdgeId> {
        self.edges
            .iter()
            .filter(|(_, &(a, b))| (a, b) == (u, v) || (a, b) == (v, u))
            .map(|(&e, _)| e)
            .collect()
    }

    /// Smallest-id edge between two vertices, if any.
    pub fn any_edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.edges_between(u, v).into_iter().next()
    }

    /// Subgraph induced on a vertex set: keeps edges with both ends inside.
    pub fn induced(&self, keep: &BTreeSet<VertexId>) -> Graph {
        let mut g = Graph::new();
        for &v in keep {
            if self.vertices.contains(&v) {
                g.ensure_vertex(v);
            }
        }
        for (&e, &(u, v)) in &self.edges {
            if keep.contains(&u) && keep.contains(&v) {
                g.add_edge(e, u, v).unwrap();
            }
        }
        g
    }

    /// Connected components as sorted vertex sets, sorted by minimum vertex.
    pub fn components(&self) -> Vec<BTreeSet<VertexId>> {
        let mut seen: BTreeSet<VertexId> = BTreeSet::new();
        let mut comps = Vec::new();
        for v in self.vertices.iter().copied() {
            if seen.contains(&v) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut stack = vec![v];
            while let Some(u) = stack.pop() {
                if !comp.insert(u) {
                    continue;
                }
                seen.insert(u);
                for w in self.neighbors(u) {
                    if !comp.contains(&w) {
                        stack.push(w);
                    }
                }
            }
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }
}

/// A subgraph designated by vertex and edge subsets of an ambient graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subgraph {
    pub vertices: BTreeSet<VertexId>,
    pub edges: BTreeSet<EdgeId>,
}

impl Subgraph {
    pub fn of_whole(g: &Graph) -> Self {
        Subgraph {
            vertices: g.vertices().collect(),
            edges: g.edges().map(|(e, _, _)| e).collect(),
        }
    }

    /// Checks that edges and endpoint closure are consistent with `host`.
    pub fn is_valid_in(&self, host: &Graph) -> bool {
        self.vertices.iter().all(|v| host.has_vertex(*v))
            && self.edges.iter().all(|&e| {
                host.endpoints(e).is_some_and(|(u, v)| {
                    self.vertices.contains(&u) && self.vertices.contains(&v)
                })
            })
    }

    /// Materializes the subgraph as an owned graph.
    pub fn to_graph(&self, host: &Graph) -> Graph {
        let mut g = Graph::new();
        for &v in &self.vertices {
            g.ensure_vertex(v);
        }
        for &e in &self.edges {
            let (u, v) = host.endpoints(e).expect("subgraph edge in host");
            g.add_edge(e, u, v).unwrap();
        }
        g
    }
}

/// A walk through explicit edges; used for paths and cycles.
///
/// For a path, `vertices.len() == edges.len() + 1`. For a cycle the walk is
/// closed: `vertices.len() == edges.len()` and the last edge returns to
/// `vertices[0]`. A one-vertex path has no edges. Loops and digons are
/// expressible because edges are explicit.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Walk {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    pub closed: bool,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WalkError {
    #[error("walk is empty")]
    Empty,
    #[error("edge {0} does not join consecutive walk vertices")]
    BadStep(EdgeId),
    #[error("no edge between {0} and {1}")]
    NoEdge(VertexId, VertexId),
    #[error("walk revisits vertex {0}")]
    Revisit(VertexId),
    #[error("closed walk must end where it started")]
    NotClosed,
}

impl Walk {
    /// Builds a simple path from a vertex sequence, selecting the smallest
    /// edge id between consecutive vertices.
    pub fn path_from_vertices(g: &Graph, vs: &[VertexId]) -> Result<Walk, WalkError> {
        if vs.is_empty() {
            return Err(WalkError::Empty);
        }
        let mut edges = Vec::new();
        for w in vs.windows(2) {
            let e = g
                .any_edge_between(w[0], w[1])
                .ok_or(WalkError::NoEdge(w[0], w[1]))?;
            edges.push(e);
        }
        let walk = Walk {
            vertices: vs.to_vec(),
            edges,
            closed: false,
        };
        walk.check_simple()?;
        Ok(walk)
    }

    /// Builds a simple cycle from a cyclic vertex sequence (first vertex not
    /// repeated at the end); the closing edge is chosen by smallest id.
    pub fn cycle_from_vertices(g: &Graph, vs: &[VertexId]) -> Result<Walk, WalkError> {
        if vs.is_empty() {
            return Err(WalkError::Empty);
        }
        let mut edges = Vec::new();
        for i in 0..vs.len() {
            let a = vs[i];
            let b = vs[(i + 1) % vs.len()];
            let mut candidates = g.edges_between(a, b);
            // A digon needs two distinct parallel edges; avoid reusing one.
            candidates.retain(|e| !edges.contains(e));
            let e = candidates.first().copied().ok_or(WalkError::NoEdge(a, b))?;
            edges.push(e);
        }
        let walk = Walk {
            vertices: vs.to_vec(),
            edges,
            closed: true,
        };
        walk.check_simple()?;
        Ok(walk)
    }

    pub fn cycle_from_parts(vertices: Vec<VertexId>, edges: Vec<EdgeId>) -> Walk {
        Walk {
            vertices,
            edges,
            closed: true,
        }
    }

    pub fn path_from_parts(vertices: Vec<VertexId>, edges: Vec<EdgeId>) -> Walk {
        Walk {
            vertices,
            edges,
            closed: false,
        }
    }

    pub fn single_vertex(v: VertexId) -> Walk {
        Walk {
            vertices: vec![v],
            edges: Vec::new(),
            closed: false,
        }
    }

    pub fn check_simple(&self) -> Result<(), WalkError> {
        let mut seen = BTreeSet::new();
        for &v in &self.vertices {
            if !seen.insert(v) {
                return Err(WalkError::Revisit(v));
            }
        }
        if self.closed && self.vertices.len() != self.edges.len() {
            return Err(WalkError::NotClosed);
        }
        if !self.closed && self.vertices.len() != self.edges.len() + 1 {
            return Err(WalkError::BadStep(
                self.edges.last().copied().unwrap_or(EdgeId(0)),
            ));
        }
        Ok(())
    }

    /// Verifies each step against the host graph.
    pub fn check_in(&self, g: &Graph) -> Result<(), WalkError> {
        self.check_simple()?;
        let n = self.vertices.len();
        for (i, &e) in self.edges.iter().enumerate() {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let Some((x, y)) = g.endpoints(e) else {
                return Err(WalkError::BadStep(e));
            };
            if (x, y) != (a, b) && (x, y) != (b, a) {
                return Err(WalkError::BadStep(e));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn first(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn last(&self) -> VertexId {
        *self.vertices.last().unwrap()
    }

    pub fn vertex_set(&self) -> BTreeSet<VertexId> {
        self.vertices.iter().copied().collect()
    }

    pub fn edge_set(&self) -> BTreeSet<EdgeId> {
        self.edges.iter().copied().collect()
    }

    pub fn reversed(&self) -> Walk {
        if self.closed {
            let mut vs = self.vertices.clone();
            let mut es = self.edges.clone();
            vs[1..].reverse();
            es.reverse();
            Walk {
                vertices: vs,
                edges: es,
                closed: true,
            }
        } else {
            Walk {
                vertices: self.vertices.iter().rev().copied().collect(),
                edges: self.edges.iter().rev().copied().collect(),
                closed: false,
            }
        }
    }

    /// Interior vertices of an open walk.
    pub fn interior(&self) -> &[VertexId] {
        if self.closed || self.vertices.len() < 3 {
            &[]
        } else {
            &self.vertices[1..self.vertices.len() - 1]
        }
    }

    /// Concatenates an open walk continuing at `self.last()`.
    pub fn join(&self, other: &Walk) -> Walk {
        assert!(!self.closed && !other.closed);
        assert_eq!(self.last(), other.first());
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&other.vertices[1..]);
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Walk {
            vertices,
            edges,
            closed: false,
        }
    }

    /// Whether two walks share a vertex.
    pub fn meets(&self, other: &Walk) -> bool {
        let s = self.vertex_set();
        other.vertices.iter().any(|v| s.contains(v))
    }

    /// Rotates a closed walk so it starts at `v`.
    pub fn rotated_to(&self, v: VertexId) -> Option<Walk> {
        if !self.closed {
            return None;
        }
        let k = self.vertices.iter().position(|&u| u == v)?;
        let n = self.vertices.len();
        let vertices = (0..n).map(|i| self.vertices[(k + i) % n]).collect();
        let edges = (0..n).map(|i| self.edges[(k + i) % n]).collect();
        Some(Walk {
            vertices,
            edges,
            closed: true,
        })
    }
}
