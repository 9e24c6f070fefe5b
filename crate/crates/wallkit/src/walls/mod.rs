//! Walls, cylindrical walls and grids: generation, subdivision models and
//! their verification.
//!
//! A cylindrical r-wall is a subdivision of the graph on vertices (i, j),
//! 1 <= i <= r, 1 <= j <= 2r, where (i, j) ~ (i, j +- 1 mod 2r) and
//! (i, j) ~ (i + d, j) with d = (-1)^(i+j) when the target row exists.
//! Deleting the 2r-to-1 wrap edges of every row gives the (flat) r-wall.

mod convert;
mod router;

pub use convert::{cylindrical_to_grid, grid_to_wall, wall_to_cylindrical};
pub use router::{check_linkage, w1_paths, CycleSegment};

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeId, Graph, VertexId, Walk};
use crate::surface::ValidationReport;

/// Abstract wall vertex: row 1..=r, column 1..=2r.
pub type WallCoord = (u16, u16);

/// Abstract wall edge with lexicographically ordered endpoints.
pub type WallEdge = (WallCoord, WallCoord);

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum WallKind {
    Cylindrical,
    Flat,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WallError {
    #[error("wall order {0} is below the minimum of 3")]
    OrderTooSmall(u16),
    #[error("wall of order {0} is too small for target order {1}; need at least {2}")]
    HostTooSmall(u16, u16, u16),
    #[error("model is not {0:?}")]
    WrongKind(WallKind),
    #[error("meridian index {0} out of range 1..={1}")]
    BadMeridian(u16, u16),
    #[error("need {0} <= {1}")]
    BadRowPair(u16, u16),
    #[error("segment is not a contiguous arc of meridian {0}")]
    BadSegment(u16),
    #[error("segment on meridian {0} spans {1} branch vertices, need at least {2}")]
    SegmentTooShort(u16, usize, usize),
    #[error("routing search exhausted its node budget")]
    RoutingBudget,
    #[error("no disjoint path schedule found")]
    RoutingFailed,
    #[error("invalid wall model: {0}")]
    InvalidModel(String),
}

pub fn edge_canon(a: WallCoord, b: WallCoord) -> WallEdge {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Whether the abstract wall has a vertical edge below (i, j).
pub fn has_down_edge(r: u16, i: u16, j: u16) -> bool {
    i < r && (i + j).is_multiple_of(2)
}

/// All abstract edges of the order-r wall of the given kind.
pub fn abstract_edges(r: u16, kind: WallKind) -> Vec<WallEdge> {
    let mut out = Vec::new();
    for i in 1..=r {
        for j in 1..(2 * r) {
            out.push(edge_canon((i, j), (i, j + 1)));
        }
        if kind == WallKind::Cylindrical {
            out.push(edge_canon((i, 2 * r), (i, 1)));
        }
    }
    for i in 1..r {
        for j in 1..=(2 * r) {
            if has_down_edge(r, i, j) {
                out.push(edge_canon((i, j), (i + 1, j)));
            }
        }
    }
    out.sort_unstable();
    out
}

/// Subdivision model of a wall inside a host graph: where each branch
/// vertex lands and the internally disjoint host path realizing each
/// abstract edge.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WallModel {
    pub order: u16,
    pub kind: WallKind,
    pub branch: BTreeMap<WallCoord, VertexId>,
    /// Host path per abstract edge, oriented from the smaller coordinate.
    pub paths: BTreeMap<WallEdge, Walk>,
}

impl WallModel {
    /// Host path for the abstract step `from -> to`.
    pub fn oriented_path(&self, from: WallCoord, to: WallCoord) -> Option<Walk> {
        let key = edge_canon(from, to);
        let p = self.paths.get(&key)?;
        if from <= to {
            Some(p.clone())
        } else {
            Some(p.reversed())
        }
    }

    /// Meridian i as a host walk: a cycle for cylindrical walls, an open
    /// path for flat ones, following increasing column order.
    pub fn meridian(&self, i: u16) -> Result<Walk, WallError> {
        if i == 0 || i > self.order {
            return Err(WallError::BadMeridian(i, self.order));
        }
        let r = self.order;
        let mut walk: Option<Walk> = None;
        for j in 1..(2 * r) {
            let seg = self
                .oriented_path((i, j), (i, j + 1))
                .ok_or_else(|| WallError::InvalidModel(format!("missing row path ({i},{j})")))?;
            walk = Some(match walk {
                None => seg,
                Some(w) => w.join(&seg),
            });
        }
        let mut walk = walk.ok_or_else(|| WallError::InvalidModel("order too small".into()))?;
        if self.kind == WallKind::Cylindrical {
            let seg = self
                .oriented_path((i, 2 * r), (i, 1))
                .ok_or_else(|| WallError::InvalidModel(format!("missing wrap path row {i}")))?;
            let mut vertices = walk.vertices;
            vertices.extend_from_slice(&seg.vertices[1..seg.vertices.len() - 1]);
            let mut edges = walk.edges;
            edges.extend_from_slice(&seg.edges);
            walk = Walk {
                vertices,
                edges,
                closed: true,
            };
        }
        Ok(walk)
    }

    /// All host vertices used by the model.
    pub fn host_vertices(&self) -> BTreeSet<VertexId> {
        let mut out: BTreeSet<VertexId> = self.branch.values().copied().collect();
        for p in self.paths.values() {
            out.extend(p.vertices.iter().copied());
        }
        out
    }

    /// All host edges used by the model.
    pub fn host_edges(&self) -> BTreeSet<EdgeId> {
        self.paths
            .values()
            .flat_map(|p| p.edges.iter().copied())
            .collect()
    }

    /// Degree-3 branch vertices of the abstract wall, as host vertices.
    pub fn degree3_hosts(&self) -> BTreeSet<VertexId> {
        let mut deg: BTreeMap<WallCoord, usize> = BTreeMap::new();
        for &(a, b) in self.paths.keys() {
            *deg.entry(a).or_default() += 1;
            *deg.entry(b).or_default() += 1;
        }
        deg.iter()
            .filter(|(_, &d)| d == 3)
            .map(|(c, _)| self.branch[c])
            .collect()
    }
}

/// Generates the cylindrical r-wall together with its identity model.
pub fn generate_q(r: u16) -> Result<(Graph, WallModel), WallError> {
    generate(r, WallKind::Cylindrical)
}

/// Generates the flat r-wall together with its identity model.
pub fn generate_wall(r: u16) -> Result<(Graph, WallModel), WallError> {
    generate(r, WallKind::Flat)
}

fn generate(r: u16, kind: WallKind) -> Result<(Graph, WallModel), WallError> {
    if r < 3 {
        return Err(WallError::OrderTooSmall(r));
    }
    let vid = |(i, j): WallCoord| VertexId(u32::from(i - 1) * u32::from(2 * r) + u32::from(j - 1));
    let mut g = Graph::new();
    for i in 1..=r {
        for j in 1..=(2 * r) {
            g.ensure_vertex(vid((i, j)));
        }
    }
    let edges = abstract_edges(r, kind);
    let mut branch = BTreeMap::new();
    for i in 1..=r {
        for j in 1..=(2 * r) {
            branch.insert((i, j), vid((i, j)));
        }
    }
    let mut paths = BTreeMap::new();
    for (idx, &(a, b)) in edges.iter().enumerate() {
        let e = EdgeId(idx as u32);
        g.add_edge(e, vid(a), vid(b)).unwrap();
        paths.insert(
            (a, b),
            Walk::path_from_parts(vec![vid(a), vid(b)], vec![e]),
        );
    }
    Ok((
        g,
        WallModel {
            order: r,
            kind,
            branch,
            paths,
        },
    ))
}

/// Checks every model invariant inside the host graph.
pub fn verify_wall_model(host: &Graph, model: &WallModel) -> ValidationReport {
    let mut report = ValidationReport::default();
    let r = model.order;
    // Generated walls start at order 3; degenerate flat subwalls of lower
    // order still verify structurally (the every-third-row subwall of a
    // 7-wall has order 2).
    if r < 1 || (model.kind == WallKind::Cylindrical && r < 3) {
        report.violation(format!("order {r} too small for {:?}", model.kind));
        return report;
    }
    if model.kind == WallKind::Flat && r < 3 {
        report.warning(format!("flat wall of degenerate order {r}"));
    }
    let want: BTreeSet<WallCoord> = (1..=r)
        .flat_map(|i| (1..=(2 * r)).map(move |j| (i, j)))
        .collect();
    let got: BTreeSet<WallCoord> = model.branch.keys().copied().collect();
    if want != got {
        report.violation("branch map does not cover exactly the wall coordinates");
        return report;
    }
    let mut images = BTreeSet::new();
    for (&c, &v) in &model.branch {
        if !host.has_vertex(v) {
            report.violation(format!("branch vertex for {c:?} missing from host"));
        }
        if !images.insert(v) {
            report.violation(format!("branch image {v} duplicated"));
        }
    }
    let want_edges: BTreeSet<WallEdge> = abstract_edges(r, model.kind).into_iter().collect();
    let got_edges: BTreeSet<WallEdge> = model.paths.keys().copied().collect();
    for e in want_edges.difference(&got_edges) {
        report.violation(format!("missing path for abstract edge {e:?}"));
    }
    for e in got_edges.difference(&want_edges) {
        report.violation(format!("unexpected path for non-edge {e:?}"));
    }
    if !report.is_valid() {
        return report;
    }
    // Path sanity and internal disjointness.
    let mut owner: BTreeMap<VertexId, WallEdge> = BTreeMap::new();
    for (&(a, b), p) in &model.paths {
        if p.closed || p.is_empty() {
            report.violation(format!("path {:?} must be an open nonempty walk", (a, b)));
            continue;
        }
        if let Err(e) = p.check_in(host) {
            report.violation(format!("path {:?} invalid in host: {e}", (a, b)));
            continue;
        }
        if p.first() != model.branch[&a] || p.last() != model.branch[&b] {
            report.violation(format!("path {:?} endpoints disagree with branch map", (a, b)));
            continue;
        }
        for &v in p.interior() {
            if images.contains(&v) {
                report.violation(format!(
                    "path {:?} passes through branch vertex {v}",
                    (a, b)
                ));
            }
            if let Some(prev) = owner.insert(v, (a, b)) {
                report.violation(format!(
                    "paths {prev:?} and {:?} share internal vertex {v}",
                    (a, b)
                ));
            }
        }
    }
    // Meridians must close up (cylindrical) or stay simple (flat).
    if report.is_valid() {
        for i in 1..=r {
            match model.meridian(i) {
                Err(e) => report.violation(format!("meridian {i}: {e}")),
                Ok(m) => {
                    if let Err(e) = m.check_in(host) {
                        report.violation(format!("meridian {i} not a valid walk: {e}"));
                    }
                }
            }
        }
    }
    report
}

/// Minor model of an r-by-r grid: connected, pairwise disjoint branch sets
/// with a host edge witnessing every grid edge.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridModel {
    pub order: u16,
    pub branch_sets: BTreeMap<(u16, u16), BTreeSet<VertexId>>,
    pub witnesses: BTreeMap<((u16, u16), (u16, u16)), EdgeId>,
}

/// All edges of the r-by-r grid, lexicographically normalized.
pub fn grid_edges(r: u16) -> Vec<((u16, u16), (u16, u16))> {
    let mut out = Vec::new();
    for i in 1..=r {
        for j in 1..r {
            out.push(((i, j), (i, j + 1)));
        }
    }
    for i in 1..r {
        for j in 1..=r {
            out.push(((i, j), (i + 1, j)));
        }
    }
    out.sort_unstable();
    out
}

pub fn verify_grid_model(host: &Graph, grid: &GridModel) -> ValidationReport {
    let mut report = ValidationReport::default();
    let r = grid.order;
    let want: BTreeSet<(u16, u16)> = (1..=r)
        .flat_map(|i| (1..=r).map(move |j| (i, j)))
        .collect();
    if grid.branch_sets.keys().copied().collect::<BTreeSet<_>>() != want {
        report.violation("branch sets do not cover exactly the grid coordinates");
        return report;
    }
    let mut seen: BTreeMap<VertexId, (u16, u16)> = BTreeMap::new();
    for (&c, set) in &grid.branch_sets {
        if set.is_empty() {
            report.violation(format!("branch set {c:?} empty"));
            continue;
        }
        for &v in set {
            if !host.has_vertex(v) {
                report.violation(format!("branch set {c:?} vertex {v} missing from host"));
            }
            if let Some(prev) = seen.insert(v, c) {
                report.violation(format!("branch sets {prev:?} and {c:?} share vertex {v}"));
            }
        }
        if !host.induced(set).is_connected() {
            report.violation(format!("branch set {c:?} not connected"));
        }
    }
    for e in grid_edges(r) {
        match grid.witnesses.get(&e) {
            None => report.violation(format!("grid edge {e:?} has no witness")),
            Some(&w) => match host.endpoints(w) {
                None => report.violation(format!("witness {w} for {e:?} missing from host")),
                Some((u, v)) => {
                    let (a, b) = e;
                    let sa = &grid.branch_sets[&a];
                    let sb = &grid.branch_sets[&b];
                    let ok = (sa.contains(&u) && sb.contains(&v))
                        || (sa.contains(&v) && sb.contains(&u));
                    if !ok {
                        report.violation(format!(
                            "witness {w} for {e:?} does not join the two branch sets"
                        ));
                    }
                }
            },
        }
    }
    report
}
