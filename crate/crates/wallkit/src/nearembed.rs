//! Near-embeddings: elementary reductions, wall preservation, the
//! every-third-row subwall of a preserved wall, and the (N1)-(N4) axioms.
//!
//! A reduction step keeps one side of a separation of order at most 3 and
//! completes the cut into a clique. Steps are replayed one at a time so
//! that wall repairs stay per-step auditable: a strand crossing the dropped
//! side is shortcut through a clique edge, and a deleted branch vertex is
//! re-centered on one of the cut vertices where its strands leave.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeId, Graph, Subgraph, VertexId, Walk};
use crate::surface::{trace_faces, validate_embedding, Embedding, ValidationReport};
use crate::vortex::{adhesion, AdhesionOutcome, Vortex};
use crate::walls::{
    edge_canon, verify_wall_model, WallCoord, WallError, WallKind, WallModel,
};

#[derive(Debug, Error)]
pub enum ReduceError {
    #[error("cut has {0} vertices; elementary reductions need 1..=3")]
    BadCutSize(usize),
    #[error("dropped side is empty")]
    EmptyDrop,
    #[error("vertex {0} missing from the graph")]
    MissingVertex(VertexId),
    #[error("cut and dropped side share vertex {0}")]
    CutMeetsDrop(VertexId),
    #[error("edge {0} joins the dropped side to the kept side outside the cut")]
    NotASeparation(EdgeId),
    #[error("reduction deletes wall branch vertices {0:?}; not repairable")]
    TooManyBranchesDeleted(Vec<VertexId>),
    #[error("wall preservation violated at step {0}")]
    NotPreserved(usize),
    #[error("strand leaves the dropped side outside the cut at {0}")]
    BadCrossing(VertexId),
    #[error("no usable center among the cut vertices for the deleted branch vertex")]
    NoCenter,
    #[error("phase {0} does not fit: rows go up to {1} but the wall has {2}")]
    BadPhase(u16, u16, u16),
    #[error(transparent)]
    Wall(#[from] WallError),
}

/// One elementary reduction: keep everything but `dropped`, then complete
/// `cut` into a clique. The separation is (V minus dropped, cut + dropped).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionStep {
    pub cut: Vec<VertexId>,
    pub dropped: BTreeSet<VertexId>,
}

impl ReductionStep {
    pub fn new(mut cut: Vec<VertexId>, dropped: BTreeSet<VertexId>) -> Self {
        cut.sort_unstable();
        cut.dedup();
        ReductionStep { cut, dropped }
    }

    pub fn order(&self) -> usize {
        self.cut.len()
    }

    /// The reduction triangle, present exactly for order-3 cuts.
    pub fn triangle(&self) -> Option<[VertexId; 3]> {
        match self.cut[..] {
            [a, b, c] => Some([a, b, c]),
            _ => None,
        }
    }

    pub fn validate(&self, g: &Graph) -> Result<(), ReduceError> {
        if self.cut.is_empty() || self.cut.len() > 3 {
            return Err(ReduceError::BadCutSize(self.cut.len()));
        }
        if self.dropped.is_empty() {
            return Err(ReduceError::EmptyDrop);
        }
        for &v in self.cut.iter().chain(self.dropped.iter()) {
            if !g.has_vertex(v) {
                return Err(ReduceError::MissingVertex(v));
            }
        }
        if let Some(&v) = self.cut.iter().find(|v| self.dropped.contains(v)) {
            return Err(ReduceError::CutMeetsDrop(v));
        }
        let cut: BTreeSet<VertexId> = self.cut.iter().copied().collect();
        for (e, u, v) in g.edges() {
            let du = self.dropped.contains(&u);
            let dv = self.dropped.contains(&v);
            if du ^ dv {
                let outside = if du { v } else { u };
                if !cut.contains(&outside) {
                    return Err(ReduceError::NotASeparation(e));
                }
            }
        }
        Ok(())
    }
}

/// Applies one elementary reduction; returns the reduced graph and the
/// clique edges that were added.
pub fn apply_reduction(g: &Graph, step: &ReductionStep) -> Result<(Graph, Vec<EdgeId>), ReduceError> {
    step.validate(g)?;
    let keep: BTreeSet<VertexId> = g
        .vertices()
        .filter(|v| !step.dropped.contains(v))
        .collect();
    let mut out = g.induced(&keep);
    let mut added = Vec::new();
    for i in 0..step.cut.len() {
        for j in (i + 1)..step.cut.len() {
            let (a, b) = (step.cut[i], step.cut[j]);
            if out.any_edge_between(a, b).is_none() {
                added.push(out.add_fresh_edge(a, b).expect("cut vertices kept"));
            }
        }
    }
    Ok((out, added))
}

/// Replays a reduction sequence, collecting the per-step graphs and added
/// clique edges.
pub fn replay_reduction(
    g0: &Graph,
    steps: &[ReductionStep],
) -> Result<(Graph, Vec<Vec<EdgeId>>), ReduceError> {
    let mut g = g0.clone();
    let mut added = Vec::new();
    for step in steps {
        let (next, ids) = apply_reduction(&g, step)?;
        g = next;
        added.push(ids);
    }
    Ok((g, added))
}

/// Whether each step deletes at most one degree-3 vertex of the wall.
pub fn preserves_wall(
    g0: &Graph,
    steps: &[ReductionStep],
    wall: &WallModel,
) -> Result<bool, ReduceError> {
    let deg3 = wall.degree3_hosts();
    let mut g = g0.clone();
    for step in steps {
        step.validate(&g)?;
        let lost = step.dropped.iter().filter(|v| deg3.contains(v)).count();
        if lost > 1 {
            return Ok(false);
        }
        let (next, _) = apply_reduction(&g, step)?;
        g = next;
    }
    Ok(true)
}

/// Every-third-row subwall selection: rows `phase, phase+3, ...` of the
/// host wall carry the rows of a wall of order `floor((r+1)/3)`, with each
/// vertical edge realized as a U-turn strand inside a two-column slot.
pub fn third_row_subwall(wall: &WallModel, phase: u16) -> Result<WallModel, ReduceError> {
    if wall.kind != WallKind::Flat {
        return Err(ReduceError::Wall(WallError::WrongKind(WallKind::Flat)));
    }
    let r = wall.order;
    let s = (r + 1) / 3;
    if phase == 0 {
        return Err(ReduceError::BadPhase(phase, 0, r));
    }
    let last_row = phase + 3 * (s - 1);
    if last_row > r || phase + 4 * s > 2 * r {
        return Err(ReduceError::BadPhase(phase, last_row, r));
    }
    let row = |a: u16| phase + 3 * (a - 1);
    let shift = phase - 1;
    // Down-strand start column inside slot {2b-1, 2b} (shifted), matching
    // the parity of the row it descends from.
    let start_col = |a: u16, b: u16| -> u16 {
        let left = 2 * b - 1 + shift;
        if (row(a) + left).is_multiple_of(2) {
            left
        } else {
            left + 1
        }
    };
    let mut col: BTreeMap<WallCoord, u16> = BTreeMap::new();
    for a in 1..=s {
        for b in 1..=(2 * s) {
            let c = if (a + b) % 2 == 0 && a < s {
                start_col(a, b)
            } else if a > 1 && (a + b) % 2 == 1 {
                // Up vertex: the strand from above arrives vertically at
                // the same column it started from.
                start_col(a - 1, b)
            } else {
                2 * b - 1 + shift
            };
            col.insert((a, b), c);
        }
    }
    let mut branch = BTreeMap::new();
    for (&(a, b), &c) in &col {
        branch.insert((a, b), wall.branch[&(row(a), c)]);
    }
    let mut paths = BTreeMap::new();
    for a in 1..=s {
        for b in 1..(2 * s) {
            let (c1, c2) = (col[&(a, b)], col[&(a, b + 1)]);
            let coords: Vec<WallCoord> = (c1..=c2).map(|c| (row(a), c)).collect();
            paths.insert(
                edge_canon((a, b), (a, b + 1)),
                map_through(wall, &coords)?,
            );
        }
    }
    for a in 1..s {
        for b in 1..=(2 * s) {
            if (a + b) % 2 != 0 {
                continue;
            }
            let x = col[&(a, b)];
            let rho = row(a);
            let l = if x % 2 == 1 { x + 1 } else { x - 1 };
            let coords = [
                (rho, x),
                (rho + 1, x),
                (rho + 1, l),
                (rho + 2, l),
                (rho + 2, x),
                (rho + 3, x),
            ];
            paths.insert(edge_canon((a, b), (a + 1, b)), map_through(wall, &coords)?);
        }
    }
    Ok(WallModel {
        order: s,
        kind: WallKind::Flat,
        branch,
        paths,
    })
}

fn map_through(wall: &WallModel, coords: &[WallCoord]) -> Result<Walk, ReduceError> {
    let mut walk: Option<Walk> = None;
    for w in coords.windows(2) {
        let seg = wall
            .oriented_path(w[0], w[1])
            .ok_or_else(|| ReduceError::Wall(WallError::InvalidModel(format!(
                "missing host path {:?} -> {:?}",
                w[0], w[1]
            ))))?;
        walk = Some(match walk {
            None => seg,
            Some(acc) => acc.join(&seg),
        });
    }
    walk.ok_or_else(|| ReduceError::Wall(WallError::InvalidModel("empty path".into())))
}

/// Carries the every-third-row subwall through a preserving reduction
/// sequence, repairing strands with the clique edges added at each step.
/// The result has order exactly `floor((r+1)/3)` and all its edges lie in
/// the original wall plus the added clique edges.
pub fn captured_wall_subwall(
    g0: &Graph,
    wall: &WallModel,
    steps: &[ReductionStep],
    phase: u16,
) -> Result<WallModel, ReduceError> {
    if !preserves_wall(g0, steps, wall)? {
        let bad = steps.iter().position(|_| true).unwrap_or(0);
        return Err(ReduceError::NotPreserved(bad));
    }
    let mut model = third_row_subwall(wall, phase)?;
    let mut g = g0.clone();
    for step in steps {
        let (next, _added) = apply_reduction(&g, step)?;
        repair_model(&mut model, &step.dropped, &next)?;
        g = next;
    }
    let report = verify_wall_model(&g, &model);
    if !report.is_valid() {
        return Err(ReduceError::Wall(WallError::InvalidModel(format!(
            "repaired subwall failed verification: {:?}",
            report.violations
        ))));
    }
    Ok(model)
}

/// Rewrites the model so it avoids `dropped`, using edges of the reduced
/// graph `g` (which already contains the clique edges) for shortcuts.
fn repair_model(
    model: &mut WallModel,
    dropped: &BTreeSet<VertexId>,
    g: &Graph,
) -> Result<(), ReduceError> {
    let deleted: Vec<WallCoord> = model
        .branch
        .iter()
        .filter(|(_, v)| dropped.contains(v))
        .map(|(&c, _)| c)
        .collect();
    if deleted.len() > 1 {
        return Err(ReduceError::TooManyBranchesDeleted(
            deleted.iter().map(|c| model.branch[c]).collect(),
        ));
    }
    if let Some(&coord) = deleted.first() {
        // Trim each incident strand to its first surviving vertex and
        // re-center the branch vertex on one of them.
        let incident: Vec<crate::walls::WallEdge> = model
            .paths
            .keys()
            .filter(|&&(a, b)| a == coord || b == coord)
            .copied()
            .collect();
        let mut trimmed: BTreeMap<crate::walls::WallEdge, Walk> = BTreeMap::new();
        let mut exits = Vec::new();
        for &key in &incident {
            let path = model.paths[&key].clone();
            // Orient away from the deleted branch vertex.
            let oriented = if path.first() == model.branch[&coord] {
                path
            } else {
                path.reversed()
            };
            let cut_pos = oriented
                .vertices
                .iter()
                .position(|v| !dropped.contains(v))
                .ok_or(ReduceError::NoCenter)?;
            let rest = Walk {
                vertices: oriented.vertices[cut_pos..].to_vec(),
                edges: oriented.edges[cut_pos..].to_vec(),
                closed: false,
            };
            exits.push((key, rest.first()));
            trimmed.insert(key, rest);
        }
        let branch_images: BTreeSet<VertexId> = model
            .branch
            .iter()
            .filter(|(&c, _)| c != coord)
            .map(|(_, &v)| v)
            .collect();
        let used_elsewhere: BTreeSet<VertexId> = model
            .paths
            .iter()
            .filter(|(k, _)| !incident.contains(k))
            .flat_map(|(_, p)| p.vertices.iter().copied())
            .collect();
        let mut candidates: Vec<VertexId> = exits.iter().map(|&(_, v)| v).collect();
        candidates.sort_unstable();
        candidates.dedup();
        let center = candidates
            .iter()
            .copied()
            .find(|c| !branch_images.contains(c) && !used_elsewhere.contains(c))
            .ok_or(ReduceError::NoCenter)?;
        for (key, exit) in &exits {
            let rest = trimmed.remove(key).expect("trimmed above");
            let new_path = if *exit == center {
                rest
            } else {
                let e = g
                    .any_edge_between(center, *exit)
                    .ok_or(ReduceError::BadCrossing(*exit))?;
                Walk {
                    vertices: vec![center],
                    edges: vec![],
                    closed: false,
                }
                .join(&Walk {
                    vertices: vec![center, *exit],
                    edges: vec![e],
                    closed: false,
                })
                .join(&rest)
            };
            // Store with canonical orientation.
            let (a, b) = *key;
            let from = if a == coord { a } else { b };
            debug_assert_eq!(from, coord);
            let oriented = if coord <= other_end(*key, coord) {
                new_path
            } else {
                new_path.reversed()
            };
            model.paths.insert(*key, oriented);
        }
        model.branch.insert(coord, center);
    }
    // Shortcut every remaining path through the dropped side.
    let keys: Vec<crate::walls::WallEdge> = model.paths.keys().copied().collect();
    for key in keys {
        let path = model.paths[&key].clone();
        if !path.vertices.iter().any(|v| dropped.contains(v)) {
            continue;
        }
        let mut vertices: Vec<VertexId> = Vec::new();
        let mut edges: Vec<EdgeId> = Vec::new();
        let mut i = 0;
        while i < path.vertices.len() {
            let v = path.vertices[i];
            if !dropped.contains(&v) {
                if let Some(&prev) = vertices.last() {
                    // Either the original edge survives or we crossed the
                    // dropped side and need a clique shortcut.
                    let direct = if i > 0 && !dropped.contains(&path.vertices[i - 1]) {
                        Some(path.edges[i - 1])
                    } else {
                        None
                    };
                    let e = match direct {
                        Some(e) => e,
                        None => g
                            .any_edge_between(prev, v)
                            .ok_or(ReduceError::BadCrossing(v))?,
                    };
                    edges.push(e);
                }
                vertices.push(v);
            }
            i += 1;
        }
        model.paths.insert(
            key,
            Walk {
                vertices,
                edges,
                closed: false,
            },
        );
    }
    Ok(())
}

fn other_end(key: crate::walls::WallEdge, c: WallCoord) -> WallCoord {
    if key.0 == c {
        key.1
    } else {
        key.0
    }
}

/// A vortex attached to a cuff of the embedding.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AttachedVortex {
    pub cuff: usize,
    pub vortex: Vortex,
}

/// An alpha-near-embedding: apex set, embedded part with its reduction,
/// embedding of the reduced graph, and vortices on cuffs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NearEmbedding {
    pub whole: Graph,
    pub apex: BTreeSet<VertexId>,
    /// The embedded part, a subgraph of `whole`.
    pub embedded: Subgraph,
    /// Reduction turning the embedded part into the embedded graph.
    pub reduction: Vec<ReductionStep>,
    pub embedding: Embedding,
    pub vortices: Vec<AttachedVortex>,
    pub alpha: u32,
}

impl NearEmbedding {
    pub fn embedded_graph(&self) -> Graph {
        self.embedded.to_graph(&self.whole)
    }

    /// Society vertices of all vortices; exactly the cuff vertices by (N3).
    pub fn cuff_vertices(&self) -> BTreeSet<VertexId> {
        self.vortices
            .iter()
            .flat_map(|av| av.vortex.society.iter().copied())
            .collect()
    }
}

/// Budget for the adhesion checks inside near-embedding validation.
pub const DEFAULT_ADHESION_BUDGET: usize = 2_000_000;

/// Checks (N1)-(N4), the apex bound and the edge-disjoint cover.
pub fn validate_near_embedding(ne: &NearEmbedding, adhesion_budget: usize) -> ValidationReport {
    let mut report = ValidationReport::default();
    if ne.apex.len() > ne.alpha as usize {
        report.violation(format!(
            "{} apex vertices exceed alpha = {}",
            ne.apex.len(),
            ne.alpha
        ));
    }
    if ne.vortices.len() > ne.alpha as usize {
        report.violation(format!(
            "{} vortices exceed alpha = {}",
            ne.vortices.len(),
            ne.alpha
        ));
    }
    if !ne.embedded.is_valid_in(&ne.whole) {
        report.violation("embedded part is not a subgraph of the whole graph");
        return report;
    }
    for &a in &ne.apex {
        if ne.embedded.vertices.contains(&a) {
            report.violation(format!("apex vertex {a} lies in the embedded part"));
        }
        if ne
            .vortices
            .iter()
            .any(|av| av.vortex.graph.has_vertex(a))
        {
            report.violation(format!("apex vertex {a} lies in a vortex"));
        }
    }
    // Edge-disjoint cover of G - A.
    let mut owner: BTreeMap<EdgeId, String> = BTreeMap::new();
    for &e in &ne.embedded.edges {
        owner.insert(e, "embedded part".into());
    }
    for (i, av) in ne.vortices.iter().enumerate() {
        for (e, _, _) in av.vortex.graph.edges() {
            if let Some(prev) = owner.insert(e, format!("vortex {i}")) {
                report.violation(format!("edge {e} in both {prev} and vortex {i}"));
            }
        }
    }
    let mut missing_vertices: BTreeSet<VertexId> = BTreeSet::new();
    for (e, u, v) in ne.whole.edges() {
        let apex_edge = ne.apex.contains(&u) || ne.apex.contains(&v);
        if apex_edge {
            continue;
        }
        if !owner.contains_key(&e) {
            report.violation(format!("edge {e} not covered by the decomposition"));
        }
    }
    for v in ne.whole.vertices() {
        if ne.apex.contains(&v) {
            continue;
        }
        let covered = ne.embedded.vertices.contains(&v)
            || ne.vortices.iter().any(|av| av.vortex.graph.has_vertex(v));
        if !covered {
            missing_vertices.insert(v);
        }
    }
    for v in missing_vertices {
        report.violation(format!("vertex {v} not covered by the decomposition"));
    }
    // N2: vortices pairwise vertex-disjoint.
    for i in 0..ne.vortices.len() {
        for j in (i + 1)..ne.vortices.len() {
            let vi: BTreeSet<VertexId> = ne.vortices[i].vortex.graph.vertices().collect();
            if let Some(shared) = ne.vortices[j]
                .vortex
                .graph
                .vertices()
                .find(|v| vi.contains(v))
            {
                report.violation(format!(
                    "N2: vortices {i} and {j} share vertex {shared}"
                ));
            }
        }
    }
    // Reduction replay must reproduce the embedded graph.
    let g0 = ne.embedded_graph();
    match replay_reduction(&g0, &ne.reduction) {
        Err(e) => {
            report.violation(format!("reduction replay failed: {e}"));
            return report;
        }
        Ok((gpp, _)) => {
            let want: BTreeSet<VertexId> = gpp.vertices().collect();
            let got: BTreeSet<VertexId> = ne.embedding.graph().vertices().collect();
            if want != got {
                report.violation("embedding vertex set differs from the reduced graph");
            }
            let want_e: BTreeSet<(VertexId, VertexId)> = gpp
                .edges()
                .map(|(_, u, v)| (u.min(v), u.max(v)))
                .collect();
            let got_e: BTreeSet<(VertexId, VertexId)> = ne
                .embedding
                .graph()
                .edges()
                .map(|(_, u, v)| (u.min(v), u.max(v)))
                .collect();
            if want_e != got_e {
                report.violation("embedding edge set differs from the reduced graph");
            }
        }
    }
    report.merge(validate_embedding(&ne.embedding));
    let faces = match trace_faces(&ne.embedding) {
        Ok(f) => f,
        Err(_) => return report,
    };
    // N1: every reduction triangle bounds a triangular face.
    for (i, step) in ne.reduction.iter().enumerate() {
        if let Some(tri) = step.triangle() {
            let want: BTreeSet<VertexId> = tri.into_iter().collect();
            let bounds = faces
                .walks
                .iter()
                .any(|w| w.len() == 3 && w.vertex_set(&ne.embedding) == want);
            if !bounds {
                report.violation(format!(
                    "N1: reduction triangle of step {i} ({tri:?}) bounds no 3-face"
                ));
            }
        }
    }
    // N3 and N4 per vortex.
    let g0_vertices = &ne.embedded.vertices;
    for (i, av) in ne.vortices.iter().enumerate() {
        if !ne.embedding.cuffs().contains(&av.cuff) {
            report.violation(format!("vortex {i} attached to non-cuff face {}", av.cuff));
            continue;
        }
        let society: BTreeSet<VertexId> = av.vortex.society.iter().copied().collect();
        let shared: BTreeSet<VertexId> = av
            .vortex
            .graph
            .vertices()
            .filter(|v| g0_vertices.contains(v))
            .collect();
        if society != shared {
            report.violation(format!(
                "N3: vortex {i} society differs from its intersection with the embedded part"
            ));
        }
        let cuff_walk = &faces.walks[av.cuff];
        let on_cuff = cuff_walk.vertex_set(&ne.embedding);
        if society != on_cuff {
            report.violation(format!(
                "N3: vortex {i} society differs from the cuff vertex set"
            ));
            continue;
        }
        if !society_order_matches(&av.vortex.society, &cuff_walk.vertices(&ne.embedding)) {
            report.violation(format!(
                "N3: vortex {i} society order disagrees with the cuff cyclic order"
            ));
        }
        match adhesion(&av.vortex, adhesion_budget) {
            Err(e) => report.violation(format!("vortex {i} adhesion failed: {e}")),
            Ok(AdhesionOutcome::Infeasible { edge }) => report.violation(format!(
                "N4: vortex {i} admits no decomposition (edge {edge:?})"
            )),
            Ok(AdhesionOutcome::Unknown { known_above }) => report.warning(format!(
                "N4: vortex {i} adhesion unknown above {known_above} (budget exhausted)"
            )),
            Ok(AdhesionOutcome::Exact(rep)) => {
                if rep.adhesion >= ne.alpha as usize {
                    report.violation(format!(
                        "N4: vortex {i} has adhesion {} >= alpha = {}",
                        rep.adhesion, ne.alpha
                    ));
                }
            }
        }
    }
    report
}

/// Whether the society order matches the cyclic order of its vertices
/// along the cuff walk, linearized at the smallest society vertex, in
/// either direction.
fn society_order_matches(society: &[VertexId], cuff_walk: &[VertexId]) -> bool {
    let society_set: BTreeSet<VertexId> = society.iter().copied().collect();
    let seq: Vec<VertexId> = cuff_walk
        .iter()
        .copied()
        .filter(|v| society_set.contains(v))
        .collect();
    if seq.len() != society.len() {
        // The cuff walk visits a society vertex twice; compare as cyclic
        // sequences is not well defined, reject.
        return false;
    }
    let normalize = |xs: &[VertexId]| -> Vec<VertexId> {
        let k = xs
            .iter()
            .enumerate()
            .min_by_key(|(_, v)| **v)
            .map(|(i, _)| i)
            .unwrap_or(0);
        (0..xs.len()).map(|i| xs[(k + i) % xs.len()]).collect()
    };
    let want = normalize(society);
    let fwd = normalize(&seq);
    let rev: Vec<VertexId> = seq.iter().rev().copied().collect();
    let bwd = normalize(&rev);
    want == fwd || want == bwd
}

/// Three-valued capturedness verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Captured {
    Yes,
    /// A separation of order below the wall order hides more than a third
    /// of the degree-3 wall vertices from the embedded side.
    No {
        hidden: BTreeSet<VertexId>,
        order: usize,
    },
    /// The exterior is too large for exact separator enumeration.
    Unknown,
}

pub const DEFAULT_CAPTURE_GUARD: usize = 20;

/// Exact capturedness check: every separation (K, L) of order below `r`
/// with the embedded part inside K keeps at least two thirds of the wall's
/// degree-3 vertices in K. The exterior side is enumerated exhaustively.
pub fn is_captured(
    ne: &NearEmbedding,
    wall: &WallModel,
    guard: usize,
) -> Result<Captured, ReduceError> {
    if !preserves_wall(&ne.embedded_graph(), &ne.reduction, wall)? {
        return Err(ReduceError::NotPreserved(0));
    }
    let r = usize::from(wall.order);
    let deg3 = wall.degree3_hosts();
    let total = deg3.len();
    let exterior: Vec<VertexId> = ne
        .whole
        .vertices()
        .filter(|v| !ne.embedded.vertices.contains(v))
        .collect();
    if exterior.len() > guard {
        return Ok(Captured::Unknown);
    }
    // Every separation with the embedded part in K is determined by the
    // set B of vertices strictly on the far side; its neighbourhood is the
    // cut.
    let m = exterior.len();
    for mask in 1u64..(1u64 << m) {
        let b: BTreeSet<VertexId> = (0..m)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| exterior[i])
            .collect();
        let mut boundary: BTreeSet<VertexId> = BTreeSet::new();
        for &v in &b {
            for nb in ne.whole.neighbors(v) {
                if !b.contains(&nb) {
                    boundary.insert(nb);
                }
            }
        }
        if boundary.len() >= r {
            continue;
        }
        let kept = deg3.iter().filter(|v| !b.contains(v)).count();
        if 3 * kept < 2 * total {
            return Ok(Captured::No {
                hidden: deg3.intersection(&b).copied().collect(),
                order: boundary.len(),
            });
        }
    }
    Ok(Captured::Yes)
}
