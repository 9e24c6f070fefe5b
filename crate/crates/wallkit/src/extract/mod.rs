//! Extraction of planarly embedded cylindrical subwalls from a wall in a
//! nearly embedded graph, with an independent certificate verifier.
//!
//! The pipeline follows the trichotomy of the meridian traces: nested
//! contractible cycles give the subwall directly; homotopic
//! non-contractible cycles give a wound wall that is flattened and
//! re-extracted; cuff-to-cuff segments confine the search to the disk
//! between the two extreme segments, discarding the few meridians and
//! linkage paths that escape through a vortex.

mod assemble;
mod plant;

pub use assemble::{assemble_cylindrical, drop_wrap, AssembleError};
pub use plant::{plant_instance, plant_wound_instance, PlantError, PlantSpec, PlantedInstance};

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{VertexId, Walk};
use crate::homotopy::{
    are_homotopic_cycles, classify, is_contractible, CurveFamily, CurveKind, HomotopyError,
};
use crate::nearembed::NearEmbedding;
use crate::surface::{cut_along, euler_genus, Region, SurfaceError, ValidationReport};
use crate::vortex::{transaction_order, VortexError};
use crate::walls::{verify_wall_model, wall_to_cylindrical, WallError, WallKind, WallModel};

#[derive(Debug, Error)]
pub enum ExtractError {
    #[error("wall model invalid in the host graph: {0:?}")]
    UnverifiedWall(Vec<String>),
    #[error("no meridian has an edge in the embedded part")]
    NoTraces,
    #[error("no certifiable subwall of order at least 3 found (hypotheses met: {hypotheses_met})")]
    NoCertificate { hypotheses_met: bool },
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Homotopy(#[from] HomotopyError),
    #[error(transparent)]
    Wall(#[from] WallError),
    #[error(transparent)]
    Vortex(#[from] VortexError),
}

/// How one maximal embedded segment of a meridian meets the surface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SegmentKind {
    /// The whole meridian, at most one cuff vertex on it.
    FullCycle,
    /// Starts and ends on cuffs (possibly the same one).
    CuffToCuff { from: usize, to: usize },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TraceSegment {
    pub kind: SegmentKind,
    pub walk: Walk,
}

/// The embedded segments of one meridian cycle.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MeridianTrace {
    pub meridian: u16,
    pub segments: Vec<TraceSegment>,
}

/// Certificate for a planarly embedded cylindrical subwall: the model, a
/// contractible witness cycle, and the disk it bounds.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlanarWallCertificate {
    pub subwall: WallModel,
    pub witness: Walk,
    pub disk: Region,
}

/// Extraction outcome with provenance counters.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Extraction {
    pub certificate: PlanarWallCertificate,
    pub hypotheses_met: bool,
    pub log: Vec<String>,
    pub discarded_cycles: usize,
    pub discarded_paths: usize,
}

/// Computes the maximal embedded segments of every meridian that has at
/// least one edge in the embedded part.
pub fn trace_meridians(
    ne: &NearEmbedding,
    q: &WallModel,
) -> Result<Vec<MeridianTrace>, ExtractError> {
    let report = verify_wall_model(&ne.whole, q);
    if !report.is_valid() {
        return Err(ExtractError::UnverifiedWall(report.violations));
    }
    let mut cuff_of: BTreeMap<VertexId, usize> = BTreeMap::new();
    for av in &ne.vortices {
        for &w in &av.vortex.society {
            cuff_of.insert(w, av.cuff);
        }
    }
    let mut traces = Vec::new();
    for i in 1..=q.order {
        let cycle = q.meridian(i)?;
        let has_embedded = cycle.edges.iter().any(|e| ne.embedded.edges.contains(e));
        if !has_embedded {
            continue;
        }
        let n = cycle.vertices.len();
        let cuff_pos: Vec<usize> = (0..n)
            .filter(|&k| cuff_of.contains_key(&cycle.vertices[k]))
            .collect();
        let mut segments = Vec::new();
        if cuff_pos.len() <= 1 {
            segments.push(TraceSegment {
                kind: SegmentKind::FullCycle,
                walk: cycle.clone(),
            });
        } else {
            for w in 0..cuff_pos.len() {
                let a = cuff_pos[w];
                let b = cuff_pos[(w + 1) % cuff_pos.len()];
                let len = (b + n - a) % n;
                let mut vertices = Vec::with_capacity(len + 1);
                let mut edges = Vec::with_capacity(len);
                for k in 0..=len {
                    vertices.push(cycle.vertices[(a + k) % n]);
                    if k < len {
                        edges.push(cycle.edges[(a + k) % n]);
                    }
                }
                if !edges.iter().any(|e| ne.embedded.edges.contains(e)) {
                    continue;
                }
                segments.push(TraceSegment {
                    kind: SegmentKind::CuffToCuff {
                        from: cuff_of[&cycle.vertices[a]],
                        to: cuff_of[&cycle.vertices[b]],
                    },
                    walk: Walk {
                        vertices,
                        edges,
                        closed: false,
                    },
                });
            }
        }
        traces.push(MeridianTrace {
            meridian: i,
            segments,
        });
    }
    if traces.is_empty() {
        return Err(ExtractError::NoTraces);
    }
    Ok(traces)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassKind {
    Cycles,
    CuffPaths { from: usize, to: usize },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassMember {
    pub meridian: u16,
    pub walk: Walk,
}

/// A homotopy class of chosen segments.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SegmentClass {
    pub kind: ClassKind,
    pub members: Vec<ClassMember>,
}

/// Chooses one segment per meridian (the longest), buckets them by kind
/// and cuff pair, and splits each bucket into homotopy classes. Classes
/// come out ordered by decreasing size.
pub fn group_homotopic_segments(
    ne: &NearEmbedding,
    traces: &[MeridianTrace],
) -> Result<Vec<SegmentClass>, ExtractError> {
    let mut cuff_of: BTreeMap<VertexId, usize> = BTreeMap::new();
    for av in &ne.vortices {
        for &w in &av.vortex.society {
            cuff_of.insert(w, av.cuff);
        }
    }
    // Buckets keyed by kind.
    let mut cycles: Vec<ClassMember> = Vec::new();
    let mut paths: BTreeMap<(usize, usize), Vec<ClassMember>> = BTreeMap::new();
    for trace in traces {
        let Some(seg) = trace
            .segments
            .iter()
            .max_by_key(|s| (s.walk.len(), std::cmp::Reverse(s.walk.vertices.clone())))
        else {
            continue;
        };
        match seg.kind {
            SegmentKind::FullCycle => cycles.push(ClassMember {
                meridian: trace.meridian,
                walk: seg.walk.clone(),
            }),
            SegmentKind::CuffToCuff { from, to } => {
                let key = (from.min(to), from.max(to));
                // Orient the segment to start on the first cuff of the key.
                let walk = if cuff_of[&seg.walk.first()] == key.0 {
                    seg.walk.clone()
                } else {
                    seg.walk.reversed()
                };
                paths.entry(key).or_default().push(ClassMember {
                    meridian: trace.meridian,
                    walk,
                });
            }
        }
    }
    let mut out: Vec<SegmentClass> = Vec::new();
    if !cycles.is_empty() {
        let family = CurveFamily {
            kind: CurveKind::Cycles,
            members: cycles.iter().map(|m| m.walk.clone()).collect(),
            cuffs: None,
        };
        for class in classify(&ne.embedding, &family)? {
            out.push(SegmentClass {
                kind: ClassKind::Cycles,
                members: class.iter().map(|&k| cycles[k].clone()).collect(),
            });
        }
    }
    for ((x, y), members) in &paths {
        let family = CurveFamily {
            kind: CurveKind::Paths,
            members: members.iter().map(|m| m.walk.clone()).collect(),
            cuffs: Some((*x, *y)),
        };
        for class in classify(&ne.embedding, &family)? {
            out.push(SegmentClass {
                kind: ClassKind::CuffPaths { from: *x, to: *y },
                members: class.iter().map(|&k| members[k].clone()).collect(),
            });
        }
    }
    out.sort_by_key(|c| {
        (
            std::cmp::Reverse(c.members.len()),
            c.members.first().map(|m| m.meridian).unwrap_or(0),
        )
    });
    Ok(out)
}

/// Independently checks a certificate: the model verifies inside the whole
/// graph, lies in the embedded part, the witness bounds a cuff-free disk
/// that is a genuine region of the cut, and the subwall sits inside it.
pub fn verify_planar_certificate(
    ne: &NearEmbedding,
    cert: &PlanarWallCertificate,
) -> ValidationReport {
    let mut report = ValidationReport::default();
    if cert.subwall.kind != WallKind::Cylindrical {
        report.violation("subwall is not cylindrical");
        return report;
    }
    if cert.subwall.order < 3 {
        report.violation(format!("subwall order {} below 3", cert.subwall.order));
    }
    report.merge(verify_wall_model(&ne.whole, &cert.subwall));
    if !report.is_valid() {
        return report;
    }
    for v in cert.subwall.host_vertices() {
        if !ne.embedded.vertices.contains(&v) {
            report.violation(format!("subwall vertex {v} outside the embedded part"));
        }
    }
    for e in cert.subwall.host_edges() {
        if !ne.embedded.edges.contains(&e) {
            report.violation(format!("subwall edge {e} outside the embedded part"));
        }
    }
    if cert.witness.check_in(ne.embedding.graph()).is_err() || !cert.witness.closed {
        report.violation("witness cycle is not a cycle of the embedded graph");
        return report;
    }
    let regions = match cut_along(&ne.embedding, std::slice::from_ref(&cert.witness)) {
        Ok(r) => r,
        Err(e) => {
            report.violation(format!("cutting along the witness failed: {e}"));
            return report;
        }
    };
    let Some(disk) = regions.into_iter().find(|r| r == &cert.disk) else {
        report.violation("declared disk is not a region of the cut along the witness");
        return report;
    };
    if !disk.is_disk_bounded_once_by(0) {
        report.violation("declared region is not a disk bounded once by the witness");
    }
    if disk.contains_cuff(&ne.embedding) {
        report.violation("witness disk contains a cuff");
    }
    let witness_edges = cert.witness.edge_set();
    for v in cert.subwall.host_vertices() {
        if !disk.vertices.contains(&v) {
            report.violation(format!("subwall vertex {v} outside the witness disk"));
        }
    }
    for e in cert.subwall.host_edges() {
        if !disk.interior_edges.contains(&e) && !witness_edges.contains(&e) {
            report.violation(format!("subwall edge {e} outside the witness disk"));
        }
    }
    report
}

/// Configured pigeonhole threshold. A working parameter for the
/// hypothesis flag only; the true minimal constant is not computed.
pub fn configured_threshold(genus: u32, vortices: usize, a: usize) -> usize {
    let v = vortices;
    (3 * genus as usize + 1) * (v * v + 1) * a.max(1).saturating_mul(4).max(1)
}

/// Extracts the largest certifiable planarly embedded cylindrical subwall.
pub fn extract_planar_subwall(
    ne: &NearEmbedding,
    q: &WallModel,
    a: usize,
) -> Result<Extraction, ExtractError> {
    let mut log: Vec<String> = Vec::new();
    let traces = trace_meridians(ne, q)?;
    let r0 = traces.len();
    let genus = euler_genus(&ne.embedding)?;
    let mut hypotheses_met = true;
    for (i, av) in ne.vortices.iter().enumerate() {
        let (order, _) = transaction_order(&av.vortex, true)?;
        if order > a {
            hypotheses_met = false;
            log.push(format!(
                "vortex {i} has transaction order {order} > a = {a}"
            ));
        }
    }
    let threshold = configured_threshold(genus, ne.vortices.len(), a);
    if r0 < 3 * threshold {
        hypotheses_met = false;
        log.push(format!(
            "r0 = {r0} below 3 * configured threshold {threshold} (working parameter)"
        ));
    }
    let classes = group_homotopic_segments(ne, &traces)?;
    log.push(format!(
        "r0 = {r0}, genus {genus}, {} classes: {:?}",
        classes.len(),
        classes
            .iter()
            .map(|c| (c.kind.clone(), c.members.len()))
            .collect::<Vec<_>>()
    ));

    let mut best: Option<Extraction> = None;
    let mut discarded_cycles_total = 0usize;
    let mut discarded_paths_total = 0usize;
    for class in &classes {
        let attempt = match &class.kind {
            ClassKind::Cycles => {
                let contractible = class
                    .members
                    .iter()
                    .map(|m| is_contractible(&ne.embedding, &m.walk).map(|r| r.is_some()))
                    .collect::<Result<Vec<bool>, _>>()?;
                if contractible.iter().all(|&c| c) {
                    log.push(format!(
                        "nested-cycle case on {} contractible cycles",
                        class.members.len()
                    ));
                    try_nested_chain(ne, q, &class.members, None, &mut log)
                } else if contractible.iter().all(|&c| !c) {
                    log.push(format!(
                        "wound-cylinder case on {} non-contractible cycles",
                        class.members.len()
                    ));
                    try_band(ne, q, &class.members, &mut log)
                } else {
                    log.push("class mixes contractible and non-contractible cycles".into());
                    None
                }
            }
            ClassKind::CuffPaths { from, to } => {
                log.push(format!(
                    "cuff-segment case ({} members between cuffs {from} and {to})",
                    class.members.len()
                ));
                try_cuff_case(
                    ne,
                    q,
                    class,
                    &traces,
                    a,
                    &mut log,
                    &mut discarded_cycles_total,
                    &mut discarded_paths_total,
                )
            }
        };
        if let Some(cert) = attempt {
            let check = verify_planar_certificate(ne, &cert);
            if check.is_valid() {
                let order = cert.subwall.order;
                if best
                    .as_ref()
                    .is_none_or(|b| order > b.certificate.subwall.order)
                {
                    best = Some(Extraction {
                        certificate: cert,
                        hypotheses_met,
                        log: Vec::new(),
                        discarded_cycles: discarded_cycles_total,
                        discarded_paths: discarded_paths_total,
                    });
                }
            } else {
                log.push(format!(
                    "candidate rejected by the verifier: {:?}",
                    check.violations
                ));
            }
        }
    }
    match best {
        Some(mut e) => {
            e.log = log;
            e.discarded_cycles = discarded_cycles_total;
            e.discarded_paths = discarded_paths_total;
            Ok(e)
        }
        None => Err(ExtractError::NoCertificate { hypotheses_met }),
    }
}

fn region_contains_walk(region: &Region, walk: &Walk) -> bool {
    walk.vertices.iter().all(|v| region.vertices.contains(v))
}

/// Nested contractible cycles: order them by containment, route spokes in
/// each annulus, assemble, and certify with the outermost cycle.
fn try_nested_chain(
    ne: &NearEmbedding,
    q: &WallModel,
    members: &[ClassMember],
    confine: Option<&Region>,
    log: &mut Vec<String>,
) -> Option<PlanarWallCertificate> {
    let m = members.len();
    if m < 3 {
        return None;
    }
    // Pairwise annuli and betweenness counts.
    let mut annuli: BTreeMap<(usize, usize), Region> = BTreeMap::new();
    let mut contained = vec![vec![0usize; m]; m];
    for i in 0..m {
        for j in (i + 1)..m {
            let Ok(Some(region)) =
                are_homotopic_cycles(&ne.embedding, &members[i].walk, &members[j].walk)
            else {
                continue;
            };
            let count = (0..m)
                .filter(|&k| k != i && k != j && region_contains_walk(&region, &members[k].walk))
                .count();
            contained[i][j] = count;
            contained[j][i] = count;
            annuli.insert((i, j), region);
        }
    }
    let (mut ei, mut ej, mut bestc) = (0, 0, usize::MAX);
    for i in 0..m {
        for j in (i + 1)..m {
            if annuli.contains_key(&(i, j)) {
                let c = contained[i][j];
                if bestc == usize::MAX || c > bestc {
                    (ei, ej, bestc) = (i, j, c);
                }
            }
        }
    }
    if bestc == usize::MAX {
        log.push("no annulus witness between any pair".into());
        return None;
    }
    // Order the chain by betweenness relative to one extreme.
    let mut order: Vec<usize> = vec![ei];
    let mut rest: Vec<(usize, usize)> = (0..m)
        .filter(|&k| k != ei)
        .map(|k| {
            let key = (ei.min(k), ei.max(k));
            let c = annuli
                .get(&key)
                .map(|r| {
                    (0..m)
                        .filter(|&x| x != ei && x != k && region_contains_walk(r, &members[x].walk))
                        .count()
                })
                .unwrap_or(usize::MAX);
            (c, k)
        })
        .collect();
    rest.sort_unstable();
    if rest.iter().any(|&(c, _)| c == usize::MAX) {
        // Keep only the comparable prefix.
        rest.retain(|&(c, _)| c != usize::MAX);
    }
    order.extend(rest.iter().map(|&(_, k)| k));
    let _ = ej;

    // Decide which end is the outside: its cut must give a cuff-free disk
    // containing every other member.
    let mut chain_idx: Vec<usize> = order;
    let disk_of_end = |end: usize, chain: &[usize]| -> Option<Region> {
        let regions = cut_along(&ne.embedding, std::slice::from_ref(&members[end].walk)).ok()?;
        regions.into_iter().find(|r| {
            r.is_disk_bounded_once_by(0)
                && !r.contains_cuff(&ne.embedding)
                && chain
                    .iter()
                    .filter(|&&k| k != end)
                    .all(|&k| region_contains_walk(r, &members[k].walk))
        })
    };
    let disk = match disk_of_end(chain_idx[0], &chain_idx) {
        Some(d) => d,
        None => {
            chain_idx.reverse();
            match disk_of_end(chain_idx[0], &chain_idx) {
                Some(d) => d,
                None => {
                    log.push("neither chain end bounds a disk containing the rest".into());
                    return None;
                }
            }
        }
    };
    if let Some(region) = confine {
        if !chain_idx
            .iter()
            .all(|&k| region_contains_walk(region, &members[k].walk))
        {
            return None;
        }
    }
    let _ = disk;

    // Shrink from the inside until assembly succeeds.
    let mut len = chain_idx.len();
    while len >= 3 {
        let chain: Vec<&ClassMember> = chain_idx[..len].iter().map(|&k| &members[k]).collect();
        match assemble_chain(ne, q, &chain, log) {
            Some(model) => {
                let witness = chain[0].walk.clone();
                let disk = cut_along(&ne.embedding, std::slice::from_ref(&witness))
                    .ok()?
                    .into_iter()
                    .find(|r| {
                        r.is_disk_bounded_once_by(0)
                            && !r.contains_cuff(&ne.embedding)
                            && model
                                .host_vertices()
                                .iter()
                                .all(|v| r.vertices.contains(v))
                    })?;
                return Some(PlanarWallCertificate {
                    subwall: model,
                    witness,
                    disk,
                });
            }
            None => len -= 1,
        }
    }
    None
}

/// Routes spokes for consecutive chain cycles and assembles the model.
fn assemble_chain(
    ne: &NearEmbedding,
    q: &WallModel,
    chain: &[&ClassMember],
    log: &mut Vec<String>,
) -> Option<WallModel> {
    let mut gaps: Vec<Vec<Walk>> = Vec::with_capacity(chain.len() - 1);
    for t in 0..chain.len() - 1 {
        let outer = chain[t];
        let inner = chain[t + 1];
        let annulus = are_homotopic_cycles(&ne.embedding, &outer.walk, &inner.walk)
            .ok()
            .flatten()?;
        let mut candidates: Vec<Walk> = Vec::new();
        // Native spokes of the host wall when the meridians are adjacent.
        if outer.meridian.abs_diff(inner.meridian) == 1 {
            let lo = outer.meridian.min(inner.meridian);
            for j in 1..=(2 * q.order) {
                if !(lo + j).is_multiple_of(2) {
                    continue;
                }
                if let Some(p) = q.oriented_path((lo, j), (lo + 1, j)) {
                    let inside = p.vertices.iter().all(|v| annulus.vertices.contains(v))
                        && p.edges.iter().all(|e| ne.embedded.edges.contains(e));
                    if inside {
                        candidates.push(p);
                    }
                }
            }
        }
        if candidates.len() < chain.len() {
            // Fall back to disjoint-path routing inside the annulus.
            let allowed: BTreeSet<VertexId> = annulus
                .vertices
                .iter()
                .filter(|v| ne.embedded.vertices.contains(v))
                .copied()
                .collect();
            let sub = ne.whole.induced(&allowed);
            let sources: BTreeSet<VertexId> = outer.walk.vertex_set();
            let targets: BTreeSet<VertexId> = inner.walk.vertex_set();
            if let Ok(found) = crate::vortex::max_disjoint_paths(&sub, &sources, &targets) {
                candidates = found
                    .paths
                    .into_iter()
                    .filter_map(|p| trim_to_linkage(&p, &sources, &targets))
                    .collect();
            }
        }
        gaps.push(candidates);
    }
    let chain_walks: Vec<Walk> = chain.iter().map(|c| c.walk.clone()).collect();
    match assemble_cylindrical(&ne.whole, &chain_walks, &gaps) {
        Ok(model) => Some(model),
        Err(e) => {
            log.push(format!("assembly at order {} failed: {e}", chain.len()));
            None
        }
    }
}

/// Cuts a routed path down to its last source and first target visit.
fn trim_to_linkage(
    walk: &Walk,
    sources: &BTreeSet<VertexId>,
    targets: &BTreeSet<VertexId>,
) -> Option<Walk> {
    let last_src = walk
        .vertices
        .iter()
        .rposition(|v| sources.contains(v))?;
    let first_tgt = walk.vertices[last_src..]
        .iter()
        .position(|v| targets.contains(v))
        .map(|k| last_src + k)?;
    if first_tgt <= last_src {
        return None;
    }
    Some(Walk {
        vertices: walk.vertices[last_src..=first_tgt].to_vec(),
        edges: walk.edges[last_src..first_tgt].to_vec(),
        closed: false,
    })
}

/// Homotopic non-contractible cycles: find the longest run of adjacent
/// bands, assemble the wound wall, flatten it and extract a planar
/// cylindrical wall from the flat wall.
fn try_band(
    ne: &NearEmbedding,
    q: &WallModel,
    members: &[ClassMember],
    log: &mut Vec<String>,
) -> Option<PlanarWallCertificate> {
    let m = members.len();
    if m < 14 {
        log.push(format!("band of {m} cycles too short to flatten"));
        return None;
    }
    let cycles: Vec<Walk> = members.iter().map(|c| c.walk.clone()).collect();
    let regions = cut_along(&ne.embedding, &cycles).ok()?;
    // Adjacency through cuff-free bands.
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for r in &regions {
        if r.contains_cuff(&ne.embedding) {
            continue;
        }
        for i in 0..m {
            for j in (i + 1)..m {
                if r.is_annulus_between(i, j) {
                    adj.entry(i).or_default().push(j);
                    adj.entry(j).or_default().push(i);
                }
            }
        }
    }
    // Longest simple path through the adjacency graph by DFS.
    fn longest_from(
        adj: &BTreeMap<usize, Vec<usize>>,
        path: &mut Vec<usize>,
        seen: &mut BTreeSet<usize>,
        best: &mut Vec<usize>,
    ) {
        if path.len() > best.len() {
            *best = path.clone();
        }
        let last = *path.last().unwrap();
        if let Some(nbs) = adj.get(&last) {
            for &nb in nbs {
                if seen.insert(nb) {
                    path.push(nb);
                    longest_from(adj, path, seen, best);
                    path.pop();
                    seen.remove(&nb);
                }
            }
        }
    }
    let mut best_run: Vec<usize> = Vec::new();
    for start in 0..m {
        let mut path = vec![start];
        let mut seen = BTreeSet::from([start]);
        longest_from(&adj, &mut path, &mut seen, &mut best_run);
    }
    if best_run.len() < 14 {
        log.push(format!("longest band run {} below 14", best_run.len()));
        return None;
    }
    let chain: Vec<&ClassMember> = best_run.iter().map(|&k| &members[k]).collect();
    let mut len = chain.len();
    while len >= 14 {
        if let Some(wound) = assemble_chain(ne, q, &chain[..len], log) {
            let flat = drop_wrap(&wound);
            let s = (flat.order - 2) / 4;
            if s < 3 {
                return None;
            }
            match wall_to_cylindrical(&ne.whole, &flat, s) {
                Ok(sub) => {
                    let witness = sub.meridian(1).ok()?;
                    let disk = cut_along(&ne.embedding, std::slice::from_ref(&witness))
                        .ok()?
                        .into_iter()
                        .find(|r| {
                            r.is_disk_bounded_once_by(0)
                                && !r.contains_cuff(&ne.embedding)
                                && sub.host_vertices().iter().all(|v| r.vertices.contains(v))
                        })?;
                    log.push(format!(
                        "flattened a wound {}-wall into a cylindrical {}-wall",
                        flat.order, s
                    ));
                    return Some(PlanarWallCertificate {
                        subwall: sub,
                        witness,
                        disk,
                    });
                }
                Err(e) => {
                    log.push(format!("flattening failed: {e}"));
                    len -= 1;
                }
            }
        } else {
            len -= 1;
        }
    }
    None
}

/// Cuff-to-cuff segments: pick the extreme pair, confine the search to the
/// disk between them, count escapes against the transaction budgets, and
/// run the nested-cycle case on the meridians that stay inside.
#[allow(clippy::too_many_arguments)]
fn try_cuff_case(
    ne: &NearEmbedding,
    q: &WallModel,
    class: &SegmentClass,
    traces: &[MeridianTrace],
    a: usize,
    log: &mut Vec<String>,
    discarded_cycles: &mut usize,
    discarded_paths: &mut usize,
) -> Option<PlanarWallCertificate> {
    let ClassKind::CuffPaths { from, to } = class.kind else {
        return None;
    };
    let m = class.members.len();
    if m < 2 {
        return None;
    }
    // Extreme pair: the disk between them contains the most segments.
    let mut best: Option<(usize, usize, Region, usize)> = None;
    for i in 0..m {
        for j in (i + 1)..m {
            let Ok(Some(region)) = crate::homotopy::are_homotopic_paths(
                &ne.embedding,
                &class.members[i].walk,
                &class.members[j].walk,
                from,
                to,
            ) else {
                continue;
            };
            let count = (0..m)
                .filter(|&k| {
                    k != i && k != j && region_contains_walk(&region, &class.members[k].walk)
                })
                .count();
            if best.as_ref().is_none_or(|&(_, _, _, c)| count > c) {
                best = Some((i, j, region, count));
            }
        }
    }
    let (ei, ej, disk, inside_count) = best?;
    log.push(format!(
        "extreme segments from meridians {} and {} contain {} others",
        class.members[ei].meridian, class.members[ej].meridian, inside_count
    ));
    // Meridians of this class whose cycles escape the disk.
    let mut escapes = 0usize;
    for (k, member) in class.members.iter().enumerate() {
        if k == ei || k == ej {
            continue;
        }
        let cycle = q.meridian(member.meridian).ok()?;
        let embedded_stays = cycle
            .vertices
            .iter()
            .filter(|v| ne.embedded.vertices.contains(v))
            .all(|v| disk.vertices.contains(v));
        if !embedded_stays {
            escapes += 1;
        }
    }
    *discarded_cycles += escapes;
    if escapes > 4 * a {
        log.push(format!(
            "{escapes} escaping meridians exceed the 4a budget ({})",
            4 * a
        ));
    }
    // Full-cycle traces confined to the disk feed the nested-cycle case.
    let confined: Vec<ClassMember> = traces
        .iter()
        .filter_map(|t| {
            t.segments
                .iter()
                .find(|s| s.kind == SegmentKind::FullCycle)
                .map(|s| ClassMember {
                    meridian: t.meridian,
                    walk: s.walk.clone(),
                })
        })
        .filter(|c| region_contains_walk(&disk, &c.walk))
        .collect();
    log.push(format!(
        "{} full meridian cycles stay inside the extreme disk",
        confined.len()
    ));
    // Linkage paths of the host wall that escape the disk count against
    // the 8a budget.
    let mut path_escapes = 0usize;
    for i in 1..q.order {
        for j in 1..=(2 * q.order) {
            if (i + j) % 2 != 0 {
                continue;
            }
            if let Some(p) = q.oriented_path((i, j), (i + 1, j)) {
                let touches = p.vertices.iter().any(|v| disk.vertices.contains(v));
                let stays = p.vertices.iter().all(|v| disk.vertices.contains(v));
                if touches && !stays {
                    path_escapes += 1;
                }
            }
        }
    }
    *discarded_paths += path_escapes.min(8 * a + 1);
    try_nested_chain(ne, q, &confined, Some(&disk), log)
}
