//! Homotopy of disjoint cycles and paths in an embedded graph.
//!
//! Two disjoint cycles are homotopic when they bound a cylinder free of
//! cuffs; two disjoint paths between cuffs are homotopic when they close up
//! through cuff segments into a cycle bounding a disk free of cuffs. Both
//! notions are decided by cutting the surface, so no covering-space
//! machinery is involved.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{VertexId, Walk};
use crate::surface::{cut_along, euler_genus, trace_faces, Embedding, Region, SurfaceError};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum CurveKind {
    Cycles,
    Paths,
}

/// A family of pairwise disjoint cycles, or paths joining two fixed cuffs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurveFamily {
    pub kind: CurveKind,
    pub members: Vec<Walk>,
    /// For paths: cuff of all initial vertices, cuff of all terminal ones.
    pub cuffs: Option<(usize, usize)>,
}

/// Certifying region for a homotopic pair: a cylinder for cycles, a disk
/// for paths.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HomotopyWitness {
    pub pair: (usize, usize),
    pub region: Region,
}

#[derive(Debug, Error)]
pub enum HomotopyError {
    #[error("curves share vertex {0}")]
    NotDisjoint(VertexId),
    #[error("expected a {0}")]
    WrongKind(&'static str),
    #[error("vertex {0} is not on cuff {1}")]
    NotOnCuff(VertexId, usize),
    #[error("face {0} is not a declared cuff")]
    NotACuff(usize),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("family does not meet the pigeonhole bound and no homotopic pair exists")]
    BoundNotApplicable,
    #[error("pigeonhole bound met but no homotopic pair found; the 3g bound guarantees one")]
    PigeonholeFalsified,
}

fn ensure_disjoint(a: &Walk, b: &Walk) -> Result<(), HomotopyError> {
    let sa = a.vertex_set();
    if let Some(&v) = b.vertices.iter().find(|v| sa.contains(v)) {
        return Err(HomotopyError::NotDisjoint(v));
    }
    Ok(())
}

/// Decides contractibility of a cycle: some side of the cut must be a disk
/// bounded by a single traversal of the cycle and containing no cuff.
pub fn is_contractible(emb: &Embedding, cycle: &Walk) -> Result<Option<Region>, HomotopyError> {
    if !cycle.closed {
        return Err(HomotopyError::WrongKind("cycle"));
    }
    let regions = cut_along(emb, std::slice::from_ref(cycle))?;
    Ok(regions
        .into_iter()
        .find(|r| r.is_disk_bounded_once_by(0) && !r.contains_cuff(emb)))
}

/// Decides whether two disjoint cycles bound a cuff-free cylinder.
pub fn are_homotopic_cycles(
    emb: &Embedding,
    c1: &Walk,
    c2: &Walk,
) -> Result<Option<Region>, HomotopyError> {
    if !c1.closed || !c2.closed {
        return Err(HomotopyError::WrongKind("cycle"));
    }
    ensure_disjoint(c1, c2)?;
    let regions = cut_along(emb, &[c1.clone(), c2.clone()])?;
    Ok(regions
        .into_iter()
        .find(|r| r.is_annulus_between(0, 1) && !r.contains_cuff(emb)))
}

/// Decides whether two disjoint cuff-to-cuff paths close up through cuff
/// segments into a cycle bounding a cuff-free disk.
pub fn are_homotopic_paths(
    emb: &Embedding,
    p: &Walk,
    q: &Walk,
    cuff_a: usize,
    cuff_b: usize,
) -> Result<Option<Region>, HomotopyError> {
    if p.closed || q.closed {
        return Err(HomotopyError::WrongKind("path"));
    }
    ensure_disjoint(p, q)?;
    for c in [cuff_a, cuff_b] {
        if !emb.cuffs().contains(&c) {
            return Err(HomotopyError::NotACuff(c));
        }
    }
    let faces = trace_faces(emb)?;
    let walk_a = faces.walks[cuff_a].clone();
    let walk_b = faces.walks[cuff_b].clone();
    for (w, cuff, walk) in [
        (p, cuff_a, &walk_a),
        (q, cuff_a, &walk_a),
        (p, cuff_b, &walk_b),
        (q, cuff_b, &walk_b),
    ] {
        let v = if cuff == cuff_a { w.first() } else { w.last() };
        if !walk.vertex_set(emb).contains(&v) {
            return Err(HomotopyError::NotOnCuff(v, cuff));
        }
    }

    let arcs_a = cuff_arcs(emb, &walk_a, q.first(), p.first());
    let arcs_b = cuff_arcs(emb, &walk_b, p.last(), q.last());
    for arc_b in &arcs_b {
        for arc_a in &arcs_a {
            // Close up: p, cuff-b segment, reversed q, cuff-a segment.
            let Some(cycle) = compose_cycle(&[p.clone(), arc_b.clone(), q.reversed(), arc_a.clone()])
            else {
                continue;
            };
            if cycle.check_in(emb.graph()).is_err() {
                continue;
            }
            let regions = match cut_along(emb, std::slice::from_ref(&cycle)) {
                Ok(r) => r,
                Err(_) => continue,
            };
            if let Some(r) = regions
                .into_iter()
                .find(|r| r.is_disk_bounded_once_by(0) && !r.contains_cuff(emb))
            {
                return Ok(Some(r));
            }
        }
    }
    Ok(None)
}

/// Simple arcs of a cuff face walk from `from` to `to`, both directions,
/// all occurrence choices.
fn cuff_arcs(emb: &Embedding, walk: &crate::surface::FaceWalk, from: VertexId, to: VertexId) -> Vec<Walk> {
    let n = walk.len();
    let verts = walk.vertices(emb);
    let mut out = Vec::new();
    for dir in [false, true] {
        // Walk forwards (dir=false) or backwards along the face walk.
        for start in 0..n {
            if verts[start] != from {
                continue;
            }
            let mut vs = vec![from];
            let mut es = Vec::new();
            let mut pos = start;
            for _ in 0..n {
                let (next_pos, edge, next_v) = if !dir {
                    (
                        (pos + 1) % n,
                        walk.darts[pos].edge,
                        verts[(pos + 1) % n],
                    )
                } else {
                    (
                        (pos + n - 1) % n,
                        walk.darts[(pos + n - 1) % n].edge,
                        verts[(pos + n - 1) % n],
                    )
                };
                es.push(edge);
                vs.push(next_v);
                pos = next_pos;
                if next_v == to {
                    break;
                }
            }
            if *vs.last().unwrap() != to {
                continue;
            }
            let arc = Walk {
                vertices: vs,
                edges: es,
                closed: false,
            };
            if arc.check_simple().is_ok() && !out.contains(&arc) {
                out.push(arc);
            }
        }
    }
    out
}

/// Concatenates open walks into a simple cycle, or `None` if the pieces do
/// not chain up or revisit a vertex.
fn compose_cycle(parts: &[Walk]) -> Option<Walk> {
    let mut vertices: Vec<VertexId> = Vec::new();
    let mut edges = Vec::new();
    for part in parts {
        if part.closed {
            return None;
        }
        if vertices.is_empty() {
            vertices.extend_from_slice(&part.vertices);
        } else {
            if *vertices.last().unwrap() != part.first() {
                return None;
            }
            vertices.extend_from_slice(&part.vertices[1..]);
        }
        edges.extend_from_slice(&part.edges);
    }
    if vertices.len() < 2 || vertices.first() != vertices.last() {
        return None;
    }
    vertices.pop();
    let cycle = Walk {
        vertices,
        edges,
        closed: true,
    };
    cycle.check_simple().ok()?;
    Some(cycle)
}

/// Validates a family: kind consistency, pairwise disjointness, endpoints
/// on the declared cuffs.
pub fn validate_family(emb: &Embedding, family: &CurveFamily) -> Result<(), HomotopyError> {
    for (i, m) in family.members.iter().enumerate() {
        match family.kind {
            CurveKind::Cycles if !m.closed => return Err(HomotopyError::WrongKind("cycle")),
            CurveKind::Paths if m.closed => return Err(HomotopyError::WrongKind("path")),
            _ => {}
        }
        for other in family.members.iter().take(i) {
            ensure_disjoint(m, other)?;
        }
    }
    if family.kind == CurveKind::Paths {
        let (ca, cb) = family
            .cuffs
            .ok_or(HomotopyError::WrongKind("paths with declared cuffs"))?;
        for c in [ca, cb] {
            if !emb.cuffs().contains(&c) {
                return Err(HomotopyError::NotACuff(c));
            }
        }
        let faces = trace_faces(emb)?;
        let va = faces.walks[ca].vertex_set(emb);
        let vb = faces.walks[cb].vertex_set(emb);
        for m in &family.members {
            if !va.contains(&m.first()) {
                return Err(HomotopyError::NotOnCuff(m.first(), ca));
            }
            if !vb.contains(&m.last()) {
                return Err(HomotopyError::NotOnCuff(m.last(), cb));
            }
        }
    }
    Ok(())
}

fn pairwise_test(
    emb: &Embedding,
    family: &CurveFamily,
    i: usize,
    j: usize,
) -> Result<Option<Region>, HomotopyError> {
    match family.kind {
        CurveKind::Cycles => are_homotopic_cycles(emb, &family.members[i], &family.members[j]),
        CurveKind::Paths => {
            let (ca, cb) = family.cuffs.expect("validated");
            are_homotopic_paths(emb, &family.members[i], &family.members[j], ca, cb)
        }
    }
}

/// Partitions the family into homotopy classes: the transitive closure of
/// the pairwise test. Classes are sorted by smallest member index.
pub fn classify(emb: &Embedding, family: &CurveFamily) -> Result<Vec<Vec<usize>>, HomotopyError> {
    validate_family(emb, family)?;
    let n = family.members.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let results: Result<BTreeMap<(usize, usize), bool>, HomotopyError> = pairs
        .par_iter()
        .map(|&(i, j)| Ok(((i, j), pairwise_test(emb, family, i, j)?.is_some())))
        .collect();
    let results = results?;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    for (&(i, j), &hom) in &results {
        if hom {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for x in 0..n {
        let r = find(&mut parent, x);
        classes.entry(r).or_default().push(x);
    }
    Ok(classes.into_values().collect())
}

/// Finds a witnessed homotopic pair. Families larger than `3 * genus`
/// (non-contractible cycles, or cuff-to-cuff paths) are guaranteed one.
pub fn find_homotopic_pair(
    emb: &Embedding,
    family: &CurveFamily,
) -> Result<HomotopyWitness, HomotopyError> {
    validate_family(emb, family)?;
    let n = family.members.len();
    for i in 0..n {
        for j in (i + 1)..n {
            if let Some(region) = pairwise_test(emb, family, i, j)? {
                return Ok(HomotopyWitness {
                    pair: (i, j),
                    region,
                });
            }
        }
    }
    let g = euler_genus(emb)?;
    let bound_met = n > 3 * g as usize
        && match family.kind {
            CurveKind::Cycles => family
                .members
                .iter()
                .map(|c| is_contractible(emb, c).map(|r| r.is_none()))
                .collect::<Result<Vec<_>, _>>()?
                .into_iter()
                .all(|nc| nc),
            CurveKind::Paths => true,
        };
    if bound_met {
        Err(HomotopyError::PigeonholeFalsified)
    } else {
        Err(HomotopyError::BoundNotApplicable)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{EdgeId, Graph, VertexId};
    use crate::surface::testutil::{annulus_ladder, k4_planar, toroidal_grid};
    use crate::surface::{trace_faces, Dart, Embedding};
    use std::collections::{BTreeMap, BTreeSet};

    fn row_cycle(emb: &Embedding, n: u32, i: u32) -> Walk {
        let vs: Vec<VertexId> = (0..n).map(|j| VertexId(i * n + j)).collect();
        Walk::cycle_from_vertices(emb.graph(), &vs).unwrap()
    }

    /// k concentric n-cycles joined by rungs; planar, genus 0.
    pub fn concentric_rings(k: u32, n: u32) -> Embedding {
        let vid = |ring: u32, j: u32| VertexId(ring * n + j % n);
        let ring_edge = |ring: u32, j: u32| EdgeId(ring * n + j % n);
        let rung_edge = |ring: u32, j: u32| EdgeId(k * n + ring * n + j % n);
        let mut g = Graph::new();
        for r in 0..k {
            for j in 0..n {
                g.ensure_vertex(vid(r, j));
            }
        }
        for r in 0..k {
            for j in 0..n {
                g.add_edge(ring_edge(r, j), vid(r, j), vid(r, j + 1)).unwrap();
            }
        }
        for r in 0..k.saturating_sub(1) {
            for j in 0..n {
                g.add_edge(rung_edge(r, j), vid(r, j), vid(r + 1, j)).unwrap();
            }
        }
        let mut rotation = BTreeMap::new();
        for r in 0..k {
            for j in 0..n {
                let mut rot = vec![
                    Dart::new(ring_edge(r, j), 0),
                    Dart::new(ring_edge(r, j + n - 1), 1),
                ];
                if r + 1 < k {
                    rot.insert(1, Dart::new(rung_edge(r, j), 0));
                }
                if r > 0 {
                    rot.push(Dart::new(rung_edge(r - 1, j), 1));
                }
                rotation.insert(vid(r, j), rot);
            }
        }
        Embedding::orientable(g, rotation, BTreeSet::new()).unwrap()
    }

    fn ring(emb: &Embedding, n: u32, r: u32) -> Walk {
        let vs: Vec<VertexId> = (0..n).map(|j| VertexId(r * n + j)).collect();
        Walk::cycle_from_vertices(emb.graph(), &vs).unwrap()
    }

    #[test]
    fn genus_zero_cycles_are_contractible() {
        let emb = k4_planar();
        for tri in [[1, 2, 3], [1, 2, 4], [2, 3, 4]] {
            let c = Walk::cycle_from_vertices(emb.graph(), &tri.map(VertexId)).unwrap();
            assert!(is_contractible(&emb, &c).unwrap().is_some());
        }
    }

    #[test]
    fn torus_meridian_is_not_contractible() {
        let emb = toroidal_grid(4);
        let c = row_cycle(&emb, 4, 0);
        assert!(is_contractible(&emb, &c).unwrap().is_none());
    }

    #[test]
    fn cuff_boundary_is_not_contractible() {
        let emb = annulus_ladder(true);
        let inner =
            Walk::cycle_from_vertices(emb.graph(), &(0..4).map(VertexId).collect::<Vec<_>>())
                .unwrap();
        // One side is the inner cuff face itself, the other contains the
        // outer cuff: no cuff-free disk.
        assert!(is_contractible(&emb, &inner).unwrap().is_none());
    }

    #[test]
    fn concentric_cycles_are_homotopic() {
        let emb = concentric_rings(3, 4);
        let c1 = ring(&emb, 4, 0);
        let c2 = ring(&emb, 4, 2);
        let w = are_homotopic_cycles(&emb, &c1, &c2).unwrap();
        assert!(w.is_some());
        assert_eq!(w.unwrap().euler_characteristic, 0);
    }

    #[test]
    fn parallel_torus_meridians_are_homotopic() {
        let emb = toroidal_grid(4);
        let c1 = row_cycle(&emb, 4, 0);
        let c2 = row_cycle(&emb, 4, 2);
        assert!(are_homotopic_cycles(&emb, &c1, &c2).unwrap().is_some());
    }

    #[test]
    fn meridian_not_homotopic_to_face_cycle() {
        let emb = toroidal_grid(5);
        let meridian = row_cycle(&emb, 5, 0);
        let face = Walk::cycle_from_vertices(
            emb.graph(),
            &[
                VertexId(2 * 5 + 1),
                VertexId(2 * 5 + 2),
                VertexId(3 * 5 + 2),
                VertexId(3 * 5 + 1),
            ],
        )
        .unwrap();
        assert!(are_homotopic_cycles(&emb, &meridian, &face)
            .unwrap()
            .is_none());
    }

    #[test]
    fn intersecting_cycles_rejected() {
        let emb = k4_planar();
        let c1 = Walk::cycle_from_vertices(emb.graph(), &[1, 2, 3].map(VertexId)).unwrap();
        let c2 = Walk::cycle_from_vertices(emb.graph(), &[1, 2, 4].map(VertexId)).unwrap();
        assert!(matches!(
            are_homotopic_cycles(&emb, &c1, &c2),
            Err(HomotopyError::NotDisjoint(_))
        ));
    }

    #[test]
    fn radial_paths_on_annulus_are_homotopic() {
        let emb = annulus_ladder(true);
        let cuffs: Vec<usize> = emb.cuffs().iter().copied().collect();
        let faces = trace_faces(&emb).unwrap();
        // Identify which cuff is the inner square.
        let inner_cuff = cuffs
            .iter()
            .copied()
            .find(|&c| faces.walks[c].vertex_set(&emb).contains(&VertexId(0)))
            .unwrap();
        let outer_cuff = cuffs.into_iter().find(|&c| c != inner_cuff).unwrap();
        let p = Walk::path_from_vertices(emb.graph(), &[VertexId(0), VertexId(4)]).unwrap();
        let q = Walk::path_from_vertices(emb.graph(), &[VertexId(1), VertexId(5)]).unwrap();
        let w = are_homotopic_paths(&emb, &p, &q, inner_cuff, outer_cuff).unwrap();
        assert!(w.is_some());
        assert_eq!(w.unwrap().euler_characteristic, 1);
    }

    #[test]
    fn equal_paths_rejected() {
        let emb = annulus_ladder(true);
        let p = Walk::path_from_vertices(emb.graph(), &[VertexId(0), VertexId(4)]).unwrap();
        let cuffs: Vec<usize> = emb.cuffs().iter().copied().collect();
        assert!(matches!(
            are_homotopic_paths(&emb, &p, &p.clone(), cuffs[0], cuffs[1]),
            Err(HomotopyError::NotDisjoint(_))
        ));
    }

    fn torus_with_two_cuffs() -> (Embedding, usize, usize) {
        let mut emb = toroidal_grid(4);
        let faces = trace_faces(&emb).unwrap();
        //

        // Quad faces {(0,0),(0,1),(1,1),(1,0)} and {(2,0),(2,1),(3,1),(3,0)}.
        let want_a: BTreeSet<VertexId> = [0, 1, 5, 4].map(VertexId).into();
        let want_b: BTreeSet<VertexId> = [8, 9, 13, 12].map(VertexId).into();
        let mut ca = None;
        let mut cb = None;
        for (i, w) in faces.walks.iter().enumerate() {
            let vs = w.vertex_set(&emb);
            if vs == want_a {
                ca = Some(i);
            } else if vs == want_b {
                cb = Some(i);
            }
        }
        let (ca, cb) = (ca.unwrap(), cb.unwrap());
        emb.set_cuffs(BTreeSet::from([ca, cb]));
        (emb, ca, cb)
    }

    #[test]
    fn winding_paths_are_not_homotopic() {
        let (emb, ca, cb) = torus_with_two_cuffs();
        // Direct rung from row 1 to row 2, against a path going the other
        // way around the torus.
        let p = Walk::path_from_vertices(emb.graph(), &[VertexId(4), VertexId(8)]).unwrap();
        let q = Walk::path_from_vertices(
            emb.graph(),
            &[VertexId(5), VertexId(1), VertexId(13)],
        )
        .unwrap();
        assert!(are_homotopic_paths(&emb, &p, &q, ca, cb).unwrap().is_none());
        // Control: two parallel direct rungs are homotopic.
        let q2 = Walk::path_from_vertices(emb.graph(), &[VertexId(5), VertexId(9)]).unwrap();
        assert!(are_homotopic_paths(&emb, &p, &q2, ca, cb).unwrap().is_some());
    }

    #[test]
    fn classify_concentric_cycles_single_class() {
        let emb = concentric_rings(5, 4);
        let family = CurveFamily {
            kind: CurveKind::Cycles,
            members: (0..5).map(|r| ring(&emb, 4, r)).collect(),
            cuffs: None,
        };
        let classes = classify(&emb, &family).unwrap();
        assert_eq!(classes, vec![vec![0, 1, 2, 3, 4]]);
        // On genus zero the transitive closure adds nothing: every pair in
        // a class passes the direct test.
        for class in &classes {
            for (x, &i) in class.iter().enumerate() {
                for &j in &class[x + 1..] {
                    assert!(are_homotopic_cycles(&emb, &family.members[i], &family.members[j])
                        .unwrap()
                        .is_some());
                }
            }
        }
    }

    #[test]
    fn classify_torus_mixed_family() {
        let emb = toroidal_grid(7);
        let meridians: Vec<Walk> = (0..3).map(|i| row_cycle(&emb, 7, i)).collect();
        let inner = Walk::cycle_from_vertices(
            emb.graph(),
            &[
                VertexId(4 * 7 + 1),
                VertexId(4 * 7 + 2),
                VertexId(5 * 7 + 2),
                VertexId(5 * 7 + 1),
            ],
        )
        .unwrap();
        // Boundary of the 3x3 face block with corners (3,0)..(6,3).
        let mut block = Vec::new();
        for j in 0..3 {
            block.push(VertexId(3 * 7 + j));
        }
        for i in 3..6 {
            block.push(VertexId(i * 7 + 3));
        }
        for j in (1..=3).rev() {
            block.push(VertexId(6 * 7 + j));
        }
        for i in (4..=6).rev() {
            block.push(VertexId(i * 7));
        }
        let outer = Walk::cycle_from_vertices(emb.graph(), &block).unwrap();
        let mut members = meridians;
        members.push(inner);
        members.push(outer);
        let family = CurveFamily {
            kind: CurveKind::Cycles,
            members,
            cuffs: None,
        };
        let classes = classify(&emb, &family).unwrap();
        assert_eq!(classes, vec![vec![0, 1, 2], vec![3, 4]]);
    }

    #[test]
    fn classify_empty_family() {
        let emb = k4_planar();
        let family = CurveFamily {
            kind: CurveKind::Cycles,
            members: vec![],
            cuffs: None,
        };
        assert!(classify(&emb, &family).unwrap().is_empty());
    }

    #[test]
    fn pigeonhole_pair_on_torus() {
        let emb = toroidal_grid(7);
        let family = CurveFamily {
            kind: CurveKind::Cycles,
            members: (0..7).map(|i| row_cycle(&emb, 7, i)).collect(),
            cuffs: None,
        };
        // Genus 2, seven > 3g = 6 disjoint non-contractible cycles.
        let w = find_homotopic_pair(&emb, &family).unwrap();
        assert_eq!(w.region.euler_characteristic, 0);
    }

    #[test]
    fn pair_found_below_bound() {
        let emb = toroidal_grid(4);
        let family = CurveFamily {
            kind: CurveKind::Cycles,
            members: vec![row_cycle(&emb, 4, 0), row_cycle(&emb, 4, 2)],
            cuffs: None,
        };
        assert!(find_homotopic_pair(&emb, &family).is_ok());
    }

    #[test]
    fn bound_not_applicable_reported() {
        let emb = k4_planar();
        let family = CurveFamily {
            kind: CurveKind::Cycles,
            members: vec![
                Walk::cycle_from_vertices(emb.graph(), &[1, 2, 3].map(VertexId)).unwrap(),
            ],
            cuffs: None,
        };
        assert!(matches!(
            find_homotopic_pair(&emb, &family),
            Err(HomotopyError::BoundNotApplicable)
        ));
    }

    #[test]
    fn homotopy_test_is_symmetric() {
        let emb = toroidal_grid(5);
        for (i, j) in [(0u32, 2u32), (0, 1), (1, 3)] {
            let a = row_cycle(&emb, 5, i);
            let b = row_cycle(&emb, 5, j);
            let ab = are_homotopic_cycles(&emb, &a, &b).unwrap().is_some();
            let ba = are_homotopic_cycles(&emb, &b, &a).unwrap().is_some();
            assert_eq!(ab, ba);
        }
    }
}
