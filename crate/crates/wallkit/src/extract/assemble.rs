//! Assembly of a cylindrical wall model from a chain of disjoint cycles and
//! per-gap spoke candidates.
//!
//! The chain cycles become the meridians. Between consecutive meridians,
//! spokes are selected so that around every interior meridian the incoming
//! and outgoing attachment points strictly alternate; the attachment order
//! then transfers the column labels from one meridian to the next exactly
//! as the wall adjacency demands.

use std::collections::BTreeMap;

use crate::graph::{Graph, VertexId, Walk};
use crate::walls::{edge_canon, verify_wall_model, WallKind, WallModel};

#[derive(Debug, thiserror::Error)]
pub enum AssembleError {
    #[error("chain of {0} cycles cannot make a wall of order 3")]
    ChainTooShort(usize),
    #[error("gap {0} provides only {1} usable spokes, need {2}")]
    NotEnoughSpokes(usize, usize, usize),
    #[error("no spoke starts strictly inside an attachment arc of gap {0}")]
    NoInterlacing(usize),
    #[error("attachment order is inconsistent between meridians at gap {0}")]
    OrderMismatch(usize),
    #[error("no spacer vertex available on meridian {0}")]
    NoSpacer(u16),
    #[error("assembled model failed verification: {0}")]
    Invalid(String),
}

struct Ring {
    walk: Walk,
    pos: BTreeMap<VertexId, usize>,
}

impl Ring {
    fn new(walk: Walk) -> Self {
        let pos = walk
            .vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        Ring { walk, pos }
    }

    fn len(&self) -> usize {
        self.walk.vertices.len()
    }

    /// Arc from position a to position b inclusive, walking forward.
    fn arc(&self, a: usize, b: usize) -> Walk {
        let n = self.len();
        let len = (b + n - a) % n;
        let mut vertices = Vec::with_capacity(len + 1);
        let mut edges = Vec::with_capacity(len);
        for k in 0..=len {
            vertices.push(self.walk.vertices[(a + k) % n]);
            if k < len {
                edges.push(self.walk.edges[(a + k) % n]);
            }
        }
        Walk {
            vertices,
            edges,
            closed: false,
        }
    }

    fn reversed(&self) -> Ring {
        Ring::new(self.walk.reversed())
    }
}

/// A spoke candidate oriented from the outer meridian of its gap to the
/// inner one.
fn orient_spoke(spoke: &Walk, outer: &Ring, inner: &Ring) -> Option<Walk> {
    let starts_outer = outer.pos.contains_key(&spoke.first());
    let ends_inner = inner.pos.contains_key(&spoke.last());
    let oriented = if starts_outer && ends_inner {
        spoke.clone()
    } else if inner.pos.contains_key(&spoke.first()) && outer.pos.contains_key(&spoke.last()) {
        spoke.reversed()
    } else {
        return None;
    };
    // Interior must avoid both meridians.
    if oriented
        .interior()
        .iter()
        .any(|v| outer.pos.contains_key(v) || inner.pos.contains_key(v))
    {
        return None;
    }
    Some(oriented)
}

/// Builds a cylindrical wall model of order `chain.len()` from nested (or
/// parallel) disjoint cycles, outermost first, and candidate spokes per
/// consecutive pair. Spokes within one gap must be pairwise disjoint.
pub fn assemble_cylindrical(
    host: &Graph,
    chain: &[Walk],
    gaps: &[Vec<Walk>],
) -> Result<WallModel, AssembleError> {
    let order = chain.len();
    if order < 3 {
        return Err(AssembleError::ChainTooShort(order));
    }
    assert_eq!(gaps.len(), order - 1);
    let r = order as u16;

    // Meridian 1 is the outermost cycle; orientation of later rings is
    // fixed while selecting spokes.
    let mut rings: Vec<Ring> = Vec::with_capacity(order);
    rings.push(Ring::new(chain[0].clone()));

    // Selected spokes per gap, ordered by attachment position on the outer
    // ring of the gap; with them the start and end positions.
    let mut selected: Vec<Vec<Walk>> = Vec::with_capacity(order - 1);

    for (t, candidates) in gaps.iter().enumerate() {
        let outer = &rings[t];
        let inner_ring = Ring::new(chain[t + 1].clone());
        let mut oriented: Vec<Walk> = candidates
            .iter()
            .filter_map(|s| orient_spoke(s, outer, &inner_ring))
            .collect();
        // Deterministic order by start position on the outer ring.
        oriented.sort_by_key(|s| outer.pos[&s.first()]);
        if oriented.len() < usize::from(r) {
            return Err(AssembleError::NotEnoughSpokes(
                t,
                oriented.len(),
                usize::from(r),
            ));
        }
        let chosen: Vec<Walk> = if t == 0 {
            // Free choice: spread the picks so their starts leave room for
            // spacer vertices between consecutive attachments.
            pick_spaced(&oriented, usize::from(r), outer)
                .ok_or(AssembleError::NoSpacer(1))?
        } else {
            // Interlace with the previous gap: exactly one start strictly
            // inside each arc between consecutive landing points.
            let prev_ends: Vec<usize> = selected[t - 1]
                .iter()
                .map(|s| outer.pos[&s.last()])
                .collect();
            let mut ends_sorted = prev_ends.clone();
            ends_sorted.sort_unstable();
            let n = outer.len();
            let mut chosen = Vec::with_capacity(usize::from(r));
            for w in 0..ends_sorted.len() {
                let lo = ends_sorted[w];
                let hi = ends_sorted[(w + 1) % ends_sorted.len()];
                let inside = |p: usize| {
                    let d = (p + n - lo) % n;
                    d > 0 && d < (hi + n - lo) % n
                };
                let pick = oriented
                    .iter()
                    .find(|s| inside(outer.pos[&s.first()]))
                    .cloned()
                    .ok_or(AssembleError::NoInterlacing(t))?;
                chosen.push(pick);
            }
            chosen.sort_by_key(|s| outer.pos[&s.first()]);
            chosen
        };
        // Spokes must be pairwise disjoint.
        for i in 0..chosen.len() {
            for j in (i + 1)..chosen.len() {
                if chosen[i].meets(&chosen[j]) {
                    return Err(AssembleError::Invalid(format!(
                        "selected spokes {i} and {j} of gap {t} intersect"
                    )));
                }
            }
        }
        // Fix the inner ring direction so landing order matches start
        // order.
        let inner_oriented = match landing_direction(&chosen, outer, &inner_ring) {
            Some(true) => inner_ring,
            Some(false) => inner_ring.reversed(),
            None => return Err(AssembleError::OrderMismatch(t)),
        };
        rings.push(inner_oriented);
        selected.push(chosen);
    }

    build_model(host, r, &rings, &selected)
}

/// Picks `want` spokes whose starts are pairwise non-adjacent on the ring,
/// so spacer vertices fit between them.
fn pick_spaced(oriented: &[Walk], want: usize, ring: &Ring) -> Option<Vec<Walk>> {
    let n = ring.len();
    let mut chosen: Vec<Walk> = Vec::new();
    let mut taken: Vec<usize> = Vec::new();
    for s in oriented {
        if chosen.len() == want {
            break;
        }
        let p = ring.pos[&s.first()];
        if taken
            .iter()
            .all(|&q| (p + n - q) % n >= 2 && (q + n - p) % n >= 2)
        {
            taken.push(p);
            chosen.push(s.clone());
        }
    }
    // Also ensure the cyclic closure leaves room after the last pick.
    if chosen.len() == want {
        Some(chosen)
    } else {
        None
    }
}

/// Whether landings appear in the same cyclic order as starts (`true`), in
/// reverse (`false`), or scrambled (`None`).
fn landing_direction(chosen: &[Walk], outer: &Ring, inner: &Ring) -> Option<bool> {
    let k = chosen.len();
    if k <= 2 {
        // With up to two spokes both directions are consistent; prefer
        // forward.
        return Some(true);
    }
    let mut order: Vec<(usize, usize)> = chosen
        .iter()
        .enumerate()
        .map(|(i, s)| (outer.pos[&s.first()], i))
        .collect();
    order.sort_unstable();
    let by_start: Vec<usize> = order.into_iter().map(|(_, i)| i).collect();
    let landing_pos: Vec<usize> = by_start
        .iter()
        .map(|&i| inner.pos[&chosen[i].last()])
        .collect();
    // Rotate so the minimum comes first, then check monotonicity.
    let minpos = landing_pos
        .iter()
        .enumerate()
        .min_by_key(|(_, &p)| p)
        .map(|(i, _)| i)
        .unwrap();
    let rotated: Vec<usize> = (0..k).map(|i| landing_pos[(minpos + i) % k]).collect();
    if rotated.windows(2).all(|w| w[0] < w[1]) {
        return Some(true);
    }
    let mut rev: Vec<usize> = landing_pos.clone();
    rev.reverse();
    let minpos = rev
        .iter()
        .enumerate()
        .min_by_key(|(_, &p)| p)
        .map(|(i, _)| i)
        .unwrap();
    let rotated: Vec<usize> = (0..k).map(|i| rev[(minpos + i) % k]).collect();
    if rotated.windows(2).all(|w| w[0] < w[1]) {
        return Some(false);
    }
    None
}

fn build_model(
    host: &Graph,
    r: u16,
    rings: &[Ring],
    selected: &[Vec<Walk>],
) -> Result<WallModel, AssembleError> {
    let mut branch: BTreeMap<(u16, u16), VertexId> = BTreeMap::new();
    let mut paths: BTreeMap<((u16, u16), (u16, u16)), Walk> = BTreeMap::new();

    // Column labels per meridian: attachment vertex -> j.
    let mut labels: Vec<BTreeMap<usize, u16>> = vec![BTreeMap::new(); rings.len()];

    // Meridian 1: downward spokes at odd labels 1, 3, 5, ...
    {
        let ring = &rings[0];
        let mut starts: Vec<usize> = selected[0]
            .iter()
            .map(|s| ring.pos[&s.first()])
            .collect();
        starts.sort_unstable();
        for (k, &p) in starts.iter().enumerate() {
            labels[0].insert(p, (2 * k + 1) as u16);
        }
        // Spacers at even labels: one vertex strictly between consecutive
        // attachments.
        let n = ring.len();
        for k in 0..starts.len() {
            let lo = starts[k];
            let hi = starts[(k + 1) % starts.len()];
            let gap = (hi + n - lo) % n;
            if gap < 2 {
                return Err(AssembleError::NoSpacer(1));
            }
            labels[0].insert((lo + 1) % n, (2 * k + 2) as u16);
        }
    }
    // Interior and last meridians: landings inherit the source label;
    // next-gap starts (or spacers) take the labels in between.
    for t in 1..rings.len() {
        let ring = &rings[t];
        let n = ring.len();
        // Landing labels.
        let sources = &selected[t - 1];
        let outer = &rings[t - 1];
        for s in sources {
            let j = labels[t - 1][&outer.pos[&s.first()]];
            labels[t].insert(ring.pos[&s.last()], j);
        }
        let mut landing_pos: Vec<usize> = sources.iter().map(|s| ring.pos[&s.last()]).collect();
        landing_pos.sort_unstable();
        if t < rings.len() - 1 {
            // One downward start strictly inside each landing arc; its
            // label sits between the two landing labels.
            for s in &selected[t] {
                let p = ring.pos[&s.first()];
                // Find the arc (lo, hi) containing p.
                let lo = landing_pos
                    .iter()
                    .copied()
                    .min_by_key(|&q| (p + n - q) % n)
                    .unwrap();
                let j_lo = labels[t][&lo];
                let j = if j_lo == 2 * r { 1 } else { j_lo + 1 };
                labels[t].insert(p, j);
            }
        } else {
            // Innermost meridian: spacers between landings.
            for w in 0..landing_pos.len() {
                let lo = landing_pos[w];
                let hi = landing_pos[(w + 1) % landing_pos.len()];
                if (hi + n - lo) % n < 2 {
                    return Err(AssembleError::NoSpacer(t as u16 + 1));
                }
                let j_lo = labels[t][&lo];
                let j = if j_lo == 2 * r { 1 } else { j_lo + 1 };
                labels[t].insert((lo + 1) % n, j);
            }
        }
        if labels[t].len() != usize::from(2 * r) {
            return Err(AssembleError::Invalid(format!(
                "meridian {} carries {} labels, expected {}",
                t + 1,
                labels[t].len(),
                2 * r
            )));
        }
    }

    // Branch vertices and row paths.
    for (t, ring) in rings.iter().enumerate() {
        let i = (t + 1) as u16;
        let by_pos: Vec<(usize, u16)> = labels[t].iter().map(|(&p, &j)| (p, j)).collect();
        for &(p, j) in &by_pos {
            branch.insert((i, j), ring.walk.vertices[p]);
        }
        // Labels must be cyclically consecutive around the ring.
        for w in 0..by_pos.len() {
            let (p, j) = by_pos[w];
            let (q, j2) = by_pos[(w + 1) % by_pos.len()];
            let expect = if j == 2 * r { 1 } else { j + 1 };
            if j2 != expect {
                return Err(AssembleError::Invalid(format!(
                    "labels around meridian {i} are not consecutive ({j} then {j2})"
                )));
            }
            let arc = ring.arc(p, q);
            let a = (i, j);
            let b = (i, j2);
            let key = edge_canon(a, b);
            let oriented = if a <= b { arc } else { arc.reversed() };
            paths.insert(key, oriented);
        }
    }
    // Spoke paths.
    for (t, spokes) in selected.iter().enumerate() {
        let i = (t + 1) as u16;
        let outer = &rings[t];
        for s in spokes {
            let j = labels[t][&outer.pos[&s.first()]];
            let a = (i, j);
            let b = (i + 1, j);
            let key = edge_canon(a, b);
            let oriented = if a <= b { s.clone() } else { s.reversed() };
            paths.insert(key, oriented);
        }
    }

    let model = WallModel {
        order: r,
        kind: WallKind::Cylindrical,
        branch,
        paths,
    };
    let report = verify_wall_model(host, &model);
    if !report.is_valid() {
        return Err(AssembleError::Invalid(format!(
            "{:?}",
            report.violations
        )));
    }
    Ok(model)
}

/// Drops the wrap paths of a cylindrical model, leaving the flat wall of
/// the same order.
pub fn drop_wrap(model: &WallModel) -> WallModel {
    let r = model.order;
    let mut flat = model.clone();
    flat.kind = WallKind::Flat;
    for i in 1..=r {
        flat.paths.remove(&edge_canon((i, 2 * r), (i, 1)));
    }
    flat
}
