//! Correspondences between walls, cylindrical walls and grids.
//!
//! A flat (4s+2)-wall contains a cylindrical s-wall (nested rings with the
//! inter-ring strands as spokes); a cylindrical r-wall contracts to an
//! r-by-r grid minor; an r-by-r grid contains a flat ((r-1)/2)-wall as a
//! subgraph through its branch sets.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{Graph, VertexId, Walk};

use super::{
    edge_canon, GridModel, WallCoord, WallError, WallKind, WallModel,
};

/// Maps an abstract coordinate walk through a subdivision model.
fn map_path(model: &WallModel, coords: &[WallCoord]) -> Result<Walk, WallError> {
    if coords.len() < 2 {
        return Ok(Walk::single_vertex(model.branch[&coords[0]]));
    }
    let mut walk: Option<Walk> = None;
    for w in coords.windows(2) {
        let seg = model.oriented_path(w[0], w[1]).ok_or_else(|| {
            WallError::InvalidModel(format!("no model path {:?} -> {:?}", w[0], w[1]))
        })?;
        walk = Some(match walk {
            None => seg,
            Some(acc) => acc.join(&seg),
        });
    }
    Ok(walk.unwrap())
}

/// Ring m of the nested-ring construction inside an R-wall, as the abstract
/// coordinate cycle (first vertex not repeated).
fn ring_coords(big_r: u16, m: u16) -> Vec<WallCoord> {
    let top = 2 * m - 1;
    let bottom = big_r + 2 - 2 * m;
    let left_pair = |row: u16| if row % 2 == 1 { 2 * m - 1 } else { 2 * m };
    let right_pair = |row: u16| {
        if row % 2 == 1 {
            2 * big_r + 1 - 2 * m
        } else {
            2 * big_r + 2 - 2 * m
        }
    };
    let mut out: Vec<WallCoord> = Vec::new();
    // Top run, left to right.
    for c in (2 * m - 1)..=(2 * big_r + 1 - 2 * m) {
        out.push((top, c));
    }
    // Right descent.
    for row in top..bottom {
        out.push((row + 1, right_pair(row)));
        if row + 1 < bottom {
            out.push((row + 1, right_pair(row + 1)));
        }
    }
    // Bottom run, right to left (the descent ends at the odd column).
    for c in ((2 * m - 1)..=(2 * big_r - 2 * m)).rev() {
        out.push((bottom, c));
    }
    // Left ascent back to the start.
    for row in ((top + 1)..=bottom).rev() {
        if row < bottom {
            out.push((row, left_pair(row - 1)));
        }
        if row - 1 > top {
            out.push((row - 1, left_pair(row - 1)));
        }
    }
    out
}

fn norm_col(x: i64, two_s: i64) -> u16 {
    ((x - 1).rem_euclid(two_s) + 1) as u16
}

/// Extracts a cylindrical s-wall from a flat wall of order at least 4s + 2:
/// s nested rings carry the meridians and short strands between consecutive
/// top runs carry the spokes.
pub fn wall_to_cylindrical(
    host: &Graph,
    wall: &WallModel,
    s: u16,
) -> Result<WallModel, WallError> {
    if wall.kind != WallKind::Flat {
        return Err(WallError::WrongKind(WallKind::Flat));
    }
    if s < 3 {
        return Err(WallError::OrderTooSmall(s));
    }
    let big_r = wall.order;
    if big_r < 4 * s + 2 {
        return Err(WallError::HostTooSmall(big_r, s, 4 * s + 2));
    }
    let two_s = i64::from(2 * s);
    let slot = |k: u16| 2 * s + 4 * k + 1; // odd spoke columns

    // Branch coordinates per ring, with their Q_s column labels.
    // Ring m: slot column x_k is the departure to ring m+1 with label
    // 2k - m, and x_k + 1 the arrival from ring m-1 with label 2k + 1 - m.
    // Boundary rings use the free position of each slot as a plain branch
    // vertex.
    let mut branch: BTreeMap<WallCoord, VertexId> = BTreeMap::new();
    let mut coord_of: BTreeMap<(u16, u16), WallCoord> = BTreeMap::new();
    for m in 1..=s {
        let top = 2 * m - 1;
        for k in 1..=s {
            let down_label = norm_col(i64::from(2 * k) - i64::from(m), two_s);
            let up_label = norm_col(i64::from(2 * k) + 1 - i64::from(m), two_s);
            coord_of.insert((m, down_label), (top, slot(k)));
            coord_of.insert((m, up_label), (top, slot(k) + 1));
        }
    }
    for (&(m, j), &coord) in &coord_of {
        let host_v = *wall
            .branch
            .get(&coord)
            .ok_or_else(|| WallError::InvalidModel(format!("missing branch {coord:?}")))?;
        branch.insert((m, j), host_v);
        let _ = j;
        let _ = m;
    }

    let mut paths: BTreeMap<super::WallEdge, Walk> = BTreeMap::new();
    // Row paths: arcs of each ring between consecutive branch vertices.
    for m in 1..=s {
        let ring = ring_coords(big_r, m);
        let pos: BTreeMap<WallCoord, usize> = ring
            .iter()
            .enumerate()
            .map(|(idx, &c)| (c, idx))
            .collect();
        if pos.len() != ring.len() {
            return Err(WallError::InvalidModel(format!(
                "ring {m} revisits a coordinate"
            )));
        }
        // Branch vertices of this ring in cycle order.
        let mut on_ring: Vec<(usize, u16)> = (1..=(2 * s))
            .map(|j| {
                let c = coord_of[&(m, j)];
                (pos[&c], j)
            })
            .collect();
        on_ring.sort_unstable();
        let n = ring.len();
        let b = on_ring.len();
        for idx in 0..b {
            let (p_from, j_from) = on_ring[idx];
            let (p_to, j_to) = on_ring[(idx + 1) % b];
            let len = (p_to + n - p_from) % n;
            let coords: Vec<WallCoord> =
                (0..=len).map(|o| ring[(p_from + o) % n]).collect();
            let walk = map_path(wall, &coords)?;
            // Arc realizes the abstract row edge (m, j_from)-(m, j_to).
            let (a, bb) = ((m, j_from), (m, j_to));
            let key = edge_canon(a, bb);
            let oriented = if a <= bb { walk } else { walk.reversed() };
            if paths.insert(key, oriented).is_some() {
                return Err(WallError::InvalidModel(format!(
                    "duplicate row path {key:?}"
                )));
            }
        }
    }
    // Spoke paths: slot strands between consecutive top runs.
    for m in 1..s {
        let top = 2 * m - 1;
        for k in 1..=s {
            let x = slot(k);
            let coords = [(top, x), (top + 1, x), (top + 1, x + 1), (top + 2, x + 1)];
            let walk = map_path(wall, &coords)?;
            let j = norm_col(i64::from(2 * k) - i64::from(m), two_s);
            let a = (m, j);
            let bb = (m + 1, j);
            let key = edge_canon(a, bb);
            let oriented = if a <= bb { walk } else { walk.reversed() };
            if paths.insert(key, oriented).is_some() {
                return Err(WallError::InvalidModel(format!(
                    "duplicate spoke path {key:?}"
                )));
            }
        }
    }
    let model = WallModel {
        order: s,
        kind: WallKind::Cylindrical,
        branch,
        paths,
    };
    let report = super::verify_wall_model(host, &model);
    if !report.is_valid() {
        return Err(WallError::InvalidModel(format!(
            "ring construction failed verification: {:?}",
            report.violations
        )));
    }
    Ok(model)
}

/// Contracts a cylindrical r-wall model into an r-by-r grid minor model:
/// branch set (i, k) is the arc of meridian i across columns 2k-1 and 2k,
/// extended by the interiors of the connecting paths.
pub fn cylindrical_to_grid(host: &Graph, model: &WallModel) -> Result<GridModel, WallError> {
    if model.kind != WallKind::Cylindrical {
        return Err(WallError::WrongKind(WallKind::Cylindrical));
    }
    let r = model.order;
    let mut branch_sets: BTreeMap<(u16, u16), BTreeSet<VertexId>> = BTreeMap::new();
    let mut witnesses = BTreeMap::new();
    for i in 1..=r {
        for k in 1..=r {
            let mut set = BTreeSet::new();
            let core = model
                .oriented_path((i, 2 * k - 1), (i, 2 * k))
                .ok_or_else(|| WallError::InvalidModel("missing row path".into()))?;
            set.extend(core.vertices.iter().copied());
            // Absorb the outgoing row connector, keeping its last vertex
            // for the neighbouring set; its final edge is the witness.
            if k < r {
                let conn = model
                    .oriented_path((i, 2 * k), (i, 2 * k + 1))
                    .ok_or_else(|| WallError::InvalidModel("missing row path".into()))?;
                set.extend(conn.vertices[..conn.vertices.len() - 1].iter().copied());
                witnesses.insert(
                    ((i, k), (i, k + 1)),
                    *conn.edges.last().expect("nonempty path"),
                );
            }
            // Absorb the downward connector at whichever of the two
            // columns carries the vertical edge.
            if i < r {
                let j = if (i + (2 * k - 1)) % 2 == 0 {
                    2 * k - 1
                } else {
                    2 * k
                };
                let conn = model
                    .oriented_path((i, j), (i + 1, j))
                    .ok_or_else(|| WallError::InvalidModel("missing vertical path".into()))?;
                set.extend(conn.vertices[..conn.vertices.len() - 1].iter().copied());
                witnesses.insert(((i, k), (i + 1, k)), *conn.edges.last().unwrap());
            }
            branch_sets.insert((i, k), set);
        }
    }
    let grid = GridModel {
        order: r,
        branch_sets,
        witnesses,
    };
    let report = super::verify_grid_model(host, &grid);
    if !report.is_valid() {
        return Err(WallError::InvalidModel(format!(
            "grid contraction failed verification: {:?}",
            report.violations
        )));
    }
    Ok(grid)
}

struct SetTree {
    parent: BTreeMap<VertexId, VertexId>,
    root: VertexId,
}

impl SetTree {
    fn build(host: &Graph, set: &BTreeSet<VertexId>) -> SetTree {
        let root = *set.iter().next().expect("nonempty branch set");
        let mut parent = BTreeMap::new();
        parent.insert(root, root);
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for v in host.neighbors(u) {
                if set.contains(&v) && !parent.contains_key(&v) {
                    parent.insert(v, u);
                    queue.push_back(v);
                }
            }
        }
        SetTree { parent, root }
    }

    fn path_to_root(&self, mut v: VertexId) -> Vec<VertexId> {
        let mut out = vec![v];
        while v != self.root {
            v = self.parent[&v];
            out.push(v);
        }
        out
    }

    fn path(&self, u: VertexId, v: VertexId) -> Vec<VertexId> {
        let pu = self.path_to_root(u);
        let pv = self.path_to_root(v);
        let su: BTreeSet<VertexId> = pu.iter().copied().collect();
        // Lowest common ancestor: first vertex of pv on pu.
        let lca_idx = pv.iter().position(|x| su.contains(x)).expect("same tree");
        let lca = pv[lca_idx];
        let mut out: Vec<VertexId> =
            pu.iter().take_while(|&&x| x != lca).copied().collect();
        out.push(lca);
        out.extend(pv[..lca_idx].iter().rev().copied());
        out
    }

    fn dist(&self, u: VertexId, v: VertexId) -> usize {
        self.path(u, v).len() - 1
    }
}

/// Picks the routing center for a branch set: a repeated attachment vertex
/// if any, otherwise the tree median of the attachments.
fn pick_center(tree: &SetTree, set: &BTreeSet<VertexId>, attach: &[VertexId]) -> VertexId {
    for (idx, &u) in attach.iter().enumerate() {
        if attach[..idx].contains(&u) {
            return u;
        }
    }
    let mut best = (usize::MAX, VertexId(u32::MAX));
    for &x in set {
        let total: usize = attach.iter().map(|&u| tree.dist(x, u)).sum();
        if (total, x) < best {
            best = (total, x);
        }
    }
    best.1
}

/// Builds a flat wall of order floor((r-1)/2) inside an r-by-r grid minor
/// model, routing through each branch set via a spanning tree.
pub fn grid_to_wall(host: &Graph, grid: &GridModel) -> Result<WallModel, WallError> {
    let r = grid.order;
    let s = (r - 1) / 2;
    if s < 3 {
        return Err(WallError::HostTooSmall(r, 3, 7));
    }
    let edges = super::abstract_edges(s, WallKind::Flat);
    // Wall vertex (a, b) uses grid branch set (a, b); collect, per set, the
    // attachment vertex of every incident witness edge.
    let grid_edge_of = |we: &super::WallEdge| -> ((u16, u16), (u16, u16)) {
        let (a, b) = *we;
        (a, b)
    };
    let mut attach: BTreeMap<(u16, u16), Vec<(super::WallEdge, VertexId)>> = BTreeMap::new();
    for &we in &edges {
        let (ga, gb) = grid_edge_of(&we);
        let w = *grid
            .witnesses
            .get(&(ga, gb))
            .ok_or_else(|| WallError::InvalidModel(format!("no witness for {ga:?}-{gb:?}")))?;
        let (u, v) = host
            .endpoints(w)
            .ok_or_else(|| WallError::InvalidModel(format!("witness edge {w} missing")))?;
        let (ua, ub) = if grid.branch_sets[&ga].contains(&u) {
            (u, v)
        } else {
            (v, u)
        };
        attach.entry(ga).or_default().push((we, ua));
        attach.entry(gb).or_default().push((we, ub));
    }
    let mut centers: BTreeMap<(u16, u16), VertexId> = BTreeMap::new();
    let mut trees: BTreeMap<(u16, u16), SetTree> = BTreeMap::new();
    for (&coord, list) in &attach {
        let set = &grid.branch_sets[&coord];
        let tree = SetTree::build(host, set);
        let pts: Vec<VertexId> = list.iter().map(|&(_, v)| v).collect();
        centers.insert(coord, pick_center(&tree, set, &pts));
        trees.insert(coord, tree);
    }
    let mut branch: BTreeMap<WallCoord, VertexId> = BTreeMap::new();
    for a in 1..=s {
        for b in 1..=(2 * s) {
            let center = *centers
                .get(&(a, b))
                .ok_or_else(|| WallError::InvalidModel(format!("isolated wall vertex ({a},{b})")))?;
            branch.insert((a, b), center);
        }
    }
    let mut paths = BTreeMap::new();
    for &we in &edges {
        let (ga, gb) = grid_edge_of(&we);
        let w = grid.witnesses[&(ga, gb)];
        let ua = attach[&ga]
            .iter()
            .find(|&&(e, _)| e == we)
            .map(|&(_, v)| v)
            .unwrap();
        let ub = attach[&gb]
            .iter()
            .find(|&&(e, _)| e == we)
            .map(|&(_, v)| v)
            .unwrap();
        let half_a = trees[&ga].path(centers[&ga], ua);
        let half_b = trees[&gb].path(ub, centers[&gb]);
        let mut vertices = half_a;
        vertices.extend(half_b);
        let mut walk_edges = Vec::new();
        for pair in vertices.windows(2) {
            let e = if (pair[0], pair[1]) == host.endpoints(w).unwrap()
                || (pair[1], pair[0]) == host.endpoints(w).unwrap()
            {
                w
            } else {
                host.any_edge_between(pair[0], pair[1]).ok_or_else(|| {
                    WallError::InvalidModel("tree step without host edge".into())
                })?
            };
            walk_edges.push(e);
        }
        let walk = Walk {
            vertices,
            edges: walk_edges,
            closed: false,
        };
        walk.check_in(host)
            .map_err(|e| WallError::InvalidModel(format!("wall edge path invalid: {e}")))?;
        paths.insert(we, walk);
    }
    let model = WallModel {
        order: s,
        kind: WallKind::Flat,
        branch,
        paths,
    };
    let report = super::verify_wall_model(host, &model);
    if !report.is_valid() {
        return Err(WallError::InvalidModel(format!(
            "grid-to-wall construction failed verification: {:?}",
            report.violations
        )));
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::super::{generate_q, generate_wall, verify_grid_model, verify_wall_model};
    use super::*;

    #[test]
    fn fourteen_wall_contains_cylindrical_three_wall() {
        let (g, wall) = generate_wall(14).unwrap();
        let cyl = wall_to_cylindrical(&g, &wall, 3).unwrap();
        assert_eq!(cyl.order, 3);
        assert!(verify_wall_model(&g, &cyl).is_valid());
    }

    #[test]
    fn eighteen_wall_contains_cylindrical_four_wall() {
        let (g, wall) = generate_wall(18).unwrap();
        let cyl = wall_to_cylindrical(&g, &wall, 4).unwrap();
        assert_eq!(cyl.order, 4);
        assert!(verify_wall_model(&g, &cyl).is_valid());
    }

    #[test]
    fn thirteen_wall_too_small_for_three() {
        let (g, wall) = generate_wall(13).unwrap();
        assert_eq!(
            wall_to_cylindrical(&g, &wall, 3).unwrap_err(),
            WallError::HostTooSmall(13, 3, 14)
        );
    }

    #[test]
    fn cylindrical_three_wall_contracts_to_grid() {
        let (g, model) = generate_q(3).unwrap();
        let grid = cylindrical_to_grid(&g, &model).unwrap();
        assert_eq!(grid.order, 3);
        assert!(verify_grid_model(&g, &grid).is_valid());
        // Contracting the branch sets yields a graph with every grid edge.
        let mut class: BTreeMap<VertexId, (u16, u16)> = BTreeMap::new();
        for (&c, set) in &grid.branch_sets {
            for &v in set {
                class.insert(v, c);
            }
        }
        let mut contracted: BTreeSet<((u16, u16), (u16, u16))> = BTreeSet::new();
        for (_, u, v) in g.edges() {
            if let (Some(&a), Some(&b)) = (class.get(&u), class.get(&v)) {
                if a != b {
                    contracted.insert((a.min(b), a.max(b)));
                }
            }
        }
        for e in super::super::grid_edges(3) {
            assert!(contracted.contains(&e), "missing grid edge {e:?}");
        }
    }

    #[test]
    fn grid_of_order_four_from_q4() {
        let (g, model) = generate_q(4).unwrap();
        let grid = cylindrical_to_grid(&g, &model).unwrap();
        assert_eq!(grid.order, 4);
        assert!(verify_grid_model(&g, &grid).is_valid());
    }

    #[test]
    fn seven_grid_contains_three_wall() {
        let (g, model) = generate_q(7).unwrap();
        let grid = cylindrical_to_grid(&g, &model).unwrap();
        let wall = grid_to_wall(&g, &grid).unwrap();
        assert_eq!(wall.order, 3);
        assert!(verify_wall_model(&g, &wall).is_valid());
    }

    #[test]
    fn nine_grid_contains_four_wall() {
        let (g, model) = generate_q(9).unwrap();
        let grid = cylindrical_to_grid(&g, &model).unwrap();
        let wall = grid_to_wall(&g, &grid).unwrap();
        assert_eq!(wall.order, 4);
        assert!(verify_wall_model(&g, &wall).is_valid());
    }

    #[test]
    fn six_grid_too_small() {
        let (g, model) = generate_q(6).unwrap();
        let grid = cylindrical_to_grid(&g, &model).unwrap();
        assert!(matches!(
            grid_to_wall(&g, &grid),
            Err(WallError::HostTooSmall(6, 3, 7))
        ));
    }

    #[test]
    fn round_trip_through_grid() {
        for r in [7u16, 9] {
            let (g, model) = generate_q(r).unwrap();
            let grid = cylindrical_to_grid(&g, &model).unwrap();
            let wall = grid_to_wall(&g, &grid).unwrap();
            assert!(verify_wall_model(&g, &wall).is_valid());
            assert_eq!(wall.order, (r - 1) / 2);
        }
    }

    #[test]
    fn determinism_of_constructions() {
        let (g, wall) = generate_wall(14).unwrap();
        let c1 = wall_to_cylindrical(&g, &wall, 3).unwrap();
        let c2 = wall_to_cylindrical(&g, &wall, 3).unwrap();
        assert_eq!(c1, c2);
        let (gq, q) = generate_q(7).unwrap();
        assert_eq!(
            cylindrical_to_grid(&gq, &q).unwrap(),
            cylindrical_to_grid(&gq, &q).unwrap()
        );
    }
}

#[cfg(test)]
mod stress_tests {
    use super::super::{generate_q, generate_wall, verify_wall_model};
    use super::*;

    #[test]
    fn larger_ring_extractions() {
        for s in [5u16, 6] {
            let (g, wall) = generate_wall(4 * s + 2).unwrap();
            let cyl = wall_to_cylindrical(&g, &wall, s).unwrap();
            assert_eq!(cyl.order, s);
            assert!(verify_wall_model(&g, &cyl).is_valid());
        }
        // Loose host: a 20-wall holds a cylindrical 4-wall with slack.
        let (g, wall) = generate_wall(20).unwrap();
        let cyl = wall_to_cylindrical(&g, &wall, 4).unwrap();
        assert!(verify_wall_model(&g, &cyl).is_valid());
    }

    #[test]
    fn larger_grid_round_trips() {
        for r in [11u16, 13] {
            let (g, q) = generate_q(r).unwrap();
            let grid = cylindrical_to_grid(&g, &q).unwrap();
            let wall = grid_to_wall(&g, &grid).unwrap();
            assert_eq!(wall.order, (r - 1) / 2);
            assert!(verify_wall_model(&g, &wall).is_valid());
        }
    }
}
