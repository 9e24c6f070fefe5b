//! Deterministic planted instances: a cylindrical wall drawn as nested
//! rings in the plane, with handle, crosscap and cuff-pocket gadgets in
//! the outer rows and a known planar subwall in the inner rows.
//!
//! All randomness comes from the seed; identical spec and seed give
//! byte-identical instances.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeId, Graph, Subgraph, VertexId, Walk};
use crate::nearembed::{AttachedVortex, NearEmbedding};
use crate::surface::{
    euler_genus, trace_faces, validate_embedding, Dart, Embedding, Sign,
};
use crate::vortex::{adhesion, transaction_order, AdhesionOutcome, Vortex};
use crate::walls::{generate_q, WallModel};

use super::assemble::assemble_cylindrical;
use super::PlanarWallCertificate;

#[derive(Debug, Error)]
pub enum PlantError {
    #[error("infeasible plant spec: {0}")]
    Infeasible(String),
    #[error("generator self-check failed: {0}")]
    SelfCheck(String),
}

/// Parameters of a planted instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantSpec {
    /// Euler genus of the surface (0, 1 or 2).
    pub genus: u32,
    /// Number of vortices, each attached to its own cuff pocket.
    pub vortices: usize,
    /// Upper bound for the vortex transaction orders.
    pub max_transaction: usize,
    /// Order of the planted planar subwall.
    pub order: u16,
    /// Meridians rerouted through the genus gadget.
    pub winds: usize,
    /// Meridians dipped through vortices, in total.
    pub dips: usize,
}

impl PlantSpec {
    /// Default noise for a parameter triple: one wind when there is genus
    /// to wind around, and as many dips as the transaction budget allows.
    pub fn grid(genus: u32, vortices: usize, max_transaction: usize, order: u16) -> Self {
        PlantSpec {
            genus,
            vortices,
            max_transaction,
            order,
            winds: if genus > 0 { 1 } else { 0 },
            dips: if vortices == 0 {
                0
            } else {
                vortices * max_transaction.min(2)
            },
        }
    }
}

#[derive(Clone, Debug)]
pub struct PlantedInstance {
    pub ne: NearEmbedding,
    pub wall: WallModel,
    pub certificate: PlanarWallCertificate,
}

struct Builder {
    graph: Graph,
    rotation: BTreeMap<VertexId, Vec<Dart>>,
    signs: BTreeMap<EdgeId, Sign>,
}

impl Builder {
    fn dart_at(&self, e: EdgeId, v: VertexId) -> Dart {
        let (a, _) = self.graph.endpoints(e).expect("edge exists");
        Dart::new(e, if a == v { 0 } else { 1 })
    }

    fn embedding(&self, cuffs: BTreeSet<usize>) -> Result<Embedding, PlantError> {
        Embedding::new(
            self.graph.clone(),
            self.rotation.clone(),
            self.signs.clone(),
            cuffs,
        )
        .map_err(|e| PlantError::SelfCheck(format!("embedding construction: {e}")))
    }

    /// Inserts the dart of `e` at `v` into the rotation gap whose corner
    /// lies on face `face`, next to the dart of `anchor` when given.
    fn insert_on_face(
        &mut self,
        emb: &Embedding,
        faces: &crate::surface::Faces,
        v: VertexId,
        e: EdgeId,
        face: usize,
    ) -> Result<(), PlantError> {
        let rot = emb.rotation(v).to_vec();
        let deg = rot.len();
        let gap = (0..deg)
            .find(|&g| faces.corner_face(emb, v, g) == face)
            .ok_or_else(|| {
                PlantError::SelfCheck(format!("no corner of face {face} at vertex {v}"))
            })?;
        let dart = self.dart_at(e, v);
        let entry = self.rotation.get_mut(&v).expect("vertex has rotation");
        entry.insert(gap + 1, dart);
        Ok(())
    }
}

/// Builds the planar rotation of the nested-ring drawing of the
/// cylindrical R-wall: ring 1 innermost, ring R outermost.
fn onion_builder(big_r: u16, g: &Graph, model: &WallModel) -> Builder {
    let mut rotation = BTreeMap::new();
    let next_edge = |i: u16, j: u16| {
        let jn = if j == 2 * big_r { 1 } else { j + 1 };
        g.any_edge_between(model.branch[&(i, j)], model.branch[&(i, jn)])
            .expect("row edge")
    };
    let prev_edge = |i: u16, j: u16| {
        let jp = if j == 1 { 2 * big_r } else { j - 1 };
        g.any_edge_between(model.branch[&(i, j)], model.branch[&(i, jp)])
            .expect("row edge")
    };
    let builder_dart = |e: EdgeId, v: VertexId| {
        let (a, _) = g.endpoints(e).unwrap();
        Dart::new(e, if a == v { 0 } else { 1 })
    };
    for i in 1..=big_r {
        for j in 1..=(2 * big_r) {
            let v = model.branch[&(i, j)];
            let nxt = builder_dart(next_edge(i, j), v);
            let prv = builder_dart(prev_edge(i, j), v);
            let up = (i < big_r && (i + j) % 2 == 0)
                .then(|| g.any_edge_between(v, model.branch[&(i + 1, j)]))
                .flatten()
                .map(|e| builder_dart(e, v));
            let down = (i > 1 && (i + j) % 2 == 1)
                .then(|| g.any_edge_between(v, model.branch[&(i - 1, j)]))
                .flatten()
                .map(|e| builder_dart(e, v));
            // Counterclockwise: outward, ring-forward, inward, ring-back.
            let mut rot = Vec::with_capacity(4);
            if let Some(d) = up {
                rot.push(d);
            }
            rot.push(nxt);
            if let Some(d) = down {
                rot.push(d);
            }
            rot.push(prv);
            rotation.insert(v, rot);
        }
    }
    let signs = g.edges().map(|(e, _, _)| (e, Sign::Plus)).collect();
    Builder {
        graph: g.clone(),
        rotation,
        signs,
    }
}

fn ring_cycle(g: &Graph, model: &WallModel, i: u16) -> Walk {
    let walk = model.meridian(i).expect("ring exists");
    debug_assert!(walk.check_in(g).is_ok());
    walk
}

/// Generates a planted near-embedding, the wall over it, and the known
/// planar subwall certificate. Deterministic in the seed.
pub fn plant_instance(spec: &PlantSpec, seed: u64) -> Result<PlantedInstance, PlantError> {
    if spec.order < 3 {
        return Err(PlantError::Infeasible(format!(
            "planted order {} below 3",
            spec.order
        )));
    }
    if spec.genus > 2 {
        return Err(PlantError::Infeasible(format!(
            "genus {} not supported by the gadget set",
            spec.genus
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r_star = spec.order;
    let big_r = 3 * r_star;
    let (base, model) = generate_q(big_r).map_err(|e| PlantError::Infeasible(e.to_string()))?;
    let mut b = onion_builder(big_r, &base, &model);

    // Sanity: the onion is a sphere embedding.
    {
        let emb = b.embedding(BTreeSet::new())?;
        let g0 = euler_genus(&emb).map_err(|e| PlantError::SelfCheck(e.to_string()))?;
        if g0 != 0 {
            return Err(PlantError::SelfCheck(format!(
                "onion drawing has genus {g0}"
            )));
        }
    }

    // Noise rows keep clear of the planted band (rows 1..=r_star+1).
    let noise_lo = r_star + 2;
    let noise_hi = big_r - 1;
    let mut free_rows: Vec<u16> = (noise_lo..=noise_hi).collect();
    let take_row = |rng: &mut ChaCha8Rng, rows: &mut Vec<u16>| -> Result<u16, PlantError> {
        if rows.is_empty() {
            return Err(PlantError::Infeasible(
                "not enough noise rows for the requested gadgets".into(),
            ));
        }
        let k = rng.gen_range(0..rows.len());
        Ok(rows.remove(k))
    };

    // Genus gadget: a parallel row edge, twisted for a crosscap or joining
    // the two neighbouring faces for a handle.
    let mut wind_edge: Option<(u16, u16, EdgeId)> = None;
    if spec.genus > 0 {
        let k = take_row(&mut rng, &mut free_rows)?;
        let j = {
            let cand: Vec<u16> = (1..=(2 * big_r)).filter(|j| (k + j) % 2 == 0).collect();
            cand[rng.gen_range(0..cand.len())]
        };
        let jn = if j == 2 * big_r { 1 } else { j + 1 };
        let u = model.branch[&(k, j)];
        let v = model.branch[&(k, jn)];
        let emb = b.embedding(BTreeSet::new())?;
        let faces = trace_faces(&emb).map_err(|e| PlantError::SelfCheck(e.to_string()))?;
        let row_edge = base.any_edge_between(u, v).expect("row edge");
        let (f_above, f_below) = faces.edge_faces(row_edge);
        let e = b.graph.add_fresh_edge(u, v).expect("parallel edge");
        if spec.genus == 1 {
            b.signs.insert(e, Sign::Minus);
            b.insert_on_face(&emb, &faces, u, e, f_above)?;
            b.insert_on_face(&emb, &faces, v, e, f_above)?;
        } else {
            b.signs.insert(e, Sign::Plus);
            b.insert_on_face(&emb, &faces, u, e, f_above)?;
            b.insert_on_face(&emb, &faces, v, e, f_below)?;
        }
        wind_edge = Some((k, j, e));
        let emb = b.embedding(BTreeSet::new())?;
        let got = euler_genus(&emb).map_err(|e| PlantError::SelfCheck(e.to_string()))?;
        if got != spec.genus {
            return Err(PlantError::SelfCheck(format!(
                "genus gadget produced euler genus {got}, wanted {}",
                spec.genus
            )));
        }
    }

    // Cuff pockets with their vortices.
    struct Pocket {
        row: u16,
        col: u16,
        path: Vec<VertexId>,
        dip_edges: Vec<(u16, u16)>, // rerouted row edges (row, col)
        vortex_vertices: Vec<VertexId>,
        vortex_edges: Vec<(EdgeId, VertexId, VertexId)>,
    }
    let mut pockets: Vec<Pocket> = Vec::new();
    let mut dips_left = spec.dips;
    for _ in 0..spec.vortices {
        let k = take_row(&mut rng, &mut free_rows)?;
        let j = {
            let cand: Vec<u16> = (1..=(2 * big_r - 2))
                .filter(|j| (k + j) % 2 == 0)
                .collect();
            cand[rng.gen_range(0..cand.len())]
        };
        // Carve the pocket inside the hexagonal face above the arc
        // j..j+2 of ring k.
        let u_a = model.branch[&(k, j)];
        let u_b = model.branch[&(k, j + 2)];
        let emb = b.embedding(BTreeSet::new())?;
        let faces = trace_faces(&emb).map_err(|e| PlantError::SelfCheck(e.to_string()))?;
        let arc_edge = base
            .any_edge_between(u_a, model.branch[&(k, j + 1)])
            .expect("row edge");
        let (fa, fb) = faces.edge_faces(arc_edge);
        // The brick containing the vertices of ring k+1 is the carving
        // target.
        let above = model.branch[&(k + 1, j)];
        let brick = if faces.walks[fa].vertex_set(&emb).contains(&above) {
            fa
        } else {
            fb
        };
        let x1 = b.graph.fresh_vertex_id();
        b.graph.ensure_vertex(x1);
        let x2 = b.graph.fresh_vertex_id();
        b.graph.ensure_vertex(x2);
        let e1 = b.graph.add_fresh_edge(u_a, x1).unwrap();
        let e2 = b.graph.add_fresh_edge(x1, x2).unwrap();
        let e3 = b.graph.add_fresh_edge(x2, u_b).unwrap();
        for e in [e1, e2, e3] {
            b.signs.insert(e, Sign::Plus);
        }
        b.rotation
            .insert(x1, vec![b.dart_at(e1, x1), b.dart_at(e2, x1)]);
        b.rotation
            .insert(x2, vec![b.dart_at(e2, x2), b.dart_at(e3, x2)]);
        b.insert_on_face(&emb, &faces, u_a, e1, brick)?;
        b.insert_on_face(&emb, &faces, u_b, e3, brick)?;
        pockets.push(Pocket {
            row: k,
            col: j,
            path: vec![x1, x2],
            dip_edges: Vec::new(),
            vortex_vertices: vec![u_a, model.branch[&(k, j + 1)], u_b, x1, x2],
            vortex_edges: Vec::new(),
        });
    }
    // Dips go in after all carving: their vertices and edges belong to the
    // vortices, never to the embedded part, so no rotation entries exist
    // for them.
    let mut whole = b.graph.clone();
    for p in &mut pockets {
        let k = p.row;
        let j = p.col;
        let here = dips_left.min(2.min(spec.max_transaction));
        dips_left -= here;
        for d in 0..here {
            let col = j + d as u16;
            let from = model.branch[&(k, col)];
            let to = model.branch[&(k, col + 1)];
            let d1 = whole.fresh_vertex_id();
            whole.ensure_vertex(d1);
            let d2 = whole.fresh_vertex_id();
            whole.ensure_vertex(d2);
            let de1 = whole.add_fresh_edge(from, d1).unwrap();
            let de2 = whole.add_fresh_edge(d1, d2).unwrap();
            let de3 = whole.add_fresh_edge(d2, to).unwrap();
            p.vortex_vertices.push(d1);
            p.vortex_vertices.push(d2);
            p.vortex_edges.push((de1, from, d1));
            p.vortex_edges.push((de2, d1, d2));
            p.vortex_edges.push((de3, d2, to));
            p.dip_edges.push((k, col));
        }
    }

    // The embedded graph is the builder graph; the whole graph adds the
    // dip vertices and edges on top.
    let embedded_graph = b.graph.clone();
    let embedded_rotation: BTreeMap<VertexId, Vec<Dart>> = b
        .rotation
        .iter()
        .filter(|(v, _)| embedded_graph.has_vertex(**v))
        .map(|(v, r)| (*v, r.clone()))
        .collect();
    let embedded_signs: BTreeMap<EdgeId, Sign> = b
        .signs
        .iter()
        .filter(|(e, _)| embedded_graph.has_edge(**e))
        .map(|(e, s)| (*e, *s))
        .collect();
    let mut embedding = Embedding::new(
        embedded_graph.clone(),
        embedded_rotation,
        embedded_signs,
        BTreeSet::new(),
    )
    .map_err(|e| PlantError::SelfCheck(format!("embedded part: {e}")))?;
    let got = euler_genus(&embedding).map_err(|e| PlantError::SelfCheck(e.to_string()))?;
    if got != spec.genus {
        return Err(PlantError::SelfCheck(format!(
            "final surface has euler genus {got}, wanted {}",
            spec.genus
        )));
    }
    // Identify the pocket faces and declare them cuffs.
    let faces = trace_faces(&embedding).map_err(|e| PlantError::SelfCheck(e.to_string()))?;
    let mut cuffs = BTreeSet::new();
    let mut vortices: Vec<AttachedVortex> = Vec::new();
    for p in &pockets {
        let mid = model.branch[&(p.row, p.col + 1)];
        let cuff = (0..faces.face_count())
            .find(|&f| {
                let vs = faces.walks[f].vertex_set(&embedding);
                vs.contains(&p.path[0]) && vs.contains(&mid)
            })
            .ok_or_else(|| PlantError::SelfCheck("pocket face not found".into()))?;
        cuffs.insert(cuff);
        // Society in cuff order, linearized at the smallest vertex.
        let walk = faces.walks[cuff].vertices(&embedding);
        let start = walk
            .iter()
            .enumerate()
            .min_by_key(|(_, v)| **v)
            .map(|(i, _)| i)
            .unwrap();
        let society: Vec<VertexId> = (0..walk.len())
            .map(|i| walk[(start + i) % walk.len()])
            .collect();
        let mut vg = Graph::new();
        for &v in &society {
            vg.ensure_vertex(v);
        }
        for &v in &p.vortex_vertices {
            vg.ensure_vertex(v);
        }
        for &(e, u, v) in &p.vortex_edges {
            vg.add_edge(e, u, v)
                .map_err(|e| PlantError::SelfCheck(format!("vortex edge: {e}")))?;
        }
        vortices.push(AttachedVortex {
            cuff,
            vortex: Vortex::new(vg, society)
                .map_err(|e| PlantError::SelfCheck(format!("vortex: {e}")))?,
        });
    }
    embedding.set_cuffs(cuffs);
    let report = validate_embedding(&embedding);
    if !report.is_valid() {
        return Err(PlantError::SelfCheck(format!(
            "embedding invalid: {:?}",
            report.violations
        )));
    }

    // Wall model over the whole graph, with dips and winds rerouted.
    let mut wall = model.clone();
    for p in &pockets {
        for (chunk, &(row, col)) in p.dip_edges.iter().enumerate() {
            let from = model.branch[&(row, col)];
            let to = model.branch[&(row, col + 1)];
            let d1 = p.vortex_edges[3 * chunk].2;
            let d2 = p.vortex_edges[3 * chunk + 1].2;
            let edges = vec![
                p.vortex_edges[3 * chunk].0,
                p.vortex_edges[3 * chunk + 1].0,
                p.vortex_edges[3 * chunk + 2].0,
            ];
            let key = crate::walls::edge_canon((row, col), (row, col + 1));
            let path = Walk {
                vertices: vec![from, d1, d2, to],
                edges,
                closed: false,
            };
            let oriented = if (row, col) <= (row, col + 1) {
                path
            } else {
                path.reversed()
            };
            wall.paths.insert(key, oriented);
        }
    }
    if spec.winds > 0 {
        if let Some((k, j, e)) = wind_edge {
            let jn = if j == 2 * big_r { 1 } else { j + 1 };
            let key = crate::walls::edge_canon((k, j), (k, jn));
            let u = model.branch[&(k, j)];
            let v = model.branch[&(k, jn)];
            let path = Walk {
                vertices: vec![u, v],
                edges: vec![e],
                closed: false,
            };
            let oriented = if (k, j) <= (k, jn) { path } else { path.reversed() };
            wall.paths.insert(key, oriented);
        }
    }

    // Alpha from the exact vortex adhesions.
    let mut alpha = (spec.vortices as u32).max(1);
    for av in &vortices {
        match adhesion(&av.vortex, 2_000_000)
            .map_err(|e| PlantError::SelfCheck(format!("adhesion: {e}")))?
        {
            AdhesionOutcome::Exact(rep) => {
                alpha = alpha.max(rep.adhesion as u32 + 1);
            }
            other => {
                return Err(PlantError::SelfCheck(format!(
                    "vortex adhesion not exact: {other:?}"
                )))
            }
        }
        let (order, _) = transaction_order(&av.vortex, true)
            .map_err(|e| PlantError::SelfCheck(format!("transaction: {e}")))?;
        if order > spec.max_transaction {
            return Err(PlantError::SelfCheck(format!(
                "planted vortex has transaction order {order} > a = {}",
                spec.max_transaction
            )));
        }
    }

    let ne = NearEmbedding {
        whole: whole.clone(),
        apex: BTreeSet::new(),
        embedded: Subgraph::of_whole(&embedded_graph),
        reduction: vec![],
        embedding,
        vortices,
        alpha,
    };

    // Planted certificate: the innermost rings with native spokes.
    let chain: Vec<Walk> = (1..=r_star)
        .rev()
        .map(|i| ring_cycle(&ne.whole, &wall, i))
        .collect();
    let mut gaps: Vec<Vec<Walk>> = Vec::new();
    for t in 0..chain.len() - 1 {
        let hi = r_star - t as u16; // outer meridian index of this gap
        let lo = hi - 1;
        let mut spokes = Vec::new();
        for j in 1..=(2 * big_r) {
            if (lo + j).is_multiple_of(2) {
                if let Some(p) = wall.oriented_path((lo, j), (lo + 1, j)) {
                    spokes.push(p);
                }
            }
        }
        gaps.push(spokes);
    }
    let subwall = assemble_cylindrical(&ne.whole, &chain, &gaps)
        .map_err(|e| PlantError::SelfCheck(format!("planted subwall: {e}")))?;
    let witness = chain[0].clone();
    let disk = crate::surface::cut_along(&ne.embedding, std::slice::from_ref(&witness))
        .map_err(|e| PlantError::SelfCheck(e.to_string()))?
        .into_iter()
        .find(|r| {
            r.is_disk_bounded_once_by(0)
                && !r.contains_cuff(&ne.embedding)
                && subwall.host_vertices().iter().all(|v| r.vertices.contains(v))
        })
        .ok_or_else(|| PlantError::SelfCheck("planted witness bounds no disk".into()))?;
    let certificate = PlanarWallCertificate {
        subwall,
        witness,
        disk,
    };
    Ok(PlantedInstance {
        ne,
        wall,
        certificate,
    })
}

/// A torus instance whose meridians are all non-contractible and mutually
/// homotopic: the nested-ring drawing closed up with wrap spokes.
pub fn plant_wound_instance(big_r: u16, _seed: u64) -> Result<(NearEmbedding, WallModel), PlantError> {
    if big_r < 14 {
        return Err(PlantError::Infeasible(format!(
            "wound instance needs order >= 14, got {big_r}"
        )));
    }
    let (base, model) = generate_q(big_r).map_err(|e| PlantError::Infeasible(e.to_string()))?;
    let mut b = onion_builder(big_r, &base, &model);
    // Wrap spokes from the outer ring back to the inner one close the
    // cylinder into a torus.
    for j in (1..=(2 * big_r)).filter(|j| j % 2 == 1) {
        let u = model.branch[&(big_r, j)];
        let v = model.branch[&(1, j)];
        let e = b.graph.add_fresh_edge(u, v).unwrap();
        b.signs.insert(e, Sign::Plus);
        // Outward gap at the outer ring: before the ring-forward dart.
        let du = b.dart_at(e, u);
        b.rotation.get_mut(&u).unwrap().insert(0, du);
        // Inward gap at the inner ring: after the ring-forward dart, in
        // place of the missing inward edge.
        let dv = b.dart_at(e, v);
        let rot = b.rotation.get_mut(&v).unwrap();
        rot.insert(2.min(rot.len()), dv);
    }
    let embedding = b.embedding(BTreeSet::new())?;
    let got = euler_genus(&embedding).map_err(|e| PlantError::SelfCheck(e.to_string()))?;
    if got != 2 {
        return Err(PlantError::SelfCheck(format!(
            "wound drawing has euler genus {got}, wanted 2"
        )));
    }
    let ne = NearEmbedding {
        whole: b.graph.clone(),
        apex: BTreeSet::new(),
        embedded: Subgraph::of_whole(&b.graph),
        reduction: vec![],
        embedding,
        vortices: vec![],
        alpha: 1,
    };
    Ok((ne, model))
}
