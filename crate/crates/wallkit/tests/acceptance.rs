//! Acceptance suite: one test per criterion, each printing a PASS or FAIL
//! line. Expected values come from independent oracles computed in this
//! file (enumeration, brute-force search) or are verified against the
//! stated formulas before being frozen.
//!
//! Criterion 5 pins the classical transfer "adhesion < k implies
//! transaction order <= k" and fails: that claim is false already for a
//! path along the society (adhesion 0, transaction order 2). The sharp
//! provable law, order <= 2*adhesion + 2, is asserted separately and
//! holds.

use std::collections::{BTreeMap, BTreeSet};

use wallkit::extract::{
    extract_planar_subwall, plant_instance, verify_planar_certificate, PlantSpec,
};
use wallkit::formats;
use wallkit::graph::{EdgeId, Graph, VertexId, Walk};
use wallkit::homotopy::{find_homotopic_pair, CurveFamily, CurveKind};
use wallkit::nearembed::{
    apply_reduction, captured_wall_subwall, preserves_wall, replay_reduction, third_row_subwall,
    ReductionStep,
};
use wallkit::surface::{euler_genus, trace_faces, Dart, Embedding, Sign};
use wallkit::vortex::{adhesion, transaction_order, AdhesionOutcome, Vortex};
use wallkit::walls::{
    check_linkage, cylindrical_to_grid, generate_q, generate_wall, grid_to_wall, verify_wall_model,
    w1_paths, wall_to_cylindrical, CycleSegment, WallModel,
};

fn pass(n: u32, msg: &str) {
    println!("criterion {n}: PASS - {msg}");
}

fn fail(n: u32, msg: &str) -> ! {
    println!("criterion {n}: FAIL - {msg}");
    panic!("criterion {n} failed: {msg}");
}

// A small deterministic generator, independent of the library's rng use.
struct XorShift(u64);

impl XorShift {
    fn new(seed: u64) -> Self {
        XorShift(seed.max(1))
    }

    fn next(&mut self) -> u64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        self.0
    }

    fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }
}

#[test]
fn criterion_1_generator_counts() {
    let start = std::time::Instant::now();
    for r in 3..=8u16 {
        let n = u64::from(r);
        let (gq, mq) = generate_q(r).unwrap();
        assert_eq!(gq.vertex_count() as u64, 2 * n * n, "qwall vertices r={r}");
        assert_eq!(gq.edge_count() as u64, 3 * n * n - n, "qwall edges r={r}");
        let (gw, mw) = generate_wall(r).unwrap();
        assert_eq!(gw.edge_count() as u64, 3 * n * n - 2 * n, "wall edges r={r}");
        // Direct enumeration of the adjacency rules.
        let mut expect = 0u64;
        for i in 1..=i64::from(r) {
            for j in 1..=(2 * i64::from(r)) {
                // Rule (1) forward neighbour.
                expect += 1;
                // Rule (2) when the target row exists.
                let i2 = i + if (i + j) % 2 == 0 { 1 } else { -1 };
                if i2 > i && i2 <= i64::from(r) {
                    expect += 1;
                }
            }
        }
        assert_eq!(gq.edge_count() as u64, expect, "enumeration r={r}");
        assert!(verify_wall_model(&gq, &mq).is_valid());
        assert!(verify_wall_model(&gw, &mw).is_valid());
    }
    assert!(start.elapsed().as_secs() < 1, "criterion 1 over budget");
    pass(1, "Q_r and wall counts match rule enumeration for r in 3..=8");
}

fn meridian_segment(model: &WallModel, i: u16, start_col: u16, span: u16) -> CycleSegment {
    let meridian = model.meridian(i).unwrap();
    let mv = &meridian.vertices;
    let n = mv.len();
    let from = mv
        .iter()
        .position(|&v| v == model.branch[&(i, start_col)])
        .unwrap();
    let to_col = (start_col - 1 + span - 1) % (2 * model.order) + 1;
    let to = mv
        .iter()
        .position(|&v| v == model.branch[&(i, to_col)])
        .unwrap();
    let len = (to + n - from) % n + 1;
    CycleSegment {
        meridian: i,
        vertices: (0..len).map(|k| mv[(from + k) % n]).collect(),
    }
}

#[test]
fn criterion_2_meridian_linkages_exhaustive() {
    let start = std::time::Instant::now();
    let mut calls = 0usize;
    for r in [4u16, 5, 6] {
        let (g, model) = generate_q(r).unwrap();
        for i in 1..r {
            for j in (i + 1)..=r {
                let t = j - i - 1;
                if t > 3 {
                    continue;
                }
                if t == 0 {
                    let si = meridian_segment(&model, i, 1, 2);
                    let sj = meridian_segment(&model, j, 1, 2);
                    assert!(w1_paths(&g, &model, i, j, &si, &sj).unwrap().is_empty());
                    continue;
                }
                for a in 1..=(2 * r) {
                    for b in 1..=(2 * r) {
                        let si = meridian_segment(&model, i, a, 2 * t);
                        let sj = meridian_segment(&model, j, b, 2 * t);
                        let paths = w1_paths(&g, &model, i, j, &si, &sj)
                            .unwrap_or_else(|e| fail(2, &format!(
                                "router failed on r={r} i={i} j={j} a={a} b={b}: {e}"
                            )));
                        assert_eq!(paths.len(), usize::from(t));
                        let report = check_linkage(&g, &model, i, j, &si, &sj, &paths);
                        if !report.is_valid() {
                            fail(2, &format!(
                                "checker rejects router output on r={r} i={i} j={j}: {:?}",
                                report.violations
                            ));
                        }
                        calls += 1;
                    }
                }
            }
        }
    }
    assert!(start.elapsed().as_secs() < 30, "criterion 2 over budget");
    pass(2, &format!(
        "router produced verified linkages for all {calls} segment placements (t <= 3, r in 4..=6)"
    ));
}

#[test]
fn criterion_3_correspondence_round_trips() {
    let start = std::time::Instant::now();
    for r in [7u16, 9] {
        let (g, q) = generate_q(r).unwrap();
        let grid = cylindrical_to_grid(&g, &q).unwrap();
        let wall = grid_to_wall(&g, &grid).unwrap();
        assert_eq!(wall.order, (r - 1) / 2);
        assert!(verify_wall_model(&g, &wall).is_valid());
    }
    for s in [3u16, 4] {
        let (g, wall) = generate_wall(4 * s + 2).unwrap();
        let cyl = wall_to_cylindrical(&g, &wall, s).unwrap();
        assert_eq!(cyl.order, s);
        assert!(verify_wall_model(&g, &cyl).is_valid());
    }
    assert!(start.elapsed().as_secs() < 30, "criterion 3 over budget");
    pass(3, "grid and ring correspondences verify for r in {7,9} and s in {3,4}");
}

/// Concentric-ring surface with `crosscaps` twisted chords (one always in
/// the inner face) and the outer face declared a cuff. Every ring is a
/// non-contractible cycle; rings separated by a chord level are not
/// homotopic.
fn crosscap_onion(
    rings: u16,
    cols: u32,
    chord_levels: &[u16],
) -> (Embedding, Vec<Walk>) {
    let vid = |ring: u16, j: u32| VertexId(u32::from(ring) * cols + (j % cols));
    let ring_edge = |ring: u16, j: u32| EdgeId(u32::from(ring) * cols + (j % cols));
    let rung_edge =
        |ring: u16, j: u32| EdgeId(u32::from(rings) * cols + u32::from(ring) * cols + (j % cols));
    let mut g = Graph::new();
    for r in 0..rings {
        for j in 0..cols {
            g.ensure_vertex(vid(r, j));
        }
    }
    for r in 0..rings {
        for j in 0..cols {
            g.add_edge(ring_edge(r, j), vid(r, j), vid(r, j + 1)).unwrap();
        }
    }
    for r in 0..rings.saturating_sub(1) {
        for j in 0..cols {
            g.add_edge(rung_edge(r, j), vid(r, j), vid(r + 1, j)).unwrap();
        }
    }
    let mut rotation: BTreeMap<VertexId, Vec<Dart>> = BTreeMap::new();
    let dart = |g: &Graph, e: EdgeId, v: VertexId| {
        let (a, _) = g.endpoints(e).unwrap();
        Dart::new(e, if a == v { 0 } else { 1 })
    };
    for r in 0..rings {
        for j in 0..cols {
            let v = vid(r, j);
            let mut rot = vec![dart(&g, ring_edge(r, j), v)];
            if r + 1 < rings {
                rot.push(dart(&g, rung_edge(r, j), v));
            }
            rot.push(dart(&g, ring_edge(r, (j + cols - 1) % cols), v));
            if r > 0 {
                rot.push(dart(&g, rung_edge(r - 1, j), v));
            }
            rotation.insert(v, rot);
        }
    }
    let signs: BTreeMap<EdgeId, Sign> = g.edges().map(|(e, _, _)| (e, Sign::Plus)).collect();
    let mut emb = Embedding::new(g, rotation, signs, BTreeSet::new()).unwrap();
    assert_eq!(euler_genus(&emb).unwrap(), 0);

    // Twisted chords: level 0 crosses the inner face between (0,0) and
    // (0,2); level l >= 1 crosses the quad between rings l-1 and l
    // diagonally from (l-1, 0) to (l, 1).
    for &level in chord_levels {
        let (u, w) = if level == 0 {
            (vid(0, 0), vid(0, 2))
        } else {
            (vid(level - 1, 0), vid(level, 1))
        };
        let faces = trace_faces(&emb).unwrap();
        // The face holding both endpoints' corners.
        let shared = (0..faces.face_count())
            .find(|&f| {
                let vs = faces.walks[f].vertex_set(&emb);
                vs.contains(&u) && vs.contains(&w) && {
                    if level == 0 {
                        faces.walks[f].len() == cols as usize
                            && vs.iter().all(|x| x.0 < cols)
                    } else {
                        faces.walks[f].len() == 4
                    }
                }
            })
            .expect("chord face");
        let mut g2 = emb.graph().clone();
        let e = g2.add_fresh_edge(u, w).unwrap();
        let mut rotation: BTreeMap<VertexId, Vec<Dart>> =
            emb.rotations().map(|(v, r)| (v, r.to_vec())).collect();
        for v in [u, w] {
            let rot = emb.rotation(v);
            let gap = (0..rot.len())
                .find(|&gidx| faces.corner_face(&emb, v, gidx) == shared)
                .expect("corner on chord face");
            let (a, _) = g2.endpoints(e).unwrap();
            let d = Dart::new(e, if a == v { 0 } else { 1 });
            rotation.get_mut(&v).unwrap().insert(gap + 1, d);
        }
        let mut signs: BTreeMap<EdgeId, Sign> =
            emb.signs().collect();
        signs.insert(e, Sign::Minus);
        emb = Embedding::new(g2, rotation, signs, BTreeSet::new()).unwrap();
    }
    assert_eq!(euler_genus(&emb).unwrap(), chord_levels.len() as u32);
    // Outer face becomes a cuff so no ring bounds a cuff-free disk.
    let faces = trace_faces(&emb).unwrap();
    let outer_set: BTreeSet<VertexId> = (0..cols).map(|j| vid(rings - 1, j)).collect();
    let outer = (0..faces.face_count())
        .find(|&f| {
            faces.walks[f].len() == cols as usize
                && faces.walks[f].vertex_set(&emb) == outer_set
        })
        .expect("outer face");
    emb.set_cuffs(BTreeSet::from([outer]));
    let ring_walks: Vec<Walk> = (0..rings)
        .map(|r| {
            Walk::cycle_from_vertices(
                emb.graph(),
                &(0..cols).map(|j| vid(r, j)).collect::<Vec<_>>(),
            )
            .unwrap()
        })
        .collect();
    (emb, ring_walks)
}

#[test]
fn criterion_4_pigeonhole_pair_randomized() {
    let start = std::time::Instant::now();
    let mut rng = XorShift::new(0x770a11);
    let mut done = 0;
    while done < 100 {
        let genus = 1 + (done % 4) as u32;
        let family_size = 3 * genus as usize + 1;
        let rings = family_size as u16 + 2 + rng.below(3) as u16;
        let cols = 4 + rng.below(3) as u32;
        // One chord inside, the rest at distinct positive levels.
        let mut levels = vec![0u16];
        let mut avail: Vec<u16> = (1..rings).collect();
        for _ in 1..genus {
            let k = rng.below(avail.len());
            levels.push(avail.remove(k));
        }
        let (emb, ring_walks) = crosscap_onion(rings, cols, &levels);
        assert_eq!(euler_genus(&emb).unwrap(), genus);
        // Planted family: a random set of 3g+1 distinct rings.
        let mut pick: Vec<usize> = (0..rings as usize).collect();
        while pick.len() > family_size {
            let k = rng.below(pick.len());
            pick.remove(k);
        }
        let family = CurveFamily {
            kind: CurveKind::Cycles,
            members: pick.iter().map(|&k| ring_walks[k].clone()).collect(),
            cuffs: None,
        };
        let witness = match find_homotopic_pair(&emb, &family) {
            Ok(w) => w,
            Err(e) => fail(4, &format!(
                "instance {done} (genus {genus}, rings {rings}, cols {cols}): {e}"
            )),
        };
        // Verified annulus: euler characteristic zero, two single covers,
        // no cuff inside.
        if !witness.region.is_annulus_between(0, 1)
            || witness.region.contains_cuff(&emb)
        {
            fail(4, &format!("witness region is not a cuff-free annulus on instance {done}"));
        }
        done += 1;
    }
    assert!(start.elapsed().as_secs() < 60, "criterion 4 over budget");
    pass(4, "homotopic pair found with verified annulus witness on 100 planted instances");
}

/// Exhaustive adhesion oracle over all interval assignments.
fn brute_adhesion(v: &Vortex) -> Option<usize> {
    if v.nonconsecutive_society_edge().is_some() {
        return None;
    }
    let n = v.length();
    let interior = v.interior();
    let society_index: BTreeMap<VertexId, usize> = v
        .society
        .iter()
        .enumerate()
        .map(|(i, &w)| (w, i))
        .collect();
    let intervals: Vec<(usize, usize)> = (0..=n)
        .flat_map(|a| (a..=n).map(move |b| (a, b)))
        .collect();
    let mut best = None;
    let mut choice = vec![0usize; interior.len()];
    loop {
        let get = |u: &VertexId| -> (usize, usize) {
            if let Some(&w) = society_index.get(u) {
                (w.saturating_sub(1), w.min(n))
            } else {
                let k = interior.iter().position(|x| x == u).unwrap();
                intervals[choice[k]]
            }
        };
        let ok = v.graph.edges().all(|(_, a, b)| {
            if a == b {
                return true;
            }
            let (x1, y1) = get(&a);
            let (x2, y2) = get(&b);
            x1 <= y2 && x2 <= y1
        });
        if ok {
            let adh = (1..=n)
                .map(|i| {
                    interior
                        .iter()
                        .filter(|u| {
                            let (a, b) = get(u);
                            a < i && i <= b
                        })
                        .count()
                })
                .max()
                .unwrap_or(0);
            best = Some(best.map_or(adh, |b: usize| b.min(adh)));
        }
        let mut k = 0;
        loop {
            if k == choice.len() {
                return best;
            }
            choice[k] += 1;
            if choice[k] < intervals.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

fn random_vortex(rng: &mut XorShift) -> Vortex {
    let n = 2 + rng.below(5) as u32; // society length 2..=6
    let interior = rng.below(6) as u32; // up to 6 interior vertices
    let mut g = Graph::new();
    for w in 0..=n {
        g.ensure_vertex(VertexId(w));
    }
    for x in 0..interior {
        g.ensure_vertex(VertexId(100 + x));
    }
    let verts: Vec<VertexId> = g.vertices().collect();
    let mut eid = 0;
    for i in 0..verts.len() {
        for j in (i + 1)..verts.len() {
            let (a, b) = (verts[i].0, verts[j].0);
            // Keep instances feasible: no nonconsecutive society pairs.
            if a <= n && b <= n && b - a >= 2 {
                continue;
            }
            if rng.below(3) == 0 {
                g.add_edge(EdgeId(eid), verts[i], verts[j]).unwrap();
                eid += 1;
            }
        }
    }
    Vortex::new(g, (0..=n).map(VertexId).collect()).unwrap()
}

#[test]
fn criterion_5_adhesion_transaction_law_as_stated() {
    let start = std::time::Instant::now();
    let mut rng = XorShift::new(0xadbe5);
    let mut checked = 0;
    let mut parity_checked = 0;
    let mut violation: Option<String> = None;
    while checked < 200 {
        let v = random_vortex(&mut rng);
        let AdhesionOutcome::Exact(rep) = adhesion(&v, 4_000_000).unwrap() else {
            continue;
        };
        let (order, _) = transaction_order(&v, false).unwrap();
        // Independent brute-force parity on the small instances.
        if v.graph.vertex_count() <= 8 {
            let brute = brute_adhesion(&v).expect("feasible by construction");
            assert_eq!(brute, rep.adhesion, "search vs enumeration adhesion");
            parity_checked += 1;
        }
        // Sharp provable law (see the decisions ledger): always holds.
        assert!(
            order <= 2 * rep.adhesion + 2,
            "corrected law violated: adhesion {} order {order}",
            rep.adhesion
        );
        // The criterion as stated: adhesion < k implies order <= k, i.e.
        // order <= adhesion + 1.
        if order > rep.adhesion + 1 && violation.is_none() {
            violation = Some(format!(
                "vortex with society {:?} and edges {:?}: exact adhesion {}, exact transaction order {order}",
                v.society,
                v.graph.edges().collect::<Vec<_>>(),
                rep.adhesion,
            ));
        }
        checked += 1;
    }
    assert!(start.elapsed().as_secs() < 120, "criterion 5 over budget");
    assert!(parity_checked > 20, "need brute-force parity coverage");
    if let Some(counterexample) = violation {
        fail(5, &format!(
            "the stated law (adhesion < k implies transactionOrder <= k) is falsified; \
             the sharp law order <= 2*adhesion + 2 held on all 200 instances and \
             search/flow agreed with brute force on {parity_checked} small instances. \
             counterexample: {counterexample}"
        ));
    }
    pass(5, "stated adhesion/transaction law held on 200 instances");
}

#[test]
fn criterion_5_corrected_law_holds() {
    let mut rng = XorShift::new(0xadbe5);
    let mut checked = 0;
    while checked < 200 {
        let v = random_vortex(&mut rng);
        let AdhesionOutcome::Exact(rep) = adhesion(&v, 4_000_000).unwrap() else {
            continue;
        };
        let (order, _) = transaction_order(&v, false).unwrap();
        assert!(order <= 2 * rep.adhesion + 2);
        checked += 1;
    }
    pass(5, "corrected sharp law order <= 2*adhesion + 2 held on 200 instances");
}

#[test]
fn criterion_6_third_row_subwalls_randomized() {
    let start = std::time::Instant::now();
    let mut rng = XorShift::new(0x1e3a3);
    for r in [7u16, 9, 12] {
        for round in 0..5 {
            let (g0, wall) = generate_wall(r).unwrap();
            let mut g = g0.clone();
            let mut steps = Vec::new();
            // Up to 5 random single-vertex reductions off the current
            // subwall's branch set.
            for _ in 0..5 {
                let sub = third_row_subwall(&wall, 1).unwrap();
                let branch_images: BTreeSet<VertexId> = sub.branch.values().copied().collect();
                let candidates: Vec<VertexId> = g
                    .vertices()
                    .filter(|&v| {
                        !branch_images.contains(&v)
                            && g.degree(v) >= 1
                            && g.degree(v) <= 3
                    })
                    .collect();
                if candidates.is_empty() {
                    break;
                }
                let v = candidates[rng.below(candidates.len())];
                let step = ReductionStep::new(g.neighbors(v), BTreeSet::from([v]));
                if step.validate(&g).is_err() {
                    continue;
                }
                let (next, _) = apply_reduction(&g, &step).unwrap();
                g = next;
                steps.push(step);
            }
            if !preserves_wall(&g0, &steps, &wall).unwrap() {
                continue;
            }
            let sub = captured_wall_subwall(&g0, &wall, &steps, 1).unwrap_or_else(|e| {
                fail(6, &format!("repair failed on r={r} round {round}: {e}"))
            });
            assert_eq!(sub.order, (r + 1) / 3, "order formula r={r}");
            let (gpp, added) = replay_reduction(&g0, &steps).unwrap();
            let report = verify_wall_model(&gpp, &sub);
            if !report.is_valid() {
                fail(6, &format!("subwall invalid on r={r}: {:?}", report.violations));
            }
            let mut allowed = wall.host_edges();
            allowed.extend(added.into_iter().flatten());
            if !sub.host_edges().is_subset(&allowed) {
                fail(6, &format!("subwall uses edges outside H plus additions on r={r}"));
            }
        }
    }
    assert!(start.elapsed().as_secs() < 60, "criterion 6 over budget");
    pass(6, "every-third-row subwalls with repairs verified for r in {7,9,12}");
}

#[test]
fn criterion_7_planted_extraction_grid() {
    let start = std::time::Instant::now();
    let mut count = 0;
    for genus in [0u32, 1, 2] {
        for vortices in [0usize, 1, 2] {
            for a in [0usize, 2, 3] {
                for order in [3u16, 4, 5] {
                    for seed in [1u64, 2, 3] {
                        let spec = PlantSpec::grid(genus, vortices, a, order);
                        let inst = plant_instance(&spec, seed).unwrap_or_else(|e| {
                            fail(7, &format!(
                                "plant failed on ({genus},{vortices},{a},{order}) seed {seed}: {e}"
                            ))
                        });
                        let got = extract_planar_subwall(&inst.ne, &inst.wall, a)
                            .unwrap_or_else(|e| {
                                fail(7, &format!(
                                    "extraction failed on ({genus},{vortices},{a},{order}) seed {seed}: {e}"
                                ))
                            });
                        if got.certificate.subwall.order < order {
                            fail(7, &format!(
                                "extracted order {} below planted {order} on ({genus},{vortices},{a}) seed {seed}",
                                got.certificate.subwall.order
                            ));
                        }
                        let report = verify_planar_certificate(&inst.ne, &got.certificate);
                        if !report.is_valid() {
                            fail(7, &format!(
                                "verifier rejects certificate on ({genus},{vortices},{a},{order}) seed {seed}: {:?}",
                                report.violations
                            ));
                        }
                        count += 1;
                    }
                }
            }
        }
    }
    let secs = start.elapsed().as_secs();
    assert!(secs < 600, "criterion 7 over budget: {secs}s");
    pass(7, &format!(
        "{count} planted instances extracted at or above the planted order and verified ({secs}s)"
    ));
}

#[test]
fn criterion_8_certificate_fuzzing() {
    let start = std::time::Instant::now();
    let mut rng = XorShift::new(0xf022);
    let instances: Vec<_> = [
        (0u32, 0usize, 0usize, 3u16, 1u64),
        (1, 1, 2, 3, 2),
        (2, 1, 2, 4, 3),
        (0, 2, 3, 3, 4),
    ]
    .iter()
    .map(|&(g, v, a, o, s)| plant_instance(&PlantSpec::grid(g, v, a, o), s).unwrap())
    .collect();
    let mut rejected = 0;
    for k in 0..500 {
        let inst = &instances[k % instances.len()];
        let mut cert = inst.certificate.clone();
        match rng.below(5) {
            0 => {
                // Flip the witness to a short face cycle; its disk cannot
                // hold the subwall.
                let faces = trace_faces(&inst.ne.embedding).unwrap();
                let hexes: Vec<usize> = (0..faces.face_count())
                    .filter(|&f| faces.walks[f].len() == 6)
                    .collect();
                let f = hexes[rng.below(hexes.len())];
                let vs = faces.walks[f].vertices(&inst.ne.embedding);
                cert.witness =
                    Walk::cycle_from_vertices(inst.ne.embedding.graph(), &vs).unwrap();
            }
            1 => {
                // Move a subwall edge to a nonexistent id.
                let keys: Vec<_> = cert.subwall.paths.keys().copied().collect();
                let key = keys[rng.below(keys.len())];
                let path = cert.subwall.paths.get_mut(&key).unwrap();
                let e = rng.below(path.edges.len());
                path.edges[e] = EdgeId(900_000 + k as u32);
            }
            2 => {
                // Corrupt the disk region.
                let faces: Vec<usize> = cert.disk.faces.iter().copied().collect();
                cert.disk.faces.remove(&faces[rng.below(faces.len())]);
            }
            3 => {
                // Relocate a branch vertex onto a strand interior.
                let (coord, _) = cert
                    .subwall
                    .branch
                    .iter()
                    .nth(rng.below(cert.subwall.branch.len()))
                    .map(|(&c, &v)| (c, v))
                    .unwrap();
                let donor = cert
                    .subwall
                    .paths
                    .values()
                    .find(|p| p.interior().len() > 0)
                    .unwrap()
                    .interior()[0];
                cert.subwall.branch.insert(coord, donor);
            }
            _ => {
                // Truncate a path so its endpoints no longer match.
                let keys: Vec<_> = cert.subwall.paths.keys().copied().collect();
                let key = keys[rng.below(keys.len())];
                let path = cert.subwall.paths.get_mut(&key).unwrap();
                if path.vertices.len() > 2 {
                    path.vertices.pop();
                    path.edges.pop();
                } else {
                    path.vertices.push(path.vertices[0]);
                    path.edges.push(EdgeId(900_001));
                }
            }
        }
        let report = verify_planar_certificate(&inst.ne, &cert);
        if report.is_valid() {
            fail(8, &format!("false accept on mutation {k}"));
        }
        rejected += 1;
    }
    assert!(start.elapsed().as_secs() < 60, "criterion 8 over budget");
    pass(8, &format!("{rejected}/500 mutated certificates rejected, zero false accepts"));
}

#[test]
fn criterion_9_serialization_and_determinism() {
    let start = std::time::Instant::now();
    // Byte-exact round trips over a planted corpus.
    for (g, v, a, o) in [
        (0u32, 0usize, 0usize, 3u16),
        (1, 1, 2, 3),
        (2, 2, 2, 4),
        (0, 1, 3, 4),
    ] {
        let inst = plant_instance(&PlantSpec::grid(g, v, a, o), 11).unwrap();
        let files = formats::emit_ne_bundle(&inst.ne, "x");
        let by_name: BTreeMap<String, String> = files.clone().into_iter().collect();
        let read = |p: &std::path::Path| -> Result<String, std::io::Error> {
            Ok(by_name[p.file_name().unwrap().to_str().unwrap()].clone())
        };
        let ne =
            formats::parse_ne_bundle(&by_name["x.ne"], std::path::Path::new(""), &read).unwrap();
        for (name, content) in formats::emit_ne_bundle(&ne, "x") {
            assert_eq!(by_name[&name], content, "bundle file {name} not byte-exact");
        }
        let wtext = formats::emit_wall_model(&inst.wall);
        assert_eq!(
            formats::emit_wall_model(&formats::parse_wall_model(&wtext, &ne.whole).unwrap()),
            wtext
        );
        let ctext = formats::emit_certificate(&inst.certificate);
        assert_eq!(
            formats::emit_certificate(&formats::parse_certificate(&ctext, &ne).unwrap()),
            ctext
        );
        // Graph and embedding individually.
        let gt = formats::emit_graph(&inst.ne.whole);
        assert_eq!(formats::emit_graph(&formats::parse_graph(&gt).unwrap()), gt);
        let et = formats::emit_embedding(&inst.ne.embedding);
        assert_eq!(
            formats::emit_embedding(&formats::parse_embedding(&et).unwrap()),
            et
        );
    }
    // CLI determinism: same argv and seed, byte-identical outputs.
    let dir1 = tempfile::tempdir().unwrap();
    let dir2 = tempfile::tempdir().unwrap();
    for dir in [&dir1, &dir2] {
        std::fs::write(
            dir.path().join("spec.plant"),
            "genus=1\nvortices=1\nmax-transaction=2\norder=3\n",
        )
        .unwrap();
        let stem = dir.path().join("out").to_str().unwrap().to_string();
        let r = wallkit::cli::run([
            "plant".to_string(),
            dir.path().join("spec.plant").to_str().unwrap().to_string(),
            "--seed".into(),
            "9".into(),
            "--out".into(),
            stem,
        ]);
        assert_eq!(r.exit_code, 0, "{}", r.human);
    }
    for name in ["out.ne", "out.graph", "out.emb", "out.vortex0", "out.wallmodel", "out.cert"] {
        let a = std::fs::read(dir1.path().join(name)).unwrap();
        let b = std::fs::read(dir2.path().join(name)).unwrap();
        assert_eq!(a, b, "file {name} differs across runs");
    }
    assert!(start.elapsed().as_secs() < 60, "criterion 9 over budget");
    pass(9, "all formats round-trip byte-exactly; plant output is run-to-run identical");
}
