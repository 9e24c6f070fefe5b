//! Line-oriented file formats. Every emitter writes a canonical form, so
//! parse-then-emit reproduces files byte for byte. `#` starts a comment,
//! tokens are whitespace-separated.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::extract::PlanarWallCertificate;
use crate::graph::{EdgeId, Graph, Subgraph, VertexId, Walk};
use crate::homotopy::{CurveFamily, CurveKind};
use crate::nearembed::{AttachedVortex, NearEmbedding, ReductionStep};
use crate::surface::{cut_along, Dart, Embedding, Sign};
use crate::vortex::{Vortex, VortexDecomposition};
use crate::walls::{WallCoord, WallEdge, WallKind, WallModel};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {0}: {1}")]
    Line(usize, String),
    #[error("{0}")]
    Structure(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

fn fail<T>(line: usize, msg: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError::Line(line, msg.into()))
}

/// Numbered, comment-stripped, nonempty lines.
fn lines(text: &str) -> Vec<(usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| (i, l.split_whitespace().collect()))
        .collect()
}

fn parse_u32(line: usize, tok: &str) -> Result<u32, FormatError> {
    tok.parse()
        .map_err(|_| FormatError::Line(line, format!("expected a number, got {tok:?}")))
}

fn parse_vertex(line: usize, tok: &str) -> Result<VertexId, FormatError> {
    Ok(VertexId(parse_u32(line, tok)?))
}

// ---------------------------------------------------------------- graphs

pub fn emit_graph(g: &Graph) -> String {
    let mut out = String::new();
    for v in g.vertices() {
        writeln!(out, "vertex {v}").unwrap();
    }
    for (e, u, v) in g.edges() {
        writeln!(out, "edge {e} {u} {v}").unwrap();
    }
    out
}

pub fn parse_graph(text: &str) -> Result<Graph, FormatError> {
    let mut g = Graph::new();
    for (n, toks) in lines(text) {
        match toks[0] {
            "vertex" if toks.len() == 2 => {
                g.ensure_vertex(parse_vertex(n, toks[1])?);
            }
            "edge" if toks.len() == 4 => {
                let e = EdgeId(parse_u32(n, toks[1])?);
                let u = parse_vertex(n, toks[2])?;
                let v = parse_vertex(n, toks[3])?;
                g.ensure_vertex(u);
                g.ensure_vertex(v);
                g.add_edge(e, u, v)
                    .map_err(|err| FormatError::Line(n, err.to_string()))?;
            }
            other => return fail(n, format!("unexpected token {other:?}")),
        }
    }
    Ok(g)
}

// ------------------------------------------------------------ embeddings

fn parse_dart(line: usize, tok: &str) -> Result<Dart, FormatError> {
    let (num, end) = tok.split_at(tok.len().saturating_sub(1));
    let end = match end {
        "a" => 0,
        "b" => 1,
        _ => return fail(line, format!("dart {tok:?} must end in 'a' or 'b'")),
    };
    Ok(Dart::new(EdgeId(parse_u32(line, num)?), end))
}

pub fn emit_embedding(emb: &Embedding) -> String {
    let mut out = String::new();
    for (v, rot) in emb.rotations() {
        let darts: Vec<String> = rot.iter().map(|d| d.to_string()).collect();
        writeln!(out, "vertex {v}: {}", darts.join(" ")).unwrap();
    }
    for (e, sign) in emb.signs() {
        let s = if sign == Sign::Minus { "-1" } else { "+1" };
        writeln!(out, "edge {e}: {} {} sign {s}", Dart::new(e, 0), Dart::new(e, 1)).unwrap();
    }
    for c in emb.cuffs() {
        writeln!(out, "cuff: {c}").unwrap();
    }
    out
}

pub fn parse_embedding(text: &str) -> Result<Embedding, FormatError> {
    let mut rotation: BTreeMap<VertexId, Vec<Dart>> = BTreeMap::new();
    let mut signs: BTreeMap<EdgeId, Sign> = BTreeMap::new();
    let mut cuffs: BTreeSet<usize> = BTreeSet::new();
    let mut edge_lines: Vec<(usize, EdgeId)> = Vec::new();
    for (n, toks) in lines(text) {
        match toks[0] {
            "vertex" if toks.len() >= 2 => {
                let id = toks[1].trim_end_matches(':');
                let v = parse_vertex(n, id)?;
                let mut rot = Vec::new();
                for tok in &toks[2..] {
                    rot.push(parse_dart(n, tok)?);
                }
                rotation.insert(v, rot);
            }
            "edge" if toks.len() == 6 && toks[4] == "sign" => {
                let id = toks[1].trim_end_matches(':');
                let e = EdgeId(parse_u32(n, id)?);
                let sign = match toks[5] {
                    "+1" => Sign::Plus,
                    "-1" => Sign::Minus,
                    s => return fail(n, format!("sign {s:?} must be +1 or -1")),
                };
                signs.insert(e, sign);
                edge_lines.push((n, e));
            }
            "cuff:" if toks.len() == 2 => {
                cuffs.insert(parse_u32(n, toks[1])? as usize);
            }
            other => return fail(n, format!("unexpected token {other:?}")),
        }
    }
    // Endpoints are recovered from where each dart sits.
    let mut at: BTreeMap<Dart, VertexId> = BTreeMap::new();
    for (&v, rot) in &rotation {
        for &d in rot {
            at.insert(d, v);
        }
    }
    let mut g = Graph::new();
    for &v in rotation.keys() {
        g.ensure_vertex(v);
    }
    for (n, e) in edge_lines {
        let a = at
            .get(&Dart::new(e, 0))
            .ok_or(FormatError::Line(n, format!("dart {e}a not in any rotation")))?;
        let b = at
            .get(&Dart::new(e, 1))
            .ok_or(FormatError::Line(n, format!("dart {e}b not in any rotation")))?;
        g.add_edge(e, *a, *b)
            .map_err(|err| FormatError::Line(n, err.to_string()))?;
    }
    Embedding::new(g, rotation, signs, cuffs).map_err(|e| FormatError::Structure(e.to_string()))
}

// -------------------------------------------------------------- vortices

pub fn emit_vortex(v: &Vortex) -> String {
    let mut out = String::new();
    let society: Vec<String> = v.society.iter().map(|w| w.to_string()).collect();
    writeln!(out, "society: {}", society.join(" ")).unwrap();
    for u in v.interior() {
        writeln!(out, "v {u}").unwrap();
    }
    for (e, a, b) in v.graph.edges() {
        writeln!(out, "e {e} {a} {b}").unwrap();
    }
    out
}

pub fn parse_vortex(text: &str) -> Result<Vortex, FormatError> {
    let mut society: Vec<VertexId> = Vec::new();
    let mut g = Graph::new();
    for (n, toks) in lines(text) {
        match toks[0] {
            "society:" => {
                for tok in &toks[1..] {
                    let w = parse_vertex(n, tok)?;
                    society.push(w);
                    g.ensure_vertex(w);
                }
            }
            "v" if toks.len() == 2 => {
                g.ensure_vertex(parse_vertex(n, toks[1])?);
            }
            "e" if toks.len() == 4 => {
                let e = EdgeId(parse_u32(n, toks[1])?);
                let a = parse_vertex(n, toks[2])?;
                let b = parse_vertex(n, toks[3])?;
                g.ensure_vertex(a);
                g.ensure_vertex(b);
                g.add_edge(e, a, b)
                    .map_err(|err| FormatError::Line(n, err.to_string()))?;
            }
            other => return fail(n, format!("unexpected token {other:?}")),
        }
    }
    Vortex::new(g, society).map_err(|e| FormatError::Structure(e.to_string()))
}

pub fn emit_decomposition(d: &VortexDecomposition) -> String {
    let mut out = String::new();
    for part in &d.parts {
        let vs: Vec<String> = part.iter().map(|v| v.to_string()).collect();
        writeln!(out, "part: {}", vs.join(" ")).unwrap();
    }
    out
}

pub fn parse_decomposition(text: &str) -> Result<VortexDecomposition, FormatError> {
    let mut parts = Vec::new();
    for (n, toks) in lines(text) {
        if toks[0] != "part:" {
            return fail(n, format!("unexpected token {:?}", toks[0]));
        }
        let mut part = BTreeSet::new();
        for tok in &toks[1..] {
            part.insert(parse_vertex(n, tok)?);
        }
        parts.push(part);
    }
    Ok(VortexDecomposition { parts })
}

// ------------------------------------------------------------ wall models

fn coord_token(c: WallCoord) -> String {
    format!("{},{}", c.0, c.1)
}

fn parse_coord(line: usize, tok: &str) -> Result<WallCoord, FormatError> {
    let (a, b) = tok
        .split_once(',')
        .ok_or(FormatError::Line(line, format!("coordinate {tok:?}")))?;
    Ok((
        parse_u32(line, a)? as u16,
        parse_u32(line, b)? as u16,
    ))
}

pub fn emit_wall_model(m: &WallModel) -> String {
    let mut out = String::new();
    writeln!(out, "r {}", m.order).unwrap();
    writeln!(
        out,
        "kind {}",
        match m.kind {
            WallKind::Cylindrical => "cylindrical",
            WallKind::Flat => "flat",
        }
    )
    .unwrap();
    for (&(i, j), &v) in &m.branch {
        writeln!(out, "branch {i} {j} {v}").unwrap();
    }
    for (&(a, b), walk) in &m.paths {
        let vs: Vec<String> = walk.vertices.iter().map(|v| v.to_string()).collect();
        writeln!(
            out,
            "path {}-{}: {}",
            coord_token(a),
            coord_token(b),
            vs.join(" ")
        )
        .unwrap();
    }
    out
}

pub fn parse_wall_model(text: &str, host: &Graph) -> Result<WallModel, FormatError> {
    let mut order: Option<u16> = None;
    let mut kind = WallKind::Cylindrical;
    let mut branch: BTreeMap<WallCoord, VertexId> = BTreeMap::new();
    let mut paths: BTreeMap<WallEdge, Walk> = BTreeMap::new();
    for (n, toks) in lines(text) {
        match toks[0] {
            "r" if toks.len() == 2 => order = Some(parse_u32(n, toks[1])? as u16),
            "kind" if toks.len() == 2 => {
                kind = match toks[1] {
                    "cylindrical" => WallKind::Cylindrical,
                    "flat" => WallKind::Flat,
                    k => return fail(n, format!("kind {k:?}")),
                };
            }
            "branch" if toks.len() == 4 => {
                let i = parse_u32(n, toks[1])? as u16;
                let j = parse_u32(n, toks[2])? as u16;
                branch.insert((i, j), parse_vertex(n, toks[3])?);
            }
            "path" if toks.len() >= 3 => {
                let key = toks[1].trim_end_matches(':');
                let (a, b) = key
                    .split_once('-')
                    .ok_or(FormatError::Line(n, format!("path key {key:?}")))?;
                let a = parse_coord(n, a)?;
                let b = parse_coord(n, b)?;
                let mut vs = Vec::new();
                for tok in &toks[2..] {
                    vs.push(parse_vertex(n, tok)?);
                }
                let walk = Walk::path_from_vertices(host, &vs)
                    .map_err(|e| FormatError::Line(n, e.to_string()))?;
                paths.insert(crate::walls::edge_canon(a, b), walk);
            }
            other => return fail(n, format!("unexpected token {other:?}")),
        }
    }
    Ok(WallModel {
        order: order.ok_or(FormatError::Structure("missing r line".into()))?,
        kind,
        branch,
        paths,
    })
}

// ----------------------------------------------------------- curve family

pub fn emit_family(f: &CurveFamily) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "kind {}",
        match f.kind {
            CurveKind::Cycles => "cycles",
            CurveKind::Paths => "paths",
        }
    )
    .unwrap();
    if let Some((a, b)) = f.cuffs {
        writeln!(out, "cuffs {a} {b}").unwrap();
    }
    for m in &f.members {
        let vs: Vec<String> = m.vertices.iter().map(|v| v.to_string()).collect();
        writeln!(out, "curve: {}", vs.join(" ")).unwrap();
    }
    out
}

pub fn parse_family(text: &str, host: &Graph) -> Result<CurveFamily, FormatError> {
    let mut kind = CurveKind::Cycles;
    let mut cuffs = None;
    let mut members = Vec::new();
    for (n, toks) in lines(text) {
        match toks[0] {
            "kind" if toks.len() == 2 => {
                kind = match toks[1] {
                    "cycles" => CurveKind::Cycles,
                    "paths" => CurveKind::Paths,
                    k => return fail(n, format!("kind {k:?}")),
                };
            }
            "cuffs" if toks.len() == 3 => {
                cuffs = Some((
                    parse_u32(n, toks[1])? as usize,
                    parse_u32(n, toks[2])? as usize,
                ));
            }
            "curve:" => {
                let mut vs = Vec::new();
                for tok in &toks[1..] {
                    vs.push(parse_vertex(n, tok)?);
                }
                let walk = match kind {
                    CurveKind::Cycles => Walk::cycle_from_vertices(host, &vs),
                    CurveKind::Paths => Walk::path_from_vertices(host, &vs),
                }
                .map_err(|e| FormatError::Line(n, e.to_string()))?;
                members.push(walk);
            }
            other => return fail(n, format!("unexpected token {other:?}")),
        }
    }
    Ok(CurveFamily {
        kind,
        members,
        cuffs,
    })
}

// -------------------------------------------------------- reduction steps

pub fn emit_steps(steps: &[ReductionStep]) -> String {
    let mut out = String::new();
    for s in steps {
        let cut: Vec<String> = s.cut.iter().map(|v| v.to_string()).collect();
        let drop: Vec<String> = s.dropped.iter().map(|v| v.to_string()).collect();
        writeln!(out, "step cut {} drop {}", cut.join(" "), drop.join(" ")).unwrap();
    }
    out
}

pub fn parse_steps(text: &str) -> Result<Vec<ReductionStep>, FormatError> {
    let mut steps = Vec::new();
    for (n, toks) in lines(text) {
        if toks[0] != "step" || toks.get(1) != Some(&"cut") {
            return fail(n, "expected 'step cut <v..> drop <v..>'");
        }
        let drop_pos = toks
            .iter()
            .position(|&t| t == "drop")
            .ok_or(FormatError::Line(n, "missing 'drop'".into()))?;
        let mut cut = Vec::new();
        for tok in &toks[2..drop_pos] {
            cut.push(parse_vertex(n, tok)?);
        }
        let mut dropped = BTreeSet::new();
        for tok in &toks[drop_pos + 1..] {
            dropped.insert(parse_vertex(n, tok)?);
        }
        steps.push(ReductionStep::new(cut, dropped));
    }
    Ok(steps)
}

// ----------------------------------------------------------- certificates

pub fn emit_certificate(c: &PlanarWallCertificate) -> String {
    let mut out = emit_wall_model(&c.subwall);
    let mut vs: Vec<String> = c.witness.vertices.iter().map(|v| v.to_string()).collect();
    vs.push(c.witness.vertices[0].to_string());
    writeln!(out, "witness-cycle: {}", vs.join(" ")).unwrap();
    let fs: Vec<String> = c.disk.faces.iter().map(|f| f.to_string()).collect();
    writeln!(out, "disk: {}", fs.join(" ")).unwrap();
    out
}

/// Parses a certificate against its near-embedding: the disk region is
/// reconstructed by cutting along the witness and matching the face list.
pub fn parse_certificate(
    text: &str,
    ne: &NearEmbedding,
) -> Result<PlanarWallCertificate, FormatError> {
    let mut wall_lines = String::new();
    let mut witness: Option<Walk> = None;
    let mut disk_faces: BTreeSet<usize> = BTreeSet::new();
    for (n, toks) in lines(text) {
        match toks[0] {
            "witness-cycle:" => {
                let mut vs = Vec::new();
                for tok in &toks[1..] {
                    vs.push(parse_vertex(n, tok)?);
                }
                if vs.len() < 2 || vs.first() != vs.last() {
                    return fail(n, "witness cycle must close up");
                }
                vs.pop();
                witness = Some(
                    Walk::cycle_from_vertices(&ne.whole, &vs)
                        .map_err(|e| FormatError::Line(n, e.to_string()))?,
                );
            }
            "disk:" => {
                for tok in &toks[1..] {
                    disk_faces.insert(parse_u32(n, tok)? as usize);
                }
            }
            _ => {
                wall_lines.push_str(text.lines().nth(n - 1).unwrap_or_default());
                wall_lines.push('\n');
            }
        }
    }
    let subwall = parse_wall_model(&wall_lines, &ne.whole)?;
    let witness = witness.ok_or(FormatError::Structure("missing witness-cycle".into()))?;
    let regions = cut_along(&ne.embedding, std::slice::from_ref(&witness))
        .map_err(|e| FormatError::Structure(e.to_string()))?;
    let disk = regions
        .into_iter()
        .find(|r| r.faces == disk_faces)
        .ok_or(FormatError::Structure(
            "disk face list matches no region of the cut".into(),
        ))?;
    Ok(PlanarWallCertificate {
        subwall,
        witness,
        disk,
    })
}

// ------------------------------------------------------------- ne bundles

pub fn emit_ne_bundle(ne: &NearEmbedding, stem: &str) -> Vec<(String, String)> {
    let mut files = Vec::new();
    let mut manifest = String::new();
    writeln!(manifest, "alpha {}", ne.alpha).unwrap();
    writeln!(manifest, "graph {stem}.graph").unwrap();
    writeln!(manifest, "embedding {stem}.emb").unwrap();
    if !ne.apex.is_empty() {
        let vs: Vec<String> = ne.apex.iter().map(|v| v.to_string()).collect();
        writeln!(manifest, "apex {}", vs.join(" ")).unwrap();
    }
    for v in &ne.embedded.vertices {
        let isolated = ne.whole.degree(*v) == 0;
        if isolated {
            writeln!(manifest, "g0-vertex {v}").unwrap();
        }
    }
    for (i, av) in ne.vortices.iter().enumerate() {
        writeln!(manifest, "vortex {} {stem}.vortex{i}", av.cuff).unwrap();
        files.push((format!("{stem}.vortex{i}"), emit_vortex(&av.vortex)));
    }
    manifest.push_str(&emit_steps(&ne.reduction));
    files.push((format!("{stem}.graph"), emit_graph(&ne.whole)));
    files.push((format!("{stem}.emb"), emit_embedding(&ne.embedding)));
    files.push((format!("{stem}.ne"), manifest));
    files
}

pub fn parse_ne_bundle(
    manifest: &str,
    dir: &Path,
    read: &dyn Fn(&Path) -> Result<String, std::io::Error>,
) -> Result<NearEmbedding, FormatError> {
    let mut alpha = 0u32;
    let mut whole: Option<Graph> = None;
    let mut embedding: Option<Embedding> = None;
    let mut apex: BTreeSet<VertexId> = BTreeSet::new();
    let mut extra_g0: BTreeSet<VertexId> = BTreeSet::new();
    let mut vortices: Vec<AttachedVortex> = Vec::new();
    let mut steps_text = String::new();
    for (n, toks) in lines(manifest) {
        match toks[0] {
            "alpha" if toks.len() == 2 => alpha = parse_u32(n, toks[1])?,
            "graph" if toks.len() == 2 => {
                whole = Some(parse_graph(&read(&dir.join(toks[1]))?)?);
            }
            "embedding" if toks.len() == 2 => {
                embedding = Some(parse_embedding(&read(&dir.join(toks[1]))?)?);
            }
            "apex" => {
                for tok in &toks[1..] {
                    apex.insert(parse_vertex(n, tok)?);
                }
            }
            "g0-vertex" if toks.len() == 2 => {
                extra_g0.insert(parse_vertex(n, toks[1])?);
            }
            "vortex" if toks.len() == 3 => {
                let cuff = parse_u32(n, toks[1])? as usize;
                let vortex = parse_vortex(&read(&dir.join(toks[2]))?)?;
                vortices.push(AttachedVortex { cuff, vortex });
            }
            "step" => {
                steps_text.push_str(&toks.join(" "));
                steps_text.push('\n');
            }
            other => return fail(n, format!("unexpected token {other:?}")),
        }
    }
    let whole = whole.ok_or(FormatError::Structure("missing graph line".into()))?;
    let embedding = embedding.ok_or(FormatError::Structure("missing embedding line".into()))?;
    let reduction = parse_steps(&steps_text)?;
    // The embedded part: edges of G - A not claimed by any vortex.
    let vortex_edges: BTreeSet<EdgeId> = vortices
        .iter()
        .flat_map(|av| av.vortex.graph.edges().map(|(e, _, _)| e))
        .collect();
    let mut g0 = Subgraph::default();
    for (e, u, v) in whole.edges() {
        if apex.contains(&u) || apex.contains(&v) || vortex_edges.contains(&e) {
            continue;
        }
        g0.edges.insert(e);
        g0.vertices.insert(u);
        g0.vertices.insert(v);
    }
    for av in &vortices {
        for &w in &av.vortex.society {
            g0.vertices.insert(w);
        }
    }
    g0.vertices.extend(extra_g0);
    Ok(NearEmbedding {
        whole,
        apex,
        embedded: g0,
        reduction,
        embedding,
        vortices,
        alpha,
    })
}

// -------------------------------------------------------------- plant spec

pub fn emit_plant_spec(s: &crate::extract::PlantSpec) -> String {
    let mut out = String::new();
    writeln!(out, "genus={}", s.genus).unwrap();
    writeln!(out, "vortices={}", s.vortices).unwrap();
    writeln!(out, "max-transaction={}", s.max_transaction).unwrap();
    writeln!(out, "order={}", s.order).unwrap();
    writeln!(out, "winds={}", s.winds).unwrap();
    writeln!(out, "dips={}", s.dips).unwrap();
    out
}

pub fn parse_plant_spec(text: &str) -> Result<crate::extract::PlantSpec, FormatError> {
    let mut spec = crate::extract::PlantSpec {
        genus: 0,
        vortices: 0,
        max_transaction: 0,
        order: 3,
        winds: 0,
        dips: 0,
    };
    let mut saw_noise = false;
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or(FormatError::Line(n + 1, format!("expected key=value, got {line:?}")))?;
        let value: u32 = value
            .trim()
            .parse()
            .map_err(|_| FormatError::Line(n + 1, format!("bad number {value:?}")))?;
        match key.trim() {
            "genus" => spec.genus = value,
            "vortices" => spec.vortices = value as usize,
            "max-transaction" => spec.max_transaction = value as usize,
            "order" => spec.order = value as u16,
            "winds" => {
                spec.winds = value as usize;
                saw_noise = true;
            }
            "dips" => {
                spec.dips = value as usize;
                saw_noise = true;
            }
            k => return fail(n + 1, format!("unknown key {k:?}")),
        }
    }
    if !saw_noise {
        let d = crate::extract::PlantSpec::grid(
            spec.genus,
            spec.vortices,
            spec.max_transaction,
            spec.order,
        );
        spec.winds = d.winds;
        spec.dips = d.dips;
    }
    Ok(spec)
}
