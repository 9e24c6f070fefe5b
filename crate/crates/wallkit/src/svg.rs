//! Schematic SVG rendering of an embedding: the longest face is pinned to
//! a convex polygon and interior vertices settle by iterated averaging.
//! Illustrative only; no geometric claims.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::graph::{VertexId, Walk};
use crate::surface::{trace_faces, Embedding, SurfaceError};

const SIZE: f64 = 720.0;
const MARGIN: f64 = 40.0;
const ROUNDS: usize = 400;

pub fn render_svg(emb: &Embedding, highlight: &[Walk]) -> Result<String, SurfaceError> {
    let faces = trace_faces(emb)?;
    let outer = (0..faces.face_count())
        .max_by_key(|&f| (faces.walks[f].len(), std::cmp::Reverse(f)))
        .unwrap_or(0);
    let boundary: Vec<VertexId> = {
        let mut seen = BTreeMap::new();
        let mut out = Vec::new();
        for v in faces.walks[outer].vertices(emb) {
            if seen.insert(v, ()).is_none() {
                out.push(v);
            }
        }
        out
    };
    let g = emb.graph();
    let mut pos: BTreeMap<VertexId, (f64, f64)> = BTreeMap::new();
    let k = boundary.len().max(1);
    for (i, &v) in boundary.iter().enumerate() {
        let theta = std::f64::consts::TAU * i as f64 / k as f64;
        let r = SIZE / 2.0 - MARGIN;
        pos.insert(
            v,
            (
                SIZE / 2.0 + r * theta.cos(),
                SIZE / 2.0 + r * theta.sin(),
            ),
        );
    }
    let interior: Vec<VertexId> = g.vertices().filter(|v| !pos.contains_key(v)).collect();
    for (i, &v) in interior.iter().enumerate() {
        // Deterministic spread before relaxation.
        let t = (i as f64 + 1.0) / (interior.len() as f64 + 1.0);
        pos.insert(v, (SIZE * t, SIZE / 2.0));
    }
    for _ in 0..ROUNDS {
        for &v in &interior {
            let nbs = g.neighbors(v);
            if nbs.is_empty() {
                continue;
            }
            let (mut sx, mut sy) = (0.0, 0.0);
            for nb in &nbs {
                let (x, y) = pos[nb];
                sx += x;
                sy += y;
            }
            let n = nbs.len() as f64;
            pos.insert(v, (sx / n, sy / n));
        }
    }
    let hl_edges: std::collections::BTreeSet<crate::graph::EdgeId> = highlight
        .iter()
        .flat_map(|w| w.edges.iter().copied())
        .collect();
    let mut svg = String::new();
    writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">"
    )
    .unwrap();
    writeln!(svg, "<rect width=\"{SIZE}\" height=\"{SIZE}\" fill=\"white\"/>").unwrap();
    for (e, u, v) in g.edges() {
        let (x1, y1) = pos[&u];
        let (x2, y2) = pos[&v];
        let (color, width) = if hl_edges.contains(&e) {
            ("#d62728", 2.5)
        } else {
            ("#444444", 1.0)
        };
        if u == v {
            writeln!(
                svg,
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"10\" fill=\"none\" stroke=\"{color}\" stroke-width=\"{width}\"/>",
                x1, y1 - 10.0
            )
            .unwrap();
        } else {
            writeln!(
                svg,
                "<line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" stroke=\"{color}\" stroke-width=\"{width}\"/>"
            )
            .unwrap();
        }
    }
    for v in g.vertices() {
        let (x, y) = pos[&v];
        writeln!(
            svg,
            "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"2.2\" fill=\"#111111\"/>"
        )
        .unwrap();
    }
    writeln!(svg, "</svg>").unwrap();
    Ok(svg)
}
