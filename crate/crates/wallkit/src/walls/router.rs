//! Disjoint path routing between meridians of a cylindrical wall.
//!
//! Between meridians i < j with t = j - i - 1 rows in between, t disjoint
//! paths are routed from a segment of C_i to a segment of C_j so that each
//! path meets every intermediate meridian in one contiguous arc. Paths
//! descend one row at a time; within a row each path sweeps a column
//! interval, and sweeps of different paths must not touch. The forced
//! parity of the vertical edges makes every intermediate sweep an odd
//! shift; a bounded DFS finds a feasible schedule of shifts.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, VertexId, Walk};
use crate::surface::ValidationReport;

use super::{WallError, WallKind, WallModel};

/// Contiguous arc of a meridian, given by its host vertices in arc order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleSegment {
    pub meridian: u16,
    pub vertices: Vec<VertexId>,
}

/// Abstract columns of the meridian whose branch vertices lie inside the
/// segment, in arc order.
fn segment_columns(model: &WallModel, seg: &CycleSegment) -> Result<Vec<u16>, WallError> {
    let i = seg.meridian;
    if i == 0 || i > model.order {
        return Err(WallError::BadMeridian(i, model.order));
    }
    let meridian = model.meridian(i)?;
    let mv = &meridian.vertices;
    let n = mv.len();
    let pos_of = |v: VertexId| mv.iter().position(|&x| x == v);
    if seg.vertices.is_empty() {
        return Err(WallError::BadSegment(i));
    }
    let mut positions = Vec::with_capacity(seg.vertices.len());
    for &v in &seg.vertices {
        positions.push(pos_of(v).ok_or(WallError::BadSegment(i))?);
    }
    // Contiguous forward or backward arc.
    let forward = positions
        .windows(2)
        .all(|w| w[1] == (w[0] + 1) % n);
    let backward = positions
        .windows(2)
        .all(|w| w[0] == (w[1] + 1) % n);
    if !forward && !backward {
        return Err(WallError::BadSegment(i));
    }
    let (start, len) = if forward {
        (positions[0], positions.len())
    } else {
        (*positions.last().unwrap(), positions.len())
    };
    let in_run = |p: usize| (p + n - start) % n < len;
    let mut cols: Vec<(usize, u16)> = Vec::new();
    for c in 1..=(2 * model.order) {
        let bp = pos_of(model.branch[&(i, c)]).expect("branch on meridian");
        if in_run(bp) {
            cols.push(((bp + n - start) % n, c));
        }
    }
    cols.sort_unstable();
    Ok(cols.into_iter().map(|(_, c)| c).collect())
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum RowMove {
    /// Even shifts; used on the two end rows.
    Free,
    /// Odd shifts forced by the vertical-edge parity.
    Odd,
    /// Even shifts landing exactly on the targets.
    Last,
}

struct Scheduler {
    two_r: i64,
    rows: Vec<RowMove>,
    targets: Vec<i64>,
    budget: usize,
    nodes: usize,
    dead: BTreeSet<(usize, Vec<i64>)>,
}

type Schedule = Vec<Vec<i64>>; // per row, per token: signed shift

impl Scheduler {
    fn norm(&self, x: i64) -> i64 {
        x.rem_euclid(self.two_r)
    }

    /// Signed difference with the smaller magnitude representative first.
    fn reps(&self, d: i64) -> [i64; 2] {
        let m = self.norm(d);
        let alt = m - self.two_r;
        if m.abs() <= alt.abs() {
            [m, alt]
        } else {
            [alt, m]
        }
    }

    fn sweeps_disjoint(&self, a_pos: i64, a_shift: i64, b_pos: i64, b_shift: i64) -> bool {
        let covered = |p: i64, s: i64| -> (i64, i64) {
            if s >= 0 {
                (self.norm(p), s)
            } else {
                (self.norm(p + s), -s)
            }
        };
        let (sa, la) = covered(a_pos, a_shift);
        let (sb, lb) = covered(b_pos, b_shift);
        // Cyclic intervals [sa, sa+la] and [sb, sb+lb] must not intersect.
        let d = self.norm(sb - sa);
        d > la && self.two_r - d > lb
    }

    fn candidates(&self, kind: RowMove, pos: i64, target: i64, rows_left: i64) -> Vec<i64> {
        let ideal_raw = self.reps(target - pos)[0];
        let mut out: Vec<i64> = Vec::new();
        match kind {
            RowMove::Last => {
                for d in self.reps(target - pos) {
                    if d.abs() < self.two_r && d % 2 == 0 {
                        out.push(d);
                    }
                }
                return out;
            }
            RowMove::Free => {
                let mut v = 0i64;
                while v < self.two_r {
                    out.push(v);
                    if v > 0 {
                        out.push(-v);
                    }
                    v += 2;
                }
            }
            RowMove::Odd => {
                let mut v = 1i64;
                while v < self.two_r {
                    out.push(v);
                    out.push(-v);
                    v += 2;
                }
            }
        }
        // Prefer shifts that close the remaining distance evenly.
        let per_row = if rows_left > 0 {
            ideal_raw as f64 / rows_left as f64
        } else {
            0.0
        };
        out.sort_by_key(|&v| ((v as f64 - per_row).abs() * 16.0) as i64);
        out
    }

    fn run(&mut self, positions: Vec<i64>) -> Option<Schedule> {
        self.dfs(0, positions)
    }

    fn dfs(&mut self, row: usize, positions: Vec<i64>) -> Option<Schedule> {
        if row == self.rows.len() {
            return if positions
                .iter()
                .zip(&self.targets)
                .all(|(&p, &t)| self.norm(p) == self.norm(t))
            {
                Some(vec![])
            } else {
                None
            };
        }
        if self.nodes >= self.budget || self.dead.contains(&(row, positions.clone())) {
            return None;
        }
        self.nodes += 1;
        let kind = self.rows[row];
        let rows_left = (self.rows.len() - row) as i64;
        let t = positions.len();
        let mut shifts = vec![0i64; t];
        if let Some(mut tail) = self.pick(kind, row, rows_left, &positions, &mut shifts, 0) {
            let mut schedule = vec![std::mem::take(&mut shifts)];
            schedule.append(&mut tail.1);
            schedule[0] = tail.0;
            return Some(schedule);
        }
        self.dead.insert((row, positions));
        None
    }

    /// Chooses a shift for token `k`, then recurses into the next token or
    /// the next row. Returns the chosen row shifts plus the tail schedule.
    fn pick(
        &mut self,
        kind: RowMove,
        row: usize,
        rows_left: i64,
        positions: &[i64],
        shifts: &mut Vec<i64>,
        k: usize,
    ) -> Option<(Vec<i64>, Schedule)> {
        let t = positions.len();
        if k == t {
            let next: Vec<i64> = positions
                .iter()
                .zip(shifts.iter())
                .map(|(&p, &s)| self.norm(p + s))
                .collect();
            let tail = self.dfs(row + 1, next)?;
            return Some((shifts.clone(), tail));
        }
        if self.nodes >= self.budget {
            return None;
        }
        for cand in self.candidates(kind, positions[k], self.targets[k], rows_left) {
            self.nodes += 1;
            if self.nodes >= self.budget {
                return None;
            }
            let ok = (0..k).all(|m| {
                self.sweeps_disjoint(positions[m], shifts[m], positions[k], cand)
            });
            if !ok {
                continue;
            }
            shifts[k] = cand;
            if let Some(found) = self.pick(kind, row, rows_left, positions, shifts, k + 1) {
                return Some(found);
            }
        }
        None
    }
}

/// Routes `t = j - i - 1` vertex-disjoint host paths from a segment of
/// meridian i to a segment of meridian j, meeting every intermediate
/// meridian in one contiguous arc. Segments must span at least 2t branch
/// vertices.
pub fn w1_paths(
    host: &Graph,
    model: &WallModel,
    i: u16,
    j: u16,
    seg_i: &CycleSegment,
    seg_j: &CycleSegment,
) -> Result<Vec<Walk>, WallError> {
    if model.kind != WallKind::Cylindrical {
        return Err(WallError::WrongKind(WallKind::Cylindrical));
    }
    let r = model.order;
    if i == 0 || j > r {
        return Err(WallError::BadMeridian(if i == 0 { i } else { j }, r));
    }
    if i >= j {
        return Err(WallError::BadRowPair(i, j));
    }
    if seg_i.meridian != i {
        return Err(WallError::BadMeridian(seg_i.meridian, i));
    }
    if seg_j.meridian != j {
        return Err(WallError::BadMeridian(seg_j.meridian, j));
    }
    let t = usize::from(j - i - 1);
    if t == 0 {
        return Ok(vec![]);
    }
    let cols_i = segment_columns(model, seg_i)?;
    let cols_j = segment_columns(model, seg_j)?;
    if cols_i.len() < 2 * t {
        return Err(WallError::SegmentTooShort(i, cols_i.len(), 2 * t));
    }
    if cols_j.len() < 2 * t {
        return Err(WallError::SegmentTooShort(j, cols_j.len(), 2 * t));
    }
    let two_r = i64::from(2 * r);
    // Columns (0-based) from which the vertical edge below row `row` exists.
    let down_ok = |row: u16, col0: i64| (i64::from(row) + col0 + 1) % 2 == 0;
    let starts_all: Vec<i64> = cols_i
        .iter()
        .map(|&c| i64::from(c) - 1)
        .filter(|&c| down_ok(i, c))
        .collect();
    let targets_all: Vec<i64> = cols_j
        .iter()
        .map(|&c| i64::from(c) - 1)
        .filter(|&c| down_ok(j - 1, c))
        .collect();

    let mut rows = vec![RowMove::Free];
    rows.extend(std::iter::repeat_n(RowMove::Odd, t));
    rows.push(RowMove::Last);

    for wa in 0..=(starts_all.len() - t) {
        let starts = &starts_all[wa..wa + t];
        for wb in 0..=(targets_all.len() - t) {
            let base = &targets_all[wb..wb + t];
            for rot in 0..t {
                let targets: Vec<i64> = (0..t).map(|k| base[(k + rot) % t]).collect();
                let mut sched = Scheduler {
                    two_r,
                    rows: rows.clone(),
                    targets,
                    budget: 300_000,
                    nodes: 0,
                    dead: BTreeSet::new(),
                };
                if let Some(schedule) = sched.run(starts.to_vec()) {
                    let paths =
                        realize(host, model, i, starts, &schedule)?;
                    let report = check_linkage(host, model, i, j, seg_i, seg_j, &paths);
                    if report.is_valid() {
                        return Ok(paths);
                    }
                    return Err(WallError::InvalidModel(format!(
                        "router output failed verification: {:?}",
                        report.violations
                    )));
                }
            }
        }
    }
    Err(WallError::RoutingFailed)
}

/// Expands a shift schedule into host paths through the model.
fn realize(
    host: &Graph,
    model: &WallModel,
    row_i: u16,
    starts: &[i64],
    schedule: &[Vec<i64>],
) -> Result<Vec<Walk>, WallError> {
    let two_r = i64::from(2 * model.order);
    let t = starts.len();
    let mut out = Vec::with_capacity(t);
    for k in 0..t {
        // Abstract coordinates visited by this token.
        let mut col = starts[k];
        let mut coords: Vec<(u16, u16)> = vec![(row_i, (col.rem_euclid(two_r) + 1) as u16)];
        for (ridx, row_shifts) in schedule.iter().enumerate() {
            let row = row_i + ridx as u16;
            let shift = row_shifts[k];
            let step = if shift >= 0 { 1 } else { -1 };
            for _ in 0..shift.abs() {
                col += step;
                coords.push((row, (col.rem_euclid(two_r) + 1) as u16));
            }
            // Drop to the next row except after the last one.
            if ridx + 1 < schedule.len() {
                coords.push((row + 1, (col.rem_euclid(two_r) + 1) as u16));
            }
        }
        // Map through the model.
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
        let walk = walk.unwrap_or_else(|| Walk::single_vertex(model.branch[&coords[0]]));
        walk.check_in(host)
            .map_err(|e| WallError::InvalidModel(format!("routed path invalid: {e}")))?;
        out.push(walk);
    }
    Ok(out)
}

/// Independent verifier for routed linkages: disjointness, endpoints inside
/// the segments, and one contiguous arc on every intermediate meridian.
pub fn check_linkage(
    host: &Graph,
    model: &WallModel,
    i: u16,
    j: u16,
    seg_i: &CycleSegment,
    seg_j: &CycleSegment,
    paths: &[Walk],
) -> ValidationReport {
    let mut report = ValidationReport::default();
    let t = usize::from(j.saturating_sub(i).saturating_sub(1));
    if paths.len() != t {
        report.violation(format!("expected {t} paths, got {}", paths.len()));
    }
    let si: BTreeSet<VertexId> = seg_i.vertices.iter().copied().collect();
    let sj: BTreeSet<VertexId> = seg_j.vertices.iter().copied().collect();
    for (k, p) in paths.iter().enumerate() {
        if let Err(e) = p.check_in(host) {
            report.violation(format!("path {k} invalid: {e}"));
            continue;
        }
        if !si.contains(&p.first()) {
            report.violation(format!("path {k} does not start in the first segment"));
        }
        if !sj.contains(&p.last()) {
            report.violation(format!("path {k} does not end in the second segment"));
        }
        for (m, q) in paths.iter().enumerate().take(k) {
            if p.meets(q) {
                report.violation(format!("paths {m} and {k} intersect"));
            }
        }
    }
    for mid in (i + 1)..j {
        let meridian = match model.meridian(mid) {
            Ok(m) => m,
            Err(e) => {
                report.violation(format!("meridian {mid}: {e}"));
                continue;
            }
        };
        let mv = &meridian.vertices;
        let n = mv.len();
        for (k, p) in paths.iter().enumerate() {
            let ps = p.vertex_set();
            let hits: Vec<usize> = (0..n).filter(|&x| ps.contains(&mv[x])).collect();
            if hits.is_empty() {
                report.violation(format!("path {k} misses meridian {mid}"));
                continue;
            }
            if !contiguous_cyclic(&hits, n) {
                report.violation(format!(
                    "path {k} meets meridian {mid} in a disconnected set"
                ));
            }
        }
    }
    report
}

/// Whether sorted positions form one contiguous cyclic run.
fn contiguous_cyclic(sorted: &[usize], n: usize) -> bool {
    let k = sorted.len();
    if k <= 1 || k == n {
        return true;
    }
    // Count cyclic gaps; a contiguous run has exactly one gap > 1.
    let mut gaps = 0;
    for w in 0..k {
        let a = sorted[w];
        let b = sorted[(w + 1) % k];
        let d = (b + n - a) % n;
        if d != 1 {
            gaps += 1;
        }
    }
    gaps == 1
}


#[cfg(test)]
mod stress_tests {
    use super::super::generate_q;
    use super::*;

    #[test]
    fn four_wide_linkages_on_q7() {
        let (g, model) = generate_q(7).unwrap();
        // t = 4 with minimal segments at awkward offsets.
        for (a, b) in [(1u16, 1u16), (3, 11), (7, 2)] {
            let si = segment_for(&model, 1, a, 8);
            let sj = segment_for(&model, 6, b, 8);
            let paths = w1_paths(&g, &model, 1, 6, &si, &sj).unwrap();
            assert_eq!(paths.len(), 4);
            assert!(check_linkage(&g, &model, 1, 6, &si, &sj, &paths).is_valid());
        }
    }

    fn segment_for(model: &WallModel, i: u16, start_col: u16, span: u16) -> CycleSegment {
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
}
