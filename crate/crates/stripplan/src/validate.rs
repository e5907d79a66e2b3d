//! Independent certificate checker: is a drawing a strip planar drawing of
//! the given instance? Exact rational arithmetic, no tolerances. Shares only
//! data types with the drawing code, so it can serve as an oracle for it.

use crate::drawing::StripDrawing;
use crate::geom::{angle_cmp, segments_meet, Meet, Point, Rat, Segment};
use crate::instance::StripInstance;
use crate::plane::{EdgeId, VertexId};
use num_traits::Zero;
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Crossing,
    NonMonotone,
    Band,
    EndpointMismatch,
    EmbeddingMismatch,
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Default)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn push(&mut self, kind: ViolationKind, detail: String) {
        self.violations.push(Violation { kind, detail });
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ValidateError {
    #[error("drawing does not reference the instance's elements: {0}")]
    ReferenceMismatch(String),
}

/// Checks planarity, monotonicity, strip membership, the global ordering,
/// and that the drawing induces exactly the instance's embedding.
pub fn check_drawing(
    inst: &StripInstance,
    drawing: &StripDrawing,
) -> Result<ValidationReport, ValidateError> {
    let mut report = ValidationReport { ok: true, violations: Vec::new() };

    // Reference checks.
    let inst_vertices: Vec<VertexId> = inst.graph.vertex_ids().collect();
    for v in &inst_vertices {
        if !drawing.points.contains_key(v) {
            return Err(ValidateError::ReferenceMismatch(format!(
                "vertex {v:?} has no point"
            )));
        }
    }
    if drawing.points.len() != inst_vertices.len() {
        return Err(ValidateError::ReferenceMismatch(
            "drawing has extra vertex points".into(),
        ));
    }
    for e in inst.graph.edge_ids() {
        if !drawing.polylines.contains_key(&e) {
            return Err(ValidateError::ReferenceMismatch(format!(
                "edge {e:?} has no polyline"
            )));
        }
    }
    if drawing.polylines.len() != inst.graph.edge_count() {
        return Err(ValidateError::ReferenceMismatch(
            "drawing has extra polylines".into(),
        ));
    }

    // (2) endpoints and strict y-monotonicity.
    for (e, pts) in &drawing.polylines {
        let (a, b) = inst.graph.edge_ends(*e);
        if pts.len() < 2 {
            report.push(
                ViolationKind::EndpointMismatch,
                format!("edge {e:?} polyline has fewer than 2 points"),
            );
            continue;
        }
        if pts[0] != drawing.points[&a] || pts[pts.len() - 1] != drawing.points[&b] {
            report.push(
                ViolationKind::EndpointMismatch,
                format!("edge {e:?} does not join its endpoints"),
            );
        }
        let up = pts[0].y < pts[pts.len() - 1].y;
        for w in pts.windows(2) {
            let good = if up { w[0].y < w[1].y } else { w[0].y > w[1].y };
            if !good {
                report.push(
                    ViolationKind::NonMonotone,
                    format!("edge {e:?} is not strictly y-monotone"),
                );
                break;
            }
        }
    }

    // (3) bands and the global strip ordering.
    let mut by_level: BTreeMap<u32, Vec<&Rat>> = BTreeMap::new();
    for (&v, p) in &drawing.points {
        let level = inst.gamma(v);
        let lo = Rat::from_integer(level.into());
        let hi = Rat::from_integer((level + 1).into());
        if !(p.y >= lo && p.y < hi) {
            report.push(
                ViolationKind::Band,
                format!("vertex {v:?} lies outside band {level}"),
            );
        }
        by_level.entry(level).or_default().push(&p.y);
    }
    let levels: Vec<u32> = by_level.keys().copied().collect();
    for w in levels.windows(2) {
        let below = by_level[&w[0]].iter().max().unwrap();
        let above = by_level[&w[1]].iter().min().unwrap();
        if below >= above {
            report.push(
                ViolationKind::Band,
                format!("strips {} and {} are not separated in y", w[0], w[1]),
            );
        }
    }

    // (1) pairwise disjointness, except shared endpoints at shared vertices.
    check_crossings(inst, drawing, &mut report);

    // (4) rotation system and outer face induced by the geometry.
    check_embedding(inst, drawing, &mut report);

    report.ok = report.violations.is_empty();
    Ok(report)
}

struct Seg {
    edge: EdgeId,
    seg: Segment,
    ymin: Rat,
    ymax: Rat,
}

fn check_crossings(
    inst: &StripInstance,
    drawing: &StripDrawing,
    report: &mut ValidationReport,
) {
    let mut segs: Vec<Seg> = Vec::new();
    for (&e, pts) in &drawing.polylines {
        for w in pts.windows(2) {
            let s = Segment::new(w[0].clone(), w[1].clone());
            if s.is_degenerate() {
                report.push(
                    ViolationKind::NonMonotone,
                    format!("edge {e:?} contains a degenerate segment"),
                );
                continue;
            }
            let (ymin, ymax) = if s.a.y <= s.b.y {
                (s.a.y.clone(), s.b.y.clone())
            } else {
                (s.b.y.clone(), s.a.y.clone())
            };
            segs.push(Seg { edge: e, seg: s, ymin, ymax });
        }
    }
    // Sweep by ymin to prune pairs.
    segs.sort_by(|a, b| a.ymin.cmp(&b.ymin).then_with(|| a.ymax.cmp(&b.ymax)));
    let mut active: Vec<usize> = Vec::new();
    let endpoints: BTreeMap<EdgeId, (VertexId, VertexId)> = drawing
        .polylines
        .keys()
        .map(|&e| (e, inst.graph.edge_ends(e)))
        .collect();
    let mut flagged: std::collections::BTreeSet<(EdgeId, EdgeId)> = Default::default();
    for (i, s) in segs.iter().enumerate() {
        active.retain(|&j| segs[j].ymax >= s.ymin);
        for &j in &active {
            let t = &segs[j];
            let same_edge = s.edge == t.edge;
            match segments_meet(&s.seg, &t.seg) {
                Meet::Disjoint => {}
                Meet::SharedEndpoint(p) => {
                    // Legal only at a drawn vertex common to both edges, or
                    // at an interior bend of a single polyline.
                    if same_edge {
                        continue;
                    }
                    let (a1, b1) = endpoints[&s.edge];
                    let (a2, b2) = endpoints[&t.edge];
                    let shared_vertex = [a1, b1]
                        .iter()
                        .any(|v| [a2, b2].contains(v) && drawing.points[v] == p);
                    if !shared_vertex {
                        let key = ordered(s.edge, t.edge);
                        if flagged.insert(key) {
                            report.push(
                                ViolationKind::Crossing,
                                format!(
                                    "edges {:?} and {:?} touch away from a shared vertex",
                                    s.edge, t.edge
                                ),
                            );
                        }
                    }
                }
                Meet::Crossing => {
                    // Consecutive segments of one polyline meet at their
                    // shared bend, which classifies as SharedEndpoint; a
                    // Crossing within one edge is a self-intersection.
                    let key = ordered(s.edge, t.edge);
                    if flagged.insert(key) {
                        report.push(
                            ViolationKind::Crossing,
                            format!("edges {:?} and {:?} cross", s.edge, t.edge),
                        );
                    }
                }
            }
        }
        active.push(i);
    }
}

fn ordered(a: EdgeId, b: EdgeId) -> (EdgeId, EdgeId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn cyclic_match(a: &[EdgeId], b: &[EdgeId]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    (0..a.len()).any(|s| (0..a.len()).all(|i| a[(s + i) % a.len()] == b[i]))
}

fn check_embedding(
    inst: &StripInstance,
    drawing: &StripDrawing,
    report: &mut ValidationReport,
) {
    // Recover the rotation at each vertex from the first segments of its
    // incident polylines, sorted clockwise, and compare cyclically.
    for v in inst.graph.vertex_ids() {
        let expected: Vec<EdgeId> = inst
            .graph
            .rotation(v)
            .iter()
            .map(|d| d.edge())
            .collect();
        if expected.len() <= 2 {
            continue; // any cyclic order of <= 2 edges matches
        }
        let p = &drawing.points[&v];
        let mut dirs: Vec<(EdgeId, (Rat, Rat))> = Vec::new();
        for &e in &expected {
            let pts = &drawing.polylines[&e];
            let (a, _) = inst.graph.edge_ends(e);
            let q = if a == v { &pts[1] } else { &pts[pts.len() - 2] };
            dirs.push((e, (&q.x - &p.x, &q.y - &p.y)));
        }
        for (e, d) in &dirs {
            if d.0.is_zero() && d.1.is_zero() {
                report.push(
                    ViolationKind::EmbeddingMismatch,
                    format!("edge {e:?} leaves {v:?} with a zero direction"),
                );
                return;
            }
        }
        let mut sorted = dirs.clone();
        sorted.sort_by(|a, b| angle_cmp(&a.1, &b.1));
        for w in sorted.windows(2) {
            if angle_cmp(&w[0].1, &w[1].1) == Ordering::Equal {
                report.push(
                    ViolationKind::EmbeddingMismatch,
                    format!(
                        "edges {:?} and {:?} leave {v:?} in the same direction",
                        w[0].0, w[1].0
                    ),
                );
                return;
            }
        }
        // angle_cmp sorts counterclockwise; the instance rotation is
        // clockwise, so compare against the reversal.
        let ccw: Vec<EdgeId> = sorted.iter().map(|(e, _)| *e).collect();
        let cw: Vec<EdgeId> = ccw.iter().rev().copied().collect();
        if !cyclic_match(&expected, &cw) {
            report.push(
                ViolationKind::EmbeddingMismatch,
                format!("rotation at {v:?} differs from the instance"),
            );
        }
    }

    // Outer face: at the bottom-most vertex point, the corner containing the
    // straight-down direction belongs to the drawing's outer face.
    if let Some(violation) = outer_face_mismatch(inst, drawing) {
        report.push(ViolationKind::EmbeddingMismatch, violation);
    }
}

fn outer_face_mismatch(inst: &StripInstance, drawing: &StripDrawing) -> Option<String> {
    let lowest = drawing
        .points
        .iter()
        .min_by(|(_, p), (_, q)| p.y.cmp(&q.y).then_with(|| p.x.cmp(&q.x)))
        .map(|(&v, _)| v)?;
    let rot = inst.graph.rotation(lowest);
    if rot.is_empty() {
        return None;
    }
    let p = &drawing.points[&lowest];
    let dir_of = |d: &crate::plane::DartId| -> (Rat, Rat) {
        let e = d.edge();
        let pts = &drawing.polylines[&e];
        let (a, _) = inst.graph.edge_ends(e);
        let q = if a == lowest { &pts[1] } else { &pts[pts.len() - 2] };
        (&q.x - &p.x, &q.y - &p.y)
    };
    // Clockwise successor pairs (d, next): the corner between them contains
    // "south" iff south is in the clockwise angular interval from dir(d) to
    // dir(next). The face at that corner is face_of(twin(d)).
    let south = (Rat::zero(), -Rat::from_integer(1.into()));
    let m = rot.len();
    for i in 0..m {
        let d = rot[i];
        let nxt = rot[(i + 1) % m];
        let a = dir_of(&d);
        let b = dir_of(&nxt);
        if angular_cw_contains(&a, &b, &south) {
            let corner_face = inst.graph.face_of(d.twin());
            if corner_face != inst.graph.outer_face() {
                return Some(format!(
                    "outer face of the drawing is {corner_face:?}, instance says {:?}",
                    inst.graph.outer_face()
                ));
            }
            return None;
        }
    }
    Some("no corner at the lowest vertex contains the downward direction".into())
}

/// Is direction `x` strictly inside the clockwise angular sweep from `a` to
/// `b`? With all vertex points distinct and the lowest vertex chosen, no
/// incident edge can point straight down, so ties do not arise.
fn angular_cw_contains(a: &(Rat, Rat), b: &(Rat, Rat), x: &(Rat, Rat)) -> bool {
    // Clockwise from a to b == counterclockwise from b to a.
    let ccw = |u: &(Rat, Rat), v: &(Rat, Rat)| -> bool {
        // v strictly ccw-after u within less than a full turn.
        angle_cmp(u, v) == Ordering::Less
    };
    // Work in the ccw order induced by angle_cmp: the ccw interval (b, a)
    // contains x iff going around from b we meet x before a.
    if angle_cmp(a, b) == Ordering::Equal {
        return true; // single-edge corner spans the whole circle
    }
    if ccw(b, a) {
        ccw(b, x) && ccw(x, a)
    } else {
        // The interval wraps around the angle origin.
        ccw(b, x) || ccw(x, a)
    }
}
