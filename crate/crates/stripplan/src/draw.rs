//! Drawing synthesis for jagged instances: saturate the associated digraph
//! to a plane st-digraph with same-strip dummy edges, order faces by the
//! directed dual, and place everything on integer channels with rational
//! in-strip heights.

use crate::drawing::StripDrawing;
use crate::geom::{rat, Point, Rat};
use crate::instance::StripInstance;
use crate::plane::{DartId, EdgeId, FaceId, PlaneMultigraph, VertexId};
use crate::upward::{AngleAssignment, EmbeddedDigraph};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use thiserror::Error;

pub mod pullback;

#[derive(Debug, Error)]
pub enum DrawError {
    #[error("saturation is stuck: {0} (invalid assignment?)")]
    SaturationStuck(String),
    #[error("directed dual contains a cycle")]
    DualCyclic,
    #[error(
        "pullback cannot rebuild geometry through an off-by-one triangle split; \
         the verdict stands without a drawing"
    )]
    VerdictOnly,
}

/// The saturated digraph: the input plus same-strip dummy edges, with a
/// single source and sink on the outer face.
pub struct StDigraph {
    pub digraph: EmbeddedDigraph,
    pub dummies: BTreeSet<EdgeId>,
    pub s: VertexId,
    pub t: VertexId,
}

#[derive(Clone, Copy, PartialEq, Eq)]
struct Corner {
    pos: usize,
    vertex: VertexId,
    sink_kind: bool,
}

fn corners_of(
    graph: &PlaneMultigraph,
    forward: &BTreeMap<EdgeId, bool>,
    f: FaceId,
) -> Vec<Corner> {
    let walk = graph.face_walk(f);
    let m = walk.len();
    let away = |d: DartId| -> bool {
        let side0 = d.0 & 1 == 0;
        forward[&d.edge()] == side0
    };
    let mut out = Vec::new();
    for i in 0..m {
        let d_in = walk[i];
        let d_out = walk[(i + 1) % m];
        let w = graph.head(d_in);
        let into_w = away(d_in);
        let away_w = away(d_out);
        if into_w && !away_w {
            out.push(Corner { pos: i, vertex: w, sink_kind: true });
        } else if !into_w && away_w {
            out.push(Corner { pos: i, vertex: w, sink_kind: false });
        }
    }
    out
}

/// Would adding tail -> head close a directed cycle?
fn creates_cycle(
    graph: &PlaneMultigraph,
    forward: &BTreeMap<EdgeId, bool>,
    tail: VertexId,
    head: VertexId,
) -> bool {
    // BFS from head along directed edges, looking for tail.
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(head);
    queue.push_back(head);
    while let Some(x) = queue.pop_front() {
        if x == tail {
            return true;
        }
        for &d in graph.rotation(x) {
            let side0 = d.0 & 1 == 0;
            if forward[&d.edge()] == side0 {
                let y = graph.head(d);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
    }
    false
}

/// Augments the digraph to a plane st-digraph, guided by the large-angle
/// assignment: each processed source/sink gets a dummy edge to the nearest
/// same-polarity switch of its assigned face, which de-pools it and splits
/// off a simple face.
pub fn saturate_to_st(
    d: &EmbeddedDigraph,
    asg: &AngleAssignment,
) -> Result<StDigraph, DrawError> {
    let mut graph = d.graph.clone();
    let mut forward = d.forward_map().clone();
    let mut dummies: BTreeSet<EdgeId> = BTreeSet::new();
    let mut marks: BTreeMap<VertexId, FaceId> = asg
        .vertex_to_face
        .iter()
        .map(|(&v, &f)| (VertexId(v), FaceId(f)))
        .collect();
    let supply = marks.len();

    loop {
        // A face still needing work has more than one switch pair.
        let busy = graph
            .face_ids()
            .find(|&f| corners_of(&graph, &forward, f).len() > 2);
        let Some(f) = busy else { break };
        let corners = corners_of(&graph, &forward, f);
        let n = corners.len();
        // Marked corners: first corner of each vertex assigned to f.
        let mut seen_vertex: BTreeSet<VertexId> = BTreeSet::new();
        let marked: Vec<bool> = corners
            .iter()
            .map(|c| {
                let is_marked =
                    marks.get(&c.vertex) == Some(&f) && seen_vertex.insert(c.vertex);
                is_marked
            })
            .collect();
        let mut performed = false;
        'search: for (i, c) in corners.iter().enumerate() {
            if !marked[i] {
                continue;
            }
            for dir in [1usize, n - 1] {
                let valley = (i + dir) % n;
                let beyond = (i + 2 * dir) % n;
                if marked[valley] {
                    continue;
                }
                let w = corners[beyond];
                debug_assert_eq!(w.sink_kind, c.sink_kind);
                if w.vertex == c.vertex {
                    continue;
                }
                let (tail, head) = if c.sink_kind {
                    (c.vertex, w.vertex)
                } else {
                    (w.vertex, c.vertex)
                };
                if creates_cycle(&graph, &forward, tail, head) {
                    continue;
                }
                // Insert the dummy chord into the two corners.
                let walk = graph.face_walk(f).to_vec();
                let anchor_c = walk[c.pos];
                let anchor_w = walk[w.pos];
                let ins = graph
                    .insert_path_in_face(f, anchor_c, anchor_w, 0)
                    .expect("corner anchors bound the face");
                let new_edge = ins.chain_edges[0];
                // The chain runs head(anchor_c) -> head(anchor_w), i.e. from
                // c.vertex to w.vertex.
                forward.insert(new_edge, c.sink_kind);
                dummies.insert(new_edge);
                graph = ins.graph;
                // Re-home marks that referenced f: each marked vertex keeps
                // its switch corner on exactly one of the two sides except
                // the far endpoint w, which keeps the residual side.
                let valley_dart = walk[corners[valley].pos];
                let cut_side = graph.face_of(valley_dart);
                let residual = if cut_side == ins.kept_face {
                    ins.new_face
                } else {
                    ins.kept_face
                };
                marks.remove(&c.vertex);
                let residual_corners: BTreeSet<VertexId> =
                    corners_of(&graph, &forward, residual)
                        .iter()
                        .map(|x| x.vertex)
                        .collect();
                let cut_corners: BTreeSet<VertexId> =
                    corners_of(&graph, &forward, cut_side)
                        .iter()
                        .map(|x| x.vertex)
                        .collect();
                let rehome: Vec<VertexId> = marks
                    .iter()
                    .filter(|(_, &mf)| mf == f)
                    .map(|(&v, _)| v)
                    .collect();
                for v in rehome {
                    let in_res = residual_corners.contains(&v);
                    let in_cut = cut_corners.contains(&v);
                    let target = match (in_res, in_cut) {
                        (true, _) => residual,
                        (false, true) => cut_side,
                        (false, false) => {
                            return Err(DrawError::SaturationStuck(format!(
                                "mark at {v:?} lost its switch corner"
                            )))
                        }
                    };
                    marks.insert(v, target);
                }
                performed = true;
                break 'search;
            }
        }
        if !performed {
            return Err(DrawError::SaturationStuck(format!(
                "no processable large angle on face {f:?}"
            )));
        }
    }

    let digraph = EmbeddedDigraph::new(graph, forward);
    let pooled: Vec<VertexId> = digraph.sources_and_sinks();
    if pooled.len() != 2 {
        return Err(DrawError::SaturationStuck(format!(
            "saturation left {} pooled sources/sinks",
            pooled.len()
        )));
    }
    let (s, t) = if digraph.is_source(pooled[0]) {
        (pooled[0], pooled[1])
    } else {
        (pooled[1], pooled[0])
    };
    if !digraph.is_source(s) || !digraph.is_sink(t) {
        return Err(DrawError::SaturationStuck("no source/sink pair".into()));
    }
    let outer_verts: BTreeSet<VertexId> = digraph
        .graph
        .face_vertices(digraph.graph.outer_face())
        .into_iter()
        .collect();
    if !outer_verts.contains(&s) || !outer_verts.contains(&t) {
        return Err(DrawError::SaturationStuck(
            "source/sink not on the outer face".into(),
        ));
    }
    debug_assert_eq!(dummies.len(), supply.saturating_sub(2));
    Ok(StDigraph { digraph, dummies, s, t })
}

// ----------------------------------------------------------------------
// Directed dual

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualNode {
    SStar,
    Face(FaceId),
    TStar,
}

/// Topological order of the directed dual: s*, the bounded faces each after
/// all its predecessors, then t*.
pub fn dual_face_order(st: &StDigraph) -> Result<Vec<DualNode>, DrawError> {
    let g = &st.digraph.graph;
    let outer = g.outer_face();
    let faces: Vec<FaceId> = g.face_ids().filter(|&f| f != outer).collect();
    let idx: BTreeMap<FaceId, usize> =
        faces.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    // Node numbering: 0 = s*, 1.. = faces, last = t*.
    let n = faces.len() + 2;
    let tstar = n - 1;
    let node_of = |f: FaceId, left_side: bool| -> usize {
        if f == outer {
            if left_side {
                0
            } else {
                tstar
            }
        } else {
            idx[&f] + 1
        }
    };
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    for e in g.edge_ids() {
        let (a, b) = g.edge_ends(e);
        if (a == st.s && b == st.t) || (a == st.t && b == st.s) {
            continue;
        }
        let aligned = if st.digraph.forward_map()[&e] {
            DartId::of(e, 0)
        } else {
            DartId::of(e, 1)
        };
        let left = g.face_of(aligned);
        let right = g.face_of(aligned.twin());
        let from = node_of(left, true);
        let to = node_of(right, false);
        if from != to {
            adj[from].push(to);
            indeg[to] += 1;
        }
    }
    for a in adj.iter_mut() {
        a.sort_unstable();
        a.dedup();
    }
    // Recount indegrees after dedup.
    let mut indeg = vec![0usize; n];
    for a in &adj {
        for &to in a {
            indeg[to] += 1;
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut ready: std::collections::BinaryHeap<std::cmp::Reverse<usize>> =
        Default::default();
    for (i, &d0) in indeg.iter().enumerate() {
        if d0 == 0 {
            ready.push(std::cmp::Reverse(i));
        }
    }
    while let Some(std::cmp::Reverse(x)) = ready.pop() {
        order.push(x);
        for &to in &adj[x] {
            indeg[to] -= 1;
            if indeg[to] == 0 {
                ready.push(std::cmp::Reverse(to));
            }
        }
    }
    if order.len() != n {
        return Err(DrawError::DualCyclic);
    }
    Ok(order
        .into_iter()
        .map(|x| {
            if x == 0 {
                DualNode::SStar
            } else if x == tstar {
                DualNode::TStar
            } else {
                DualNode::Face(faces[x - 1])
            }
        })
        .collect())
}

// ----------------------------------------------------------------------
// Coordinates

/// Places the saturated digraph on integer channels: y inside the strips by
/// in-strip rank, x from the dual order. Dummy edges guide the ranks but are
/// not emitted.
pub fn coordinates(
    st: &StDigraph,
    inst: &StripInstance,
) -> Result<StripDrawing, DrawError> {
    let g = &st.digraph.graph;
    let fwd = st.digraph.forward_map();

    // In-strip ranks: topological over dummy edges, ties by id.
    let mut y: BTreeMap<VertexId, Rat> = BTreeMap::new();
    let mut strips: BTreeMap<u32, Vec<VertexId>> = BTreeMap::new();
    for v in g.vertex_ids() {
        strips.entry(inst.gamma(v)).or_default().push(v);
    }
    for (&level, members) in &strips {
        let set: BTreeSet<VertexId> = members.iter().copied().collect();
        let mut indeg: BTreeMap<VertexId, usize> =
            members.iter().map(|&v| (v, 0)).collect();
        let mut out: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
        for &e in &st.dummies {
            let (ta, he) = (st.digraph.tail(e), st.digraph.head(e));
            if set.contains(&ta) && set.contains(&he) {
                out.entry(ta).or_default().push(he);
                *indeg.get_mut(&he).unwrap() += 1;
            } else {
                return Err(DrawError::SaturationStuck(format!(
                    "dummy edge {e:?} joins different strips"
                )));
            }
        }
        let mut ready: std::collections::BinaryHeap<std::cmp::Reverse<VertexId>> =
            indeg
                .iter()
                .filter(|(_, &d0)| d0 == 0)
                .map(|(&v, _)| std::cmp::Reverse(v))
                .collect();
        let count = members.len();
        let mut rank = 0usize;
        while let Some(std::cmp::Reverse(v)) = ready.pop() {
            rank += 1;
            y.insert(
                v,
                Rat::from_integer(level.into())
                    + BigRational::new(BigInt::from(rank), BigInt::from(count + 1)),
            );
            for w in out.remove(&v).unwrap_or_default() {
                let d0 = indeg.get_mut(&w).unwrap();
                *d0 -= 1;
                if *d0 == 0 {
                    ready.push(std::cmp::Reverse(w));
                }
            }
        }
        if rank != count {
            return Err(DrawError::DualCyclic);
        }
    }

    // Channels from dual ranks.
    let order = dual_face_order(st)?;
    let mut rank_of: BTreeMap<FaceId, usize> = BTreeMap::new();
    let mut srank = 0usize;
    for (i, node) in order.iter().enumerate() {
        match node {
            DualNode::SStar => srank = i,
            DualNode::Face(f) => {
                rank_of.insert(*f, i);
            }
            DualNode::TStar => {}
        }
    }
    debug_assert_eq!(srank, 0);
    let outer = g.outer_face();
    let channel = |e: EdgeId| -> usize {
        let aligned = if fwd[&e] { DartId::of(e, 0) } else { DartId::of(e, 1) };
        let left = g.face_of(aligned);
        if left == outer {
            0
        } else {
            rank_of[&left]
        }
    };
    let mut x: BTreeMap<VertexId, usize> = BTreeMap::new();
    for v in g.vertex_ids() {
        let cx = g
            .rotation(v)
            .iter()
            .map(|d| channel(d.edge()))
            .min()
            .unwrap_or(0);
        x.insert(v, cx);
    }

    // Pad: a quarter of the smallest vertical gap between vertex heights.
    let mut ys: Vec<&Rat> = y.values().collect();
    ys.sort();
    let mut min_gap: Option<Rat> = None;
    for w in ys.windows(2) {
        let gap = w[1] - w[0];
        if min_gap.as_ref().map_or(true, |g0| &gap < g0) {
            min_gap = Some(gap);
        }
    }
    let delta = min_gap.unwrap_or_else(|| rat(1)) / rat(4);

    let mut drawing = StripDrawing::new(inst.k());
    for v in g.vertex_ids() {
        drawing
            .points
            .insert(v, Point::new(rat(x[&v] as i64), y[&v].clone()));
    }
    for e in g.edge_ids() {
        if st.dummies.contains(&e) {
            continue;
        }
        let tail = st.digraph.tail(e);
        let head = st.digraph.head(e);
        let xe = rat(channel(e) as i64);
        let mut pts = vec![
            drawing.points[&tail].clone(),
            Point::new(xe.clone(), &y[&tail] + &delta),
            Point::new(xe.clone(), &y[&head] - &delta),
            drawing.points[&head].clone(),
        ];
        // Store from the edge's first endpoint.
        let (a, _) = g.edge_ends(e);
        if a != tail {
            pts.reverse();
        }
        drawing.polylines.insert(e, pts);
    }
    Ok(drawing)
}

// ----------------------------------------------------------------------
// SVG rendering

/// Deterministic SVG: shaded strip bands, labeled vertices, edge polylines.
pub fn render_svg(drawing: &StripDrawing, inst: &StripInstance) -> Vec<u8> {
    use crate::geom::decimal;
    use std::fmt::Write as _;

    let scale = rat(60);
    let mut min_x: Option<Rat> = None;
    let mut max_x: Option<Rat> = None;
    for p in drawing
        .points
        .values()
        .cloned()
        .chain(drawing.polylines.values().flatten().cloned())
    {
        if min_x.as_ref().map_or(true, |m| &p.x < m) {
            min_x = Some(p.x.clone());
        }
        if max_x.as_ref().map_or(true, |m| &p.x > m) {
            max_x = Some(p.x);
        }
    }
    let min_x = min_x.unwrap_or_else(|| rat(0)) - rat(1);
    let max_x = max_x.unwrap_or_else(|| rat(1)) + rat(1);
    let k = drawing.k as i64;
    // Flip y so strip 1 renders at the bottom.
    let flip_y = |y: &Rat| -> Rat { (rat(k + 1) - y) * &scale };
    let sx = |x: &Rat| -> Rat { (x - &min_x) * &scale };
    let width = (&max_x - &min_x) * &scale;
    let height = rat(k) * &scale;

    let mut svg = String::new();
    let _ = write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {} {}\">\n",
        decimal(&width, 2),
        decimal(&height, 2)
    );
    for band in 1..=k {
        let fill = if band % 2 == 1 { "#f4f4f8" } else { "#e8e8f0" };
        let y_top = flip_y(&rat(band + 1));
        let _ = write!(
            svg,
            "  <rect x=\"0\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>\n",
            decimal(&y_top, 2),
            decimal(&width, 2),
            decimal(&scale, 2),
            fill
        );
        let _ = write!(
            svg,
            "  <text x=\"4\" y=\"{}\" font-size=\"11\" fill=\"#999\">{}</text>\n",
            decimal(&(&y_top + rat(14)), 2),
            band
        );
    }
    for (_, pts) in &drawing.polylines {
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            let cmd = if i == 0 { 'M' } else { 'L' };
            let _ = write!(
                d,
                "{}{} {} ",
                cmd,
                decimal(&sx(&p.x), 3),
                decimal(&flip_y(&p.y), 3)
            );
        }
        let _ = write!(
            svg,
            "  <path d=\"{}\" fill=\"none\" stroke=\"#334\" stroke-width=\"1.2\"/>\n",
            d.trim_end()
        );
    }
    for (v, p) in &drawing.points {
        let cx = sx(&p.x);
        let cy = flip_y(&p.y);
        let _ = write!(
            svg,
            "  <circle cx=\"{}\" cy=\"{}\" r=\"3.2\" fill=\"#c33\"/>\n",
            decimal(&cx, 3),
            decimal(&cy, 3)
        );
        let _ = write!(
            svg,
            "  <text x=\"{}\" y=\"{}\" font-size=\"9\" fill=\"#555\">{}:{}</text>\n",
            decimal(&(&cx + rat(4)), 3),
            decimal(&(&cy - rat(4)), 3),
            v.0,
            inst.gamma(*v)
        );
    }
    svg.push_str("</svg>\n");
    svg.into_bytes()
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::generate::{generate, Family, GenParams};
    use crate::reduce;
    use crate::upward::test_upward;
    use crate::validate::check_drawing;

    fn draw_jagged(inst: &StripInstance) -> StripDrawing {
        assert!(inst.classify() >= crate::instance::Classification::Jagged);
        let d = EmbeddedDigraph::from_strict_instance(inst).unwrap();
        let asg = test_upward(&d).expect("feasible");
        let st = saturate_to_st(&d, &asg).expect("saturates");
        let supply = d.sources_and_sinks().len();
        assert_eq!(st.dummies.len(), supply - 2);
        coordinates(&st, inst).expect("drawable")
    }

    #[test]
    fn alternating_cycles_draw_and_validate() {
        for n in [4usize, 6, 8, 10, 12] {
            let inst =
                generate(Family::AlternatingCycle, &GenParams { n, k: 2 }, 0).unwrap();
            let drawing = draw_jagged(&inst);
            let report = check_drawing(&inst, &drawing).unwrap();
            assert!(report.ok, "C{n}: {:?}", report.violations);
        }
    }

    #[test]
    fn zigzag_cycles_draw_and_validate() {
        for (k, teeth) in [(3u32, 2usize), (4, 2), (4, 3)] {
            let inst =
                generate(Family::ZigzagCycle, &GenParams { n: teeth, k }, 0).unwrap();
            let drawing = draw_jagged(&inst);
            let report = check_drawing(&inst, &drawing).unwrap();
            assert!(report.ok, "zigzag k={k} t={teeth}: {:?}", report.violations);
        }
    }

    #[test]
    fn theta_draws_and_validates() {
        let inst = generate(Family::ThetaPositive, &GenParams::default(), 0).unwrap();
        let drawing = draw_jagged(&inst);
        let report = check_drawing(&inst, &drawing).unwrap();
        assert!(report.ok, "{:?}", report.violations);
    }

    #[test]
    fn double_arch_draws_and_validates() {
        let inst = generate(Family::DoubleArch, &GenParams::default(), 0).unwrap();
        let drawing = draw_jagged(&inst);
        let report = check_drawing(&inst, &drawing).unwrap();
        assert!(report.ok, "{:?}", report.violations);
    }

    #[test]
    fn jaggedified_ten_cycle_draws() {
        let levels = [1u32, 2, 3, 4, 3, 2, 3, 4, 3, 2];
        let rotations: BTreeMap<u32, Vec<u32>> = (0..10u32)
            .map(|v| (v, vec![(v + 9) % 10, (v + 1) % 10]))
            .collect();
        let graph = PlaneMultigraph::build(&rotations, (1, 0)).unwrap();
        let gamma = (0..10)
            .map(|v| (VertexId(v), levels[v as usize]))
            .collect();
        let inst = StripInstance::new(graph, gamma, 4).unwrap();
        let mut trace = reduce::ReductionTrace::default();
        let mut metrics = reduce::StageMetrics::default();
        let jagged = reduce::jaggedify(&inst, &mut trace, &mut metrics);
        let drawing = draw_jagged(&jagged);
        let report = check_drawing(&jagged, &drawing).unwrap();
        assert!(report.ok, "{:?}", report.violations);
    }

    #[test]
    fn diamond_has_no_dummies() {
        // Path-shaped strips: u(1), a(2), b(2)? A diamond needs a and b in
        // the same strip with u below and t above.
        let rotations: BTreeMap<u32, Vec<u32>> = [
            (0, vec![2, 1]),
            (1, vec![3, 0]),
            (2, vec![0, 3]),
            (3, vec![2, 1]),
        ]
        .into_iter()
        .collect();
        let graph = PlaneMultigraph::build(&rotations, (1, 0)).unwrap();
        let gamma = [
            (VertexId(0), 1),
            (VertexId(1), 2),
            (VertexId(2), 2),
            (VertexId(3), 3),
        ]
        .into_iter()
        .collect();
        let inst = StripInstance::new(graph, gamma, 3).unwrap();
        let d = EmbeddedDigraph::from_strict_instance(&inst).unwrap();
        let asg = test_upward(&d).unwrap();
        let st = saturate_to_st(&d, &asg).unwrap();
        assert!(st.dummies.is_empty());
        assert_eq!((st.s, st.t), (VertexId(0), VertexId(3)));
        let order = dual_face_order(&st).unwrap();
        assert_eq!(order.len(), 3); // s*, one bounded face, t*
        let drawing = coordinates(&st, &inst).unwrap();
        let report = check_drawing(&inst, &drawing).unwrap();
        assert!(report.ok, "{:?}", report.violations);
    }

    #[test]
    fn monotone_path_draws_as_staircase() {
        let rotations: BTreeMap<u32, Vec<u32>> = [
            (0, vec![1]),
            (1, vec![0, 2]),
            (2, vec![1, 3]),
            (3, vec![2]),
        ]
        .into_iter()
        .collect();
        let graph = PlaneMultigraph::build(&rotations, (0, 1)).unwrap();
        let gamma = (0..4).map(|v| (VertexId(v), v + 1)).collect();
        let inst = StripInstance::new(graph, gamma, 4).unwrap();
        let d = EmbeddedDigraph::from_strict_instance(&inst).unwrap();
        let asg = test_upward(&d).unwrap();
        let st = saturate_to_st(&d, &asg).unwrap();
        assert!(st.dummies.is_empty());
        let drawing = coordinates(&st, &inst).unwrap();
        let report = check_drawing(&inst, &drawing).unwrap();
        assert!(report.ok, "{:?}", report.violations);
    }

    #[test]
    fn svg_is_deterministic() {
        let inst =
            generate(Family::AlternatingCycle, &GenParams { n: 6, k: 2 }, 0).unwrap();
        let drawing = draw_jagged(&inst);
        let a = render_svg(&drawing, &inst);
        let b = render_svg(&drawing, &inst);
        assert_eq!(a, b);
        assert!(std::str::from_utf8(&a).unwrap().starts_with("<svg"));
    }
}
