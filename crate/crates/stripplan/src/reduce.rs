//! The four-stage reduction: properize, strictify, quasi-jaggedify,
//! jaggedify. Each stage preserves strip planarity and records a reversible
//! trace used later to pull a drawing of the staged instance back to the
//! original one.

use crate::cplanarity::{two_strip_cplanarity, CplanarityError};
use crate::instance::{FaceScan, StripInstance, SwitchKind};
use crate::plane::{DartId, EdgeId, FaceId, VertexId};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Properize,
    Strictify,
    QuasiJaggedify,
    Jaggedify,
    Upward,
    Draw,
}

impl Stage {
    pub fn name(&self) -> &'static str {
        match self {
            Stage::Properize => "properize",
            Stage::Strictify => "strictify",
            Stage::QuasiJaggedify => "quasi_jaggedify",
            Stage::Jaggedify => "jaggedify",
            Stage::Upward => "upward",
            Stage::Draw => "draw",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitSubcase {
    EqualLevel,
    OffByOne,
}

/// One inserted chain: enough to replay the insertion and to delete it
/// during pullback.
#[derive(Clone, Debug)]
pub struct ChainRecord {
    pub face: FaceId,
    pub anchor_a: DartId,
    pub anchor_b: DartId,
    /// Levels of the internal vertices, in chain order.
    pub levels: Vec<u32>,
    pub new_vertices: Vec<VertexId>,
    pub chain_edges: Vec<EdgeId>,
    pub kept_face: FaceId,
    pub new_face: FaceId,
}

#[derive(Clone, Debug)]
pub struct BigonMerge {
    pub kept: EdgeId,
    pub removed: EdgeId,
    pub ends: (VertexId, VertexId),
}

#[derive(Clone, Debug)]
pub enum TraceStep {
    Subdivide {
        edge: EdgeId,
        ends: (VertexId, VertexId),
        levels: Vec<u32>,
        new_vertices: Vec<VertexId>,
        chain_edges: Vec<EdgeId>,
    },
    TriangleSplit {
        cycle: [VertexId; 3],
        subcase: SplitSubcase,
        inner: Box<StripInstance>,
    },
    Contract {
        edge: EdgeId,
        u: VertexId,
        v: VertexId,
        merged: VertexId,
        /// Edges at u clockwise starting after (u,v), and likewise at v.
        u_order: Vec<EdgeId>,
        v_order: Vec<EdgeId>,
        bigon_merges: Vec<BigonMerge>,
    },
    PathInsert(ChainRecord),
    GadgetInsert {
        face: FaceId,
        chains: Vec<ChainRecord>,
    },
}

#[derive(Clone, Debug, Default)]
pub struct ReductionTrace {
    pub steps: Vec<TraceStep>,
}

/// Why the pipeline said NO.
#[derive(Clone, Debug)]
pub struct Refutation {
    pub stage: Stage,
    pub reason: String,
}

#[derive(Debug, thiserror::Error)]
pub enum ReduceError {
    #[error("two-strip c-planarity budget exhausted: {0}")]
    Budget(#[from] CplanarityError),
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct StageMetrics {
    pub potential_steps: Vec<(u64, u64)>,
    pub case1_fired: bool,
    pub vertices_added: usize,
}

// ----------------------------------------------------------------------
// Properize

/// Subdivides every edge spanning more than one strip boundary.
pub fn properize(inst: &StripInstance) -> (StripInstance, ReductionTrace) {
    let mut trace = ReductionTrace::default();
    let wide: Vec<EdgeId> = inst
        .graph
        .edge_ids()
        .filter(|&e| {
            let (u, v) = inst.graph.edge_ends(e);
            inst.gamma(u).abs_diff(inst.gamma(v)) >= 2
        })
        .collect();
    let mut graph = inst.graph.clone();
    let mut gamma = inst.gamma_map().clone();
    for e in wide {
        let (a, b) = graph.edge_ends(e);
        let (lo_v, hi_v) = if gamma[&a] <= gamma[&b] { (a, b) } else { (b, a) };
        let levels: Vec<u32> = (gamma[&lo_v] + 1..gamma[&hi_v]).collect();
        // Subdivide from end[0] toward end[1]; order levels to match.
        let (e0, _) = graph.edge_ends(e);
        let ordered: Vec<u32> = if e0 == lo_v {
            levels.clone()
        } else {
            levels.iter().rev().copied().collect()
        };
        let sub = graph.subdivide_edge(e, ordered.len()).expect("edge exists");
        for (x, l) in sub.new_vertices.iter().zip(&ordered) {
            gamma.insert(*x, *l);
        }
        trace.steps.push(TraceStep::Subdivide {
            edge: e,
            ends: (a, b),
            levels: ordered,
            new_vertices: sub.new_vertices.clone(),
            chain_edges: sub.chain_edges.clone(),
        });
        graph = sub.graph;
    }
    (
        StripInstance::with_graph(graph, gamma, inst.k()),
        trace,
    )
}

// ----------------------------------------------------------------------
// Strictify

pub enum StrictifyOutcome {
    Strict(StripInstance),
    No(Refutation),
}

/// Eliminates intra-strip edges by triangle splits and contractions.
/// Appends to `trace`; `metrics.case1_fired` is set if any split happened.
pub fn strictify(
    inst: &StripInstance,
    trace: &mut ReductionTrace,
    metrics: &mut StageMetrics,
    budget: u64,
) -> Result<StrictifyOutcome, ReduceError> {
    let mut cur = inst.clone();
    loop {
        let intra: Vec<EdgeId> = cur
            .graph
            .edge_ids()
            .filter(|&e| {
                let (u, v) = cur.graph.edge_ends(e);
                cur.gamma(u) == cur.gamma(v)
            })
            .collect();
        if intra.is_empty() {
            return Ok(StrictifyOutcome::Strict(cur));
        }
        // Prefer an edge lying on a 3-cycle with a non-empty interior
        // (Case 1); contract otherwise.
        let mut chosen: Option<(EdgeId, Vec<(VertexId, Vec<FaceId>, Vec<VertexId>)>)> =
            None;
        for &e in &intra {
            let (u, v) = cur.graph.edge_ends(e);
            let mut candidates: Vec<(VertexId, Vec<FaceId>, Vec<VertexId>)> =
                Vec::new();
            let nbrs_u: BTreeSet<VertexId> = cur.graph.neighbors(u).collect();
            for z in cur.graph.neighbors(v) {
                if z == u || !nbrs_u.contains(&z) {
                    continue;
                }
                let (faces, verts) = cur
                    .graph
                    .cycle_interior(u, v, z)
                    .expect("u,v,z form a 3-cycle");
                if !verts.is_empty() {
                    candidates.push((z, faces, verts));
                }
            }
            if !candidates.is_empty() {
                chosen = Some((e, candidates));
                break;
            }
        }
        let edge = chosen.as_ref().map(|(e, _)| *e).unwrap_or(intra[0]);
        let (u, v) = cur.graph.edge_ends(edge);
        let mut candidates = chosen.map(|(_, c)| c).unwrap_or_default();
        if candidates.is_empty() {
            // Case 2: contract (u,v).
            let rot_u = cur.graph.rotation(u).to_vec();
            let rot_v = cur.graph.rotation(v).to_vec();
            let order = |rot: &[DartId], pivot_edge: EdgeId| -> Vec<EdgeId> {
                let pivot = rot
                    .iter()
                    .position(|d| d.edge() == pivot_edge)
                    .expect("pivot in rotation");
                (1..rot.len())
                    .map(|i| rot[(pivot + i) % rot.len()].edge())
                    .collect()
            };
            let u_order = order(&rot_u, edge);
            let v_order = order(&rot_v, edge);
            let level = cur.gamma(u);
            let c = cur
                .graph
                .clone()
                .contract_edge(edge)
                .expect("no parallel edges in a strict pipeline graph");
            let mut gamma = cur.gamma_map().clone();
            gamma.insert(c.merged, level);
            trace.steps.push(TraceStep::Contract {
                edge,
                u,
                v,
                merged: c.merged,
                u_order,
                v_order,
                bigon_merges: c
                    .bigon_merges
                    .iter()
                    .map(|&(kept, removed, a, b)| BigonMerge { kept, removed, ends: (a, b) })
                    .collect(),
            });
            cur = StripInstance::with_graph(c.graph, gamma, cur.k());
            continue;
        }
        // Case 1: pick the inclusion-minimal interior, deterministically.
        metrics.case1_fired = true;
        candidates.sort_by_key(|(z, _, verts): &(VertexId, Vec<FaceId>, Vec<VertexId>)| {
            (verts.len(), verts.first().copied(), *z)
        });
        let (z, inner_faces, inner_verts) = candidates.swap_remove(0);
        let inner_face_set: BTreeSet<FaceId> = inner_faces.iter().copied().collect();

        // Inner instance: interior plus the triangle, outer face on the
        // triangle side that faced the rest of the graph.
        let mut keep_in: BTreeSet<VertexId> = inner_verts.iter().copied().collect();
        keep_in.extend([u, v, z]);
        let mut inner_graph = cur.graph.restrict_to(&keep_in);
        let d_uv = cur.graph.dart_from_to(u, v).expect("edge uv");
        let outward = if inner_face_set.contains(&cur.graph.face_of(d_uv)) {
            d_uv.twin()
        } else {
            d_uv
        };
        let inner_outer = inner_graph.face_of(outward);
        inner_graph = inner_graph.with_outer(inner_outer);
        let inner_gamma: BTreeMap<VertexId, u32> = keep_in
            .iter()
            .map(|&x| (x, cur.gamma(x)))
            .collect();
        let inner =
            StripInstance::with_graph(inner_graph, inner_gamma, cur.k());

        // Terminal decision on the inner instance.
        let a = cur.gamma(u);
        let b = cur.gamma(z);
        let stray = keep_in
            .iter()
            .find(|&&x| cur.gamma(x) != a && cur.gamma(x) != b);
        if let Some(&x) = stray {
            // Any drawing confines the triangle's interior to the strips its
            // corners span, so a vertex assigned elsewhere is impossible.
            return Ok(StrictifyOutcome::No(Refutation {
                stage: Stage::Strictify,
                reason: format!(
                    "vertex {:?} (strip {}) lies inside 3-cycle ({:?},{:?},{:?}) spanning strips {}..{}",
                    x,
                    cur.gamma(x),
                    u,
                    v,
                    z,
                    a.min(b),
                    a.max(b)
                ),
            }));
        }
        let subcase = if b == a {
            // All of the inner instance sits in one strip: trivially strip
            // planar on its own.
            SplitSubcase::EqualLevel
        } else {
            // Two adjacent strips: decide by two-cluster c-planarity.
            let ids: Vec<VertexId> = keep_in.iter().copied().collect();
            let index: BTreeMap<VertexId, usize> =
                ids.iter().enumerate().map(|(i, &x)| (x, i)).collect();
            let mut edges = Vec::new();
            for e in inner.graph.edge_ids() {
                let (x, y) = inner.graph.edge_ends(e);
                edges.push((index[&x], index[&y]));
            }
            let in_a: Vec<bool> = ids.iter().map(|&x| cur.gamma(x) == a).collect();
            let ok = two_strip_cplanarity(ids.len(), &edges, &in_a, budget)?;
            if !ok {
                return Ok(StrictifyOutcome::No(Refutation {
                    stage: Stage::Strictify,
                    reason: format!(
                        "two-strip interior of 3-cycle ({u:?},{v:?},{z:?}) is not c-planar"
                    ),
                }));
            }
            SplitSubcase::OffByOne
        };
        trace.steps.push(TraceStep::TriangleSplit {
            cycle: [u, v, z],
            subcase,
            inner: Box::new(inner),
        });

        // Continue with the outer part.
        let keep_out: BTreeSet<VertexId> = cur
            .graph
            .vertex_ids()
            .filter(|x| !inner_verts.contains(x))
            .collect();
        let mut outer_graph = cur.graph.restrict_to(&keep_out);
        let outer_witness = cur.graph.face_walk(cur.graph.outer_face())[0];
        let kept_outer = outer_graph.face_of(outer_witness);
        outer_graph = outer_graph.with_outer(kept_outer);
        let outer_gamma: BTreeMap<VertexId, u32> = keep_out
            .iter()
            .map(|&x| (x, cur.gamma(x)))
            .collect();
        cur = StripInstance::with_graph(outer_graph, outer_gamma, cur.k());
    }
}

// ----------------------------------------------------------------------
// Quasi-jaggedify

/// Inserts monotone paths until every visible min/max pair on every face has
/// a monotone boundary arc.
pub fn quasi_jaggedify(
    inst: &StripInstance,
    trace: &mut ReductionTrace,
) -> StripInstance {
    let mut cur = inst.clone();
    let mut last_bad = usize::MAX;
    loop {
        let mut found: Option<(FaceId, usize, usize)> = None;
        let mut bad_total = 0usize;
        for f in cur.graph.face_ids() {
            let scan = FaceScan::new(&cur, f);
            let sw = scan.switches();
            for a in &sw {
                if a.kind != SwitchKind::LocalMin {
                    continue;
                }
                for b in &sw {
                    if b.kind != SwitchKind::LocalMax {
                        continue;
                    }
                    if scan.visible(a.pos, b.pos)
                        && !scan.monotone_arc_exists(a.pos, b.pos)
                    {
                        bad_total += 1;
                        if found.is_none() {
                            found = Some((f, a.pos, b.pos));
                        }
                    }
                }
            }
        }
        assert!(
            bad_total < last_bad,
            "monotone path insertion must reduce the bad-triple count"
        );
        last_bad = bad_total;
        let Some((f, min_pos, max_pos)) = found else {
            return cur;
        };
        let walk = cur.graph.face_walk(f).to_vec();
        let m = walk.len();
        let anchor_a = walk[(min_pos + m - 1) % m];
        let anchor_b = walk[(max_pos + m - 1) % m];
        let lo = cur.gamma(cur.graph.origin(walk[min_pos]));
        let hi = cur.gamma(cur.graph.origin(walk[max_pos]));
        let levels: Vec<u32> = (lo + 1..hi).collect();
        cur = insert_chain(cur, f, anchor_a, anchor_b, &levels, trace, None);
    }
}

/// Runs one chain insertion, assigns levels, records a trace step (either a
/// standalone PathInsert or a part of a gadget via `gadget_parts`).
fn insert_chain(
    inst: StripInstance,
    face: FaceId,
    anchor_a: DartId,
    anchor_b: DartId,
    levels: &[u32],
    trace: &mut ReductionTrace,
    gadget_parts: Option<&mut Vec<ChainRecord>>,
) -> StripInstance {
    let k = inst.k();
    let mut gamma = inst.gamma_map().clone();
    let ins = inst
        .graph
        .insert_path_in_face(face, anchor_a, anchor_b, levels.len())
        .expect("anchors bound the face");
    for (x, &l) in ins.new_vertices.iter().zip(levels) {
        gamma.insert(*x, l);
    }
    let record = ChainRecord {
        face,
        anchor_a,
        anchor_b,
        levels: levels.to_vec(),
        new_vertices: ins.new_vertices.clone(),
        chain_edges: ins.chain_edges.clone(),
        kept_face: ins.kept_face,
        new_face: ins.new_face,
    };
    match gadget_parts {
        Some(parts) => parts.push(record),
        None => trace.steps.push(TraceStep::PathInsert(record)),
    }
    StripInstance::with_graph(ins.graph, gamma, k)
}

// ----------------------------------------------------------------------
// Jaggedify

/// Levels seen through an optional top-bottom flip, which maps the
/// local-maximum cases onto the local-minimum ones.
struct Flip {
    k: u32,
    flip: bool,
}

impl Flip {
    fn lv(&self, gamma: u32) -> u32 {
        if self.flip {
            self.k + 1 - gamma
        } else {
            gamma
        }
    }
    fn unlv(&self, level: u32) -> u32 {
        self.lv(level)
    }
}

/// Turns a quasi-jagged instance into a jagged one by monotone-path and
/// gadget insertions; every augmentation strictly decreases the potential.
pub fn jaggedify(
    inst: &StripInstance,
    trace: &mut ReductionTrace,
    metrics: &mut StageMetrics,
) -> StripInstance {
    let mut cur = inst.clone();
    loop {
        let before = cur.potential().expect("strict by stage contract");
        if before == 0 {
            return cur;
        }
        let (f, pos, kind) = first_offender(&cur).expect("positive potential");
        cur = augment_face(cur, f, pos, kind, trace);
        let after = cur.potential().expect("still strict");
        assert!(
            after < before,
            "augmentation must lower the potential: {before} -> {after}"
        );
        metrics.potential_steps.push((before, after));
    }
}

fn first_offender(inst: &StripInstance) -> Option<(FaceId, usize, SwitchKind)> {
    for f in inst.graph.face_ids() {
        let scan = FaceScan::new(inst, f);
        for s in scan.switches() {
            if !s.is_global {
                return Some((f, s.pos, s.kind));
            }
        }
    }
    None
}

fn augment_face(
    inst: StripInstance,
    f: FaceId,
    v_pos: usize,
    v_kind: SwitchKind,
    trace: &mut ReductionTrace,
) -> StripInstance {
    let flip = Flip { k: inst.k(), flip: v_kind == SwitchKind::LocalMax };
    let scan = FaceScan::new(&inst, f);
    let m = scan.len();
    let levels: Vec<u32> = scan.levels.iter().map(|&g| flip.lv(g)).collect();
    let face_min = *levels.iter().min().unwrap();
    let face_max = *levels.iter().max().unwrap();
    let is_global_extreme = |p: usize| -> Option<SwitchKind> {
        // Kind in flipped space.
        let l = levels[p];
        let prev = levels[(p + m - 1) % m];
        let next = levels[(p + 1) % m];
        if prev > l && next > l && l == face_min {
            Some(SwitchKind::LocalMin)
        } else if prev < l && next < l && l == face_max {
            Some(SwitchKind::LocalMax)
        } else {
            None
        }
    };
    // First global extremes walking forward (face on the left) and backward.
    let mut u_pos = v_pos;
    let u_kind = loop {
        u_pos = (u_pos + 1) % m;
        if let Some(kind) = is_global_extreme(u_pos) {
            break kind;
        }
        debug_assert_ne!(u_pos, v_pos, "face has a global extreme");
    };
    let mut z_pos = v_pos;
    let z_kind = loop {
        z_pos = (z_pos + m - 1) % m;
        if let Some(kind) = is_global_extreme(z_pos) {
            break kind;
        }
    };

    if u_kind != z_kind {
        // Case 1: a monotone path from v'' (first vertex at the lowest
        // internal local-min level, walking Q from its min end) to the max
        // end of Q.
        let (min_pos, max_pos, from_min_forward) = if u_kind == SwitchKind::LocalMax {
            (z_pos, u_pos, true)
        } else {
            (u_pos, z_pos, false)
        };
        // Q in forward walk order runs z_pos .. v_pos .. u_pos.
        let q_positions: Vec<usize> = {
            let mut ps = vec![z_pos];
            let mut p = z_pos;
            while p != u_pos {
                p = (p + 1) % m;
                ps.push(p);
            }
            ps
        };
        // Lowest internal local-min level on Q (flipped space).
        let vprime_level = q_positions[1..q_positions.len() - 1]
            .iter()
            .filter(|&&p| {
                let l = levels[p];
                levels[(p + m - 1) % m] > l && levels[(p + 1) % m] > l
            })
            .map(|&p| levels[p])
            .min()
            .expect("Q contains an internal local minimum");
        let ordered: Vec<usize> = if from_min_forward {
            q_positions.clone()
        } else {
            q_positions.iter().rev().copied().collect()
        };
        debug_assert_eq!(ordered[0], min_pos);
        let vpp_pos = *ordered
            .iter()
            .find(|&&p| levels[p] == vprime_level)
            .expect("level is attained on Q");
        let _ = min_pos;
        // Monotone path from v'' up to the max end (flipped space).
        let lo = levels[vpp_pos];
        let hi = levels[max_pos];
        let fill: Vec<u32> = (lo + 1..hi).map(|l| flip.unlv(l)).collect();
        let walk = inst.graph.face_walk(f).to_vec();
        let anchor_a = walk[(vpp_pos + m - 1) % m];
        let anchor_b = walk[(max_pos + m - 1) % m];
        return insert_chain(inst, f, anchor_a, anchor_b, &fill, trace, None);
    }

    // Case 2: both ends of the scan are global extrema of the same kind.
    // Normalize the flip so they are maxima.
    let flip = if u_kind == SwitchKind::LocalMin {
        Flip { k: inst.k(), flip: !flip.flip }
    } else {
        flip
    };
    let levels: Vec<u32> = scan.levels.iter().map(|&g| flip.lv(g)).collect();
    let face_min = *levels.iter().min().unwrap();
    let face_max = *levels.iter().max().unwrap();
    let global_kind = |p: usize| -> Option<SwitchKind> {
        let l = levels[p];
        let prev = levels[(p + m - 1) % m];
        let next = levels[(p + 1) % m];
        if prev > l && next > l && l == face_min {
            Some(SwitchKind::LocalMin)
        } else if prev < l && next < l && l == face_max {
            Some(SwitchKind::LocalMax)
        } else {
            None
        }
    };
    // Extend M to a maximal path between global maxima containing no global
    // minimum inside: forward end u_M, backward end v_M.
    let next_global = |start: usize, fwd: bool| -> (usize, SwitchKind) {
        let mut p = start;
        loop {
            p = if fwd { (p + 1) % m } else { (p + m - 1) % m };
            if let Some(kind) = global_kind(p) {
                return (p, kind);
            }
        }
    };
    let mut um_pos = {
        let (p, kind) = next_global(v_pos, true);
        debug_assert_eq!(kind, SwitchKind::LocalMax);
        p
    };
    loop {
        let (p, kind) = next_global(um_pos, true);
        if kind == SwitchKind::LocalMax {
            um_pos = p;
        } else {
            break;
        }
    }
    let mut vm_pos = {
        let (p, kind) = next_global(v_pos, false);
        debug_assert_eq!(kind, SwitchKind::LocalMax);
        p
    };
    loop {
        let (p, kind) = next_global(vm_pos, false);
        if kind == SwitchKind::LocalMax {
            vm_pos = p;
        } else {
            break;
        }
    }
    // M in forward order runs vm_pos .. v_pos .. um_pos. Its lowest internal
    // local minimum gives the inner gadget level.
    let m_positions: Vec<usize> = {
        let mut ps = vec![vm_pos];
        let mut p = vm_pos;
        while p != um_pos {
            p = (p + 1) % m;
            ps.push(p);
        }
        ps
    };
    let mid_lv = m_positions[1..m_positions.len() - 1]
        .iter()
        .filter(|&&p| {
            let l = levels[p];
            levels[(p + m - 1) % m] > l && levels[(p + 1) % m] > l
        })
        .map(|&p| levels[p])
        .min()
        .expect("M contains a local minimum");
    let top = face_max; // level of u_M, v_M, z_M (flipped space)
    let bottom = face_min; // level of a_m, b_m

    // Gadget chain levels in flipped space, then unflipped for insertion.
    let seg_up = |from: u32, to: u32| -> Vec<u32> { (from + 1..to).collect() };
    let seg_down = |from: u32, to: u32| -> Vec<u32> {
        (to + 1..from).rev().collect()
    };
    // Chain 1: u_M down to a_m, up to z_M, down to b_m, up to v_M.
    let mut chain1 = Vec::new();
    chain1.extend(seg_down(top, bottom));
    let a_m_idx = chain1.len();
    chain1.push(bottom);
    chain1.extend(seg_up(bottom, top));
    let z_m_idx = chain1.len();
    chain1.push(top);
    chain1.extend(seg_down(top, bottom));
    let b_m_idx = chain1.len();
    chain1.push(bottom);
    chain1.extend(seg_up(bottom, top));
    // Chain 2: u_M down to a'_m, up to z_M.
    let mut chain2 = Vec::new();
    chain2.extend(seg_down(top, mid_lv));
    let apm_idx = chain2.len();
    chain2.push(mid_lv);
    chain2.extend(seg_up(mid_lv, top));
    // Chain 3: a_m up to a'_m. Chain 5: b_m up to b'_m.
    let chain3: Vec<u32> = seg_up(bottom, mid_lv);
    // Chain 4: z_M down to b'_m, up to v_M.
    let mut chain4 = Vec::new();
    chain4.extend(seg_down(top, mid_lv));
    let bpm_idx = chain4.len();
    chain4.push(mid_lv);
    chain4.extend(seg_up(mid_lv, top));

    let unflip = |v: &[u32]| -> Vec<u32> { v.iter().map(|&l| flip.unlv(l)).collect() };
    let walk = inst.graph.face_walk(f).to_vec();
    let mut parts: Vec<ChainRecord> = Vec::new();

    // Chain 1 between the corners of u_M and v_M.
    let anchor_um = walk[(um_pos + m - 1) % m];
    let anchor_vm = walk[(vm_pos + m - 1) % m];
    let mut cur = insert_chain(
        inst,
        f,
        anchor_um,
        anchor_vm,
        &unflip(&chain1),
        trace,
        Some(&mut parts),
    );
    let c1 = parts.last().unwrap().clone();
    let c1_arrive = |idx: usize| -> DartId { DartId::of(c1.chain_edges[idx], 0) };

    // The side of the split that contains M also contains the old anchor.
    let m_side = cur.graph.face_of(anchor_um);
    // Chain 2: u_M -> a'_m -> z_M inside the M side.
    let anchor_zm = c1_arrive(z_m_idx);
    debug_assert_eq!(cur.graph.face_of(anchor_zm), m_side);
    cur = insert_chain(
        cur,
        m_side,
        anchor_um,
        anchor_zm,
        &unflip(&chain2),
        trace,
        Some(&mut parts),
    );
    let c2 = parts.last().unwrap().clone();

    // Chain 3: a_m -> a'_m inside the face between chain 1 and chain 2.
    let anchor_am = c1_arrive(a_m_idx);
    let side34 = cur.graph.face_of(anchor_am);
    let anchor_apm = {
        // Dart arriving at a'_m along chain 2 reversed (from the z_M side).
        let idx = apm_idx; // edge apm_idx+1 connects a'_m to the next vertex
        DartId::of(c2.chain_edges[idx + 1], 1)
    };
    debug_assert_eq!(cur.graph.face_of(anchor_apm), side34);
    cur = insert_chain(
        cur,
        side34,
        anchor_am,
        anchor_apm,
        &unflip(&chain3),
        trace,
        Some(&mut parts),
    );

    // Chain 4: z_M -> b'_m -> v_M inside the (current) M side.
    let anchor_zm2 = {
        // Dart arriving at z_M along chain 2.
        DartId::of(*c2.chain_edges.last().unwrap(), 0)
    };
    let m_side2 = cur.graph.face_of(anchor_zm2);
    let anchor_vm2 = c1_arrive(c1.chain_edges.len() - 1);
    debug_assert_eq!(cur.graph.face_of(anchor_vm2), m_side2);
    cur = insert_chain(
        cur,
        m_side2,
        anchor_zm2,
        anchor_vm2,
        &unflip(&chain4),
        trace,
        Some(&mut parts),
    );
    let c4 = parts.last().unwrap().clone();

    // Chain 5: b_m -> b'_m.
    let anchor_bm = c1_arrive(b_m_idx);
    let side56 = cur.graph.face_of(anchor_bm);
    let anchor_bpm = DartId::of(c4.chain_edges[bpm_idx + 1], 1);
    debug_assert_eq!(cur.graph.face_of(anchor_bpm), side56);
    cur = insert_chain(
        cur,
        side56,
        anchor_bm,
        anchor_bpm,
        &unflip(&chain3.clone()),
        trace,
        Some(&mut parts),
    );

    trace.steps.push(TraceStep::GadgetInsert { face: f, chains: parts });
    cur
}

// ----------------------------------------------------------------------
// Replay

/// Reapplies a trace to the instance it was recorded from. Surgery receipts
/// are deterministic, so this reproduces the staged instance exactly.
pub fn replay(start: &StripInstance, trace: &ReductionTrace) -> StripInstance {
    let mut cur = start.clone();
    for step in &trace.steps {
        match step {
            TraceStep::Subdivide { edge, levels, .. } => {
                let mut gamma = cur.gamma_map().clone();
                let sub = cur.graph.clone().subdivide_edge(*edge, levels.len()).unwrap();
                for (x, &l) in sub.new_vertices.iter().zip(levels) {
                    gamma.insert(*x, l);
                }
                cur = StripInstance::with_graph(sub.graph, gamma, cur.k());
            }
            TraceStep::TriangleSplit { cycle, .. } => {
                let (_, inner_verts) = cur
                    .graph
                    .cycle_interior(cycle[0], cycle[1], cycle[2])
                    .unwrap();
                let keep: BTreeSet<VertexId> = cur
                    .graph
                    .vertex_ids()
                    .filter(|x| !inner_verts.contains(x))
                    .collect();
                let witness = cur.graph.face_walk(cur.graph.outer_face())[0];
                let mut g = cur.graph.restrict_to(&keep);
                let kept_outer = g.face_of(witness);
                g = g.with_outer(kept_outer);
                let gamma = cur.gamma_map().clone();
                cur = StripInstance::with_graph(g, gamma, cur.k());
            }
            TraceStep::Contract { edge, u, .. } => {
                let level = cur.gamma(*u);
                let c = cur.graph.clone().contract_edge(*edge).unwrap();
                let mut gamma = cur.gamma_map().clone();
                gamma.insert(c.merged, level);
                cur = StripInstance::with_graph(c.graph, gamma, cur.k());
            }
            TraceStep::PathInsert(rec) => {
                cur = replay_chain(cur, rec);
            }
            TraceStep::GadgetInsert { chains, .. } => {
                for rec in chains {
                    cur = replay_chain(cur, rec);
                }
            }
        }
    }
    cur
}

fn replay_chain(cur: StripInstance, rec: &ChainRecord) -> StripInstance {
    let mut gamma = cur.gamma_map().clone();
    let ins = cur
        .graph
        .clone()
        .insert_path_in_face(rec.face, rec.anchor_a, rec.anchor_b, rec.levels.len())
        .unwrap();
    for (x, &l) in ins.new_vertices.iter().zip(&rec.levels) {
        gamma.insert(*x, l);
    }
    StripInstance::with_graph(ins.graph, gamma, cur.k())
}
