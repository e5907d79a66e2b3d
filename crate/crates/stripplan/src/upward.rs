//! Fixed-embedding upward planarity testing for embedded digraphs.
//!
//! The criterion: the digraph must be bimodal, and there must be an
//! assignment of every source and sink to one incident switch face so that
//! each bounded face receives exactly sigma/2 - 1 large angles and the outer
//! face sigma/2 + 1, where sigma counts the face's switch corners.
//! Feasibility is decided by integral max-flow; a brute-force enumerator
//! serves as an independent oracle.

use crate::instance::{InstanceError, StripInstance};
use crate::plane::{DartId, EdgeId, FaceId, PlaneMultigraph, VertexId};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Clone, Debug)]
pub struct EmbeddedDigraph {
    pub graph: PlaneMultigraph,
    /// Edge is directed along dart side 0 (ends[0] -> ends[1]) when true.
    forward: BTreeMap<EdgeId, bool>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UpwardError {
    #[error("digraph is not bimodal at vertex {0:?}")]
    Bimodality(VertexId),
    #[error("face demands cannot be met: {0}")]
    SupplyDemand(String),
    #[error("no feasible large-angle assignment exists")]
    Matching,
    #[error("brute-force budget exceeded: {0} sources+sinks")]
    BudgetExceeded(usize),
}

/// Large-angle assignment and the face bookkeeping used to find it.
#[derive(Clone, Debug, Serialize)]
pub struct AngleAssignment {
    pub vertex_to_face: BTreeMap<u32, u32>,
    pub face_demand: BTreeMap<u32, u32>,
}

impl EmbeddedDigraph {
    pub fn new(graph: PlaneMultigraph, forward: BTreeMap<EdgeId, bool>) -> Self {
        debug_assert!(graph.edge_ids().all(|e| forward.contains_key(&e)));
        EmbeddedDigraph { graph, forward }
    }

    /// Orients every edge of a strict instance toward the higher strip.
    pub fn from_strict_instance(inst: &StripInstance) -> Result<Self, InstanceError> {
        if !inst.is_strict() {
            return Err(InstanceError::NotStrict);
        }
        let mut forward = BTreeMap::new();
        for e in inst.graph.edge_ids() {
            let (a, b) = inst.graph.edge_ends(e);
            forward.insert(e, inst.gamma(a) < inst.gamma(b));
        }
        Ok(EmbeddedDigraph { graph: inst.graph.clone(), forward })
    }

    pub fn forward_map(&self) -> &BTreeMap<EdgeId, bool> {
        &self.forward
    }

    /// Does the edge of `d` leave the origin of `d`?
    pub fn points_away(&self, d: DartId) -> bool {
        let side0 = d.0 & 1 == 0;
        self.forward[&d.edge()] == side0
    }

    pub fn tail(&self, e: EdgeId) -> VertexId {
        let (a, b) = self.graph.edge_ends(e);
        if self.forward[&e] {
            a
        } else {
            b
        }
    }

    pub fn head(&self, e: EdgeId) -> VertexId {
        let (a, b) = self.graph.edge_ends(e);
        if self.forward[&e] {
            b
        } else {
            a
        }
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.graph
            .rotation(v)
            .iter()
            .filter(|&&d| self.points_away(d))
            .count()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.graph.degree(v) - self.out_degree(v)
    }

    pub fn is_source(&self, v: VertexId) -> bool {
        self.graph.degree(v) > 0 && self.in_degree(v) == 0
    }

    pub fn is_sink(&self, v: VertexId) -> bool {
        self.graph.degree(v) > 0 && self.out_degree(v) == 0
    }

    pub fn sources_and_sinks(&self) -> Vec<VertexId> {
        self.graph
            .vertex_ids()
            .filter(|&v| self.is_source(v) || self.is_sink(v))
            .collect()
    }

    /// Switch corners of a face: walk positions whose two boundary edges
    /// both enter or both leave the corner vertex.
    pub fn switch_corners(&self, f: FaceId) -> Vec<SwitchCorner> {
        let walk = self.graph.face_walk(f);
        let m = walk.len();
        let mut out = Vec::new();
        for i in 0..m {
            let d_in = walk[i];
            let d_out = walk[(i + 1) % m];
            let w = self.graph.head(d_in);
            debug_assert_eq!(w, self.graph.origin(d_out));
            let into_w = self.points_away(d_in);
            let away_w = self.points_away(d_out);
            if into_w && !away_w {
                out.push(SwitchCorner { pos: i, vertex: w, kind: CornerKind::Sink });
            } else if !into_w && away_w {
                out.push(SwitchCorner { pos: i, vertex: w, kind: CornerKind::Source });
            }
        }
        out
    }

    pub fn sigma(&self, f: FaceId) -> usize {
        self.switch_corners(f).len()
    }

    /// Demand of a face: large angles it must receive.
    pub fn demand(&self, f: FaceId) -> i64 {
        let s = self.sigma(f) as i64;
        if f == self.graph.outer_face() {
            s / 2 + 1
        } else {
            s / 2 - 1
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CornerKind {
    Source,
    Sink,
}

#[derive(Clone, Copy, Debug)]
pub struct SwitchCorner {
    pub pos: usize,
    pub vertex: VertexId,
    pub kind: CornerKind,
}

/// True iff at every vertex the incoming darts are consecutive in rotation.
pub fn bimodal_check(d: &EmbeddedDigraph) -> bool {
    first_bimodality_violation(d).is_none()
}

fn first_bimodality_violation(d: &EmbeddedDigraph) -> Option<VertexId> {
    for v in d.graph.vertex_ids() {
        let rot = d.graph.rotation(v);
        if rot.len() <= 2 {
            continue;
        }
        let mut changes = 0;
        for i in 0..rot.len() {
            let a = d.points_away(rot[i]);
            let b = d.points_away(rot[(i + 1) % rot.len()]);
            if a != b {
                changes += 1;
            }
        }
        if changes > 2 {
            return Some(v);
        }
    }
    None
}

/// Fixed-embedding upward planarity test; on success returns one feasible
/// large-angle assignment.
pub fn test_upward(d: &EmbeddedDigraph) -> Result<AngleAssignment, UpwardError> {
    if let Some(v) = first_bimodality_violation(d) {
        return Err(UpwardError::Bimodality(v));
    }
    let faces: Vec<FaceId> = d.graph.face_ids().collect();
    let mut demand: BTreeMap<FaceId, i64> = BTreeMap::new();
    for &f in &faces {
        let dem = d.demand(f);
        if dem < 0 {
            return Err(UpwardError::SupplyDemand(format!(
                "face {f:?} has {} switch corners and negative demand",
                d.sigma(f)
            )));
        }
        demand.insert(f, dem);
    }
    let supply = d.sources_and_sinks();
    let total_demand: i64 = demand.values().sum();
    if total_demand != supply.len() as i64 {
        return Err(UpwardError::SupplyDemand(format!(
            "total demand {total_demand} != sources+sinks {}",
            supply.len()
        )));
    }

    // Candidate faces per source/sink: faces with a switch corner there.
    // For a source or sink every incident corner is a switch.
    let mut candidates: BTreeMap<VertexId, BTreeSet<FaceId>> = BTreeMap::new();
    for &v in &supply {
        let set: BTreeSet<FaceId> = d
            .graph
            .rotation(v)
            .iter()
            .map(|&dart| d.graph.face_of(dart))
            .collect();
        candidates.insert(v, set);
    }

    // Integral max-flow on source -> vertices -> faces -> sink.
    let n_v = supply.len();
    let n_f = faces.len();
    let s = n_v + n_f;
    let t = s + 1;
    let mut net = FlowNetwork::new(t + 1);
    for (i, &v) in supply.iter().enumerate() {
        net.add_edge(s, i, 1);
        for &f in &candidates[&v] {
            let fi = faces.iter().position(|&x| x == f).unwrap();
            net.add_edge(i, n_v + fi, 1);
        }
    }
    for (fi, &f) in faces.iter().enumerate() {
        net.add_edge(n_v + fi, t, demand[&f]);
    }
    let flow = net.max_flow(s, t);
    if flow != supply.len() as i64 {
        return Err(UpwardError::Matching);
    }
    let mut vertex_to_face = BTreeMap::new();
    for (i, &v) in supply.iter().enumerate() {
        let fi = net
            .saturated_neighbor(i, n_v, n_v + n_f)
            .expect("saturated vertex has an outgoing unit");
        vertex_to_face.insert(v.0, faces[fi - n_v].0);
    }
    Ok(AngleAssignment {
        vertex_to_face,
        face_demand: demand.iter().map(|(f, &d0)| (f.0, d0 as u32)).collect(),
    })
}

/// Exhaustive assignment search; agrees with `test_upward` feasibility.
pub fn brute_force_upward(d: &EmbeddedDigraph, budget: usize) -> Result<bool, UpwardError> {
    if first_bimodality_violation(d).is_some() {
        return Ok(false);
    }
    let supply = d.sources_and_sinks();
    if supply.len() > budget {
        return Err(UpwardError::BudgetExceeded(supply.len()));
    }
    let faces: Vec<FaceId> = d.graph.face_ids().collect();
    let mut remaining: BTreeMap<FaceId, i64> = BTreeMap::new();
    for &f in &faces {
        let dem = d.demand(f);
        if dem < 0 {
            return Ok(false);
        }
        remaining.insert(f, dem);
    }
    if remaining.values().sum::<i64>() != supply.len() as i64 {
        return Ok(false);
    }
    fn assign(
        d: &EmbeddedDigraph,
        supply: &[VertexId],
        idx: usize,
        remaining: &mut BTreeMap<FaceId, i64>,
    ) -> bool {
        if idx == supply.len() {
            return remaining.values().all(|&r| r == 0);
        }
        let v = supply[idx];
        let mut faces_here: Vec<FaceId> = d
            .graph
            .rotation(v)
            .iter()
            .map(|&dart| d.graph.face_of(dart))
            .collect();
        faces_here.sort_unstable();
        faces_here.dedup();
        for f in faces_here {
            if remaining[&f] > 0 {
                *remaining.get_mut(&f).unwrap() -= 1;
                if assign(d, supply, idx + 1, remaining) {
                    return true;
                }
                *remaining.get_mut(&f).unwrap() += 1;
            }
        }
        false
    }
    Ok(assign(d, &supply, 0, &mut remaining))
}

// ----------------------------------------------------------------------
// Tiny deterministic max-flow (BFS augmentation).

struct FlowNetwork {
    // adjacency: node -> (edge index into `edges`)
    adj: Vec<Vec<usize>>,
    // (to, capacity); reverse edge at index ^ 1
    edges: Vec<(usize, i64)>,
}

impl FlowNetwork {
    fn new(n: usize) -> Self {
        FlowNetwork { adj: vec![Vec::new(); n], edges: Vec::new() }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: i64) {
        let i = self.edges.len();
        self.edges.push((to, cap));
        self.edges.push((from, 0));
        self.adj[from].push(i);
        self.adj[to].push(i + 1);
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        loop {
            let mut prev_edge = vec![usize::MAX; self.adj.len()];
            let mut seen = vec![false; self.adj.len()];
            let mut queue = std::collections::VecDeque::new();
            seen[s] = true;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &ei in &self.adj[u] {
                    let (to, cap) = self.edges[ei];
                    if cap > 0 && !seen[to] {
                        seen[to] = true;
                        prev_edge[to] = ei;
                        queue.push_back(to);
                    }
                }
            }
            if !seen[t] {
                return total;
            }
            // Unit capacities on the matching layer: bottleneck is fine.
            let mut bottleneck = i64::MAX;
            let mut x = t;
            while x != s {
                let ei = prev_edge[x];
                bottleneck = bottleneck.min(self.edges[ei].1);
                x = self.edges[ei ^ 1].0;
            }
            let mut x = t;
            while x != s {
                let ei = prev_edge[x];
                self.edges[ei].1 -= bottleneck;
                self.edges[ei ^ 1].1 += bottleneck;
                x = self.edges[ei ^ 1].0;
            }
            total += bottleneck;
        }
    }

    /// After max-flow: the unique saturated out-neighbor of `node` within
    /// the index range [lo, hi).
    fn saturated_neighbor(&self, node: usize, lo: usize, hi: usize) -> Option<usize> {
        for &ei in &self.adj[node] {
            if ei % 2 == 0 {
                let (to, cap) = self.edges[ei];
                if to >= lo && to < hi && cap == 0 {
                    return Some(to);
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::generate::{generate, Family, GenParams};

    fn diamond() -> EmbeddedDigraph {
        // u(0) at the bottom, a(1) left, b(2) right, t(3) on top.
        let rotations: BTreeMap<u32, Vec<u32>> = [
            (0, vec![2, 1]),
            (1, vec![3, 0]),
            (2, vec![0, 3]),
            (3, vec![2, 1]),
        ]
        .into_iter()
        .collect();
        let graph = PlaneMultigraph::build(&rotations, (1, 0)).unwrap();
        let mut forward = BTreeMap::new();
        for e in graph.edge_ids() {
            let (x, _) = graph.edge_ends(e);
            // Orient away from u and into t.
            let levels = |v: VertexId| match v.0 {
                0 => 0,
                3 => 2,
                _ => 1,
            };
            let (a, b) = graph.edge_ends(e);
            forward.insert(e, levels(a) < levels(b));
            let _ = x;
        }
        EmbeddedDigraph::new(graph, forward)
    }

    #[test]
    fn diamond_is_upward_planar() {
        let d = diamond();
        assert!(bimodal_check(&d));
        let asg = test_upward(&d).unwrap();
        // Both the source and the sink go to the outer face.
        let outer = d.graph.outer_face().0;
        assert_eq!(asg.vertex_to_face[&0], outer);
        assert_eq!(asg.vertex_to_face[&3], outer);
        assert!(brute_force_upward(&d, 14).unwrap());
    }

    #[test]
    fn alternating_c6_is_feasible() {
        let inst =
            generate(Family::AlternatingCycle, &GenParams { n: 6, k: 2 }, 0).unwrap();
        let d = EmbeddedDigraph::from_strict_instance(&inst).unwrap();
        assert_eq!(d.sources_and_sinks().len(), 6);
        let outer_demand = d.demand(d.graph.outer_face());
        let inner: Vec<FaceId> = d
            .graph
            .face_ids()
            .filter(|&f| f != d.graph.outer_face())
            .collect();
        assert_eq!(outer_demand, 4);
        assert_eq!(d.demand(inner[0]), 2);
        assert!(test_upward(&d).is_ok());
        assert!(brute_force_upward(&d, 14).unwrap());
    }

    #[test]
    fn non_bimodal_vertex_detected() {
        // Star with alternating directions around the center.
        let rotations: BTreeMap<u32, Vec<u32>> = [
            (0, vec![1, 2, 3, 4]),
            (1, vec![0]),
            (2, vec![0]),
            (3, vec![0]),
            (4, vec![0]),
        ]
        .into_iter()
        .collect();
        let graph = PlaneMultigraph::build(&rotations, (0, 1)).unwrap();
        let mut forward = BTreeMap::new();
        for e in graph.edge_ids() {
            let (a, b) = graph.edge_ends(e);
            let center_first = a == VertexId(0);
            // Edges to 1 and 3 point out of the center, to 2 and 4 inward.
            let outward = (if center_first { b } else { a }).0 % 2 == 1;
            forward.insert(e, center_first == outward);
        }
        let d = EmbeddedDigraph::new(graph, forward);
        assert!(!bimodal_check(&d));
        assert!(matches!(test_upward(&d), Err(UpwardError::Bimodality(_))));
        assert_eq!(brute_force_upward(&d, 14).unwrap(), false);
    }

    #[test]
    fn out_star_is_feasible() {
        let rotations: BTreeMap<u32, Vec<u32>> = [
            (0, vec![1, 2, 3]),
            (1, vec![0]),
            (2, vec![0]),
            (3, vec![0]),
        ]
        .into_iter()
        .collect();
        let graph = PlaneMultigraph::build(&rotations, (0, 1)).unwrap();
        let mut forward = BTreeMap::new();
        for e in graph.edge_ids() {
            let (a, _) = graph.edge_ends(e);
            forward.insert(e, a == VertexId(0));
        }
        let d = EmbeddedDigraph::new(graph, forward);
        // One face; sigma counts three source corners at the center plus a
        // sink corner at each leaf.
        let f = d.graph.outer_face();
        assert_eq!(d.sigma(f), 6);
        assert_eq!(d.demand(f), 4);
        assert!(test_upward(&d).is_ok());
        assert!(brute_force_upward(&d, 14).unwrap());
    }

    #[test]
    fn directed_cycle_infeasible() {
        let rotations: BTreeMap<u32, Vec<u32>> = [
            (0, vec![2, 1]),
            (1, vec![0, 2]),
            (2, vec![1, 0]),
        ]
        .into_iter()
        .collect();
        let graph = PlaneMultigraph::build(&rotations, (1, 0)).unwrap();
        // Orient 0 -> 1 -> 2 -> 0.
        let mut forward = BTreeMap::new();
        for e in graph.edge_ids() {
            let (a, b) = graph.edge_ends(e);
            forward.insert(e, (a.0 + 1) % 3 == b.0);
        }
        let d = EmbeddedDigraph::new(graph, forward);
        // No switches anywhere: inner face demand is negative.
        assert!(matches!(
            test_upward(&d),
            Err(UpwardError::SupplyDemand(_))
        ));
        assert_eq!(brute_force_upward(&d, 14).unwrap(), false);
    }

    #[test]
    fn budget_surfaces() {
        let inst =
            generate(Family::AlternatingCycle, &GenParams { n: 16, k: 2 }, 0).unwrap();
        let d = EmbeddedDigraph::from_strict_instance(&inst).unwrap();
        assert!(matches!(
            brute_force_upward(&d, 14),
            Err(UpwardError::BudgetExceeded(16))
        ));
    }

    #[test]
    fn oracle_agrees_on_generated_digraphs() {
        let mut checked = 0;
        let mut cases: Vec<crate::instance::StripInstance> = Vec::new();
        for seed in 0..40u64 {
            for (n, k) in [(7, 2), (8, 3), (9, 3)] {
                cases.push(
                    generate(
                        Family::RandomTriangulationLevels,
                        &GenParams { n, k },
                        seed,
                    )
                    .unwrap(),
                );
            }
        }
        cases.push(generate(Family::AlternatingCycle, &GenParams { n: 8, k: 2 }, 0).unwrap());
        cases.push(generate(Family::ZigzagCycle, &GenParams { n: 2, k: 3 }, 0).unwrap());
        for inst in cases {
            // Reduce to strict via the pipeline stages.
            let (proper, mut trace) = crate::reduce::properize(&inst);
            let mut metrics = crate::reduce::StageMetrics::default();
            let strict = match crate::reduce::strictify(
                &proper,
                &mut trace,
                &mut metrics,
                100_000,
            )
            .unwrap()
            {
                crate::reduce::StrictifyOutcome::Strict(s) => s,
                crate::reduce::StrictifyOutcome::No(_) => continue,
            };
            if strict.graph.vertex_count() < 3 {
                continue;
            }
            let d = EmbeddedDigraph::from_strict_instance(&strict).unwrap();
            if d.sources_and_sinks().len() > 10 {
                continue;
            }
            let fast = test_upward(&d).is_ok();
            let slow = brute_force_upward(&d, 14).unwrap();
            assert_eq!(fast, slow);
            checked += 1;
        }
        assert!(checked > 10, "only {checked} digraphs reached the oracle");
    }
}
