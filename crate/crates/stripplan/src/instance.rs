//! Strip planarity instances: a plane multigraph plus a strip assignment,
//! the classification predicates (proper / strict / quasi-jagged / jagged),
//! face profiles, the potential function, and the instance file format.

use crate::plane::{
    is_biconnected, FaceId, PlaneMultigraph, PlaneError, VertexId,
};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("embedding invalid: {0}")]
    EmbeddingInvalid(String),
    #[error("gamma {gamma} of vertex {vertex:?} outside 1..={k}")]
    GammaOutOfRange { vertex: VertexId, gamma: i64, k: u32 },
    #[error("input graph is not 2-connected")]
    NotBiconnected,
    #[error("operation requires a strict instance")]
    NotStrict,
    #[error("bad generator parameters: {0}")]
    BadParams(String),
    #[error(transparent)]
    Plane(#[from] PlaneError),
}

/// Strongest label first would be tempting, but ordering them weakest to
/// strongest lets stage postconditions use `>=`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Classification {
    Improper,
    Proper,
    Strict,
    QuasiJagged,
    Jagged,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SwitchKind {
    LocalMin,
    LocalMax,
}

/// A switch occurrence on a face walk. `pos` indexes the walk; the same
/// vertex can occur more than once on walks of graphs that lost
/// 2-connectivity during reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Switch {
    pub pos: usize,
    pub vertex: VertexId,
    pub kind: SwitchKind,
    pub is_global: bool,
}

#[derive(Clone, Debug)]
pub struct FaceProfile {
    pub face: FaceId,
    pub switches: Vec<Switch>,
    pub global_min_level: u32,
    pub global_max_level: u32,
}

#[derive(Clone, Debug)]
pub struct VisiblePair {
    pub min_pos: usize,
    pub max_pos: usize,
    pub min_vertex: VertexId,
    pub max_vertex: VertexId,
    /// One of the two boundary arcs joining them is monotone.
    pub monotone_path_exists: bool,
}

#[derive(Clone, Debug)]
pub struct StripInstance {
    pub graph: PlaneMultigraph,
    gamma: BTreeMap<VertexId, u32>,
    k: u32,
}

impl StripInstance {
    pub fn new(
        graph: PlaneMultigraph,
        gamma: BTreeMap<VertexId, u32>,
        k: u32,
    ) -> Result<Self, InstanceError> {
        if k < 1 {
            return Err(InstanceError::Parse("k must be >= 1".into()));
        }
        for v in graph.vertex_ids() {
            match gamma.get(&v) {
                None => {
                    return Err(InstanceError::GammaOutOfRange {
                        vertex: v,
                        gamma: 0,
                        k,
                    })
                }
                Some(&g) if g < 1 || g > k => {
                    return Err(InstanceError::GammaOutOfRange {
                        vertex: v,
                        gamma: g as i64,
                        k,
                    })
                }
                _ => {}
            }
        }
        Ok(StripInstance { graph, gamma, k })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn gamma(&self, v: VertexId) -> u32 {
        self.gamma[&v]
    }

    pub fn gamma_map(&self) -> &BTreeMap<VertexId, u32> {
        &self.gamma
    }

    pub fn set_gamma(&mut self, v: VertexId, level: u32) {
        assert!((1..=self.k).contains(&level));
        self.gamma.insert(v, level);
    }

    /// Drops gamma entries for vertices no longer present (after surgery).
    pub fn with_graph(graph: PlaneMultigraph, mut gamma: BTreeMap<VertexId, u32>, k: u32) -> Self {
        gamma.retain(|v, _| graph.has_vertex(*v));
        StripInstance { graph, gamma, k }
    }

    pub fn require_biconnected(&self) -> Result<(), InstanceError> {
        if is_biconnected(&self.graph) {
            Ok(())
        } else {
            Err(InstanceError::NotBiconnected)
        }
    }

    pub fn is_proper(&self) -> bool {
        self.graph.edge_ids().all(|e| {
            let (u, v) = self.graph.edge_ends(e);
            self.gamma(u).abs_diff(self.gamma(v)) <= 1
        })
    }

    pub fn is_strict(&self) -> bool {
        self.is_proper()
            && self.graph.edge_ids().all(|e| {
                let (u, v) = self.graph.edge_ends(e);
                self.gamma(u) != self.gamma(v)
            })
    }

    pub fn classify(&self) -> Classification {
        if !self.is_proper() {
            return Classification::Improper;
        }
        if !self.is_strict() {
            return Classification::Proper;
        }
        let mut jagged = true;
        let mut quasi = true;
        for f in self.graph.face_ids() {
            let scan = FaceScan::new(self, f);
            if !scan.is_jagged() {
                jagged = false;
            }
            if !scan.is_quasi_jagged() {
                quasi = false;
                break;
            }
        }
        if jagged && quasi {
            Classification::Jagged
        } else if quasi {
            Classification::QuasiJagged
        } else {
            Classification::Strict
        }
    }

    pub fn face_profile(&self, f: FaceId) -> Result<FaceProfile, InstanceError> {
        if !self.is_strict() {
            return Err(InstanceError::NotStrict);
        }
        let scan = FaceScan::new(self, f);
        Ok(scan.profile())
    }

    pub fn visible_pairs(&self, f: FaceId) -> Result<Vec<VisiblePair>, InstanceError> {
        if !self.is_strict() {
            return Err(InstanceError::NotStrict);
        }
        Ok(FaceScan::new(self, f).visible_pairs())
    }

    /// n(G): over all faces, the number of local-but-not-global extrema.
    pub fn potential(&self) -> Result<u64, InstanceError> {
        if !self.is_strict() {
            return Err(InstanceError::NotStrict);
        }
        let mut n = 0u64;
        for f in self.graph.face_ids() {
            let scan = FaceScan::new(self, f);
            n += scan
                .switches()
                .iter()
                .filter(|s| !s.is_global)
                .count() as u64;
        }
        Ok(n)
    }

    /// Strip reversal: gamma -> k + 1 - gamma with the embedding mirrored.
    pub fn reversed_strips(&self) -> StripInstance {
        let mut m = self.mirrored();
        let k = self.k;
        for (_, g) in m.gamma.iter_mut() {
            *g = k + 1 - *g;
        }
        m
    }

    /// Reflection of the plane: every rotation reversed, same outer face.
    pub fn mirrored(&self) -> StripInstance {
        let mut rotations: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for v in self.graph.vertex_ids() {
            let mut nbrs: Vec<u32> =
                self.graph.neighbors(v).map(|w| w.0).collect();
            nbrs.reverse();
            rotations.insert(v.0, nbrs);
        }
        // A walk dart (u, v) of the old outer face flips to (v, u).
        let walk = self.graph.face_walk(self.graph.outer_face());
        let d = walk[0];
        let (u, v) = (self.graph.origin(d), self.graph.head(d));
        let graph = PlaneMultigraph::build(&rotations, (v.0, u.0))
            .expect("mirror of a valid embedding is valid");
        StripInstance {
            graph,
            gamma: self.gamma.clone(),
            k: self.k,
        }
    }
}

// ----------------------------------------------------------------------
// Face scanning with O(1) arc queries.

/// Per-face levels along the boundary walk plus range tables, so visibility
/// and monotonicity of boundary arcs are O(1) queries.
pub struct FaceScan {
    pub face: FaceId,
    pub verts: Vec<VertexId>,
    pub levels: Vec<u32>,
    global_min: u32,
    global_max: u32,
    // Sparse tables over the doubled levels array.
    min_table: Vec<Vec<u32>>,
    max_table: Vec<Vec<u32>>,
    // Prefix counts over doubled steps: +1 steps and -1 steps.
    up_prefix: Vec<u32>,
    down_prefix: Vec<u32>,
}

impl FaceScan {
    pub fn new(inst: &StripInstance, f: FaceId) -> FaceScan {
        let verts = inst.graph.face_vertices(f);
        let levels: Vec<u32> = verts.iter().map(|&v| inst.gamma(v)).collect();
        Self::from_levels(f, verts, levels)
    }

    pub fn from_levels(f: FaceId, verts: Vec<VertexId>, levels: Vec<u32>) -> FaceScan {
        let m = levels.len();
        let doubled: Vec<u32> =
            levels.iter().chain(levels.iter()).copied().collect();
        let log = if m == 0 { 0 } else { (2 * m).ilog2() as usize + 1 };
        let mut min_table = vec![doubled.clone()];
        let mut max_table = vec![doubled.clone()];
        for j in 1..=log {
            let w = 1usize << j;
            if w > doubled.len() {
                break;
            }
            let prev_min = &min_table[j - 1];
            let prev_max = &max_table[j - 1];
            let mut row_min = Vec::with_capacity(doubled.len());
            let mut row_max = Vec::with_capacity(doubled.len());
            for i in 0..doubled.len() {
                let other = (i + w / 2).min(doubled.len() - 1);
                row_min.push(prev_min[i].min(prev_min[other]));
                row_max.push(prev_max[i].max(prev_max[other]));
            }
            min_table.push(row_min);
            max_table.push(row_max);
        }
        let mut up_prefix = vec![0u32];
        let mut down_prefix = vec![0u32];
        for i in 0..doubled.len() {
            let a = doubled[i];
            let b = doubled[(i + 1) % doubled.len().max(1)];
            // Only intra-array steps matter; the wrap entry is never queried.
            let up = if i + 1 < doubled.len() && b == a + 1 { 1 } else { 0 };
            let down = if i + 1 < doubled.len() && a == b + 1 { 1 } else { 0 };
            up_prefix.push(up_prefix[i] + up);
            down_prefix.push(down_prefix[i] + down);
        }
        FaceScan {
            face: f,
            global_min: levels.iter().copied().min().unwrap_or(0),
            global_max: levels.iter().copied().max().unwrap_or(0),
            verts,
            levels,
            min_table,
            max_table,
            up_prefix,
            down_prefix,
        }
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn global_min_level(&self) -> u32 {
        self.global_min
    }

    pub fn global_max_level(&self) -> u32 {
        self.global_max
    }

    fn range_min(&self, start: usize, len: usize) -> u32 {
        debug_assert!(len >= 1);
        let j = len.ilog2() as usize;
        self.min_table[j][start].min(self.min_table[j][start + len - (1 << j)])
    }

    fn range_max(&self, start: usize, len: usize) -> u32 {
        debug_assert!(len >= 1);
        let j = len.ilog2() as usize;
        self.max_table[j][start].max(self.max_table[j][start + len - (1 << j)])
    }

    /// Number of walk positions from p forward to q (cyclic).
    pub fn fwd_len(&self, p: usize, q: usize) -> usize {
        let m = self.len();
        (q + m - p) % m
    }

    /// Is every step on the forward arc p..q a +1 climb?
    pub fn fwd_monotone_up(&self, p: usize, q: usize) -> bool {
        let len = self.fwd_len(p, q);
        len > 0 && (self.up_prefix[p + len] - self.up_prefix[p]) as usize == len
    }

    /// Is every step on the forward arc p..q a -1 descent?
    pub fn fwd_monotone_down(&self, p: usize, q: usize) -> bool {
        let len = self.fwd_len(p, q);
        len > 0
            && (self.down_prefix[p + len] - self.down_prefix[p]) as usize == len
    }

    /// Min/max levels over the interior of the forward arc p..q; None if the
    /// arc has no interior vertices.
    pub fn fwd_interior_minmax(&self, p: usize, q: usize) -> Option<(u32, u32)> {
        let len = self.fwd_len(p, q);
        if len <= 1 {
            return None;
        }
        Some((self.range_min(p + 1, len - 1), self.range_max(p + 1, len - 1)))
    }

    pub fn kind_at(&self, pos: usize) -> Option<SwitchKind> {
        let m = self.len();
        if m < 2 {
            return None;
        }
        let l = self.levels[pos];
        let prev = self.levels[(pos + m - 1) % m];
        let next = self.levels[(pos + 1) % m];
        if prev > l && next > l {
            Some(SwitchKind::LocalMin)
        } else if prev < l && next < l {
            Some(SwitchKind::LocalMax)
        } else {
            None
        }
    }

    pub fn switches(&self) -> Vec<Switch> {
        let mut out = Vec::new();
        for pos in 0..self.len() {
            if let Some(kind) = self.kind_at(pos) {
                let l = self.levels[pos];
                let is_global = match kind {
                    SwitchKind::LocalMin => l == self.global_min,
                    SwitchKind::LocalMax => l == self.global_max,
                };
                out.push(Switch { pos, vertex: self.verts[pos], kind, is_global });
            }
        }
        out
    }

    pub fn profile(&self) -> FaceProfile {
        FaceProfile {
            face: self.face,
            switches: self.switches(),
            global_min_level: self.global_min,
            global_max_level: self.global_max,
        }
    }

    /// Is the (min at p, max at q) occurrence pair visible, i.e. does some
    /// boundary arc keep all interior vertices strictly between the levels?
    pub fn visible(&self, p: usize, q: usize) -> bool {
        self.arc_witness(p, q).is_some()
    }

    /// Which arcs witness visibility: (forward p->q, forward q->p).
    pub fn arc_witness(&self, p: usize, q: usize) -> Option<(bool, bool)> {
        let lo = self.levels[p];
        let hi = self.levels[q];
        let ok = |mm: Option<(u32, u32)>| match mm {
            None => true, // no interior at all
            Some((mn, mx)) => mn > lo && mx < hi,
        };
        let fwd = ok(self.fwd_interior_minmax(p, q));
        let bwd = ok(self.fwd_interior_minmax(q, p));
        if fwd || bwd {
            Some((fwd, bwd))
        } else {
            None
        }
    }

    /// Does some boundary arc climb monotonically from p (min) to q (max)?
    pub fn monotone_arc_exists(&self, p: usize, q: usize) -> bool {
        self.fwd_monotone_up(p, q) || self.fwd_monotone_down(q, p)
    }

    pub fn visible_pairs(&self) -> Vec<VisiblePair> {
        let sw = self.switches();
        let mut out = Vec::new();
        for a in &sw {
            if a.kind != SwitchKind::LocalMin {
                continue;
            }
            for b in &sw {
                if b.kind != SwitchKind::LocalMax {
                    continue;
                }
                if self.visible(a.pos, b.pos) {
                    out.push(VisiblePair {
                        min_pos: a.pos,
                        max_pos: b.pos,
                        min_vertex: a.vertex,
                        max_vertex: b.vertex,
                        monotone_path_exists: self.monotone_arc_exists(a.pos, b.pos),
                    });
                }
            }
        }
        out
    }

    pub fn is_quasi_jagged(&self) -> bool {
        self.visible_pairs()
            .iter()
            .all(|p| p.monotone_path_exists)
    }

    pub fn is_jagged(&self) -> bool {
        self.switches().iter().all(|s| s.is_global)
    }
}

// ----------------------------------------------------------------------
// File format

#[derive(Serialize, Deserialize)]
struct VertexEntry {
    id: u32,
    gamma: u32,
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    k: u32,
    vertices: Vec<VertexEntry>,
    rotations: BTreeMap<String, Vec<u32>>,
    outer_face: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected: Option<String>,
}

/// Parses an instance file. Returns the instance and, for `.siw` witness
/// fixtures, the expected verdict.
pub fn load_instance(bytes: &[u8]) -> Result<(StripInstance, Option<bool>), InstanceError> {
    let file: InstanceFile = serde_json::from_slice(bytes)
        .map_err(|e| InstanceError::Parse(e.to_string()))?;
    let mut rotations: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for (key, nbrs) in &file.rotations {
        let id: u32 = key
            .parse()
            .map_err(|_| InstanceError::Parse(format!("bad vertex key {key:?}")))?;
        rotations.insert(id, nbrs.clone());
    }
    let mut gamma = BTreeMap::new();
    for v in &file.vertices {
        if !rotations.contains_key(&v.id) {
            return Err(InstanceError::Parse(format!(
                "vertex {} has no rotation entry",
                v.id
            )));
        }
        if gamma.insert(VertexId(v.id), v.gamma).is_some() {
            return Err(InstanceError::Parse(format!("duplicate vertex {}", v.id)));
        }
    }
    if rotations.len() != gamma.len() {
        return Err(InstanceError::Parse(
            "rotations and vertices list different vertex sets".into(),
        ));
    }
    if file.outer_face.len() < 2 {
        return Err(InstanceError::EmbeddingInvalid(
            "outer_face walk needs at least two vertices".into(),
        ));
    }
    let witness = (file.outer_face[0], file.outer_face[1]);
    let graph = PlaneMultigraph::build(&rotations, witness).map_err(|e| match e {
        PlaneError::EulerViolation(_) | PlaneError::BadRotations(_) => {
            InstanceError::EmbeddingInvalid(e.to_string())
        }
        other => InstanceError::Plane(other),
    })?;
    // The declared outer walk must match the traced one exactly (cyclically).
    let traced: Vec<u32> = graph
        .face_vertices(graph.outer_face())
        .iter()
        .map(|v| v.0)
        .collect();
    if !cyclic_eq(&traced, &file.outer_face) {
        return Err(InstanceError::EmbeddingInvalid(format!(
            "outer_face walk {:?} does not match traced walk {:?}",
            file.outer_face, traced
        )));
    }
    let expected = match file.expected.as_deref() {
        None => None,
        Some("yes") => Some(true),
        Some("no") => Some(false),
        Some(other) => {
            return Err(InstanceError::Parse(format!(
                "expected must be \"yes\" or \"no\", got {other:?}"
            )))
        }
    };
    let inst = StripInstance::new(graph, gamma, file.k)?;
    Ok((inst, expected))
}

fn cyclic_eq(a: &[u32], b: &[u32]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    (0..a.len()).any(|s| (0..a.len()).all(|i| a[(s + i) % a.len()] == b[i]))
}

pub fn save_instance(inst: &StripInstance) -> Vec<u8> {
    save_with_expected(inst, None)
}

pub fn save_with_expected(inst: &StripInstance, expected: Option<bool>) -> Vec<u8> {
    let vertices: Vec<VertexEntry> = inst
        .graph
        .vertex_ids()
        .map(|v| VertexEntry { id: v.0, gamma: inst.gamma(v) })
        .collect();
    let rotations: BTreeMap<String, Vec<u32>> = inst
        .graph
        .vertex_ids()
        .map(|v| {
            (
                v.0.to_string(),
                inst.graph.neighbors(v).map(|w| w.0).collect(),
            )
        })
        .collect();
    let outer_face: Vec<u32> = inst
        .graph
        .face_vertices(inst.graph.outer_face())
        .iter()
        .map(|v| v.0)
        .collect();
    let file = InstanceFile {
        k: inst.k(),
        vertices,
        rotations,
        outer_face,
        expected: expected.map(|b| if b { "yes" } else { "no" }.to_string()),
    };
    let mut out = serde_json::to_vec_pretty(&file).expect("serializable");
    out.push(b'\n');
    out
}
