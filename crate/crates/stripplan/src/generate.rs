//! Deterministic instance generators for fixtures, benchmarks, and the
//! oracle-comparison corpus.

use crate::instance::{InstanceError, StripInstance};
use crate::plane::{DartId, PlaneMultigraph, VertexId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Even cycle alternating between strips 1 and 2; `n` = length.
    AlternatingCycle,
    /// Cycle climbing 1..k and back, `n` teeth; jagged by construction.
    ZigzagCycle,
    /// Two parallel paths joined by intra-strip rungs; rung i sits in strip
    /// i+1; `n` = rung count and k = n.
    Ladder,
    /// Stacked triangulation with `n` vertices and random levels in 1..=k.
    RandomTriangulationLevels,
    /// Properized triangle with an interior vertex needing a strip above the
    /// triangle's span; not strip planar.
    NestedTriangleNegative,
    /// K2,3 with the degree-3 vertices in strip 1; strip planar.
    ThetaPositive,
    /// Two nested arches over a common base: strip planar but not level
    /// planar (the nested peaks share a strip yet cannot share a line).
    DoubleArch,
}

impl Family {
    pub fn parse(s: &str) -> Option<Family> {
        Some(match s {
            "alternating_cycle" => Family::AlternatingCycle,
            "zigzag_cycle" => Family::ZigzagCycle,
            "ladder" => Family::Ladder,
            "random_triangulation_levels" => Family::RandomTriangulationLevels,
            "nested_triangle_negative" => Family::NestedTriangleNegative,
            "theta_positive" => Family::ThetaPositive,
            "double_arch" => Family::DoubleArch,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::AlternatingCycle => "alternating_cycle",
            Family::ZigzagCycle => "zigzag_cycle",
            Family::Ladder => "ladder",
            Family::RandomTriangulationLevels => "random_triangulation_levels",
            Family::NestedTriangleNegative => "nested_triangle_negative",
            Family::ThetaPositive => "theta_positive",
            Family::DoubleArch => "double_arch",
        }
    }

    pub const ALL: [Family; 7] = [
        Family::AlternatingCycle,
        Family::ZigzagCycle,
        Family::Ladder,
        Family::RandomTriangulationLevels,
        Family::NestedTriangleNegative,
        Family::ThetaPositive,
        Family::DoubleArch,
    ];
}

#[derive(Clone, Copy, Debug)]
pub struct GenParams {
    /// Size knob: cycle length, tooth count, rung count, or vertex count,
    /// depending on the family.
    pub n: usize,
    pub k: u32,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams { n: 8, k: 3 }
    }
}

pub fn generate(
    family: Family,
    params: &GenParams,
    seed: u64,
) -> Result<StripInstance, InstanceError> {
    match family {
        Family::AlternatingCycle => {
            let m = params.n;
            if m < 4 || m % 2 != 0 {
                return Err(InstanceError::BadParams(
                    "alternating_cycle needs even n >= 4".into(),
                ));
            }
            let levels: Vec<u32> =
                (0..m).map(|i| if i % 2 == 0 { 1 } else { 2 }).collect();
            cycle_instance(&levels, 2)
        }
        Family::ZigzagCycle => {
            let k = params.k;
            let teeth = params.n;
            if k < 2 || teeth < 1 || (k == 2 && teeth < 2) {
                return Err(InstanceError::BadParams(
                    "zigzag_cycle needs k >= 2 and enough teeth for a simple cycle".into(),
                ));
            }
            let mut levels = Vec::new();
            for _ in 0..teeth {
                levels.extend(1..=k);
                levels.extend((2..k).rev());
            }
            cycle_instance(&levels, k)
        }
        Family::Ladder => {
            let rungs = params.n;
            if rungs < 2 {
                return Err(InstanceError::BadParams("ladder needs n >= 2 rungs".into()));
            }
            ladder(rungs)
        }
        Family::RandomTriangulationLevels => {
            let n = params.n;
            let k = params.k.max(1);
            if n < 3 {
                return Err(InstanceError::BadParams(
                    "random_triangulation_levels needs n >= 3".into(),
                ));
            }
            random_triangulation(n, k, seed)
        }
        Family::NestedTriangleNegative => nested_triangle_negative(),
        Family::ThetaPositive => theta_positive(),
        Family::DoubleArch => double_arch(),
    }
}

fn cycle_instance(levels: &[u32], k: u32) -> Result<StripInstance, InstanceError> {
    let m = levels.len() as u32;
    if m < 3 {
        return Err(InstanceError::BadParams("cycle too short".into()));
    }
    let rotations: BTreeMap<u32, Vec<u32>> = (0..m)
        .map(|v| (v, vec![(v + m - 1) % m, (v + 1) % m]))
        .collect();
    let graph = PlaneMultigraph::build(&rotations, (1, 0))?;
    let gamma = (0..m)
        .map(|v| (VertexId(v), levels[v as usize]))
        .collect();
    StripInstance::new(graph, gamma, k)
}

fn ladder(rungs: usize) -> Result<StripInstance, InstanceError> {
    let r = rungs as u32;
    let a = |i: u32| 2 * i;
    let b = |i: u32| 2 * i + 1;
    let mut rotations: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for i in 0..r {
        let mut ra = Vec::new();
        if i + 1 < r {
            ra.push(a(i + 1));
        }
        ra.push(b(i));
        if i > 0 {
            ra.push(a(i - 1));
        }
        rotations.insert(a(i), ra);
        let mut rb = Vec::new();
        if i + 1 < r {
            rb.push(b(i + 1));
        }
        if i > 0 {
            rb.push(b(i - 1));
        }
        rb.push(a(i));
        rotations.insert(b(i), rb);
    }
    let graph = PlaneMultigraph::build(&rotations, (b(0), a(0)))?;
    let gamma = (0..r)
        .flat_map(|i| [(VertexId(a(i)), i + 1), (VertexId(b(i)), i + 1)])
        .collect();
    StripInstance::new(graph, gamma, r)
}

fn random_triangulation(n: usize, k: u32, seed: u64) -> Result<StripInstance, InstanceError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rotations: BTreeMap<u32, Vec<u32>> =
        [(0, vec![2, 1]), (1, vec![0, 2]), (2, vec![1, 0])]
            .into_iter()
            .collect();
    let mut graph = PlaneMultigraph::build(&rotations, (1, 0))?;
    let mut gamma: BTreeMap<VertexId, u32> = BTreeMap::new();
    for v in 0..3u32 {
        gamma.insert(VertexId(v), rng.gen_range(1..=k));
    }
    while graph.vertex_count() < n {
        // Pick a bounded triangular face and stack a vertex inside it.
        let candidates: Vec<_> = graph
            .face_ids()
            .filter(|&f| f != graph.outer_face() && graph.face_walk(f).len() == 3)
            .collect();
        let f = candidates[rng.gen_range(0..candidates.len())];
        let walk = graph.face_walk(f).to_vec();
        let (d0, d1, d2) = (walk[0], walk[1], walk[2]);
        let corners = [graph.origin(d0), graph.origin(d1), graph.origin(d2)];
        let lo = corners.iter().map(|&c| gamma[&c]).min().unwrap();
        let hi = corners.iter().map(|&c| gamma[&c]).max().unwrap();
        let level = rng.gen_range(lo.saturating_sub(1).max(1)..=(hi + 1).min(k));
        let ins1 = graph
            .insert_path_in_face(f, d0, d1, 1)
            .expect("triangle corners are distinct");
        let w = ins1.new_vertices[0];
        let aw = DartId::of(ins1.chain_edges[0], 0);
        let graph2 = ins1.graph;
        let side = graph2.face_of(d2);
        debug_assert_eq!(graph2.face_of(aw), side);
        let ins2 = graph2
            .insert_path_in_face(side, aw, d2, 0)
            .expect("quad corners are distinct");
        graph = ins2.graph;
        gamma.insert(w, level);
    }
    StripInstance::new(graph, gamma, k)
}

fn nested_triangle_negative() -> Result<StripInstance, InstanceError> {
    // Triangle u(1), v(1), z(2) with w(3) inside, attached to u and v via
    // the level-2 subdivision vertices p and q, and to z directly.
    let rotations: BTreeMap<u32, Vec<u32>> = [
        (0, vec![2, 4, 1]), // u: z, p, v
        (1, vec![0, 5, 2]), // v: u, q, z
        (2, vec![1, 3, 0]), // z: v, w, u
        (3, vec![2, 5, 4]), // w: z, q, p
        (4, vec![3, 0]),    // p: w, u
        (5, vec![1, 3]),    // q: v, w
    ]
    .into_iter()
    .collect();
    let graph = PlaneMultigraph::build(&rotations, (1, 0))?;
    let gamma = [
        (VertexId(0), 1),
        (VertexId(1), 1),
        (VertexId(2), 2),
        (VertexId(3), 3),
        (VertexId(4), 2),
        (VertexId(5), 2),
    ]
    .into_iter()
    .collect();
    StripInstance::new(graph, gamma, 3)
}

fn theta_positive() -> Result<StripInstance, InstanceError> {
    // K2,3: u1(0), u2(1) in strip 1; arcs a(2), b(3), c(4) in strip 2.
    let rotations: BTreeMap<u32, Vec<u32>> = [
        (0, vec![2, 3, 4]),
        (1, vec![4, 3, 2]),
        (2, vec![1, 0]),
        (3, vec![1, 0]),
        (4, vec![1, 0]),
    ]
    .into_iter()
    .collect();
    let graph = PlaneMultigraph::build(&rotations, (0, 2))?;
    let gamma = [
        (VertexId(0), 1),
        (VertexId(1), 1),
        (VertexId(2), 2),
        (VertexId(3), 2),
        (VertexId(4), 2),
    ]
    .into_iter()
    .collect();
    StripInstance::new(graph, gamma, 2)
}

fn double_arch() -> Result<StripInstance, InstanceError> {
    // Outer arch o1(1)-p(2)-q(3)-r(4)-s(3)-t(2), inner arch p-q'(3)-r'(4)-
    // s'(3)-t nested inside it. Both peaks sit in strip 4; any drawing with
    // this embedding forces y(r') < y(r), so the instance cannot be level
    // planar, but it is strip planar.
    let rotations: BTreeMap<u32, Vec<u32>> = [
        (0, vec![5, 1]),    // o1: t, p
        (1, vec![2, 6, 0]), // p: q, q', o1
        (2, vec![3, 1]),    // q: r, p
        (3, vec![4, 2]),    // r: s, q
        (4, vec![5, 3]),    // s: t, r
        (5, vec![0, 8, 4]), // t: o1, s', s
        (6, vec![7, 1]),    // q': r', p
        (7, vec![8, 6]),    // r': s', q'
        (8, vec![5, 7]),    // s': t, r'
    ]
    .into_iter()
    .collect();
    let graph = PlaneMultigraph::build(&rotations, (0, 1))?;
    // The outer face is the one bounded by the outer arch alone.
    let want: BTreeSet<u32> = [0, 1, 2, 3, 4, 5].into_iter().collect();
    let outer = graph
        .face_ids()
        .find(|&f| {
            let vs: BTreeSet<u32> =
                graph.face_vertices(f).iter().map(|v| v.0).collect();
            vs == want && graph.face_walk(f).len() == 6
        })
        .expect("outer arch face exists");
    let graph = graph.with_outer(outer);
    let gamma = [
        (VertexId(0), 1),
        (VertexId(1), 2),
        (VertexId(2), 3),
        (VertexId(3), 4),
        (VertexId(4), 3),
        (VertexId(5), 2),
        (VertexId(6), 3),
        (VertexId(7), 4),
        (VertexId(8), 3),
    ]
    .into_iter()
    .collect();
    StripInstance::new(graph, gamma, 4)
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::instance::Classification;

    #[test]
    fn families_build_valid_biconnected_instances() {
        let params = GenParams { n: 8, k: 3 };
        for family in Family::ALL {
            let inst = generate(family, &params, 7).unwrap();
            assert_eq!(inst.graph.check_integrity(), Ok(()), "{family:?}");
            inst.require_biconnected().expect(family.name());
        }
    }

    #[test]
    fn alternating_cycle_shape() {
        let inst =
            generate(Family::AlternatingCycle, &GenParams { n: 6, k: 2 }, 0).unwrap();
        assert_eq!(inst.graph.vertex_count(), 6);
        assert_eq!(inst.classify(), Classification::Jagged);
    }

    #[test]
    fn zigzag_is_jagged() {
        let inst =
            generate(Family::ZigzagCycle, &GenParams { n: 3, k: 4 }, 0).unwrap();
        assert_eq!(inst.graph.vertex_count(), 2 * 3 * 3);
        assert_eq!(inst.classify(), Classification::Jagged);
    }

    #[test]
    fn ladder_is_proper_not_strict() {
        let inst = generate(Family::Ladder, &GenParams { n: 4, k: 4 }, 0).unwrap();
        assert_eq!(inst.classify(), Classification::Proper);
        assert_eq!(inst.graph.vertex_count(), 8);
        assert_eq!(inst.graph.edge_count(), 10);
    }

    #[test]
    fn triangulation_is_deterministic() {
        let p = GenParams { n: 24, k: 4 };
        let a = generate(Family::RandomTriangulationLevels, &p, 11).unwrap();
        let b = generate(Family::RandomTriangulationLevels, &p, 11).unwrap();
        assert_eq!(
            crate::instance::save_instance(&a),
            crate::instance::save_instance(&b)
        );
        let c = generate(Family::RandomTriangulationLevels, &p, 12).unwrap();
        assert_ne!(
            crate::instance::save_instance(&a),
            crate::instance::save_instance(&c)
        );
        assert_eq!(a.graph.vertex_count(), 24);
    }

    #[test]
    fn nested_triangle_shape() {
        let inst = generate(Family::NestedTriangleNegative, &GenParams::default(), 0).unwrap();
        assert_eq!(inst.graph.vertex_count(), 6);
        assert_eq!(inst.graph.edge_count(), 8);
        assert_eq!(inst.graph.face_count(), 4);
        assert!(inst.is_proper());
        // Outer face is the bare triangle.
        assert_eq!(inst.graph.face_walk(inst.graph.outer_face()).len(), 3);
    }

    #[test]
    fn theta_shape() {
        let inst = generate(Family::ThetaPositive, &GenParams::default(), 0).unwrap();
        assert_eq!(inst.graph.vertex_count(), 5);
        assert_eq!(inst.graph.face_count(), 3);
        assert_eq!(inst.classify(), Classification::Jagged);
    }

    #[test]
    fn double_arch_shape() {
        let inst = generate(Family::DoubleArch, &GenParams::default(), 0).unwrap();
        assert_eq!(inst.graph.vertex_count(), 9);
        assert_eq!(inst.classify(), Classification::Jagged);
        assert_eq!(inst.graph.face_walk(inst.graph.outer_face()).len(), 6);
    }
}
