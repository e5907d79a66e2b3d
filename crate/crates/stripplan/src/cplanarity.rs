//! c-planarity of clustered graphs with two clusters, by searching for an
//! intra-cluster augmentation that makes both clusters connected while the
//! whole graph stays planar.
//!
//! The fast path handles already-connected clusters (completely connected
//! clustered graphs are c-planar exactly when planar). The general path is a
//! budgeted depth-first search over component-merging edges.

use crate::planarity::is_planar;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CplanarityError {
    #[error("two-cluster search budget exceeded after {0} nodes")]
    SizeLimitExceeded(u64),
}

pub const DEFAULT_BUDGET: u64 = 500_000;

/// Is the clustered graph (G; A, V \ A) c-planar? `in_a[v]` marks cluster A.
pub fn two_strip_cplanarity(
    n: usize,
    edges: &[(usize, usize)],
    in_a: &[bool],
    budget: u64,
) -> Result<bool, CplanarityError> {
    assert_eq!(in_a.len(), n);
    let a: Vec<usize> = (0..n).filter(|&v| in_a[v]).collect();
    let b: Vec<usize> = (0..n).filter(|&v| !in_a[v]).collect();
    let comps_a = cluster_components(&a, edges);
    let comps_b = cluster_components(&b, edges);
    if comps_a.len() <= 1 && comps_b.len() <= 1 {
        return Ok(is_planar(n, edges));
    }
    if !is_planar(n, edges) {
        return Ok(false);
    }
    let mut search = Search {
        n,
        base: edges.to_vec(),
        in_a: in_a.to_vec(),
        nodes: 0,
        budget,
        seen: BTreeSet::new(),
    };
    let mut added = Vec::new();
    search.run(&mut added, comps_a, comps_b)
}

struct Search {
    n: usize,
    base: Vec<(usize, usize)>,
    in_a: Vec<bool>,
    nodes: u64,
    budget: u64,
    seen: BTreeSet<Vec<(usize, usize)>>,
}

impl Search {
    fn run(
        &mut self,
        added: &mut Vec<(usize, usize)>,
        comps_a: Vec<Vec<usize>>,
        comps_b: Vec<Vec<usize>>,
    ) -> Result<bool, CplanarityError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(CplanarityError::SizeLimitExceeded(self.nodes));
        }
        if comps_a.len() <= 1 && comps_b.len() <= 1 {
            return Ok(true); // planarity was checked when edges were added
        }
        // Planar graphs cannot exceed the edge bound, so neither can any
        // extension that still needs merges.
        let need = comps_a.len().saturating_sub(1) + comps_b.len().saturating_sub(1);
        if self.n >= 3 && self.base.len() + added.len() + need > 3 * self.n - 6 {
            return Ok(false);
        }
        // Merge within the cluster with more components first.
        let comps = if comps_a.len() >= comps_b.len() { &comps_a } else { &comps_b };
        let blob = &comps[0];
        let candidates: Vec<(usize, usize)> = comps[1..]
            .iter()
            .flat_map(|other| {
                blob.iter().flat_map(move |&x| {
                    other.iter().map(move |&y| if x < y { (x, y) } else { (y, x) })
                })
            })
            .collect();
        for (x, y) in candidates {
            if self.base.contains(&(x, y)) || self.base.contains(&(y, x)) {
                continue;
            }
            added.push((x, y));
            let mut key = added.clone();
            key.sort_unstable();
            let fresh = self.seen.insert(key);
            if fresh {
                let mut all = self.base.clone();
                all.extend(added.iter().copied());
                if is_planar(self.n, &all) {
                    let a_list: Vec<usize> =
                        (0..self.n).filter(|&v| self.in_a[v]).collect();
                    let b_list: Vec<usize> =
                        (0..self.n).filter(|&v| !self.in_a[v]).collect();
                    let ca = cluster_components_with(&a_list, &all, &self.in_a, true);
                    let cb = cluster_components_with(&b_list, &all, &self.in_a, false);
                    if self.run(added, ca, cb)? {
                        added.pop();
                        return Ok(true);
                    }
                }
            }
            added.pop();
        }
        Ok(false)
    }
}

/// Connected components of the subgraph induced by `members`, each sorted,
/// ordered by smallest member.
fn cluster_components(members: &[usize], edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let set: BTreeSet<usize> = members.iter().copied().collect();
    let mut comp: std::collections::BTreeMap<usize, usize> = Default::default();
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for &start in members {
        if comp.contains_key(&start) {
            continue;
        }
        let id = comps.len();
        let mut acc = vec![start];
        comp.insert(start, id);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &(x, y) in edges {
                let w = if x == v {
                    y
                } else if y == v {
                    x
                } else {
                    continue;
                };
                if set.contains(&w) && !comp.contains_key(&w) {
                    comp.insert(w, id);
                    acc.push(w);
                    stack.push(w);
                }
            }
        }
        acc.sort_unstable();
        comps.push(acc);
    }
    comps
}

fn cluster_components_with(
    members: &[usize],
    edges: &[(usize, usize)],
    in_a: &[bool],
    want_a: bool,
) -> Vec<Vec<usize>> {
    let filtered: Vec<(usize, usize)> = edges
        .iter()
        .copied()
        .filter(|&(x, y)| in_a[x] == want_a && in_a[y] == want_a)
        .collect();
    cluster_components(members, &filtered)
}

/// Exhaustive oracle: enumerates every minimal connector pair and checks
/// planarity of the augmented graph. Exponential; for tiny graphs only.
pub fn two_strip_cplanarity_oracle(
    n: usize,
    edges: &[(usize, usize)],
    in_a: &[bool],
) -> bool {
    let a: Vec<usize> = (0..n).filter(|&v| in_a[v]).collect();
    let b: Vec<usize> = (0..n).filter(|&v| !in_a[v]).collect();
    let mut conn_a = Vec::new();
    enumerate_connectors(&a, edges, &mut Vec::new(), &mut conn_a);
    let mut conn_b = Vec::new();
    enumerate_connectors(&b, edges, &mut Vec::new(), &mut conn_b);
    for ea in &conn_a {
        for eb in &conn_b {
            let mut all = edges.to_vec();
            all.extend(ea.iter().copied());
            all.extend(eb.iter().copied());
            if is_planar(n, &all) {
                return true;
            }
        }
    }
    false
}

fn enumerate_connectors(
    members: &[usize],
    edges: &[(usize, usize)],
    acc: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<(usize, usize)>>,
) {
    let mut all = edges.to_vec();
    all.extend(acc.iter().copied());
    let comps = cluster_components(members, &all);
    if comps.len() <= 1 {
        let mut sorted = acc.clone();
        sorted.sort_unstable();
        if !out.contains(&sorted) {
            out.push(sorted);
        }
        return;
    }
    let blob = comps[0].clone();
    for other in &comps[1..] {
        for &x in &blob {
            for &y in other {
                let e = if x < y { (x, y) } else { (y, x) };
                acc.push(e);
                enumerate_connectors(members, edges, acc, out);
                acc.pop();
            }
        }
    }
}

#[cfg(test)]
mod test {
    use super::*;

    #[test]
    fn k23_with_degree_three_cluster() {
        // K2,3: u0, u1 on one side; t2, t3, t4 on the other. Cluster A is
        // the degree-3 side. Augmentation {u0u1, t2t3, t3t4} stays planar.
        let edges = vec![(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)];
        let in_a = [true, true, false, false, false];
        assert!(two_strip_cplanarity(5, &edges, &in_a, DEFAULT_BUDGET).unwrap());
        assert!(two_strip_cplanarity_oracle(5, &edges, &in_a));
    }

    #[test]
    fn connected_clusters_fast_path() {
        // Triangle with one cluster vertex: both clusters connected.
        let edges = vec![(0, 1), (1, 2), (0, 2)];
        let in_a = [true, true, false];
        assert!(two_strip_cplanarity(3, &edges, &in_a, DEFAULT_BUDGET).unwrap());
        assert!(two_strip_cplanarity_oracle(3, &edges, &in_a));
    }

    #[test]
    fn empty_cluster() {
        let edges = vec![(0, 1), (1, 2)];
        let in_a = [true, true, true];
        assert!(two_strip_cplanarity(3, &edges, &in_a, DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn k4_with_split_cluster() {
        // K4 with cluster A = two non-adjacent... K4 is complete, so any
        // 2-subset is adjacent; both clusters connected; planar -> true.
        let edges = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let in_a = [true, false, false, true];
        assert!(two_strip_cplanarity(4, &edges, &in_a, DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn negative_instance() {
        // K3,3 minus nothing is already nonplanar, so no augmentation helps.
        let mut edges = Vec::new();
        for i in 0..3 {
            for j in 3..6 {
                edges.push((i, j));
            }
        }
        let in_a = [true, true, true, false, false, false];
        assert!(!two_strip_cplanarity(6, &edges, &in_a, DEFAULT_BUDGET).unwrap());
        assert!(!two_strip_cplanarity_oracle(6, &edges, &in_a));
    }

    #[test]
    fn forced_crossing_negative() {
        // C4 0-2-1-3 with clusters {0,1} and {2,3}: connecting 0-1 and 2-3
        // inside the 4-cycle... K4 is planar, so this is actually positive.
        // A genuinely negative connected case: two clusters interleaved on a
        // hexagon C6 = 0-3-1-4-2-5 with A = {0,1,2}. Connecting A and B each
        // into paths forces a K3,3-like pattern -- check against the oracle
        // either way.
        let edges = vec![(0, 3), (3, 1), (1, 4), (4, 2), (2, 5), (5, 0)];
        let in_a = [true, true, true, false, false, false];
        let got = two_strip_cplanarity(6, &edges, &in_a, DEFAULT_BUDGET).unwrap();
        assert_eq!(got, two_strip_cplanarity_oracle(6, &edges, &in_a));
    }

    #[test]
    fn budget_error_surfaces() {
        let edges = vec![(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)];
        let in_a = [true, true, false, false, false];
        assert!(matches!(
            two_strip_cplanarity(5, &edges, &in_a, 1),
            Err(CplanarityError::SizeLimitExceeded(_))
        ));
    }

    #[test]
    fn agrees_with_oracle_on_small_graphs() {
        // Random-ish small graphs, every bipartition.
        let mut lcg = 0x2545F4914F6CDD1Du64;
        for n in 3..=6usize {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
                .collect();
            for _ in 0..12 {
                lcg = lcg.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let mask = (lcg >> 20) as usize;
                let edges: Vec<(usize, usize)> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &e)| e)
                    .collect();
                for amask in 0..(1usize << n) {
                    let in_a: Vec<bool> = (0..n).map(|v| amask >> v & 1 == 1).collect();
                    let fast =
                        two_strip_cplanarity(n, &edges, &in_a, DEFAULT_BUDGET).unwrap();
                    let slow = two_strip_cplanarity_oracle(n, &edges, &in_a);
                    assert_eq!(fast, slow, "n={n} edges={edges:?} a={amask:#b}");
                }
            }
        }
    }
}
