//! Abstract (embedding-free) planarity testing.
//!
//! Demoucron-Malgrange-Pertuiset face-by-face embedding, run per biconnected
//! block. Quadratic, which is plenty at the scales this crate handles.

use std::collections::BTreeSet;

/// Is the simple graph on vertices `0..n` with the given edges planar?
pub fn is_planar(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for &(u, v) in edges {
        if u != v {
            adj[u].insert(v);
            adj[v].insert(u);
        }
    }
    for block in biconnected_blocks(n, &adj) {
        if !dmp_block_planar(&block) {
            return false;
        }
    }
    true
}

/// Edge sets of the biconnected blocks (bridge edges form their own blocks).
fn biconnected_blocks(n: usize, adj: &[BTreeSet<usize>]) -> Vec<Vec<(usize, usize)>> {
    let mut blocks = Vec::new();
    let mut num = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut parent = vec![usize::MAX; n];
    let mut counter = 0usize;
    let mut estack: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if num[root] != usize::MAX {
            continue;
        }
        num[root] = counter;
        low[root] = counter;
        counter += 1;
        let mut stack: Vec<(usize, Vec<usize>, usize)> =
            vec![(root, adj[root].iter().copied().collect(), 0)];
        while !stack.is_empty() {
            let (v, nbrs, i) = {
                let f = stack.last_mut().unwrap();
                if f.2 < f.1.len() {
                    let i = f.2;
                    f.2 += 1;
                    (f.0, Some(f.1[i]), i)
                } else {
                    (f.0, None, 0)
                }
            };
            let _ = i;
            match nbrs {
                Some(w) => {
                    if num[w] == usize::MAX {
                        parent[w] = v;
                        num[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        estack.push((v, w));
                        stack.push((w, adj[w].iter().copied().collect(), 0));
                    } else if w != parent[v] && num[w] < num[v] {
                        estack.push((v, w));
                        low[v] = low[v].min(num[w]);
                    }
                }
                None => {
                    stack.pop();
                    if let Some(f) = stack.last() {
                        let p = f.0;
                        low[p] = low[p].min(low[v]);
                        if low[v] >= num[p] {
                            // (p, v) closes a block.
                            let mut block = Vec::new();
                            while let Some(&(a, b)) = estack.last() {
                                if num[a] >= num[v] {
                                    block.push((a, b));
                                    estack.pop();
                                } else {
                                    break;
                                }
                            }
                            if let Some(&(a, b)) = estack.last() {
                                if (a, b) == (p, v) {
                                    block.push((a, b));
                                    estack.pop();
                                }
                            }
                            if !block.is_empty() {
                                blocks.push(block);
                            }
                        }
                    }
                }
            }
        }
    }
    blocks
}

/// DMP on one biconnected block given by its edge list.
fn dmp_block_planar(block_edges: &[(usize, usize)]) -> bool {
    let verts: BTreeSet<usize> =
        block_edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    let nv = verts.len();
    let ne = block_edges.len();
    if nv <= 4 {
        return true; // every simple graph on <= 4 vertices is planar
    }
    if ne > 3 * nv - 6 {
        return false;
    }
    // Relabel to 0..nv.
    let ids: Vec<usize> = verts.into_iter().collect();
    let index = |v: usize| ids.binary_search(&v).unwrap();
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); nv];
    for &(u, v) in block_edges {
        let (u, v) = (index(u), index(v));
        adj[u].insert(v);
        adj[v].insert(u);
    }

    // Seed with any cycle (one exists: the block is 2-connected, nv >= 3).
    let cycle = find_cycle(&adj).expect("2-connected block has a cycle");
    let mut in_h = vec![false; nv];
    let mut h_edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for i in 0..cycle.len() {
        in_h[cycle[i]] = true;
        h_edges.insert(norm(cycle[i], cycle[(i + 1) % cycle.len()]));
    }
    let mut faces: Vec<Vec<usize>> = vec![cycle.clone(), {
        let mut r = cycle;
        r.reverse();
        r
    }];

    loop {
        let bridges = compute_bridges(&adj, &in_h, &h_edges);
        if bridges.is_empty() {
            return true;
        }
        // Admissible faces per bridge; embed a bridge with the fewest.
        let mut best: Option<(usize, Vec<usize>)> = None;
        for (bi, br) in bridges.iter().enumerate() {
            let adm: Vec<usize> = faces
                .iter()
                .enumerate()
                .filter(|(_, f)| {
                    let fs: BTreeSet<usize> = f.iter().copied().collect();
                    br.attachments.iter().all(|a| fs.contains(a))
                })
                .map(|(i, _)| i)
                .collect();
            if adm.is_empty() {
                return false;
            }
            let better = match &best {
                None => true,
                Some((_, b)) => adm.len() < b.len(),
            };
            if better {
                let one = adm.len() == 1;
                best = Some((bi, adm));
                if one {
                    break;
                }
            }
        }
        let (bi, adm) = best.unwrap();
        let bridge = &bridges[bi];
        let path = bridge_path(&adj, &in_h, bridge);
        // Embed `path` into the chosen face, splitting its cycle.
        let face_idx = adm[0];
        let face = faces.swap_remove(face_idx);
        let s = path[0];
        let t = *path.last().unwrap();
        let is_ = face.iter().position(|&x| x == s).unwrap();
        let it_ = face.iter().position(|&x| x == t).unwrap();
        // Boundary arcs from s to t and from t to s.
        let mut arc1 = Vec::new();
        let mut i = is_;
        while i != it_ {
            arc1.push(face[i]);
            i = (i + 1) % face.len();
        }
        arc1.push(face[it_]);
        let mut arc2 = Vec::new();
        let mut i = it_;
        while i != is_ {
            arc2.push(face[i]);
            i = (i + 1) % face.len();
        }
        arc2.push(face[is_]);
        // New faces: arc1 + reverse(path interior), arc2 + path interior.
        let mut f1 = arc1;
        for &x in path.iter().rev().skip(1).take(path.len().saturating_sub(2)) {
            f1.push(x);
        }
        let mut f2 = arc2;
        for &x in path.iter().skip(1).take(path.len().saturating_sub(2)) {
            f2.push(x);
        }
        faces.push(f1);
        faces.push(f2);
        for w in path.windows(2) {
            h_edges.insert(norm(w[0], w[1]));
        }
        for &x in &path {
            in_h[x] = true;
        }
    }
}

fn norm(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn find_cycle(adj: &[BTreeSet<usize>]) -> Option<Vec<usize>> {
    let n = adj.len();
    let mut parent = vec![usize::MAX; n];
    let mut state = vec![0u8; n]; // 0 new, 1 active, 2 done
    for root in 0..n {
        if state[root] != 0 {
            continue;
        }
        let mut stack = vec![(root, usize::MAX)];
        while let Some(&(v, from)) = stack.last() {
            if state[v] == 0 {
                state[v] = 1;
                parent[v] = from;
                for &w in &adj[v] {
                    if w == from {
                        continue;
                    }
                    if state[w] == 1 {
                        // Found a cycle w .. v.
                        let mut cyc = vec![v];
                        let mut x = v;
                        while x != w {
                            x = parent[x];
                            cyc.push(x);
                        }
                        cyc.reverse();
                        return Some(cyc);
                    }
                }
            }
            let mut advanced = false;
            for &w in &adj[v] {
                if state[w] == 0 {
                    stack.push((w, v));
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                state[v] = 2;
                stack.pop();
            }
        }
    }
    None
}

struct Bridge {
    attachments: Vec<usize>,
    /// Representative interior vertex, or the lone edge for chord bridges.
    interior: Option<usize>,
    chord: Option<(usize, usize)>,
}

fn compute_bridges(
    adj: &[BTreeSet<usize>],
    in_h: &[bool],
    h_edges: &BTreeSet<(usize, usize)>,
) -> Vec<Bridge> {
    let n = adj.len();
    let mut bridges = Vec::new();
    let mut comp = vec![usize::MAX; n];
    let mut next = 0usize;
    for v in 0..n {
        if in_h[v] || comp[v] != usize::MAX {
            continue;
        }
        let me = next;
        next += 1;
        let mut attach: BTreeSet<usize> = BTreeSet::new();
        let mut stack = vec![v];
        comp[v] = me;
        while let Some(x) = stack.pop() {
            for &w in &adj[x] {
                if in_h[w] {
                    attach.insert(w);
                } else if comp[w] == usize::MAX {
                    comp[w] = me;
                    stack.push(w);
                }
            }
        }
        bridges.push(Bridge {
            attachments: attach.into_iter().collect(),
            interior: Some(v),
            chord: None,
        });
    }
    for u in 0..n {
        if !in_h[u] {
            continue;
        }
        for &v in &adj[u] {
            if v > u && in_h[v] && !h_edges.contains(&(u, v)) {
                bridges.push(Bridge {
                    attachments: vec![u, v],
                    interior: None,
                    chord: Some((u, v)),
                });
            }
        }
    }
    bridges
}

/// A path through the bridge between two distinct attachments: the first and
/// last vertices lie on H, everything between is bridge interior.
fn bridge_path(adj: &[BTreeSet<usize>], in_h: &[bool], bridge: &Bridge) -> Vec<usize> {
    if let Some((u, v)) = bridge.chord {
        return vec![u, v];
    }
    let n = adj.len();
    let seed = bridge.interior.unwrap();
    let mut in_bridge = vec![false; n];
    let mut st = vec![seed];
    in_bridge[seed] = true;
    while let Some(x) = st.pop() {
        for &w in &adj[x] {
            if !in_h[w] && !in_bridge[w] {
                in_bridge[w] = true;
                st.push(w);
            }
        }
    }
    let start = bridge.attachments[0];
    let goals: BTreeSet<usize> =
        bridge.attachments.iter().copied().skip(1).collect();
    let mut prev = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::new();
    seen[start] = true;
    queue.push_back(start);
    while let Some(x) = queue.pop_front() {
        let from_interior = in_bridge[x];
        for &w in &adj[x] {
            if seen[w] {
                continue;
            }
            if in_bridge[w] {
                seen[w] = true;
                prev[w] = x;
                queue.push_back(w);
            } else if from_interior && goals.contains(&w) {
                let mut path = vec![w, x];
                let mut c = x;
                while c != start {
                    c = prev[c];
                    path.push(c);
                }
                path.reverse();
                return path;
            }
        }
    }
    unreachable!("bridge must connect two attachments")
}

#[cfg(test)]
mod test {
    use super::*;

    fn complete(n: usize) -> Vec<(usize, usize)> {
        let mut e = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                e.push((i, j));
            }
        }
        e
    }

    fn complete_bipartite(a: usize, b: usize) -> (usize, Vec<(usize, usize)>) {
        let mut e = Vec::new();
        for i in 0..a {
            for j in 0..b {
                e.push((i, a + j));
            }
        }
        (a + b, e)
    }

    #[test]
    fn small_graphs() {
        assert!(is_planar(4, &complete(4)));
        assert!(!is_planar(5, &complete(5)));
        let (n, e) = complete_bipartite(3, 3);
        assert!(!is_planar(n, &e));
        let (n, e) = complete_bipartite(2, 3);
        assert!(is_planar(n, &e));
    }

    #[test]
    fn petersen_graph_is_not_planar() {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((i + 5, (i + 2) % 5 + 5));
        }
        assert!(!is_planar(10, &e));
    }

    #[test]
    fn k5_minus_an_edge_is_planar() {
        let e: Vec<_> = complete(5).into_iter().filter(|&p| p != (0, 1)).collect();
        assert!(is_planar(5, &e));
    }

    #[test]
    fn disconnected_and_trees() {
        assert!(is_planar(6, &[(0, 1), (2, 3), (4, 5)]));
        assert!(is_planar(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]));
        assert!(is_planar(3, &[]));
        assert!(is_planar(0, &[]));
    }

    #[test]
    fn cube_and_octahedron() {
        let cube = vec![
            (0, 1), (1, 2), (2, 3), (3, 0),
            (4, 5), (5, 6), (6, 7), (7, 4),
            (0, 4), (1, 5), (2, 6), (3, 7),
        ];
        assert!(is_planar(8, &cube));
        // Octahedron = K6 minus a perfect matching.
        let non: [(usize, usize); 3] = [(0, 3), (1, 4), (2, 5)];
        let octa: Vec<(usize, usize)> = complete(6)
            .into_iter()
            .filter(|e| !non.contains(e))
            .collect();
        assert!(is_planar(6, &octa));
    }

    /// Wagner's theorem oracle: planar iff no K5 and no K3,3 minor. Only
    /// usable for tiny graphs; independent of the DMP code above.
    pub fn planar_by_minors(n: usize, edges: &[(usize, usize)]) -> bool {
        !has_clique_minor(n, edges, 5) && !has_k33_minor(n, edges)
    }

    fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<BTreeSet<usize>> {
        let mut adj = vec![BTreeSet::new(); n];
        for &(u, v) in edges {
            if u != v {
                adj[u].insert(v);
                adj[v].insert(u);
            }
        }
        adj
    }

    fn parts_connected(adj: &[BTreeSet<usize>], part: &[usize]) -> bool {
        if part.is_empty() {
            return false;
        }
        let set: BTreeSet<usize> = part.iter().copied().collect();
        let mut seen = BTreeSet::new();
        let mut stack = vec![part[0]];
        seen.insert(part[0]);
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if set.contains(&w) && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == part.len()
    }

    fn parts_adjacent(adj: &[BTreeSet<usize>], a: &[usize], b: &[usize]) -> bool {
        a.iter().any(|&x| b.iter().any(|&y| adj[x].contains(&y)))
    }

    fn has_clique_minor(n: usize, edges: &[(usize, usize)], k: usize) -> bool {
        let adj = adjacency(n, edges);
        let mut assign = vec![0usize; n]; // 0 = unused, 1..=k = part
        search_clique(&adj, &mut assign, 0, k)
    }

    fn search_clique(adj: &[BTreeSet<usize>], assign: &mut Vec<usize>, v: usize, k: usize) -> bool {
        if v == assign.len() {
            let parts: Vec<Vec<usize>> = (1..=k)
                .map(|p| {
                    (0..assign.len()).filter(|&x| assign[x] == p).collect()
                })
                .collect();
            if parts.iter().any(|p| !parts_connected(adj, p)) {
                return false;
            }
            for i in 0..k {
                for j in i + 1..k {
                    if !parts_adjacent(adj, &parts[i], &parts[j]) {
                        return false;
                    }
                }
            }
            return true;
        }
        for p in 0..=k {
            assign[v] = p;
            if search_clique(adj, assign, v + 1, k) {
                return true;
            }
        }
        assign[v] = 0;
        false
    }

    fn has_k33_minor(n: usize, edges: &[(usize, usize)]) -> bool {
        let adj = adjacency(n, edges);
        let mut assign = vec![0usize; n];
        search_k33(&adj, &mut assign, 0)
    }

    fn search_k33(adj: &[BTreeSet<usize>], assign: &mut Vec<usize>, v: usize) -> bool {
        if v == assign.len() {
            let parts: Vec<Vec<usize>> = (1..=6)
                .map(|p| (0..assign.len()).filter(|&x| assign[x] == p).collect())
                .collect();
            if parts.iter().any(|p| !parts_connected(adj, p)) {
                return false;
            }
            for i in 0..3 {
                for j in 3..6 {
                    if !parts_adjacent(adj, &parts[i], &parts[j]) {
                        return false;
                    }
                }
            }
            return true;
        }
        for p in 0..=6 {
            assign[v] = p;
            if search_k33(adj, assign, v + 1) {
                return true;
            }
        }
        assign[v] = 0;
        false
    }

    #[test]
    fn agrees_with_minor_oracle_on_all_six_vertex_graphs() {
        // All labeled graphs on 6 vertices would be 2^15; sample a spread
        // plus run every graph on 5 vertices exhaustively.
        let pairs5: Vec<(usize, usize)> = complete(5);
        for mask in 0..1u32 << 10 {
            let edges: Vec<(usize, usize)> = pairs5
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            assert_eq!(
                is_planar(5, &edges),
                planar_by_minors(5, &edges),
                "mask {mask:#b}"
            );
        }
        let pairs6: Vec<(usize, usize)> = complete(6);
        let mut mask: u32 = 0x6d3f;
        for step in 0..400u32 {
            mask = mask.wrapping_mul(1664525).wrapping_add(1013904223 + step);
            let m = mask & ((1 << 15) - 1);
            let edges: Vec<(usize, usize)> = pairs6
                .iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            assert_eq!(
                is_planar(6, &edges),
                planar_by_minors(6, &edges),
                "mask {m:#b}"
            );
        }
    }
}
