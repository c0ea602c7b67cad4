//! Shared fixtures, random instance generators, and brute-force oracles.
//!
//! The oracles re-derive everything from first principles (path and tree
//! enumeration, definitional scans) so they stay independent of the library
//! code they are used to check.

#![allow(dead_code)]

use survmap::failure::{FailureScenario, SrlgSet};
use survmap::net::{CostVector, LogEdgeId, LogicalNetwork, Mapping, PhysEdgeId, PhysicalNetwork};
use survmap::rng::SplitMix64;
use survmap::shortest_path;

/// The worked four-node example: a logical 4-cycle `a,b,c,d` on physical
/// nodes 0..=3 with two relay nodes 4 and 5, routed so that three two-edge
/// failure groups are each avoided by one spanning tree.
pub fn worked_example() -> (PhysicalNetwork, LogicalNetwork, Mapping, SrlgSet) {
    let phys = PhysicalNetwork::new(
        6,
        vec![(0, 1), (2, 4), (1, 2), (0, 4), (4, 3), (3, 5), (5, 0)],
    )
    .unwrap();
    let logical = LogicalNetwork::new(
        4,
        vec![(0, 1), (1, 2), (2, 3), (3, 0)],
        vec![0, 1, 2, 3],
        &phys,
    )
    .unwrap();
    let mapping = Mapping::new(
        &phys,
        &logical,
        vec![
            Some(vec![PhysEdgeId(0)]),
            Some(vec![PhysEdgeId(2)]),
            Some(vec![PhysEdgeId(1), PhysEdgeId(4)]),
            Some(vec![PhysEdgeId(6), PhysEdgeId(5)]),
        ],
    )
    .unwrap();
    let srlgs = SrlgSet::new(vec![
        FailureScenario::new("r1", vec![PhysEdgeId(0), PhysEdgeId(3)], &phys).unwrap(),
        FailureScenario::new("r2", vec![PhysEdgeId(1), PhysEdgeId(4)], &phys).unwrap(),
        FailureScenario::new("r3", vec![PhysEdgeId(5), PhysEdgeId(6)], &phys).unwrap(),
    ])
    .unwrap();
    (phys, logical, mapping, srlgs)
}

/// Random connected physical network: a random spanning tree plus up to
/// `extra` additional distinct edges.
pub fn random_phys(rng: &mut SplitMix64, nodes: u32, extra: usize) -> PhysicalNetwork {
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for v in 1..nodes {
        let u = rng.gen_range(v as u64) as u32;
        edges.push((u.min(v), u.max(v)));
    }
    let mut added = 0;
    let mut guard = 0;
    while added < extra && guard < 50 * (extra + 1) {
        guard += 1;
        let u = rng.gen_range(nodes as u64) as u32;
        let v = rng.gen_range(nodes as u64) as u32;
        if u == v {
            continue;
        }
        let pair = (u.min(v), u.max(v));
        if !edges.contains(&pair) {
            edges.push(pair);
            added += 1;
        }
    }
    PhysicalNetwork::new(nodes, edges).unwrap()
}

/// Random connected logical network with a random injective placement onto
/// the physical node set.
pub fn random_logical(
    rng: &mut SplitMix64,
    phys: &PhysicalNetwork,
    nodes: u32,
    extra: usize,
) -> LogicalNetwork {
    assert!(nodes <= phys.node_count());
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for v in 1..nodes {
        let u = rng.gen_range(v as u64) as u32;
        edges.push((u.min(v), u.max(v)));
    }
    let mut added = 0;
    let mut guard = 0;
    while added < extra && guard < 50 * (extra + 1) {
        guard += 1;
        let u = rng.gen_range(nodes as u64) as u32;
        let v = rng.gen_range(nodes as u64) as u32;
        if u == v {
            continue;
        }
        let pair = (u.min(v), u.max(v));
        if !edges.contains(&pair) {
            edges.push(pair);
            added += 1;
        }
    }
    let mut placement: Vec<u32> = (0..phys.node_count()).collect();
    rng.shuffle(&mut placement);
    placement.truncate(nodes as usize);
    LogicalNetwork::new(nodes, edges, placement, phys).unwrap()
}

/// Route every logical edge along a min-cost path under random small
/// integer weights; different seeds give different valid mappings.
pub fn random_mapping(
    rng: &mut SplitMix64,
    phys: &PhysicalNetwork,
    logical: &LogicalNetwork,
) -> Mapping {
    let weights: Vec<f64> = (0..phys.edge_count())
        .map(|_| (1 + rng.gen_range(9)) as f64)
        .collect();
    let costs = CostVector::new(weights, vec![1.0; logical.edge_count()]).unwrap();
    let routes = (0..logical.edge_count())
        .map(|l| {
            let (from, to) = logical.mapped_endpoints(LogEdgeId(l as u32)).unwrap();
            Some(shortest_path(phys, &costs, from, to).unwrap())
        })
        .collect();
    Mapping::new(phys, logical, routes).unwrap()
}

/// Every simple path between two physical nodes, by DFS enumeration.
pub fn all_simple_paths(phys: &PhysicalNetwork, from: u32, to: u32) -> Vec<Vec<PhysEdgeId>> {
    let mut found = Vec::new();
    let mut visited = vec![false; phys.node_count() as usize];
    let mut path = Vec::new();
    visited[from as usize] = true;
    dfs_paths(phys, from, to, &mut visited, &mut path, &mut found);
    found
}

fn dfs_paths(
    phys: &PhysicalNetwork,
    cur: u32,
    to: u32,
    visited: &mut Vec<bool>,
    path: &mut Vec<PhysEdgeId>,
    found: &mut Vec<Vec<PhysEdgeId>>,
) {
    if cur == to {
        found.push(path.clone());
        return;
    }
    for &(next, e) in phys.neighbors(cur) {
        if !visited[next as usize] {
            visited[next as usize] = true;
            path.push(e);
            dfs_paths(phys, next, to, visited, path, found);
            path.pop();
            visited[next as usize] = false;
        }
    }
}

/// Every spanning tree of the logical network: all (n-1)-subsets of the
/// edge set that connect every node without a cycle.
pub fn all_spanning_trees(logical: &LogicalNetwork) -> Vec<Vec<LogEdgeId>> {
    let n = logical.node_count() as usize;
    let m = logical.edge_count();
    let mut found = Vec::new();
    if n == 0 || m < n - 1 {
        return found;
    }
    let mut subset: Vec<usize> = (0..n - 1).collect();
    loop {
        if is_spanning_tree(logical, &subset) {
            found.push(subset.iter().map(|&i| LogEdgeId(i as u32)).collect());
        }
        // next (n-1)-combination of 0..m
        let k = subset.len();
        let mut i = k;
        let mut advanced = false;
        while i > 0 {
            i -= 1;
            if subset[i] < m - (k - i) {
                subset[i] += 1;
                for j in i + 1..k {
                    subset[j] = subset[j - 1] + 1;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            return found;
        }
    }
}

fn is_spanning_tree(logical: &LogicalNetwork, subset: &[usize]) -> bool {
    let n = logical.node_count() as usize;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    let mut merged = 0;
    for &i in subset {
        let (s, t) = logical.endpoints(LogEdgeId(i as u32)).unwrap();
        let (rs, rt) = (find(&mut parent, s as usize), find(&mut parent, t as usize));
        if rs == rt {
            return false;
        }
        parent[rs] = rt;
        merged += 1;
    }
    merged == n - 1
}

/// Definitional scan: the logical edges whose routes traverse at least one
/// failed physical edge.
pub fn hit_edges_by_scan(
    logical: &LogicalNetwork,
    mapping: &Mapping,
    failed: &[PhysEdgeId],
) -> Vec<LogEdgeId> {
    (0..logical.edge_count())
        .filter(|&l| {
            mapping
                .route(LogEdgeId(l as u32))
                .unwrap()
                .map(|r| r.iter().any(|e| failed.contains(e)))
                .unwrap_or(false)
        })
        .map(|l| LogEdgeId(l as u32))
        .collect()
}

/// Independent connectivity check over an explicit edge list.
pub fn connected_by_scan(node_count: u32, edges: &[(u32, u32)]) -> bool {
    if node_count == 0 {
        return false;
    }
    let mut adj = vec![Vec::new(); node_count as usize];
    for &(u, v) in edges {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    let mut seen = vec![false; node_count as usize];
    let mut stack = vec![0u32];
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &v in &adj[u as usize] {
            if !seen[v as usize] {
                seen[v as usize] = true;
                count += 1;
                stack.push(v);
            }
        }
    }
    count == node_count as usize
}

/// Survivability decided by the protecting-tree condition: some spanning
/// tree of the logical network avoids every hit edge.
pub fn survives_by_tree_enumeration(
    logical: &LogicalNetwork,
    mapping: &Mapping,
    failed: &[PhysEdgeId],
) -> bool {
    let hit = hit_edges_by_scan(logical, mapping, failed);
    all_spanning_trees(logical)
        .iter()
        .any(|tree| tree.iter().all(|e| !hit.contains(e)))
}

/// Survivability decided by the cutset condition: every vertex bipartition
/// keeps at least one unhit crossing edge.
pub fn survives_by_cutset_check(
    logical: &LogicalNetwork,
    mapping: &Mapping,
    failed: &[PhysEdgeId],
) -> bool {
    let hit = hit_edges_by_scan(logical, mapping, failed);
    let n = logical.node_count();
    for mask in 1u64..(1u64 << (n - 1)) {
        let in_a = |v: u32| v > 0 && (mask >> (v - 1)) & 1 == 1;
        let mut survivor = false;
        let mut crossing = false;
        for (i, &(s, t)) in logical.edges().iter().enumerate() {
            if in_a(s) != in_a(t) {
                crossing = true;
                if !hit.contains(&LogEdgeId(i as u32)) {
                    survivor = true;
                    break;
                }
            }
        }
        if crossing && !survivor {
            return false;
        }
    }
    true
}

/// Exact binomial coefficient, independently of the library.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}
