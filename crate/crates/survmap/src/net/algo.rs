//! Graph primitives: cost vectors, deterministic shortest paths and minimum
//! spanning trees, and cutset enumeration by vertex bipartition.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{
    LogEdgeId, LogNodeId, LogicalNetwork, NetError, PhysEdgeId, PhysNodeId, PhysicalNetwork,
    SpanningTree,
};

/// Positive, finite edge costs for both layers.
#[derive(Debug, Clone)]
pub struct CostVector {
    physical: Vec<f64>,
    logical: Vec<f64>,
}

impl CostVector {
    pub fn new(physical: Vec<f64>, logical: Vec<f64>) -> Result<Self, NetError> {
        for &c in physical.iter().chain(logical.iter()) {
            if !(c.is_finite() && c > 0.0) {
                return Err(NetError::BadCost(c));
            }
        }
        Ok(Self { physical, logical })
    }

    /// Unit costs on every edge of both layers.
    pub fn unit(phys: &PhysicalNetwork, logical: &LogicalNetwork) -> Self {
        Self {
            physical: vec![1.0; phys.edge_count()],
            logical: vec![1.0; logical.edge_count()],
        }
    }

    pub fn physical(&self) -> &[f64] {
        &self.physical
    }

    pub fn logical(&self) -> &[f64] {
        &self.logical
    }
}

pub(crate) fn path_cost(path: &[PhysEdgeId], weights: &[f64]) -> f64 {
    path.iter().map(|e| weights[e.index()]).sum()
}

#[derive(Debug, PartialEq)]
struct HeapEntry {
    dist: f64,
    node: u32,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reverse ordering turns BinaryHeap into a min-heap; node id breaks
        // distance ties so the pop order is fully deterministic.
        other
            .dist
            .partial_cmp(&self.dist)
            .expect("costs are finite")
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn dijkstra_distances(phys: &PhysicalNetwork, weights: &[f64], source: PhysNodeId) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; phys.node_count() as usize];
    dist[source as usize] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(HeapEntry {
        dist: 0.0,
        node: source,
    });
    while let Some(HeapEntry { dist: d, node: u }) = heap.pop() {
        if d > dist[u as usize] {
            continue;
        }
        for &(v, e) in phys.neighbors(u) {
            let nd = d + weights[e.index()];
            if nd < dist[v as usize] {
                dist[v as usize] = nd;
                heap.push(HeapEntry { dist: nd, node: v });
            }
        }
    }
    dist
}

/// Minimum-cost simple path between two physical nodes. Among equal-cost
/// paths the lexicographically smallest edge-id sequence wins.
pub fn shortest_path(
    phys: &PhysicalNetwork,
    costs: &CostVector,
    from: PhysNodeId,
    to: PhysNodeId,
) -> Result<Vec<PhysEdgeId>, NetError> {
    if costs.physical().len() != phys.edge_count() {
        return Err(NetError::CostLength(
            costs.physical().len(),
            phys.edge_count(),
        ));
    }
    dijkstra_path(phys, costs.physical(), from, to)
}

pub(crate) fn dijkstra_path(
    phys: &PhysicalNetwork,
    weights: &[f64],
    from: PhysNodeId,
    to: PhysNodeId,
) -> Result<Vec<PhysEdgeId>, NetError> {
    if from == to {
        return Err(NetError::SamePathEndpoints(from));
    }
    let dist = dijkstra_distances(phys, weights, to);
    if !dist[from as usize].is_finite() {
        return Err(NetError::NoPath(from, to));
    }
    // Walk greedily toward `to`, always taking the smallest-id edge that lies
    // on some minimum-cost path. Remaining distance strictly decreases, so
    // the walk terminates and stays simple.
    let mut path = Vec::new();
    let mut cur = from;
    while cur != to {
        let mut step = None;
        for &(v, e) in phys.neighbors(cur) {
            if dist[v as usize] + weights[e.index()] == dist[cur as usize] {
                step = Some((v, e));
                break;
            }
        }
        let (v, e) = step.expect("relaxed predecessor always exists");
        path.push(e);
        cur = v;
    }
    Ok(path)
}

pub(crate) struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: u32) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n as usize],
        }
    }

    pub fn find(&mut self, x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut cur = x;
        while cur != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    /// Returns false when both nodes were already in the same component.
    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra as usize].cmp(&self.rank[rb as usize]) {
            Ordering::Less => self.parent[ra as usize] = rb,
            Ordering::Greater => self.parent[rb as usize] = ra,
            Ordering::Equal => {
                self.parent[rb as usize] = ra;
                self.rank[ra as usize] += 1;
            }
        }
        true
    }
}

/// Minimum spanning tree of the logical network under the logical costs.
/// Cost ties are broken in favor of smaller edge ids.
pub fn minimum_spanning_tree(
    logical: &LogicalNetwork,
    costs: &CostVector,
) -> Result<SpanningTree, NetError> {
    if costs.logical().len() != logical.edge_count() {
        return Err(NetError::CostLength(
            costs.logical().len(),
            logical.edge_count(),
        ));
    }
    let tree = kruskal(logical, costs.logical())?;
    SpanningTree::new(logical, tree)
}

pub(crate) fn kruskal(
    logical: &LogicalNetwork,
    weights: &[f64],
) -> Result<Vec<LogEdgeId>, NetError> {
    let mut order: Vec<u32> = (0..logical.edge_count() as u32).collect();
    order.sort_by(|&a, &b| {
        weights[a as usize]
            .partial_cmp(&weights[b as usize])
            .expect("costs are finite")
            .then_with(|| a.cmp(&b))
    });
    let mut uf = UnionFind::new(logical.node_count());
    let mut tree = Vec::with_capacity(logical.node_count() as usize - 1);
    for id in order {
        let e = LogEdgeId(id);
        let (s, t) = logical.endpoints(e)?;
        if uf.union(s, t) {
            tree.push(e);
            if tree.len() + 1 == logical.node_count() as usize {
                return Ok(tree);
            }
        }
    }
    if logical.node_count() == 1 {
        return Ok(tree);
    }
    Err(NetError::Disconnected)
}

/// A vertex bipartition of the logical node set together with its crossing
/// edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cutset {
    pub side_a: Vec<LogNodeId>,
    pub edge_ids: Vec<LogEdgeId>,
}

pub const DEFAULT_CUTSET_NODE_BOUND: u32 = 16;

/// Every unordered vertex bipartition with a nonempty crossing edge set, one
/// `Cutset` each. There are `2^(n-1) - 1` bipartitions; the default bound
/// keeps that enumeration within reason.
pub fn enumerate_cutsets(logical: &LogicalNetwork) -> Result<Vec<Cutset>, NetError> {
    enumerate_cutsets_bounded(logical, DEFAULT_CUTSET_NODE_BOUND)
}

pub fn enumerate_cutsets_bounded(
    logical: &LogicalNetwork,
    node_bound: u32,
) -> Result<Vec<Cutset>, NetError> {
    let n = logical.node_count();
    if n > node_bound {
        return Err(NetError::CutsetBound(node_bound, n));
    }
    if n < 2 {
        return Ok(Vec::new());
    }
    // Each unordered bipartition is represented by its side not containing
    // node 0, encoded as a nonempty subset of {1, .., n-1}.
    let mut cutsets = Vec::new();
    for mask in 1u64..(1u64 << (n - 1)) {
        let in_a = |node: LogNodeId| node > 0 && (mask >> (node - 1)) & 1 == 1;
        let side_a: Vec<LogNodeId> = (1..n).filter(|&v| in_a(v)).collect();
        let edge_ids: Vec<LogEdgeId> = logical
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, &(s, t))| in_a(s) != in_a(t))
            .map(|(i, _)| LogEdgeId(i as u32))
            .collect();
        if !edge_ids.is_empty() {
            cutsets.push(Cutset { side_a, edge_ids });
        }
    }
    Ok(cutsets)
}
