//! Two-layer network model: the physical infrastructure graph, the logical
//! (virtual datacenter) graph mapped onto it, per-link physical routes, and
//! the small set of graph primitives everything else is built from.
//!
//! All types are immutable after construction and all operations are pure,
//! so values can be shared freely across threads.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

mod algo;

pub(crate) use algo::{dijkstra_path, kruskal, path_cost, UnionFind};
pub use algo::{
    enumerate_cutsets, enumerate_cutsets_bounded, minimum_spanning_tree, shortest_path, CostVector,
    Cutset, DEFAULT_CUTSET_NODE_BOUND,
};

pub type PhysNodeId = u32;
pub type LogNodeId = u32;

/// Identifier of a physical edge. Ids are dense `0..edge_count` and stable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PhysEdgeId(pub u32);

/// Identifier of a logical edge. Ids are dense `0..edge_count` and stable;
/// ids at or above the base edge count belong to augmentation edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LogEdgeId(pub u32);

impl PhysEdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl LogEdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for PhysEdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for LogEdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error)]
pub enum NetError {
    #[error("graph must have at least one node")]
    EmptyGraph,
    #[error("edge ({0}, {1}) is a self-loop")]
    SelfLoop(u32, u32),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(u32, u32),
    #[error("edge endpoint {0} out of range (node count {1})")]
    NodeOutOfRange(u32, u32),
    #[error("graph is not connected")]
    Disconnected,
    #[error("node map must cover every logical node (got {0} entries for {1} nodes)")]
    NodeMapLength(usize, u32),
    #[error("node map must be injective: physical node {0} is used twice")]
    NodeMapNotInjective(u32),
    #[error("node map entry {0} out of range (physical node count {1})")]
    NodeMapOutOfRange(u32, u32),
    #[error("unknown physical edge id {0}")]
    UnknownPhysEdge(u32),
    #[error("unknown logical edge id {0}")]
    UnknownLogEdge(u32),
    #[error("route count {0} does not match logical edge count {1}")]
    RouteCount(usize, usize),
    #[error("route for logical edge {0}: {1}")]
    BadRoute(u32, String),
    #[error("mapping is incomplete: logical edge {0} has no route")]
    IncompleteMapping(u32),
    #[error("no path between physical nodes {0} and {1}")]
    NoPath(u32, u32),
    #[error("path endpoints must differ (got {0} twice)")]
    SamePathEndpoints(u32),
    #[error("edge cost must be positive and finite (got {0})")]
    BadCost(f64),
    #[error("cost vector has {0} entries but the graph has {1} edges")]
    CostLength(usize, usize),
    #[error("not a spanning tree: {0}")]
    NotSpanningTree(String),
    #[error("cutset enumeration is bounded to {0} logical nodes (graph has {1}); opt in to a larger bound explicitly")]
    CutsetBound(u32, u32),
}

/// The physical infrastructure graph: undirected, connected, no self-loops
/// or parallel edges.
#[derive(Debug, Clone)]
pub struct PhysicalNetwork {
    node_count: u32,
    edges: Vec<(PhysNodeId, PhysNodeId)>,
    adj: Vec<Vec<(PhysNodeId, PhysEdgeId)>>,
}

impl PhysicalNetwork {
    pub fn new(node_count: u32, edges: Vec<(u32, u32)>) -> Result<Self, NetError> {
        let edges = build_edge_list(node_count, &edges, false)?;
        let adj = build_adjacency::<PhysEdgeId>(node_count, &edges);
        let net = Self {
            node_count,
            edges,
            adj,
        };
        if !connected(node_count, &net.adj, None) {
            return Err(NetError::Disconnected);
        }
        Ok(net)
    }

    pub fn node_count(&self) -> u32 {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edge endpoints by id, canonicalized with the smaller node first.
    pub fn edges(&self) -> &[(PhysNodeId, PhysNodeId)] {
        &self.edges
    }

    pub fn endpoints(&self, e: PhysEdgeId) -> Result<(PhysNodeId, PhysNodeId), NetError> {
        self.edges
            .get(e.index())
            .copied()
            .ok_or(NetError::UnknownPhysEdge(e.0))
    }

    /// Incident edges of `node`, in ascending edge-id order.
    pub fn neighbors(&self, node: PhysNodeId) -> &[(PhysNodeId, PhysEdgeId)] {
        &self.adj[node as usize]
    }

    /// Whether the graph stays connected once `removed` edges are deleted.
    pub fn connected_without(&self, removed: &[PhysEdgeId]) -> bool {
        let mut dead = vec![false; self.edges.len()];
        for e in removed {
            if let Some(slot) = dead.get_mut(e.index()) {
                *slot = true;
            }
        }
        connected(self.node_count, &self.adj, Some(&dead))
    }
}

/// The logical (virtual datacenter) graph plus its injective node mapping
/// into a physical network. Parallel edges only ever appear past
/// `base_edge_count`, i.e. when added by augmentation.
#[derive(Debug, Clone)]
pub struct LogicalNetwork {
    node_count: u32,
    edges: Vec<(LogNodeId, LogNodeId)>,
    node_map: Vec<PhysNodeId>,
    base_edge_count: u32,
    adj: Vec<Vec<(LogNodeId, LogEdgeId)>>,
}

impl LogicalNetwork {
    pub fn new(
        node_count: u32,
        edges: Vec<(u32, u32)>,
        node_map: Vec<PhysNodeId>,
        phys: &PhysicalNetwork,
    ) -> Result<Self, NetError> {
        Self::with_augmented(node_count, edges, Vec::new(), node_map, phys)
    }

    /// Construct a network whose trailing `augmented` edges are allowed to
    /// duplicate base edge pairs. Connectivity is required of the base graph.
    pub fn with_augmented(
        node_count: u32,
        base_edges: Vec<(u32, u32)>,
        augmented: Vec<(u32, u32)>,
        node_map: Vec<PhysNodeId>,
        phys: &PhysicalNetwork,
    ) -> Result<Self, NetError> {
        let base_edge_count = base_edges.len() as u32;
        let mut edges = build_edge_list(node_count, &base_edges, false)?;
        for &(s, t) in &augmented {
            if s == t {
                return Err(NetError::SelfLoop(s, t));
            }
            if s >= node_count || t >= node_count {
                return Err(NetError::NodeOutOfRange(s.max(t), node_count));
            }
            edges.push((s.min(t), s.max(t)));
        }
        if node_map.len() != node_count as usize {
            return Err(NetError::NodeMapLength(node_map.len(), node_count));
        }
        let mut used = vec![false; phys.node_count() as usize];
        for &p in &node_map {
            if p >= phys.node_count() {
                return Err(NetError::NodeMapOutOfRange(p, phys.node_count()));
            }
            if used[p as usize] {
                return Err(NetError::NodeMapNotInjective(p));
            }
            used[p as usize] = true;
        }
        let adj = build_adjacency::<LogEdgeId>(node_count, &edges);
        let net = Self {
            node_count,
            edges,
            node_map,
            base_edge_count,
            adj,
        };
        if !net.is_connected() {
            return Err(NetError::Disconnected);
        }
        Ok(net)
    }

    /// Copy of this network with one extra (possibly parallel) edge, as
    /// created by virtual datacenter augmentation. Returns the fresh id.
    pub fn with_augmented_edge(
        &self,
        s: LogNodeId,
        t: LogNodeId,
    ) -> Result<(Self, LogEdgeId), NetError> {
        if s == t {
            return Err(NetError::SelfLoop(s, t));
        }
        if s >= self.node_count || t >= self.node_count {
            return Err(NetError::NodeOutOfRange(s.max(t), self.node_count));
        }
        let id = LogEdgeId(self.edges.len() as u32);
        let mut next = self.clone();
        next.edges.push((s.min(t), s.max(t)));
        next.adj[s as usize].push((t, id));
        next.adj[t as usize].push((s, id));
        Ok((next, id))
    }

    pub fn node_count(&self) -> u32 {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn base_edge_count(&self) -> u32 {
        self.base_edge_count
    }

    pub fn is_augmented(&self, e: LogEdgeId) -> bool {
        e.0 >= self.base_edge_count
    }

    pub fn edges(&self) -> &[(LogNodeId, LogNodeId)] {
        &self.edges
    }

    pub fn endpoints(&self, e: LogEdgeId) -> Result<(LogNodeId, LogNodeId), NetError> {
        self.edges
            .get(e.index())
            .copied()
            .ok_or(NetError::UnknownLogEdge(e.0))
    }

    pub fn node_map(&self) -> &[PhysNodeId] {
        &self.node_map
    }

    pub fn map_node(&self, s: LogNodeId) -> PhysNodeId {
        self.node_map[s as usize]
    }

    /// Physical endpoints of a logical edge under the node mapping.
    pub fn mapped_endpoints(&self, e: LogEdgeId) -> Result<(PhysNodeId, PhysNodeId), NetError> {
        let (s, t) = self.endpoints(e)?;
        Ok((self.map_node(s), self.map_node(t)))
    }

    pub fn neighbors(&self, node: LogNodeId) -> &[(LogNodeId, LogEdgeId)] {
        &self.adj[node as usize]
    }

    pub fn degree(&self, node: LogNodeId) -> usize {
        self.adj[node as usize].len()
    }

    pub fn is_connected(&self) -> bool {
        connected(self.node_count, &self.adj, None)
    }
}

/// Per-logical-edge physical routes. A mapping may be partial while a
/// heuristic is still running; verification requires completeness.
#[derive(Debug, Clone)]
pub struct Mapping {
    routes: Vec<Option<Vec<PhysEdgeId>>>,
    // Inverted index: for each physical edge, the logical edges routed over it.
    lambda: Vec<Vec<LogEdgeId>>,
}

impl Mapping {
    pub fn new(
        phys: &PhysicalNetwork,
        logical: &LogicalNetwork,
        routes: Vec<Option<Vec<PhysEdgeId>>>,
    ) -> Result<Self, NetError> {
        if routes.len() != logical.edge_count() {
            return Err(NetError::RouteCount(routes.len(), logical.edge_count()));
        }
        for (idx, route) in routes.iter().enumerate() {
            if let Some(path) = route {
                let e = LogEdgeId(idx as u32);
                let (from, to) = logical.mapped_endpoints(e)?;
                validate_route(phys, from, to, path).map_err(|msg| NetError::BadRoute(e.0, msg))?;
            }
        }
        let mut lambda = vec![Vec::new(); phys.edge_count()];
        for (idx, route) in routes.iter().enumerate() {
            if let Some(path) = route {
                for pe in path {
                    lambda[pe.index()].push(LogEdgeId(idx as u32));
                }
            }
        }
        Ok(Self { routes, lambda })
    }

    pub fn empty(phys: &PhysicalNetwork, logical: &LogicalNetwork) -> Self {
        Self {
            routes: vec![None; logical.edge_count()],
            lambda: vec![Vec::new(); phys.edge_count()],
        }
    }

    pub fn route(&self, e: LogEdgeId) -> Result<Option<&[PhysEdgeId]>, NetError> {
        self.routes
            .get(e.index())
            .map(|r| r.as_deref())
            .ok_or(NetError::UnknownLogEdge(e.0))
    }

    pub fn routes(&self) -> &[Option<Vec<PhysEdgeId>>] {
        &self.routes
    }

    /// The set of logical edges routed through `phys_edge`, ascending.
    pub fn lambda_set(&self, phys_edge: PhysEdgeId) -> Result<&[LogEdgeId], NetError> {
        self.lambda
            .get(phys_edge.index())
            .map(Vec::as_slice)
            .ok_or(NetError::UnknownPhysEdge(phys_edge.0))
    }

    pub fn is_complete(&self) -> bool {
        self.routes.iter().all(Option::is_some)
    }

    /// First unrouted logical edge, if any.
    pub fn first_missing(&self) -> Option<LogEdgeId> {
        self.routes
            .iter()
            .position(Option::is_none)
            .map(|i| LogEdgeId(i as u32))
    }

    /// Total physical hops over all present routes (multiplicity counted).
    pub fn total_route_hops(&self) -> u64 {
        self.routes
            .iter()
            .filter_map(|r| r.as_ref())
            .map(|p| p.len() as u64)
            .sum()
    }
}

pub(crate) fn validate_route(
    phys: &PhysicalNetwork,
    from: PhysNodeId,
    to: PhysNodeId,
    path: &[PhysEdgeId],
) -> Result<(), String> {
    if path.is_empty() {
        return Err("route is empty".into());
    }
    let mut visited = BTreeSet::new();
    visited.insert(from);
    let mut cur = from;
    for &pe in path {
        let (a, b) = phys
            .endpoints(pe)
            .map_err(|_| format!("unknown physical edge {}", pe.0))?;
        let next = if a == cur {
            b
        } else if b == cur {
            a
        } else {
            return Err(format!("edge {} is not incident to node {}", pe.0, cur));
        };
        if !visited.insert(next) {
            return Err(format!("node {next} repeats; route must be a simple path"));
        }
        cur = next;
    }
    if cur != to {
        return Err(format!("route ends at node {cur}, expected {to}"));
    }
    Ok(())
}

/// What is left of a logical network after a set of physical edges fails:
/// same node set, with every logical edge routed over a failed physical edge
/// removed. Edge ids are the original ids.
#[derive(Debug, Clone)]
pub struct ResidualLogical {
    node_count: u32,
    surviving: Vec<(LogEdgeId, LogNodeId, LogNodeId)>,
}

impl ResidualLogical {
    pub fn node_count(&self) -> u32 {
        self.node_count
    }

    pub fn surviving_edges(&self) -> impl Iterator<Item = LogEdgeId> + '_ {
        self.surviving.iter().map(|&(e, _, _)| e)
    }

    pub fn edge_count(&self) -> usize {
        self.surviving.len()
    }

    pub fn is_connected(&self) -> bool {
        let adj = self.adjacency();
        connected(self.node_count, &adj, None)
    }

    /// Deterministic BFS spanning tree rooted at `root`, or `None` when the
    /// residual graph is disconnected. Neighbors are explored in ascending
    /// edge-id order so the witness is stable across runs.
    pub fn bfs_spanning_tree(&self, root: LogNodeId) -> Option<Vec<LogEdgeId>> {
        if self.node_count == 0 {
            return None;
        }
        let adj = self.adjacency();
        let mut visited = vec![false; self.node_count as usize];
        let mut queue = std::collections::VecDeque::new();
        let mut tree = Vec::new();
        visited[root as usize] = true;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            for &(v, e) in &adj[u as usize] {
                if !visited[v as usize] {
                    visited[v as usize] = true;
                    tree.push(e);
                    queue.push_back(v);
                }
            }
        }
        if visited.iter().all(|&v| v) {
            tree.sort_unstable();
            Some(tree)
        } else {
            None
        }
    }

    fn adjacency(&self) -> Vec<Vec<(LogNodeId, LogEdgeId)>> {
        let mut adj = vec![Vec::new(); self.node_count as usize];
        for &(e, s, t) in &self.surviving {
            adj[s as usize].push((t, e));
            adj[t as usize].push((s, e));
        }
        adj
    }

    /// Directly assemble a residual graph; used by tests and by callers that
    /// already know the surviving edge set.
    pub fn from_parts(node_count: u32, surviving: Vec<(LogEdgeId, LogNodeId, LogNodeId)>) -> Self {
        Self {
            node_count,
            surviving,
        }
    }
}

/// Remove from the logical network every edge whose route crosses a failed
/// physical edge. Requires a complete mapping.
pub fn residual_logical(
    logical: &LogicalNetwork,
    mapping: &Mapping,
    failed: &[PhysEdgeId],
) -> Result<ResidualLogical, NetError> {
    if mapping.routes().len() != logical.edge_count() {
        return Err(NetError::RouteCount(
            mapping.routes().len(),
            logical.edge_count(),
        ));
    }
    if let Some(missing) = mapping.first_missing() {
        return Err(NetError::IncompleteMapping(missing.0));
    }
    let mut dead = vec![false; logical.edge_count()];
    for &f in failed {
        for &le in mapping.lambda_set(f)? {
            dead[le.index()] = true;
        }
    }
    let surviving = logical
        .edges()
        .iter()
        .enumerate()
        .filter(|(i, _)| !dead[*i])
        .map(|(i, &(s, t))| (LogEdgeId(i as u32), s, t))
        .collect();
    Ok(ResidualLogical {
        node_count: logical.node_count(),
        surviving,
    })
}

/// A spanning tree of the logical network, stored as a sorted edge-id set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningTree {
    edges: Vec<LogEdgeId>,
}

impl SpanningTree {
    pub fn new(logical: &LogicalNetwork, mut edges: Vec<LogEdgeId>) -> Result<Self, NetError> {
        edges.sort_unstable();
        edges.dedup();
        let need = logical.node_count() as usize - 1;
        if edges.len() != need {
            return Err(NetError::NotSpanningTree(format!(
                "{} edges given, {} nodes need {}",
                edges.len(),
                logical.node_count(),
                need
            )));
        }
        let mut uf = UnionFind::new(logical.node_count());
        for &e in &edges {
            let (s, t) = logical.endpoints(e)?;
            if !uf.union(s, t) {
                return Err(NetError::NotSpanningTree(format!(
                    "edge {} closes a cycle",
                    e.0
                )));
            }
        }
        // n-1 successful unions over n nodes imply a single spanning component.
        Ok(Self { edges })
    }

    pub fn edge_ids(&self) -> &[LogEdgeId] {
        &self.edges
    }

    pub fn contains(&self, e: LogEdgeId) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

fn build_edge_list(
    node_count: u32,
    edges: &[(u32, u32)],
    allow_parallel: bool,
) -> Result<Vec<(u32, u32)>, NetError> {
    if node_count == 0 {
        return Err(NetError::EmptyGraph);
    }
    let mut canon = Vec::with_capacity(edges.len());
    let mut seen = BTreeSet::new();
    for &(u, v) in edges {
        if u == v {
            return Err(NetError::SelfLoop(u, v));
        }
        if u >= node_count || v >= node_count {
            return Err(NetError::NodeOutOfRange(u.max(v), node_count));
        }
        let pair = (u.min(v), u.max(v));
        if !seen.insert(pair) && !allow_parallel {
            return Err(NetError::DuplicateEdge(pair.0, pair.1));
        }
        canon.push(pair);
    }
    Ok(canon)
}

fn build_adjacency<E: From<u32> + Copy>(
    node_count: u32,
    edges: &[(u32, u32)],
) -> Vec<Vec<(u32, E)>> {
    let mut adj = vec![Vec::new(); node_count as usize];
    for (idx, &(u, v)) in edges.iter().enumerate() {
        let id = E::from(idx as u32);
        adj[u as usize].push((v, id));
        adj[v as usize].push((u, id));
    }
    adj
}

impl From<u32> for PhysEdgeId {
    fn from(v: u32) -> Self {
        PhysEdgeId(v)
    }
}

impl From<u32> for LogEdgeId {
    fn from(v: u32) -> Self {
        LogEdgeId(v)
    }
}

fn connected<E: Copy + Into<u32>>(
    node_count: u32,
    adj: &[Vec<(u32, E)>],
    dead_edge: Option<&[bool]>,
) -> bool {
    if node_count == 0 {
        return false;
    }
    let mut visited = vec![false; node_count as usize];
    let mut stack = vec![0u32];
    visited[0] = true;
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &(v, e) in &adj[u as usize] {
            if let Some(dead) = dead_edge {
                if dead[e.into() as usize] {
                    continue;
                }
            }
            if !visited[v as usize] {
                visited[v as usize] = true;
                count += 1;
                stack.push(v);
            }
        }
    }
    count == node_count as usize
}

impl From<PhysEdgeId> for u32 {
    fn from(e: PhysEdgeId) -> u32 {
        e.0
    }
}

impl From<LogEdgeId> for u32 {
    fn from(e: LogEdgeId) -> u32 {
        e.0
    }
}
