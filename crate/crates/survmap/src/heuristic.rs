//! Iterative construction of protecting spanning trees.
//!
//! Scenarios are processed in order. A scenario already avoided by some
//! existing tree's branch routes is marked protected by that tree. Otherwise
//! the scenario's physical edges get their costs inflated by a large
//! multiplier M, candidate min-cost routes are (re)generated for unrouted
//! logical links, per-link costs are set to their route costs, and a minimum
//! spanning tree over those costs becomes the scenario's new protecting-tree
//! candidate; its branch routes are committed. Committed routes are never
//! re-routed. When even the new tree crosses the scenario, the logical
//! network can be augmented with a fresh link routed around the scenario and
//! the tree construction retried.

use thiserror::Error;

use crate::failure::{count_k_failures, gen_k_failures, FailureError, FailureScenario, SrlgSet};
use crate::net::{
    dijkstra_path, kruskal, path_cost, LogEdgeId, LogNodeId, LogicalNetwork, Mapping, NetError,
    PhysEdgeId, PhysicalNetwork, SpanningTree,
};
use crate::rng::SplitMix64;
use crate::verify::DEFAULT_ENUM_BUDGET;

#[derive(Debug, Error)]
pub enum HeuristicError {
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Failure(#[from] FailureError),
    #[error("cost multiplier M must be a finite number greater than 1 (got {0})")]
    BadBigM(f64),
    #[error("link cost overflowed the numeric range")]
    CostOverflow,
    #[error("enumeration budget exceeded: C({edges}, {k}) = {count} scenarios, budget {budget}")]
    BudgetExceeded {
        edges: usize,
        k: usize,
        count: u128,
        budget: u64,
    },
    #[error("scenario index {idx} out of range (set has {len} scenarios)")]
    UnknownScenario { idx: usize, len: usize },
}

/// Order in which the scenario collection is consumed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioOrder {
    /// As given in the set.
    Given,
    /// Seeded shuffle of the given order.
    Shuffled(u64),
}

#[derive(Debug, Clone)]
pub struct HeuristicConfig {
    /// Multiplicative penalty applied to a scenario's physical edges.
    pub big_m: f64,
    /// Cap on augmentation links added over a whole run; `None` means the
    /// logical edge count of the input network. Zero disables augmentation.
    pub max_augment: Option<usize>,
    pub order: ScenarioOrder,
}

impl Default for HeuristicConfig {
    fn default() -> Self {
        Self {
            big_m: 1.0e6,
            max_augment: None,
            order: ScenarioOrder::Given,
        }
    }
}

/// Compounded per-link costs are clamped here so repeated M multiplications
/// cannot overflow; ordering among clamped values no longer matters.
const COST_CLAMP: f64 = 1.0e30;

/// Result of a heuristic run: the protecting trees, which scenario each tree
/// protects, the final complete mapping, and the (possibly augmented)
/// logical network it refers to.
#[derive(Debug, Clone)]
pub struct ProtectionPlan {
    /// Logical network including any augmentation links.
    pub logical: LogicalNetwork,
    pub trees: Vec<SpanningTree>,
    /// Per scenario (input order), the index into `trees` protecting it.
    pub protected: Vec<Option<usize>>,
    /// Complete mapping over `logical`.
    pub mapping: Mapping,
    /// Ids of logical links added by augmentation.
    pub augmented_edges: Vec<LogEdgeId>,
    /// Last generated provisional route per logical edge; entries for edges
    /// whose committed route came from elsewhere are retained as-is.
    pub candidate_routes: Vec<Option<Vec<PhysEdgeId>>>,
    /// Edges that never joined a tree and received min-hop filler routes at
    /// the end so the mapping is complete.
    pub completion_edges: Vec<LogEdgeId>,
    pub warnings: Vec<String>,
}

impl ProtectionPlan {
    pub fn tree_count(&self) -> usize {
        self.trees.len()
    }

    pub fn protected_count(&self) -> usize {
        self.protected.iter().filter(|p| p.is_some()).count()
    }

    pub fn is_fully_protected(&self) -> bool {
        self.protected.iter().all(Option::is_some)
    }

    /// Number of distinct logical edges used across all trees (LogS).
    pub fn logical_edges_used(&self) -> usize {
        let mut used: Vec<LogEdgeId> = self
            .trees
            .iter()
            .flat_map(|t| t.edge_ids().iter().copied())
            .collect();
        used.sort_unstable();
        used.dedup();
        used.len()
    }

    pub fn augment_count(&self) -> usize {
        self.augmented_edges.len()
    }
}

/// Run the iterative protecting-spanning-tree construction against an SRLG
/// set. The plan marks a scenario protected only when the protecting tree's
/// committed routes provably avoid it.
pub fn run_srlg_heuristic(
    phys: &PhysicalNetwork,
    logical: &LogicalNetwork,
    srlgs: &SrlgSet,
    config: &HeuristicConfig,
) -> Result<ProtectionPlan, HeuristicError> {
    if !(config.big_m.is_finite() && config.big_m > 1.0) {
        return Err(HeuristicError::BadBigM(config.big_m));
    }
    if !logical.is_connected() {
        return Err(NetError::Disconnected.into());
    }
    let mut order: Vec<usize> = (0..srlgs.len()).collect();
    if let ScenarioOrder::Shuffled(seed) = config.order {
        SplitMix64::new(seed).shuffle(&mut order);
    }
    let max_augment = config.max_augment.unwrap_or(logical.edge_count());

    let mut state = Engine {
        phys,
        logical: logical.clone(),
        big_m: config.big_m,
        c_e: vec![1.0; phys.edge_count()],
        c_u: vec![1.0; logical.edge_count()],
        committed: vec![None; logical.edge_count()],
        candidates: vec![None; logical.edge_count()],
        trees: Vec::new(),
        augmented: Vec::new(),
        warnings: Vec::new(),
    };

    let mut protected = vec![None; srlgs.len()];
    for &idx in &order {
        let scenario = &srlgs.scenarios()[idx];
        protected[idx] = state.protect_scenario(scenario, max_augment)?;
    }
    state.finish(protected)
}

/// k-failure variant: materialize every k-subset of the physical edges as an
/// SRLG set and run the same construction over it.
pub fn run_k_heuristic(
    phys: &PhysicalNetwork,
    logical: &LogicalNetwork,
    k: usize,
    config: &HeuristicConfig,
) -> Result<ProtectionPlan, HeuristicError> {
    run_k_heuristic_with_budget(phys, logical, k, config, DEFAULT_ENUM_BUDGET)
}

pub fn run_k_heuristic_with_budget(
    phys: &PhysicalNetwork,
    logical: &LogicalNetwork,
    k: usize,
    config: &HeuristicConfig,
    budget: u64,
) -> Result<ProtectionPlan, HeuristicError> {
    let count = count_k_failures(phys.edge_count(), k);
    if count > budget as u128 {
        return Err(HeuristicError::BudgetExceeded {
            edges: phys.edge_count(),
            k,
            count,
            budget,
        });
    }
    let scenarios: Vec<FailureScenario> = gen_k_failures(phys, k)?.collect();
    let srlgs = SrlgSet::new(scenarios)?;
    run_srlg_heuristic(phys, logical, &srlgs, config)
}

/// Resume a finished plan and retry protection for one scenario, augmenting
/// the logical network as needed. Committed routes are kept verbatim;
/// min-hop filler routes revert to open so the retry may re-route them. The
/// augmentation budget counts links added across the plan's whole history.
pub fn augment_scenario(
    phys: &PhysicalNetwork,
    plan: &ProtectionPlan,
    srlgs: &SrlgSet,
    scenario_idx: usize,
    config: &HeuristicConfig,
) -> Result<ProtectionPlan, HeuristicError> {
    if !(config.big_m.is_finite() && config.big_m > 1.0) {
        return Err(HeuristicError::BadBigM(config.big_m));
    }
    let scenario = srlgs
        .scenarios()
        .get(scenario_idx)
        .ok_or(HeuristicError::UnknownScenario {
            idx: scenario_idx,
            len: srlgs.len(),
        })?;
    let mut committed: Vec<Option<Vec<PhysEdgeId>>> = plan.mapping.routes().to_vec();
    for e in &plan.completion_edges {
        committed[e.index()] = None;
    }
    let mut state = Engine {
        phys,
        logical: plan.logical.clone(),
        big_m: config.big_m,
        c_e: vec![1.0; phys.edge_count()],
        c_u: vec![1.0; plan.logical.edge_count()],
        committed,
        candidates: plan.candidate_routes.clone(),
        trees: plan.trees.clone(),
        augmented: plan.augmented_edges.clone(),
        warnings: plan.warnings.clone(),
    };
    let max_augment = config
        .max_augment
        .unwrap_or(plan.logical.base_edge_count() as usize);
    let mut protected = plan.protected.clone();
    protected[scenario_idx] = state.protect_scenario(scenario, max_augment)?;
    state.finish(protected)
}

struct Engine<'a> {
    phys: &'a PhysicalNetwork,
    logical: LogicalNetwork,
    big_m: f64,
    c_e: Vec<f64>,
    c_u: Vec<f64>,
    committed: Vec<Option<Vec<PhysEdgeId>>>,
    candidates: Vec<Option<Vec<PhysEdgeId>>>,
    trees: Vec<SpanningTree>,
    augmented: Vec<LogEdgeId>,
    warnings: Vec<String>,
}

impl Engine<'_> {
    /// Handle one scenario; returns the protecting tree index, if any.
    fn protect_scenario(
        &mut self,
        scenario: &FailureScenario,
        max_augment: usize,
    ) -> Result<Option<usize>, HeuristicError> {
        // (a) Reuse an existing tree whose branch routes avoid the scenario.
        if let Some(tidx) = self.find_protecting_tree(scenario) {
            let tree = self.trees[tidx].clone();
            for &u in tree.edge_ids() {
                if self.committed[u.index()].is_none() {
                    let cand = self.candidates[u.index()]
                        .clone()
                        .expect("protection check used this candidate");
                    self.committed[u.index()] = Some(cand);
                }
            }
            return Ok(Some(tidx));
        }
        // (b) Build a new tree under penalized costs; on failure, augment the
        // logical network and rebuild. The failed trial tree is replaced so a
        // scenario contributes at most one tree.
        loop {
            let tidx = self.build_tree(scenario)?;
            if self.tree_avoids(&self.trees[tidx], scenario, true) {
                return Ok(Some(tidx));
            }
            if self.augmented.len() >= max_augment {
                return Ok(None);
            }
            if self.augment(scenario).is_none() {
                return Ok(None);
            }
            self.trees.pop();
        }
    }

    fn find_protecting_tree(&self, scenario: &FailureScenario) -> Option<usize> {
        self.trees
            .iter()
            .position(|tree| self.tree_avoids(tree, scenario, false))
    }

    /// Whether every branch route of the tree avoids the scenario's edges.
    /// Committed routes take precedence; otherwise the latest candidate is
    /// consulted (`committed_only` skips the candidate fallback).
    fn tree_avoids(
        &self,
        tree: &SpanningTree,
        scenario: &FailureScenario,
        committed_only: bool,
    ) -> bool {
        tree.edge_ids().iter().all(|&u| {
            let route = match (&self.committed[u.index()], &self.candidates[u.index()]) {
                (Some(r), _) => Some(r),
                (None, Some(r)) if !committed_only => Some(r),
                _ => None,
            };
            match route {
                Some(r) => r.iter().all(|e| scenario.edges().binary_search(e).is_err()),
                None => false,
            }
        })
    }

    /// One round of tree construction for an unprotected scenario. Returns
    /// the index of the tree pushed onto the collection.
    fn build_tree(&mut self, scenario: &FailureScenario) -> Result<usize, HeuristicError> {
        for &e in scenario.edges() {
            self.c_e[e.index()] *= self.big_m;
        }
        for u in 0..self.logical.edge_count() {
            match &self.committed[u] {
                Some(route) => {
                    self.c_u[u] = path_cost(route, &self.c_e);
                }
                None => {
                    let (from, to) = self.logical.mapped_endpoints(LogEdgeId(u as u32))?;
                    let route = dijkstra_path(self.phys, &self.c_e, from, to)?;
                    self.c_u[u] = path_cost(&route, &self.c_e);
                    self.candidates[u] = Some(route);
                }
            }
            if !self.c_u[u].is_finite() {
                return Err(HeuristicError::CostOverflow);
            }
        }
        let tree_edges = kruskal(&self.logical, &self.c_u)?;
        let tree = SpanningTree::new(&self.logical, tree_edges)?;
        self.trees.push(tree);
        // Reset physical costs; tree edges become unit cost, everything else
        // compounds by M (clamped) to bias later trees toward reuse.
        self.c_e.iter_mut().for_each(|c| *c = 1.0);
        for u in 0..self.logical.edge_count() {
            if self.trees.iter().any(|t| t.contains(LogEdgeId(u as u32))) {
                self.c_u[u] = 1.0;
            } else {
                let next = self.c_u[u] * self.big_m;
                if next > COST_CLAMP {
                    if self.c_u[u] < COST_CLAMP {
                        self.warnings.push(format!(
                            "cost of logical edge {u} clamped at {COST_CLAMP:e} after repeated penalties"
                        ));
                    }
                    self.c_u[u] = COST_CLAMP;
                } else {
                    self.c_u[u] = next;
                }
            }
        }
        let tidx = self.trees.len() - 1;
        for &u in self.trees[tidx].edge_ids() {
            if self.committed[u.index()].is_none() {
                let cand = self.candidates[u.index()]
                    .clone()
                    .expect("candidate generated this round");
                self.committed[u.index()] = Some(cand);
            }
        }
        Ok(tidx)
    }

    /// Add one fresh logical link routed around the scenario. Candidate node
    /// pairs are ranked by lowest combined degree, then lowest ids, trying
    /// non-adjacent pairs first; adjacent pairs (parallel links) are the
    /// fallback. Returns `None` when no pair admits an avoiding route.
    fn augment(&mut self, scenario: &FailureScenario) -> Option<LogEdgeId> {
        let mut penalized = vec![1.0; self.phys.edge_count()];
        for &e in scenario.edges() {
            penalized[e.index()] = self.big_m;
        }
        let n = self.logical.node_count();
        let adjacent =
            |s: LogNodeId, t: LogNodeId| self.logical.neighbors(s).iter().any(|&(v, _)| v == t);
        let mut pairs: Vec<(usize, LogNodeId, LogNodeId, bool)> = Vec::new();
        for s in 0..n {
            for t in s + 1..n {
                let deg = self.logical.degree(s) + self.logical.degree(t);
                pairs.push((deg, s, t, adjacent(s, t)));
            }
        }
        pairs.sort_by_key(|&(deg, s, t, adj)| (adj, deg, s, t));
        for &(_, s, t, _) in &pairs {
            let from = self.logical.map_node(s);
            let to = self.logical.map_node(t);
            let Ok(route) = dijkstra_path(self.phys, &penalized, from, to) else {
                continue;
            };
            if route
                .iter()
                .any(|e| scenario.edges().binary_search(e).is_ok())
            {
                continue;
            }
            let (grown, id) = self
                .logical
                .with_augmented_edge(s, t)
                .expect("augmentation endpoints are valid");
            self.logical = grown;
            self.committed.push(Some(route));
            self.candidates.push(None);
            self.c_u.push(1.0);
            self.augmented.push(id);
            return Some(id);
        }
        None
    }

    /// Route any logical edge that never joined a tree with a min-hop path
    /// so the final mapping is complete, then assemble the plan.
    fn finish(mut self, protected: Vec<Option<usize>>) -> Result<ProtectionPlan, HeuristicError> {
        let unit = vec![1.0; self.phys.edge_count()];
        let mut completion = Vec::new();
        for u in 0..self.logical.edge_count() {
            if self.committed[u].is_none() {
                let (from, to) = self.logical.mapped_endpoints(LogEdgeId(u as u32))?;
                let route = dijkstra_path(self.phys, &unit, from, to)?;
                self.committed[u] = Some(route);
                completion.push(LogEdgeId(u as u32));
            }
        }
        let mapping = Mapping::new(self.phys, &self.logical, self.committed)?;
        Ok(ProtectionPlan {
            logical: self.logical,
            trees: self.trees,
            protected,
            mapping,
            augmented_edges: self.augmented,
            candidate_routes: self.candidates,
            completion_edges: completion,
            warnings: self.warnings,
        })
    }
}
