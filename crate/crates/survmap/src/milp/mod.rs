//! Solver-agnostic MILP/ILP model generation.
//!
//! Two formulation families decide survivable-mapping existence. Both share
//! directed binary route variables `y_s_t_i_j` (one per logical edge and
//! physical arc) tied together by per-node flow balance, and both minimize
//! total physical hops. The tree family adds, per failure scenario, a
//! continuous flow `m_<scen>_u_v` on logical arcs that must support one unit
//! of supply into a root node while being capped to zero on every logical
//! edge the scenario hits — feasible exactly when a protecting spanning tree
//! exists. The cutset family instead adds binary hit indicators
//! `h_<scen>_s_t` linked to the route variables and requires every logical
//! cutset to keep at least one unhit edge.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::failure::{count_k_failures, gen_k_failures, FailureError, SrlgSet};
use crate::net::{
    enumerate_cutsets, Cutset, LogEdgeId, LogNodeId, LogicalNetwork, NetError, PhysEdgeId,
    PhysNodeId, PhysicalNetwork,
};

mod lp;
mod size;
mod solution;

pub use lp::emit_lp;
pub use size::{model_size_report, SizeReport};
pub use solution::{
    assignment_from_mapping, check_solution, ingest_solution, parse_solution, spanning_tree_flows,
    Violation, ViolationReport, CONSTRAINT_TOL, INTEGRALITY_TOL,
};

#[derive(Debug, Error)]
pub enum MilpError {
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Failure(#[from] FailureError),
    #[error("model generation needs at least 2 logical nodes")]
    TooFewLogicalNodes,
    #[error("logical networks with parallel edges are not supported by the model generator")]
    ParallelEdges,
    #[error("root node {0} is not a logical node")]
    BadRoot(LogNodeId),
    #[error(
        "projected model too large: {vars} variables and {constraints} constraints exceed budget {budget}"
    )]
    ModelBudget {
        vars: u128,
        constraints: u128,
        budget: u64,
    },
    #[error("variable name '{0}' exceeds 255 characters")]
    NameTooLong(String),
    #[error("internal error: duplicate variable name '{0}'")]
    DuplicateVariable(String),
    #[error("solution line {0}: {1}")]
    SolutionParse(usize, String),
    #[error("variable '{0}' missing from solution")]
    MissingVariable(String),
    #[error("variable '{name}' = {value} is not within {tol} of an integer")]
    NotIntegral { name: String, value: f64, tol: f64 },
    #[error("route reconstruction failed for logical edge {edge}: {reason}")]
    RouteReconstruction { edge: u32, reason: String },
    #[error("scenario '{0}' disconnects the mapped logical network; no survival flow exists")]
    NotSurvivable(String),
    #[error("mapping is incomplete; cannot derive an assignment")]
    IncompleteMapping,
}

/// Upper bound on projected variables + constraints a builder will accept.
pub const MODEL_SIZE_BUDGET: u64 = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Binary,
    Continuous,
}

/// What a variable encodes, for reconstruction and reporting.
#[derive(Debug, Clone, PartialEq)]
pub enum VarTag {
    /// Directed use of a physical edge by a logical edge's route.
    Route {
        ledge: LogEdgeId,
        arc: (PhysNodeId, PhysNodeId),
    },
    /// Scenario hit indicator for a logical edge (cutset family).
    Hit { scenario: usize, ledge: LogEdgeId },
    /// Survival flow on a directed logical arc under a scenario (tree family).
    SurviveFlow {
        scenario: usize,
        arc: (LogNodeId, LogNodeId),
    },
}

#[derive(Debug, Clone)]
pub struct VariableRef {
    pub name: String,
    pub kind: VarKind,
    pub bounds: (f64, f64),
    pub tag: VarTag,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        })
    }
}

/// One linear row: terms over variable indices, a relation, and a RHS.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub label: String,
    pub terms: Vec<(f64, usize)>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    TreeSrlg,
    TreeK,
    CutSrlg,
    CutK,
}

impl Family {
    pub fn is_tree(self) -> bool {
        matches!(self, Family::TreeSrlg | Family::TreeK)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::TreeSrlg => "tree-srlg",
            Family::TreeK => "tree-k",
            Family::CutSrlg => "cut-srlg",
            Family::CutK => "cut-k",
        })
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tree-srlg" => Ok(Family::TreeSrlg),
            "tree-k" => Ok(Family::TreeK),
            "cut-srlg" => Ok(Family::CutSrlg),
            "cut-k" => Ok(Family::CutK),
            other => Err(format!(
                "unknown family '{other}' (expected tree-srlg, tree-k, cut-srlg or cut-k)"
            )),
        }
    }
}

/// Instance dimensions snapshotted into the model for size accounting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelDims {
    pub phys_nodes: usize,
    pub phys_edges: usize,
    pub log_nodes: usize,
    pub log_edges: usize,
    pub scenario_count: usize,
    pub sum_scenario_sizes: usize,
    pub max_scenario_size: usize,
    /// Number of enumerated cutsets (zero for the tree family).
    pub cutset_count: usize,
}

#[derive(Debug, Clone)]
pub struct MilpModel {
    pub family: Family,
    /// Root of the survival flows; `None` for the cutset family.
    pub root: Option<LogNodeId>,
    pub dims: ModelDims,
    /// Scenario names and edge sets, in model order.
    pub scenarios: Vec<(String, Vec<PhysEdgeId>)>,
    pub variables: Vec<VariableRef>,
    pub constraints: Vec<Constraint>,
    /// Minimized linear objective: the sum of all directed route variables.
    pub objective: Vec<(f64, usize)>,
    name_index: HashMap<String, usize>,
}

impl MilpModel {
    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.name_index.get(name).copied()
    }

    pub fn variable_count(&self) -> usize {
        self.variables.len()
    }

    pub fn constraint_count(&self) -> usize {
        self.constraints.len()
    }
}

struct Builder {
    variables: Vec<VariableRef>,
    constraints: Vec<Constraint>,
    objective: Vec<(f64, usize)>,
    name_index: HashMap<String, usize>,
}

impl Builder {
    fn new() -> Self {
        Self {
            variables: Vec::new(),
            constraints: Vec::new(),
            objective: Vec::new(),
            name_index: HashMap::new(),
        }
    }

    fn var(
        &mut self,
        name: String,
        kind: VarKind,
        bounds: (f64, f64),
        tag: VarTag,
    ) -> Result<usize, MilpError> {
        if name.len() > 255 {
            return Err(MilpError::NameTooLong(name));
        }
        let idx = self.variables.len();
        if self.name_index.insert(name.clone(), idx).is_some() {
            return Err(MilpError::DuplicateVariable(name));
        }
        self.variables.push(VariableRef {
            name,
            kind,
            bounds,
            tag,
        });
        Ok(idx)
    }

    fn row(&mut self, label: String, terms: Vec<(f64, usize)>, relation: Relation, rhs: f64) {
        debug_assert!(!terms.is_empty(), "constraint {label} has no terms");
        self.constraints.push(Constraint {
            label,
            terms,
            relation,
            rhs,
        });
    }
}

/// Index scheme for the route-variable block: for logical edge `l` and
/// physical edge `p`, direction 0 runs along the canonical orientation of
/// `p` and direction 1 against it.
#[derive(Debug, Clone, Copy)]
struct RouteVars {
    phys_edges: usize,
}

impl RouteVars {
    fn idx(self, ledge: usize, pedge: usize, dir: usize) -> usize {
        (ledge * self.phys_edges + pedge) * 2 + dir
    }
}

fn check_simple_logical(logical: &LogicalNetwork) -> Result<(), MilpError> {
    let mut pairs: Vec<(u32, u32)> = logical.edges().to_vec();
    pairs.sort_unstable();
    if pairs.windows(2).any(|w| w[0] == w[1]) {
        return Err(MilpError::ParallelEdges);
    }
    Ok(())
}

fn resolve_root(logical: &LogicalNetwork, root: Option<LogNodeId>) -> Result<LogNodeId, MilpError> {
    let root = root.unwrap_or(0);
    if root >= logical.node_count() {
        return Err(MilpError::BadRoot(root));
    }
    Ok(root)
}

/// Shared routing block: directed binary route variables plus per-node flow
/// balance pinning each logical edge to a path between its mapped endpoints.
fn add_routing_block(
    b: &mut Builder,
    phys: &PhysicalNetwork,
    logical: &LogicalNetwork,
) -> Result<RouteVars, MilpError> {
    let rv = RouteVars {
        phys_edges: phys.edge_count(),
    };
    for l in 0..logical.edge_count() {
        let (s, t) = logical.endpoints(LogEdgeId(l as u32))?;
        for (p, &(i, j)) in phys.edges().iter().enumerate() {
            for (dir, (a, c)) in [(0usize, (i, j)), (1, (j, i))] {
                let idx = b.var(
                    format!("y_{s}_{t}_{a}_{c}"),
                    VarKind::Binary,
                    (0.0, 1.0),
                    VarTag::Route {
                        ledge: LogEdgeId(l as u32),
                        arc: (a, c),
                    },
                )?;
                debug_assert_eq!(idx, rv.idx(l, p, dir));
                b.objective.push((1.0, idx));
            }
        }
    }
    for l in 0..logical.edge_count() {
        let (s, t) = logical.endpoints(LogEdgeId(l as u32))?;
        let (from, to) = logical.mapped_endpoints(LogEdgeId(l as u32))?;
        for node in 0..phys.node_count() {
            let mut terms = Vec::new();
            for (p, &(i, j)) in phys.edges().iter().enumerate() {
                if i == node {
                    terms.push((1.0, rv.idx(l, p, 0)));
                    terms.push((-1.0, rv.idx(l, p, 1)));
                } else if j == node {
                    terms.push((1.0, rv.idx(l, p, 1)));
                    terms.push((-1.0, rv.idx(l, p, 0)));
                }
            }
            let rhs = if node == from {
                1.0
            } else if node == to {
                -1.0
            } else {
                0.0
            };
            b.row(format!("rb_{s}_{t}_n{node}"), terms, Relation::Eq, rhs);
        }
    }
    Ok(rv)
}

/// Per-scenario tree block: continuous survival flows on logical arcs,
/// capped to zero wherever the scenario hits a route, plus the fractional
/// spanning-tree balance with one unit of supply sunk at the root.
fn add_tree_block(
    b: &mut Builder,
    rv: RouteVars,
    logical: &LogicalNetwork,
    phys: &PhysicalNetwork,
    sidx: usize,
    name: &str,
    edges: &[PhysEdgeId],
    root: LogNodeId,
) -> Result<(), MilpError> {
    let n = logical.node_count();
    let e_s = logical.edge_count();
    let mut flow = vec![[0usize; 2]; e_s];
    for l in 0..e_s {
        let (s, t) = logical.endpoints(LogEdgeId(l as u32))?;
        flow[l][0] = b.var(
            format!("m_{name}_{s}_{t}"),
            VarKind::Continuous,
            (0.0, 1.0),
            VarTag::SurviveFlow {
                scenario: sidx,
                arc: (s, t),
            },
        )?;
        flow[l][1] = b.var(
            format!("m_{name}_{t}_{s}"),
            VarKind::Continuous,
            (0.0, 1.0),
            VarTag::SurviveFlow {
                scenario: sidx,
                arc: (t, s),
            },
        )?;
    }
    for &f in edges {
        let (i, j) = phys.endpoints(f)?;
        for l in 0..e_s {
            let (s, t) = logical.endpoints(LogEdgeId(l as u32))?;
            let y_fwd = rv.idx(l, f.index(), 0);
            let y_bwd = rv.idx(l, f.index(), 1);
            for (dir, (u, v)) in [(0usize, (s, t)), (1, (t, s))] {
                b.row(
                    format!("cap_{name}_{u}_{v}_{i}_{j}"),
                    vec![(1.0, flow[l][dir]), (1.0, y_fwd), (1.0, y_bwd)],
                    Relation::Le,
                    1.0,
                );
            }
        }
    }
    let share = 1.0 / (n as f64 - 1.0);
    for node in 0..n {
        let mut terms = Vec::new();
        for l in 0..e_s {
            let (s, t) = logical.endpoints(LogEdgeId(l as u32))?;
            if s == node {
                terms.push((1.0, flow[l][0]));
                terms.push((-1.0, flow[l][1]));
            } else if t == node {
                terms.push((1.0, flow[l][1]));
                terms.push((-1.0, flow[l][0]));
            }
        }
        let rhs = if node == root { -1.0 } else { share };
        b.row(format!("tb_{name}_n{node}"), terms, Relation::Eq, rhs);
    }
    Ok(())
}

/// Per-scenario cutset block: binary hit indicators linked to the route
/// variables from below and above, plus one `<= |cut|-1` row per cutset.
fn add_cutset_block(
    b: &mut Builder,
    rv: RouteVars,
    logical: &LogicalNetwork,
    phys: &PhysicalNetwork,
    cutsets: &[Cutset],
    sidx: usize,
    name: &str,
    edges: &[PhysEdgeId],
) -> Result<(), MilpError> {
    let e_s = logical.edge_count();
    let mut hit = vec![0usize; e_s];
    for l in 0..e_s {
        let (s, t) = logical.endpoints(LogEdgeId(l as u32))?;
        hit[l] = b.var(
            format!("h_{name}_{s}_{t}"),
            VarKind::Binary,
            (0.0, 1.0),
            VarTag::Hit {
                scenario: sidx,
                ledge: LogEdgeId(l as u32),
            },
        )?;
    }
    for l in 0..e_s {
        let (s, t) = logical.endpoints(LogEdgeId(l as u32))?;
        let mut sum_terms = vec![(1.0, hit[l])];
        for &f in edges {
            let (i, j) = phys.endpoints(f)?;
            let y_fwd = rv.idx(l, f.index(), 0);
            let y_bwd = rv.idx(l, f.index(), 1);
            b.row(
                format!("hlo_{name}_{s}_{t}_{i}_{j}"),
                vec![(1.0, hit[l]), (-1.0, y_fwd), (-1.0, y_bwd)],
                Relation::Ge,
                0.0,
            );
            sum_terms.push((-1.0, y_fwd));
            sum_terms.push((-1.0, y_bwd));
        }
        b.row(format!("hup_{name}_{s}_{t}"), sum_terms, Relation::Le, 0.0);
    }
    for (ci, cut) in cutsets.iter().enumerate() {
        let terms: Vec<(f64, usize)> = cut.edge_ids.iter().map(|e| (1.0, hit[e.index()])).collect();
        b.row(
            format!("cut_{name}_c{ci}"),
            terms,
            Relation::Le,
            cut.edge_ids.len() as f64 - 1.0,
        );
    }
    Ok(())
}

fn scenario_list(srlgs: &SrlgSet) -> Vec<(String, Vec<PhysEdgeId>)> {
    srlgs
        .iter()
        .map(|s| (s.name().to_string(), s.edges().to_vec()))
        .collect()
}

fn k_scenario_list(
    phys: &PhysicalNetwork,
    k: usize,
    projected_vars: u128,
    projected_cons: u128,
) -> Result<Vec<(String, Vec<PhysEdgeId>)>, MilpError> {
    if projected_vars.saturating_add(projected_cons) > MODEL_SIZE_BUDGET as u128 {
        return Err(MilpError::ModelBudget {
            vars: projected_vars,
            constraints: projected_cons,
            budget: MODEL_SIZE_BUDGET,
        });
    }
    Ok(gen_k_failures(phys, k)?
        .map(|s| (s.name().to_string(), s.edges().to_vec()))
        .collect())
}

fn dims_for(
    phys: &PhysicalNetwork,
    logical: &LogicalNetwork,
    scenarios: &[(String, Vec<PhysEdgeId>)],
    cutset_count: usize,
) -> ModelDims {
    ModelDims {
        phys_nodes: phys.node_count() as usize,
        phys_edges: phys.edge_count(),
        log_nodes: logical.node_count() as usize,
        log_edges: logical.edge_count(),
        scenario_count: scenarios.len(),
        sum_scenario_sizes: scenarios.iter().map(|(_, e)| e.len()).sum(),
        max_scenario_size: scenarios.iter().map(|(_, e)| e.len()).max().unwrap_or(0),
        cutset_count,
    }
}

fn build_tree_model(
    phys: &PhysicalNetwork,
    logical: &LogicalNetwork,
    scenarios: Vec<(String, Vec<PhysEdgeId>)>,
    root: Option<LogNodeId>,
    family: Family,
) -> Result<MilpModel, MilpError> {
    if logical.node_count() < 2 {
        return Err(MilpError::TooFewLogicalNodes);
    }
    check_simple_logical(logical)?;
    let root = resolve_root(logical, root)?;
    let mut b = Builder::new();
    let rv = add_routing_block(&mut b, phys, logical)?;
    for (sidx, (name, edges)) in scenarios.iter().enumerate() {
        add_tree_block(&mut b, rv, logical, phys, sidx, name, edges, root)?;
    }
    let dims = dims_for(phys, logical, &scenarios, 0);
    Ok(MilpModel {
        family,
        root: Some(root),
        dims,
        scenarios,
        variables: b.variables,
        constraints: b.constraints,
        objective: b.objective,
        name_index: b.name_index,
    })
}

fn build_cutset_model(
    phys: &PhysicalNetwork,
    logical: &LogicalNetwork,
    scenarios: Vec<(String, Vec<PhysEdgeId>)>,
    family: Family,
) -> Result<MilpModel, MilpError> {
    if logical.node_count() < 2 {
        return Err(MilpError::TooFewLogicalNodes);
    }
    check_simple_logical(logical)?;
    let cutsets = enumerate_cutsets(logical)?;
    let mut b = Builder::new();
    let rv = add_routing_block(&mut b, phys, logical)?;
    for (sidx, (name, edges)) in scenarios.iter().enumerate() {
        add_cutset_block(&mut b, rv, logical, phys, &cutsets, sidx, name, edges)?;
    }
    let dims = dims_for(phys, logical, &scenarios, cutsets.len());
    Ok(MilpModel {
        family,
        root: None,
        dims,
        scenarios,
        variables: b.variables,
        constraints: b.constraints,
        objective: b.objective,
        name_index: b.name_index,
    })
}

/// Tree-family model over an SRLG set. Feasible exactly when a mapping
/// exists that survives every group.
pub fn build_tree_srlg_model(
    phys: &PhysicalNetwork,
    logical: &LogicalNetwork,
    srlgs: &SrlgSet,
    root: Option<LogNodeId>,
) -> Result<MilpModel, MilpError> {
    build_tree_model(phys, logical, scenario_list(srlgs), root, Family::TreeSrlg)
}

/// Tree-family model over every k-combination of physical edges.
pub fn build_tree_k_model(
    phys: &PhysicalNetwork,
    logical: &LogicalNetwork,
    k: usize,
    root: Option<LogNodeId>,
) -> Result<MilpModel, MilpError> {
    let count = count_k_failures(phys.edge_count(), k);
    let e_s = logical.edge_count() as u128;
    let e_p = phys.edge_count() as u128;
    let v_p = phys.node_count() as u128;
    let v_s = logical.node_count() as u128;
    let vars = 2 * e_s * e_p + 2 * e_s * count;
    let cons = e_s * v_p + count * (2 * k as u128 * e_s + v_s);
    let scenarios = k_scenario_list(phys, k, vars, cons)?;
    build_tree_model(phys, logical, scenarios, root, Family::TreeK)
}

/// Cutset-family model over an SRLG set: all binary, one row per
/// (cutset, scenario) pair.
pub fn build_cutset_srlg_model(
    phys: &PhysicalNetwork,
    logical: &LogicalNetwork,
    srlgs: &SrlgSet,
) -> Result<MilpModel, MilpError> {
    build_cutset_model(phys, logical, scenario_list(srlgs), Family::CutSrlg)
}

/// Cutset-family model over every k-combination of physical edges.
pub fn build_cutset_k_model(
    phys: &PhysicalNetwork,
    logical: &LogicalNetwork,
    k: usize,
) -> Result<MilpModel, MilpError> {
    let count = count_k_failures(phys.edge_count(), k);
    let e_s = logical.edge_count() as u128;
    let e_p = phys.edge_count() as u128;
    let v_p = phys.node_count() as u128;
    let v_s = logical.node_count() as u128;
    let cutsets = if logical.node_count() >= 2 {
        (1u128 << (v_s - 1)) - 1
    } else {
        0
    };
    let vars = 2 * e_s * e_p + e_s * count;
    let cons = e_s * v_p + count * ((k as u128 + 1) * e_s + cutsets);
    let scenarios = k_scenario_list(phys, k, vars, cons)?;
    build_cutset_model(phys, logical, scenarios, Family::CutK)
}
