//! Solution-side operations: parse solver output, reconstruct mappings from
//! route variables, evaluate constraints at an assignment, and derive the
//! canonical feasible assignment from a survivable mapping.

use std::collections::HashMap;

use super::{MilpError, MilpModel, Relation, VarTag};
use crate::net::{
    residual_logical, LogEdgeId, LogNodeId, LogicalNetwork, Mapping, PhysEdgeId, PhysNodeId,
    PhysicalNetwork,
};

/// Absolute tolerance when evaluating constraints.
pub const CONSTRAINT_TOL: f64 = 1.0e-6;
/// How far a binary variable's value may sit from an integer.
pub const INTEGRALITY_TOL: f64 = 1.0e-6;

/// Parse a whitespace-separated `name value` solution file. `#` starts a
/// comment; blank lines are skipped. Later lines win on duplicate names.
pub fn parse_solution(text: &str) -> Result<HashMap<String, f64>, MilpError> {
    let mut values = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let mut parts = line.split_whitespace();
        let Some(name) = parts.next() else { continue };
        let value = parts
            .next()
            .ok_or_else(|| MilpError::SolutionParse(lineno + 1, "missing value".into()))?;
        if let Some(extra) = parts.next() {
            return Err(MilpError::SolutionParse(
                lineno + 1,
                format!("unexpected trailing token '{extra}'"),
            ));
        }
        let value: f64 = value.parse().map_err(|_| {
            MilpError::SolutionParse(lineno + 1, format!("'{value}' is not a number"))
        })?;
        values.insert(name.to_string(), value);
    }
    Ok(values)
}

/// Violations found when evaluating a model at an assignment.
#[derive(Debug, Clone)]
pub struct ViolationReport {
    pub violations: Vec<Violation>,
    pub checked: usize,
}

#[derive(Debug, Clone)]
pub struct Violation {
    pub label: String,
    /// How far past the relation the row lands.
    pub amount: f64,
}

impl ViolationReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

impl std::fmt::Display for ViolationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.violations.is_empty() {
            writeln!(f, "all {} constraints satisfied", self.checked)
        } else {
            writeln!(
                f,
                "{} of {} constraints violated:",
                self.violations.len(),
                self.checked
            )?;
            for v in &self.violations {
                writeln!(f, "  {} (by {:.3e})", v.label, v.amount)?;
            }
            Ok(())
        }
    }
}

/// Evaluate every constraint at the assignment with `CONSTRAINT_TOL`.
/// The assignment must cover every declared variable.
pub fn check_solution(
    model: &MilpModel,
    values: &HashMap<String, f64>,
) -> Result<ViolationReport, MilpError> {
    let resolved = resolve(model, values)?;
    let mut violations = Vec::new();
    for c in &model.constraints {
        let lhs: f64 = c
            .terms
            .iter()
            .map(|&(coef, var)| coef * resolved[var])
            .sum();
        let excess = match c.relation {
            Relation::Le => lhs - c.rhs,
            Relation::Ge => c.rhs - lhs,
            Relation::Eq => (lhs - c.rhs).abs(),
        };
        if excess > CONSTRAINT_TOL {
            violations.push(Violation {
                label: c.label.clone(),
                amount: excess,
            });
        }
    }
    Ok(ViolationReport {
        violations,
        checked: model.constraints.len(),
    })
}

fn resolve(model: &MilpModel, values: &HashMap<String, f64>) -> Result<Vec<f64>, MilpError> {
    model
        .variables
        .iter()
        .map(|v| {
            values
                .get(&v.name)
                .copied()
                .ok_or_else(|| MilpError::MissingVariable(v.name.clone()))
        })
        .collect()
}

/// Rebuild a `Mapping` from the route variables of a solved model. Binary
/// values are rounded within `INTEGRALITY_TOL`; each logical edge's set
/// of active arcs must form one directed path from its mapped source to its
/// mapped target. Leftover arcs (solver cycle artifacts) are an error unless
/// `prune_cycles` is set. Flow and hit variables are ignored.
pub fn ingest_solution(
    model: &MilpModel,
    phys: &PhysicalNetwork,
    logical: &LogicalNetwork,
    values: &HashMap<String, f64>,
    prune_cycles: bool,
) -> Result<Mapping, MilpError> {
    let mut arcs: Vec<Vec<(PhysNodeId, PhysNodeId, PhysEdgeId)>> =
        vec![Vec::new(); logical.edge_count()];
    for v in &model.variables {
        let VarTag::Route { ledge, arc } = v.tag else {
            continue;
        };
        let value = values
            .get(&v.name)
            .copied()
            .ok_or_else(|| MilpError::MissingVariable(v.name.clone()))?;
        let rounded = value.round();
        if (value - rounded).abs() > INTEGRALITY_TOL {
            return Err(MilpError::NotIntegral {
                name: v.name.clone(),
                value,
                tol: INTEGRALITY_TOL,
            });
        }
        if rounded == 1.0 {
            let (i, j) = arc;
            let pedge =
                find_phys_edge(phys, i, j).ok_or_else(|| MilpError::RouteReconstruction {
                    edge: ledge.0,
                    reason: format!("arc ({i}, {j}) is not a physical edge"),
                })?;
            arcs[ledge.index()].push((i, j, pedge));
        } else if rounded != 0.0 {
            return Err(MilpError::NotIntegral {
                name: v.name.clone(),
                value,
                tol: INTEGRALITY_TOL,
            });
        }
    }
    let mut routes = Vec::with_capacity(logical.edge_count());
    for l in 0..logical.edge_count() {
        let ledge = LogEdgeId(l as u32);
        let (from, to) = logical.mapped_endpoints(ledge)?;
        let route = walk_route(&arcs[l], from, to, prune_cycles).map_err(|reason| {
            MilpError::RouteReconstruction {
                edge: ledge.0,
                reason,
            }
        })?;
        routes.push(Some(route));
    }
    Ok(Mapping::new(phys, logical, routes)?)
}

fn find_phys_edge(phys: &PhysicalNetwork, i: PhysNodeId, j: PhysNodeId) -> Option<PhysEdgeId> {
    phys.neighbors(i)
        .iter()
        .find(|&&(v, _)| v == j)
        .map(|&(_, e)| e)
}

fn walk_route(
    arcs: &[(PhysNodeId, PhysNodeId, PhysEdgeId)],
    from: PhysNodeId,
    to: PhysNodeId,
    prune_cycles: bool,
) -> Result<Vec<PhysEdgeId>, String> {
    if arcs.is_empty() {
        return Err("no active route variables".into());
    }
    let mut out: HashMap<PhysNodeId, Vec<(PhysNodeId, PhysEdgeId)>> = HashMap::new();
    for &(i, j, e) in arcs {
        out.entry(i).or_default().push((j, e));
    }
    let mut path = Vec::new();
    let mut visited = vec![from];
    let mut cur = from;
    while cur != to {
        let nexts = out.get(&cur).map(Vec::as_slice).unwrap_or(&[]);
        match nexts {
            [] => return Err(format!("route dead-ends at node {cur}")),
            [(next, e)] => {
                if visited.contains(next) {
                    return Err(format!("route revisits node {next}"));
                }
                path.push(*e);
                visited.push(*next);
                cur = *next;
            }
            _ => return Err(format!("route branches at node {cur}")),
        }
        if path.len() > arcs.len() {
            return Err("route walk did not terminate".into());
        }
    }
    if path.len() < arcs.len() && !prune_cycles {
        return Err(format!(
            "{} arc(s) remain outside the reconstructed path (rerun with cycle pruning to drop them)",
            arcs.len() - path.len()
        ));
    }
    Ok(path)
}

/// Per-arc flows that push `1/(n-1)` units from every non-root node to the
/// root along an arbitrary spanning tree: each tree edge carries its child
/// subtree's share toward the root. Returns `(child, parent)` arcs with
/// their flow values.
pub fn spanning_tree_flows(
    logical: &LogicalNetwork,
    tree_edges: &[LogEdgeId],
    root: LogNodeId,
) -> Result<Vec<((LogNodeId, LogNodeId), f64)>, MilpError> {
    let n = logical.node_count() as usize;
    if n < 2 {
        return Err(MilpError::TooFewLogicalNodes);
    }
    let mut adj: Vec<Vec<LogNodeId>> = vec![Vec::new(); n];
    for &e in tree_edges {
        let (s, t) = logical.endpoints(e)?;
        adj[s as usize].push(t);
        adj[t as usize].push(s);
    }
    // BFS orientation toward the root, then subtree sizes bottom-up.
    let mut parent: Vec<Option<LogNodeId>> = vec![None; n];
    let mut order = vec![root];
    let mut seen = vec![false; n];
    seen[root as usize] = true;
    let mut qi = 0;
    while qi < order.len() {
        let u = order[qi];
        qi += 1;
        for &v in &adj[u as usize] {
            if !seen[v as usize] {
                seen[v as usize] = true;
                parent[v as usize] = Some(u);
                order.push(v);
            }
        }
    }
    let mut subtree = vec![1u32; n];
    for &u in order.iter().rev() {
        if let Some(p) = parent[u as usize] {
            subtree[p as usize] += subtree[u as usize];
        }
    }
    let share = 1.0 / (n as f64 - 1.0);
    let flows = order
        .iter()
        .filter_map(|&u| parent[u as usize].map(|p| ((u, p), subtree[u as usize] as f64 * share)))
        .collect();
    Ok(flows)
}

/// The canonical feasible assignment a survivable mapping induces: route
/// variables from the routes, and for the tree family one unit of survival
/// flow per scenario routed along the deterministic witness tree (for the
/// cutset family, hit indicators computed from the routes). Fails with the
/// offending scenario when the mapping is not survivable.
pub fn assignment_from_mapping(
    model: &MilpModel,
    phys: &PhysicalNetwork,
    logical: &LogicalNetwork,
    mapping: &Mapping,
) -> Result<HashMap<String, f64>, MilpError> {
    if !mapping.is_complete() {
        return Err(MilpError::IncompleteMapping);
    }
    let mut values: HashMap<String, f64> = model
        .variables
        .iter()
        .map(|v| (v.name.clone(), 0.0))
        .collect();
    // Route variables: walk each route from the mapped source.
    for l in 0..logical.edge_count() {
        let ledge = LogEdgeId(l as u32);
        let (s, t) = logical.endpoints(ledge)?;
        let (from, _) = logical.mapped_endpoints(ledge)?;
        let route = mapping.route(ledge)?.expect("mapping is complete");
        let mut cur = from;
        for &pe in route {
            let (a, b) = phys.endpoints(pe)?;
            let next = if a == cur { b } else { a };
            values.insert(format!("y_{s}_{t}_{cur}_{next}"), 1.0);
            cur = next;
        }
    }
    for (sidx, (name, edges)) in model.scenarios.iter().enumerate() {
        if model.family.is_tree() {
            let root = model.root.unwrap_or(0);
            let residual = residual_logical(logical, mapping, edges)?;
            let tree = residual
                .bfs_spanning_tree(root)
                .ok_or_else(|| MilpError::NotSurvivable(name.clone()))?;
            for ((u, v), flow) in spanning_tree_flows(logical, &tree, root)? {
                values.insert(format!("m_{name}_{u}_{v}"), flow);
            }
        } else {
            for l in 0..logical.edge_count() {
                let ledge = LogEdgeId(l as u32);
                let (s, t) = logical.endpoints(ledge)?;
                let route = mapping.route(ledge)?.expect("mapping is complete");
                let hit = route.iter().any(|e| edges.binary_search(e).is_ok());
                values.insert(format!("h_{name}_{s}_{t}"), if hit { 1.0 } else { 0.0 });
            }
            let _ = sidx;
        }
    }
    Ok(values)
}
