//! Plain-text instance and plan files.
//!
//! One record per line, `#` starts a comment:
//!
//! ```text
//! pnode <id>                      physical node (ids dense from 0)
//! pedge <edge_id> <u> <v>         physical link
//! lnode <id> maps <pid>           logical node and its physical placement
//! ledge <edge_id> <s> <t> [augmented]   logical link
//! srlg <name> <edge_id>...        failure group of physical links
//! route <ledge_id> <pedge_id>...  physical path of a logical link
//! tree <idx> <ledge_id>...        protecting spanning tree (plan files)
//! protects <srlg_name> <tree_idx> which tree protects a group (plan files)
//! ```
//!
//! The parser rejects every structural violation with the offending line
//! number: self-loops, duplicate or non-dense ids, non-injective node maps,
//! disconnected layers, non-simple routes, and dangling references.

use std::collections::BTreeMap;
use std::fmt;

use crate::failure::{FailureScenario, SrlgSet};
use crate::heuristic::ProtectionPlan;
use crate::net::{
    validate_route, LogEdgeId, LogicalNetwork, Mapping, PhysEdgeId, PhysicalNetwork, SpanningTree,
};

#[derive(Debug)]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "line {}: {}", self.line, self.msg)
        } else {
            write!(f, "{}", self.msg)
        }
    }
}

impl std::error::Error for ParseError {}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        msg: msg.into(),
    })
}

/// A parsed instance: both layers, any routes (`mapping` may be partial or
/// empty), any SRLG groups, and any plan records.
#[derive(Debug, Clone)]
pub struct Instance {
    pub phys: PhysicalNetwork,
    pub logical: LogicalNetwork,
    pub mapping: Mapping,
    pub srlgs: SrlgSet,
    pub plan: Option<PlanRecords>,
}

/// Protecting-tree records carried by plan files.
#[derive(Debug, Clone)]
pub struct PlanRecords {
    pub trees: Vec<SpanningTree>,
    /// `(srlg name, tree index)` pairs; unprotected groups have no record.
    pub protects: Vec<(String, usize)>,
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut pnodes: Vec<(usize, u32)> = Vec::new();
    let mut pedges: Vec<(usize, u32, u32, u32)> = Vec::new();
    let mut lnodes: Vec<(usize, u32, u32)> = Vec::new();
    let mut ledges: Vec<(usize, u32, u32, u32, bool)> = Vec::new();
    let mut srlgs: Vec<(usize, String, Vec<u32>)> = Vec::new();
    let mut routes: Vec<(usize, u32, Vec<u32>)> = Vec::new();
    let mut trees: Vec<(usize, u32, Vec<u32>)> = Vec::new();
    let mut protects: Vec<(usize, String, u32)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        match tokens[0] {
            "pnode" => {
                let [id] = fixed::<1>(lineno, &tokens[1..], "pnode <id>")?;
                pnodes.push((lineno, parse_u32(lineno, id)?));
            }
            "pedge" => {
                let [id, u, v] = fixed::<3>(lineno, &tokens[1..], "pedge <id> <u> <v>")?;
                pedges.push((
                    lineno,
                    parse_u32(lineno, id)?,
                    parse_u32(lineno, u)?,
                    parse_u32(lineno, v)?,
                ));
            }
            "lnode" => {
                let [id, kw, pid] = fixed::<3>(lineno, &tokens[1..], "lnode <id> maps <pid>")?;
                if kw != "maps" {
                    return err(lineno, format!("expected 'maps', got '{kw}'"));
                }
                lnodes.push((lineno, parse_u32(lineno, id)?, parse_u32(lineno, pid)?));
            }
            "ledge" => {
                let rest = &tokens[1..];
                let (core, augmented) = match rest {
                    [a, b, c] => (&[*a, *b, *c][..], false),
                    [a, b, c, flag] if *flag == "augmented" => (&[*a, *b, *c][..], true),
                    _ => return err(lineno, "expected: ledge <id> <s> <t> [augmented]"),
                };
                ledges.push((
                    lineno,
                    parse_u32(lineno, core[0])?,
                    parse_u32(lineno, core[1])?,
                    parse_u32(lineno, core[2])?,
                    augmented,
                ));
            }
            "srlg" => {
                if tokens.len() < 3 {
                    return err(lineno, "expected: srlg <name> <edge_id>...");
                }
                let ids = tokens[2..]
                    .iter()
                    .map(|t| parse_u32(lineno, t))
                    .collect::<Result<Vec<_>, _>>()?;
                srlgs.push((lineno, tokens[1].to_string(), ids));
            }
            "route" => {
                if tokens.len() < 3 {
                    return err(lineno, "expected: route <ledge_id> <pedge_id>...");
                }
                let lid = parse_u32(lineno, tokens[1])?;
                let ids = tokens[2..]
                    .iter()
                    .map(|t| parse_u32(lineno, t))
                    .collect::<Result<Vec<_>, _>>()?;
                routes.push((lineno, lid, ids));
            }
            "tree" => {
                if tokens.len() < 3 {
                    return err(lineno, "expected: tree <idx> <ledge_id>...");
                }
                let idx = parse_u32(lineno, tokens[1])?;
                let ids = tokens[2..]
                    .iter()
                    .map(|t| parse_u32(lineno, t))
                    .collect::<Result<Vec<_>, _>>()?;
                trees.push((lineno, idx, ids));
            }
            "protects" => {
                let [name, tidx] =
                    fixed::<2>(lineno, &tokens[1..], "protects <srlg_name> <tree_idx>")?;
                protects.push((lineno, name.to_string(), parse_u32(lineno, tidx)?));
            }
            other => return err(lineno, format!("unknown record '{other}'")),
        }
    }

    let phys_count = dense_ids(
        &pnodes.iter().map(|&(l, id)| (l, id)).collect::<Vec<_>>(),
        "pnode",
    )?;
    let phys_edge_list = dense_edges(&pedges, "pedge")?;
    let phys = PhysicalNetwork::new(phys_count, phys_edge_list).map_err(|e| ParseError {
        line: pedges.first().map(|p| p.0).unwrap_or(0),
        msg: e.to_string(),
    })?;

    let log_count = dense_ids(
        &lnodes.iter().map(|&(l, id, _)| (l, id)).collect::<Vec<_>>(),
        "lnode",
    )?;
    let mut node_map = vec![0u32; log_count as usize];
    for &(line, id, pid) in &lnodes {
        if pid >= phys_count {
            return err(
                line,
                format!("lnode {id} maps to unknown physical node {pid}"),
            );
        }
        node_map[id as usize] = pid;
    }

    // Augmented logical edges must occupy the trailing ids.
    let mut sorted_ledges = ledges.clone();
    sorted_ledges.sort_by_key(|&(_, id, ..)| id);
    let first_aug = sorted_ledges.iter().position(|&(.., aug)| aug);
    if let Some(pos) = first_aug {
        if let Some(&(line, id, ..)) = sorted_ledges[pos..].iter().find(|&&(.., aug)| !aug) {
            return err(
                line,
                format!("base ledge {id} appears after an augmented edge id"),
            );
        }
    }
    let base: Vec<(u32, u32)> = sorted_ledges
        .iter()
        .filter(|&&(.., aug)| !aug)
        .map(|&(_, _, s, t, _)| (s, t))
        .collect();
    let augmented: Vec<(u32, u32)> = sorted_ledges
        .iter()
        .filter(|&&(.., aug)| aug)
        .map(|&(_, _, s, t, _)| (s, t))
        .collect();
    dense_edges(
        &sorted_ledges
            .iter()
            .map(|&(l, id, s, t, _)| (l, id, s, t))
            .collect::<Vec<_>>(),
        "ledge",
    )?;
    let logical = LogicalNetwork::with_augmented(log_count, base, augmented, node_map, &phys)
        .map_err(|e| ParseError {
            line: ledges.first().map(|p| p.0).unwrap_or(0),
            msg: e.to_string(),
        })?;

    let mut scenario_list = Vec::new();
    for (line, name, ids) in srlgs {
        let edges: Vec<PhysEdgeId> = ids.into_iter().map(PhysEdgeId).collect();
        let scenario = FailureScenario::new(name, edges, &phys).map_err(|e| ParseError {
            line,
            msg: e.to_string(),
        })?;
        scenario_list.push(scenario);
    }
    let srlgs = SrlgSet::new(scenario_list).map_err(|e| ParseError {
        line: 0,
        msg: e.to_string(),
    })?;

    let mut route_table: Vec<Option<Vec<PhysEdgeId>>> = vec![None; logical.edge_count()];
    for (line, lid, ids) in routes {
        if lid as usize >= logical.edge_count() {
            return err(line, format!("route references unknown ledge {lid}"));
        }
        if route_table[lid as usize].is_some() {
            return err(line, format!("duplicate route for ledge {lid}"));
        }
        let path: Vec<PhysEdgeId> = ids.into_iter().map(PhysEdgeId).collect();
        let (from, to) = logical
            .mapped_endpoints(LogEdgeId(lid))
            .map_err(|e| ParseError {
                line,
                msg: e.to_string(),
            })?;
        validate_route(&phys, from, to, &path).map_err(|msg| ParseError { line, msg })?;
        route_table[lid as usize] = Some(path);
    }
    let mapping = Mapping::new(&phys, &logical, route_table).map_err(|e| ParseError {
        line: 0,
        msg: e.to_string(),
    })?;

    let plan = if trees.is_empty() && protects.is_empty() {
        None
    } else {
        let mut by_idx = BTreeMap::new();
        for (line, idx, ids) in &trees {
            if by_idx.insert(*idx, (*line, ids.clone())).is_some() {
                return err(*line, format!("duplicate tree index {idx}"));
            }
        }
        let mut tree_list = Vec::new();
        for (want, (idx, (line, ids))) in by_idx.iter().enumerate() {
            if *idx as usize != want {
                return err(
                    *line,
                    format!("tree indices must be dense from 0 (found {idx})"),
                );
            }
            let edges: Vec<LogEdgeId> = ids.iter().map(|&i| LogEdgeId(i)).collect();
            let tree = SpanningTree::new(&logical, edges).map_err(|e| ParseError {
                line: *line,
                msg: e.to_string(),
            })?;
            tree_list.push(tree);
        }
        let mut protect_list = Vec::new();
        for (line, name, tidx) in protects {
            if !srlgs.iter().any(|s| s.name() == name) {
                return err(line, format!("protects references unknown srlg '{name}'"));
            }
            if tidx as usize >= tree_list.len() {
                return err(line, format!("protects references unknown tree {tidx}"));
            }
            protect_list.push((name, tidx as usize));
        }
        Some(PlanRecords {
            trees: tree_list,
            protects: protect_list,
        })
    };

    Ok(Instance {
        phys,
        logical,
        mapping,
        srlgs,
        plan,
    })
}

fn fixed<'a, const N: usize>(
    line: usize,
    tokens: &[&'a str],
    usage: &str,
) -> Result<[&'a str; N], ParseError> {
    if tokens.len() != N {
        return err(line, format!("expected: {usage}"));
    }
    let mut out = [""; N];
    out.copy_from_slice(tokens);
    Ok(out)
}

fn parse_u32(line: usize, token: &str) -> Result<u32, ParseError> {
    token.parse().map_err(|_| ParseError {
        line,
        msg: format!("'{token}' is not a non-negative integer"),
    })
}

/// Ids must be exactly 0..n-1, in any order, no repeats.
fn dense_ids(entries: &[(usize, u32)], what: &str) -> Result<u32, ParseError> {
    let n = entries.len() as u32;
    let mut seen = vec![false; entries.len()];
    for &(line, id) in entries {
        if id >= n {
            return err(
                line,
                format!(
                    "{what} id {id} is not dense (expected 0..{})",
                    n.saturating_sub(1)
                ),
            );
        }
        if seen[id as usize] {
            return err(line, format!("duplicate {what} id {id}"));
        }
        seen[id as usize] = true;
    }
    Ok(n)
}

fn dense_edges(
    entries: &[(usize, u32, u32, u32)],
    what: &str,
) -> Result<Vec<(u32, u32)>, ParseError> {
    let n = entries.len() as u32;
    let mut out = vec![None; entries.len()];
    for &(line, id, u, v) in entries {
        if id >= n {
            return err(
                line,
                format!(
                    "{what} id {id} is not dense (expected 0..{})",
                    n.saturating_sub(1)
                ),
            );
        }
        if out[id as usize].is_some() {
            return err(line, format!("duplicate {what} id {id}"));
        }
        out[id as usize] = Some((u, v));
    }
    Ok(out.into_iter().map(|e| e.expect("dense")).collect())
}

/// Render the instance records; routes and SRLGs are optional so the same
/// writer serves bare topologies, generated failure sets, and full mappings.
pub fn render_instance(
    phys: &PhysicalNetwork,
    logical: &LogicalNetwork,
    mapping: Option<&Mapping>,
    srlgs: Option<&SrlgSet>,
) -> String {
    let mut out = String::new();
    for id in 0..phys.node_count() {
        out.push_str(&format!("pnode {id}\n"));
    }
    for (id, &(u, v)) in phys.edges().iter().enumerate() {
        out.push_str(&format!("pedge {id} {u} {v}\n"));
    }
    for (id, &pid) in logical.node_map().iter().enumerate() {
        out.push_str(&format!("lnode {id} maps {pid}\n"));
    }
    for (id, &(s, t)) in logical.edges().iter().enumerate() {
        if logical.is_augmented(LogEdgeId(id as u32)) {
            out.push_str(&format!("ledge {id} {s} {t} augmented\n"));
        } else {
            out.push_str(&format!("ledge {id} {s} {t}\n"));
        }
    }
    if let Some(srlgs) = srlgs {
        for s in srlgs.iter() {
            out.push_str(&format!("srlg {}", s.name()));
            for e in s.edges() {
                out.push_str(&format!(" {e}"));
            }
            out.push('\n');
        }
    }
    if let Some(mapping) = mapping {
        for (id, route) in mapping.routes().iter().enumerate() {
            if let Some(path) = route {
                out.push_str(&format!("route {id}"));
                for e in path {
                    out.push_str(&format!(" {e}"));
                }
                out.push('\n');
            }
        }
    }
    out
}

/// Render a heuristic plan: the full instance plus `tree` and `protects`
/// records.
pub fn render_plan(phys: &PhysicalNetwork, plan: &ProtectionPlan, srlgs: &SrlgSet) -> String {
    let mut out = render_instance(phys, &plan.logical, Some(&plan.mapping), Some(srlgs));
    for (idx, tree) in plan.trees.iter().enumerate() {
        out.push_str(&format!("tree {idx}"));
        for e in tree.edge_ids() {
            out.push_str(&format!(" {e}"));
        }
        out.push('\n');
    }
    for (sidx, protected_by) in plan.protected.iter().enumerate() {
        if let Some(tidx) = protected_by {
            out.push_str(&format!(
                "protects {} {tidx}\n",
                srlgs.scenarios()[sidx].name()
            ));
        }
    }
    out
}
