//! Ground-truth survivability oracle.
//!
//! A mapping survives a failure scenario exactly when the logical network
//! minus the hit links is still connected, equivalently when some logical
//! spanning tree avoids every hit link. This module decides that by direct
//! residual connectivity, extracts tree witnesses, and aggregates the
//! reported metrics (Surv, MaxS, SIdx, PhyS).

use std::fmt;

use thiserror::Error;

use crate::failure::{count_k_failures, gen_k_failures, FailureError, FailureScenario, SrlgSet};
use crate::net::{
    residual_logical, LogicalNetwork, Mapping, NetError, PhysicalNetwork, SpanningTree,
};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Failure(#[from] FailureError),
    #[error("enumeration budget exceeded: C({edges}, {k}) = {count} scenarios, budget {budget}")]
    BudgetExceeded {
        edges: usize,
        k: usize,
        count: u128,
        budget: u64,
    },
}

/// Default cap on the number of scenarios `verify_k` will walk through.
pub const DEFAULT_ENUM_BUDGET: u64 = 10_000_000;

/// Outcome of checking a mapping against a whole scenario collection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurvivabilityReport {
    /// True when every scenario leaves the logical network connected.
    pub survivable: bool,
    /// Scenarios survived (MaxS in SRLG mode, SIdx in k mode).
    pub protected_count: u64,
    pub total_count: u64,
    /// Names of the scenarios that disconnect the logical network.
    pub failed_scenarios: Vec<String>,
    /// Total physical hops used by the mapping (PhyS).
    pub phys_utilization: u64,
}

impl SurvivabilityReport {
    /// Render with the survived-count column named per failure mode
    /// (`MaxS` for SRLG sets, `SIdx` for k-failure enumeration).
    pub fn to_table(&self, count_label: &str) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<6} {:>12} {:>8}\n",
            "Surv", count_label, "PhyS"
        ));
        out.push_str(&format!(
            "{:<6} {:>12} {:>8}\n",
            if self.survivable { "Yes" } else { "No" },
            format!("{}/{}", self.protected_count, self.total_count),
            self.phys_utilization
        ));
        out
    }
}

impl fmt::Display for SurvivabilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_table("Protected"))
    }
}

/// Does the logical network stay connected when `scenario` fails?
pub fn verify_scenario(
    logical: &LogicalNetwork,
    mapping: &Mapping,
    scenario: &FailureScenario,
) -> Result<bool, VerifyError> {
    let residual = residual_logical(logical, mapping, scenario.edges())?;
    Ok(residual.is_connected())
}

/// A spanning tree untouched by the scenario, when one exists. The witness
/// is the BFS tree of the residual graph rooted at the lowest logical node,
/// so it is deterministic and by construction avoids every hit link.
pub fn witness_tree(
    logical: &LogicalNetwork,
    mapping: &Mapping,
    scenario: &FailureScenario,
) -> Result<Option<SpanningTree>, VerifyError> {
    let residual = residual_logical(logical, mapping, scenario.edges())?;
    match residual.bfs_spanning_tree(0) {
        Some(edges) => Ok(Some(SpanningTree::new(logical, edges)?)),
        None => Ok(None),
    }
}

/// Check every scenario of an SRLG set. `protected_count` carries the MaxS
/// semantics: the number of groups whose failure the mapping survives.
pub fn verify_srlg(
    logical: &LogicalNetwork,
    mapping: &Mapping,
    srlgs: &SrlgSet,
) -> Result<SurvivabilityReport, VerifyError> {
    let mut failed = Vec::new();
    for scenario in srlgs.iter() {
        if !verify_scenario(logical, mapping, scenario)? {
            failed.push(scenario.name().to_string());
        }
    }
    Ok(report_from(srlgs.len() as u64, failed, mapping))
}

/// Check all `C(|E_P|, k)` failure combinations, streamed. The protected
/// count is the survivability index SIdx.
pub fn verify_k(
    phys: &PhysicalNetwork,
    logical: &LogicalNetwork,
    mapping: &Mapping,
    k: usize,
) -> Result<SurvivabilityReport, VerifyError> {
    verify_k_with_budget(phys, logical, mapping, k, DEFAULT_ENUM_BUDGET)
}

pub fn verify_k_with_budget(
    phys: &PhysicalNetwork,
    logical: &LogicalNetwork,
    mapping: &Mapping,
    k: usize,
    budget: u64,
) -> Result<SurvivabilityReport, VerifyError> {
    let count = count_k_failures(phys.edge_count(), k);
    if count > budget as u128 {
        return Err(VerifyError::BudgetExceeded {
            edges: phys.edge_count(),
            k,
            count,
            budget,
        });
    }
    let mut failed = Vec::new();
    let mut total = 0u64;
    for scenario in gen_k_failures(phys, k)? {
        total += 1;
        if !verify_scenario(logical, mapping, &scenario)? {
            failed.push(scenario.name().to_string());
        }
    }
    Ok(report_from(total, failed, mapping))
}

/// Total physical hops over all routes, with multiplicity — the PhyS metric.
pub fn phys_utilization(mapping: &Mapping) -> Result<u64, VerifyError> {
    if let Some(missing) = mapping.first_missing() {
        return Err(NetError::IncompleteMapping(missing.0).into());
    }
    Ok(mapping.total_route_hops())
}

fn report_from(total: u64, failed: Vec<String>, mapping: &Mapping) -> SurvivabilityReport {
    let protected = total - failed.len() as u64;
    SurvivabilityReport {
        survivable: failed.is_empty(),
        protected_count: protected,
        total_count: total,
        failed_scenarios: failed,
        phys_utilization: mapping.total_route_hops(),
    }
}
