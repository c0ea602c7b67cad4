//! Model-size accounting: exact closed-form counts per family checked
//! against what the builders actually generated, plus the coarse asymptotic
//! formulas the families are expected to respect.

use super::{Family, MilpModel};

/// Exact and asymptotic size accounting for one generated model.
#[derive(Debug, Clone)]
pub struct SizeReport {
    pub family: Family,
    pub actual_vars: usize,
    pub actual_constraints: usize,
    /// Exact closed-form counts implied by the instance dimensions.
    pub expected_vars: usize,
    pub expected_constraints: usize,
    /// Asymptotic formula values (constants dropped, as usually quoted):
    /// vars `|E_S|(R + |E_P|)`; constraints `|E_S||V_P| + R(|E_S| + |V_S|)`
    /// for the tree family, with an extra `2^|V_S|` per scenario for the
    /// cutset family. R is the scenario count.
    pub formula_vars: u128,
    pub formula_constraints: u128,
    /// Multiplier under which `actual <= factor * formula` must hold.
    pub bound_factor: u128,
}

impl SizeReport {
    /// Exact counts match what the builder generated.
    pub fn exact_match(&self) -> bool {
        self.actual_vars == self.expected_vars
            && self.actual_constraints == self.expected_constraints
    }

    /// Generated counts stay within a constant multiple of the formulas.
    pub fn respects_formula_bound(&self) -> bool {
        self.actual_vars as u128 <= self.bound_factor * self.formula_vars.max(1)
            && self.actual_constraints as u128
                <= self.bound_factor * self.formula_constraints.max(1)
    }
}

impl std::fmt::Display for SizeReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "family: {}", self.family)?;
        writeln!(
            f,
            "variables:   actual {:>8}  expected {:>8}  formula {:>10}",
            self.actual_vars, self.expected_vars, self.formula_vars
        )?;
        writeln!(
            f,
            "constraints: actual {:>8}  expected {:>8}  formula {:>10}",
            self.actual_constraints, self.expected_constraints, self.formula_constraints
        )?;
        writeln!(
            f,
            "exact match: {}   within {}x formula: {}",
            self.exact_match(),
            self.bound_factor,
            self.respects_formula_bound()
        )
    }
}

/// Predicted-vs-actual size accounting for a generated model.
pub fn model_size_report(model: &MilpModel) -> SizeReport {
    let d = model.dims;
    let (e_s, e_p, v_s, v_p) = (d.log_edges, d.phys_edges, d.log_nodes, d.phys_nodes);
    let r = d.scenario_count;
    let sum_k = d.sum_scenario_sizes;
    let (expected_vars, expected_constraints) = if model.family.is_tree() {
        (
            2 * e_s * e_p + 2 * e_s * r,
            e_s * v_p + 2 * e_s * sum_k + r * v_s,
        )
    } else {
        (
            2 * e_s * e_p + e_s * r,
            e_s * v_p + e_s * sum_k + e_s * r + r * d.cutset_count,
        )
    };
    let formula_vars = (e_s as u128) * (r as u128 + e_p as u128);
    let formula_constraints = if model.family.is_tree() {
        (e_s * v_p) as u128 + (r as u128) * (e_s as u128 + v_s as u128)
    } else {
        (e_s * v_p) as u128 + (r as u128) * (e_s as u128 + v_s as u128 + (1u128 << v_s))
    };
    // The formulas drop the per-scenario size and the direction doubling;
    // 2 * max scenario size covers both.
    let bound_factor = 2 * d.max_scenario_size.max(1) as u128;
    SizeReport {
        family: model.family,
        actual_vars: model.variable_count(),
        actual_constraints: model.constraint_count(),
        expected_vars,
        expected_constraints,
        formula_vars,
        formula_constraints,
        bound_factor,
    }
}
