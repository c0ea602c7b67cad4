//! LP-format text emission. Output is deterministic: variables, rows and
//! sections appear in model construction order, so identical models emit
//! byte-identical files.

use std::fmt::Write as _;

use super::{MilpModel, VarKind};

const WRAP_COLUMN: usize = 72;

/// Render the model in the industry-standard LP text format: `Minimize`,
/// `Subject To` (one named row per constraint), `Bounds` for continuous
/// variables, `Binary`, and `End`.
pub fn emit_lp(model: &MilpModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "\\ survmap {} model", model.family);
    out.push_str("Minimize\n");
    push_terms(&mut out, " obj:", terms_text(model, &model.objective));
    if !model.constraints.is_empty() {
        out.push_str("Subject To\n");
        for c in &model.constraints {
            let mut text = terms_text(model, &c.terms);
            text.push(' ');
            text.push_str(&c.relation.to_string());
            text.push(' ');
            text.push_str(&fmt_num(c.rhs));
            push_terms(&mut out, &format!(" {}:", c.label), text);
        }
    }
    let continuous: Vec<&super::VariableRef> = model
        .variables
        .iter()
        .filter(|v| v.kind == VarKind::Continuous)
        .collect();
    if !continuous.is_empty() {
        out.push_str("Bounds\n");
        for v in continuous {
            let _ = writeln!(
                out,
                " {} <= {} <= {}",
                fmt_num(v.bounds.0),
                v.name,
                fmt_num(v.bounds.1)
            );
        }
    }
    let binaries: Vec<&super::VariableRef> = model
        .variables
        .iter()
        .filter(|v| v.kind == VarKind::Binary)
        .collect();
    if !binaries.is_empty() {
        out.push_str("Binary\n");
        for v in binaries {
            let _ = writeln!(out, " {}", v.name);
        }
    }
    out.push_str("End\n");
    out
}

fn terms_text(model: &MilpModel, terms: &[(f64, usize)]) -> String {
    let mut text = String::new();
    for (i, &(coeff, var)) in terms.iter().enumerate() {
        let name = &model.variables[var].name;
        let mag = coeff.abs();
        if i == 0 {
            if coeff < 0.0 {
                text.push_str("- ");
            }
        } else if coeff < 0.0 {
            text.push_str(" - ");
        } else {
            text.push_str(" + ");
        }
        if (mag - 1.0).abs() > f64::EPSILON {
            text.push_str(&fmt_num(mag));
            text.push(' ');
        }
        text.push_str(name);
    }
    text
}

/// Append `head` followed by the term text, wrapping long lines at spaces so
/// the result remains parseable and byte-stable.
fn push_terms(out: &mut String, head: &str, text: String) {
    out.push_str(head);
    let mut col = head.len();
    for token in text.split(' ') {
        if col + 1 + token.len() > WRAP_COLUMN && col > head.len() {
            out.push_str("\n   ");
            col = 3;
        }
        out.push(' ');
        col += 1 + token.len();
        out.push_str(token);
    }
    out.push('\n');
}

/// Integers print without a decimal point; everything else uses the shortest
/// round-trip representation.
pub(crate) fn fmt_num(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1.0e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::worked_example;
    use super::super::{build_tree_srlg_model, Family, MilpModel, ModelDims};
    use super::*;
    use crate::failure::SrlgSet;

    #[test]
    fn numbers_format_cleanly() {
        assert_eq!(fmt_num(1.0), "1");
        assert_eq!(fmt_num(-3.0), "-3");
        assert_eq!(fmt_num(0.5), "0.5");
        assert_eq!(fmt_num(1.0 / 3.0), "0.3333333333333333");
    }

    #[test]
    fn empty_constraint_set_emits_header_objective_end() {
        let model = MilpModel {
            family: Family::TreeSrlg,
            root: Some(0),
            dims: ModelDims {
                phys_nodes: 0,
                phys_edges: 0,
                log_nodes: 0,
                log_edges: 0,
                scenario_count: 0,
                sum_scenario_sizes: 0,
                max_scenario_size: 0,
                cutset_count: 0,
            },
            scenarios: vec![],
            variables: vec![super::super::VariableRef {
                name: "y".into(),
                kind: VarKind::Binary,
                bounds: (0.0, 1.0),
                tag: super::super::VarTag::Route {
                    ledge: crate::net::LogEdgeId(0),
                    arc: (0, 1),
                },
            }],
            constraints: vec![],
            objective: vec![(1.0, 0)],
            name_index: [("y".to_string(), 0)].into_iter().collect(),
        };
        let text = emit_lp(&model);
        assert!(text.starts_with("\\ survmap tree-srlg model\nMinimize\n obj: y\n"));
        assert!(!text.contains("Subject To"));
        assert!(text.contains("Binary\n y\n"));
        assert!(text.ends_with("End\n"));
    }

    #[test]
    fn emission_is_byte_stable() {
        let (phys, logical, srlgs) = worked_example();
        let first = emit_lp(&build_tree_srlg_model(&phys, &logical, &srlgs, None).unwrap());
        for _ in 0..9 {
            let again = emit_lp(&build_tree_srlg_model(&phys, &logical, &srlgs, None).unwrap());
            assert_eq!(first, again);
        }
        let _ = SrlgSet::empty();
    }
}
