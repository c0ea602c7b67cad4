//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line (run with `cargo test --test acceptance -- --nocapture`
//! to see them).

mod common;

use std::collections::HashMap;
use std::time::Instant;

use common::*;
use survmap::failure::{
    gen_3srlg_set, gen_k_failures, validate_srlg_set, FailureScenario, SrlgSet,
};
use survmap::heuristic::{run_srlg_heuristic, HeuristicConfig};
use survmap::milp::{
    assignment_from_mapping, build_cutset_k_model, build_cutset_srlg_model, build_tree_k_model,
    build_tree_srlg_model, check_solution, emit_lp, model_size_report, spanning_tree_flows,
};
use survmap::net::{LogEdgeId, LogicalNetwork, Mapping, PhysEdgeId, PhysicalNetwork};
use survmap::rng::SplitMix64;
use survmap::topo::{builtin_logical, builtin_physical};
use survmap::verify::{verify_scenario, verify_srlg, witness_tree};

struct Criterion {
    id: u32,
    what: &'static str,
}

impl Criterion {
    fn passed(self, detail: String) {
        println!("criterion {}: PASS — {} ({detail})", self.id, self.what);
    }
}

#[test]
fn criterion_1_worked_example_reproduction() {
    let c = Criterion {
        id: 1,
        what: "worked-example verification with exact witness trees",
    };
    let (_, logical, mapping, srlgs) = worked_example();
    let start = Instant::now();
    let report = verify_srlg(&logical, &mapping, &srlgs).unwrap();
    let witnesses: Vec<_> = srlgs
        .iter()
        .map(|s| witness_tree(&logical, &mapping, s).unwrap().unwrap())
        .collect();
    let elapsed = start.elapsed();
    assert!(report.survivable);
    assert_eq!((report.protected_count, report.total_count), (3, 3));
    assert_eq!(
        witnesses[0].edge_ids(),
        &[LogEdgeId(1), LogEdgeId(2), LogEdgeId(3)]
    );
    assert_eq!(
        witnesses[1].edge_ids(),
        &[LogEdgeId(0), LogEdgeId(1), LogEdgeId(3)]
    );
    assert_eq!(
        witnesses[2].edge_ids(),
        &[LogEdgeId(0), LogEdgeId(1), LogEdgeId(2)]
    );
    assert!(elapsed.as_millis() < 10, "took {elapsed:?}");
    c.passed(format!("3/3 protected, witnesses exact, {elapsed:?}"));
}

#[test]
fn criterion_2_enumeration_totals() {
    let c = Criterion {
        id: 2,
        what: "two-failure enumeration totals on NSF and NSF1",
    };
    let nsf = builtin_physical("NSF").unwrap();
    let nsf1 = builtin_physical("NSF1").unwrap();
    let nsf_total = gen_k_failures(&nsf, 2).unwrap().count();
    let nsf1_total = gen_k_failures(&nsf1, 2).unwrap().count();
    assert_eq!(nsf_total, 210);
    assert_eq!(nsf1_total, 231);
    c.passed(format!("NSF {nsf_total}, NSF1 {nsf1_total}"));
}

#[test]
fn criterion_3_survivability_criteria_equivalence() {
    let c = Criterion {
        id: 3,
        what: "tree-witness, cutset and residual-connectivity criteria agree exhaustively",
    };
    let start = Instant::now();
    let mut rng = SplitMix64::new(20_2408);
    let mut instances = 0;
    let mut checks: u64 = 0;
    while instances < 200 {
        let n_p = 4 + (rng.gen_range(3) as u32); // 4..=6 physical nodes
        let extra = rng.gen_range(4) as usize;
        let phys = random_phys(&mut rng, n_p, extra);
        if phys.edge_count() > 8 {
            continue;
        }
        let n_s = 3 + (rng.gen_range(2) as u32); // 3..=4 logical nodes
        let extra_logical = rng.gen_range(3) as usize;
        let logical = random_logical(&mut rng, &phys, n_s, extra_logical);
        let mapping = random_mapping(&mut rng, &phys, &logical);
        instances += 1;
        for k in 1..=2usize.min(phys.edge_count()) {
            for scenario in gen_k_failures(&phys, k).unwrap() {
                let direct = verify_scenario(&logical, &mapping, &scenario).unwrap();
                let by_tree = survives_by_tree_enumeration(&logical, &mapping, scenario.edges());
                let by_cut = survives_by_cutset_check(&logical, &mapping, scenario.edges());
                assert_eq!(
                    direct, by_tree,
                    "tree criterion diverged on instance {instances}"
                );
                assert_eq!(
                    direct, by_cut,
                    "cutset criterion diverged on instance {instances}"
                );
                checks += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
    c.passed(format!(
        "{instances} instances, {checks} scenario checks, {elapsed:?}"
    ));
}

#[test]
fn criterion_4_heuristic_soundness() {
    let c = Criterion {
        id: 4,
        what: "independent verification confirms every protection mark; tree bound holds",
    };
    let mut rng = SplitMix64::new(40_4040);
    let mut confirmed: u64 = 0;
    for round in 0..100 {
        let phys = random_phys(&mut rng, 5 + (round % 4) as u32, 2 + round % 5);
        let logical = random_logical(&mut rng, &phys, 4 + (round % 2) as u32, round % 3);
        let group_count = 1 + rng.gen_range(6) as usize;
        let scenarios = (0..group_count)
            .map(|i| {
                let size = 1 + rng.gen_range(3) as usize;
                let edges = (0..size)
                    .map(|_| PhysEdgeId(rng.gen_range(phys.edge_count() as u64) as u32))
                    .collect();
                FailureScenario::new(format!("s{i}"), edges, &phys).unwrap()
            })
            .collect();
        let srlgs = SrlgSet::new(scenarios).unwrap();
        let plan =
            run_srlg_heuristic(&phys, &logical, &srlgs, &HeuristicConfig::default()).unwrap();
        assert!(
            plan.tree_count() <= srlgs.len(),
            "round {round}: tree bound violated"
        );
        for (idx, mark) in plan.protected.iter().enumerate() {
            if mark.is_some() {
                let ok =
                    verify_scenario(&plan.logical, &plan.mapping, &srlgs.scenarios()[idx]).unwrap();
                assert!(ok, "round {round}: oracle rejected a protection mark");
                confirmed += 1;
            }
        }
    }
    c.passed(format!(
        "100 instances, {confirmed} protection marks all confirmed"
    ));
}

#[test]
fn criterion_5_heuristic_quality_at_desk_scale() {
    let c = Criterion {
        id: 5,
        what: "benchmark runs protect all five groups in 5-SRLG cases, fast, PhyS sane",
    };
    let mut lines = Vec::new();
    for phys_name in ["NSF", "NSF1"] {
        let phys = builtin_physical(phys_name).unwrap();
        let cover = phys.edge_count().div_ceil(3);
        let full = gen_3srlg_set(&phys, 42, cover.max(7)).unwrap();
        for logical_name in ["CLN1", "CLN2", "CLN3", "CLN4"] {
            let logical = builtin_logical(logical_name, &phys).unwrap().unwrap();
            let min_hop = min_hop_total(&phys, &logical);
            for count in [5usize, 6, 7] {
                let srlgs = SrlgSet::new(full.scenarios()[..count].to_vec()).unwrap();
                let start = Instant::now();
                let plan = run_srlg_heuristic(&phys, &logical, &srlgs, &HeuristicConfig::default())
                    .unwrap();
                let elapsed = start.elapsed();
                assert!(
                    elapsed.as_millis() < 1000,
                    "{phys_name}+{logical_name} {elapsed:?}"
                );
                let report = verify_srlg(&plan.logical, &plan.mapping, &srlgs).unwrap();
                assert!(report.phys_utilization >= min_hop);
                assert!(plan.tree_count() <= count);
                if count == 5 {
                    assert!(
                        report.protected_count >= 5,
                        "{phys_name}+{logical_name}: only {}/5 protected",
                        report.protected_count
                    );
                }
                lines.push(format!(
                    "{phys_name}+{logical_name}@{count}: {}/{} PhyS={} trees={} aug={} {elapsed:?}",
                    report.protected_count,
                    report.total_count,
                    report.phys_utilization,
                    plan.tree_count(),
                    plan.augment_count(),
                ));
            }
        }
    }
    c.passed(format!("24 runs\n    {}", lines.join("\n    ")));
}

fn min_hop_total(phys: &PhysicalNetwork, logical: &LogicalNetwork) -> u64 {
    let costs = survmap::net::CostVector::unit(phys, logical);
    (0..logical.edge_count())
        .map(|l| {
            let (from, to) = logical.mapped_endpoints(LogEdgeId(l as u32)).unwrap();
            survmap::shortest_path(phys, &costs, from, to)
                .unwrap()
                .len() as u64
        })
        .sum()
}

#[test]
fn criterion_6_milp_feasibility_witness() {
    let c = Criterion {
        id: 6,
        what: "survivable mappings induce feasible points; no tree flow rescues failures",
    };
    // Exhaustive over every mapping of a small fixed instance, plus random
    // small instances with sampled mappings.
    let phys =
        PhysicalNetwork::new(4, vec![(0, 1), (1, 2), (2, 3), (0, 3), (1, 3), (0, 2)]).unwrap();
    let logical =
        LogicalNetwork::new(3, vec![(0, 1), (1, 2), (0, 2)], vec![0, 1, 2], &phys).unwrap();
    let srlgs = SrlgSet::new(vec![
        FailureScenario::new("r1", vec![PhysEdgeId(0), PhysEdgeId(3)], &phys).unwrap(),
        FailureScenario::new("r2", vec![PhysEdgeId(1)], &phys).unwrap(),
        FailureScenario::new("r3", vec![PhysEdgeId(2), PhysEdgeId(4)], &phys).unwrap(),
    ])
    .unwrap();
    let tree_model = build_tree_srlg_model(&phys, &logical, &srlgs, None).unwrap();
    let cut_model = build_cutset_srlg_model(&phys, &logical, &srlgs).unwrap();
    let trees = all_spanning_trees(&logical);
    let mut survivable_count = 0u64;
    let mut failing_count = 0u64;

    let choices: Vec<Vec<Vec<PhysEdgeId>>> = (0..logical.edge_count())
        .map(|l| {
            let (from, to) = logical.mapped_endpoints(LogEdgeId(l as u32)).unwrap();
            all_simple_paths(&phys, from, to)
        })
        .collect();
    let mut pick = vec![0usize; choices.len()];
    'mappings: loop {
        let routes: Vec<Option<Vec<PhysEdgeId>>> = pick
            .iter()
            .enumerate()
            .map(|(l, &i)| Some(choices[l][i].clone()))
            .collect();
        let mapping = Mapping::new(&phys, &logical, routes).unwrap();
        let failing: Vec<&FailureScenario> = srlgs
            .iter()
            .filter(|s| !verify_scenario(&logical, &mapping, s).unwrap())
            .collect();
        if failing.is_empty() {
            survivable_count += 1;
            for model in [&tree_model, &cut_model] {
                let values = assignment_from_mapping(model, &phys, &logical, &mapping).unwrap();
                let report = check_solution(model, &values).unwrap();
                assert!(report.is_feasible(), "{report}");
            }
        } else {
            failing_count += 1;
            for scenario in failing {
                for tree in &trees {
                    let mut values = base_route_values(&tree_model, &phys, &logical, &mapping);
                    for ((u, v), flow) in
                        spanning_tree_flows(&logical, tree, tree_model.root.unwrap()).unwrap()
                    {
                        values.insert(format!("m_{}_{u}_{v}", scenario.name()), flow);
                    }
                    let report = check_solution(&tree_model, &values).unwrap();
                    let cap = format!("cap_{}_", scenario.name());
                    let tb = format!("tb_{}_", scenario.name());
                    assert!(
                        report
                            .violations
                            .iter()
                            .any(|v| v.label.starts_with(&cap) || v.label.starts_with(&tb)),
                        "a flow construction slipped through for {}",
                        scenario.name()
                    );
                }
            }
        }
        let mut idx = pick.len();
        loop {
            if idx == 0 {
                break 'mappings;
            }
            idx -= 1;
            pick[idx] += 1;
            if pick[idx] < choices[idx].len() {
                break;
            }
            pick[idx] = 0;
        }
    }
    assert!(survivable_count > 0 && failing_count > 0);

    // Random small instances: the canonical assignment of every
    // oracle-survivable random mapping is feasible.
    let mut rng = SplitMix64::new(60_606);
    let mut random_checked = 0;
    for _ in 0..50 {
        let phys = random_phys(&mut rng, 5, 3);
        let logical = random_logical(&mut rng, &phys, 4, 2);
        let mapping = random_mapping(&mut rng, &phys, &logical);
        let group_count = 1 + rng.gen_range(3) as usize;
        let scenarios = (0..group_count)
            .map(|i| {
                let size = 1 + rng.gen_range(2) as usize;
                let edges = (0..size)
                    .map(|_| PhysEdgeId(rng.gen_range(phys.edge_count() as u64) as u32))
                    .collect();
                FailureScenario::new(format!("s{i}"), edges, &phys).unwrap()
            })
            .collect();
        let srlgs = SrlgSet::new(scenarios).unwrap();
        if !srlgs
            .iter()
            .all(|s| verify_scenario(&logical, &mapping, s).unwrap())
        {
            continue;
        }
        let model = build_tree_srlg_model(&phys, &logical, &srlgs, None).unwrap();
        let values = assignment_from_mapping(&model, &phys, &logical, &mapping).unwrap();
        assert!(check_solution(&model, &values).unwrap().is_feasible());
        random_checked += 1;
    }
    assert!(random_checked > 0);
    c.passed(format!(
        "{survivable_count} survivable + {failing_count} failing mappings exhaustively, {random_checked} random instances"
    ));
}

fn base_route_values(
    model: &survmap::milp::MilpModel,
    phys: &PhysicalNetwork,
    logical: &LogicalNetwork,
    mapping: &Mapping,
) -> HashMap<String, f64> {
    let mut values: HashMap<String, f64> = model
        .variables
        .iter()
        .map(|v| (v.name.clone(), 0.0))
        .collect();
    for l in 0..logical.edge_count() {
        let e = LogEdgeId(l as u32);
        let (s, t) = logical.endpoints(e).unwrap();
        let (from, _) = logical.mapped_endpoints(e).unwrap();
        let mut cur = from;
        for &pe in mapping.route(e).unwrap().unwrap() {
            let (a, b) = phys.endpoints(pe).unwrap();
            let next = if a == cur { b } else { a };
            values.insert(format!("y_{s}_{t}_{cur}_{next}"), 1.0);
            cur = next;
        }
    }
    values
}

#[test]
fn criterion_7_model_size_accounting() {
    let c = Criterion {
        id: 7,
        what: "exact size accounting across all four families",
    };
    let mut rng = SplitMix64::new(70_707);
    let mut models_checked = 0;
    for round in 0..20 {
        let phys = random_phys(&mut rng, 4 + (round % 4) as u32, 1 + round % 4);
        let logical = random_logical(&mut rng, &phys, 3 + (round % 2) as u32, round % 3);
        let group_count = 1 + round % 5;
        let scenarios = (0..group_count)
            .map(|i| {
                let size = 1 + rng.gen_range(3) as usize;
                let edges = (0..size)
                    .map(|_| PhysEdgeId(rng.gen_range(phys.edge_count() as u64) as u32))
                    .collect();
                FailureScenario::new(format!("s{i}"), edges, &phys).unwrap()
            })
            .collect();
        let srlgs = SrlgSet::new(scenarios).unwrap();
        let k = 1 + round % 2;
        let models = [
            build_tree_srlg_model(&phys, &logical, &srlgs, None).unwrap(),
            build_cutset_srlg_model(&phys, &logical, &srlgs).unwrap(),
            build_tree_k_model(&phys, &logical, k, None).unwrap(),
            build_cutset_k_model(&phys, &logical, k).unwrap(),
        ];
        for model in &models {
            let report = model_size_report(model);
            assert!(report.exact_match(), "round {round}: {report}");
            assert!(report.respects_formula_bound(), "round {round}: {report}");
            models_checked += 1;
        }
    }
    c.passed(format!(
        "{models_checked} models, exact counts and formula bounds"
    ));
}

#[test]
fn criterion_8_emission_determinism() {
    let c = Criterion {
        id: 8,
        what: "LP emission byte-stable and equal to the committed golden file",
    };
    let (phys, logical, _, srlgs) = worked_example();
    let golden = include_str!("fixtures/worked_example_tree_srlg.lp");
    for _ in 0..10 {
        let model = build_tree_srlg_model(&phys, &logical, &srlgs, None).unwrap();
        assert_eq!(emit_lp(&model), golden);
    }
    c.passed("10 rebuild+emit rounds byte-identical to the fixture".into());
}

#[test]
fn criterion_9_srlg_generator_validation() {
    let c = Criterion {
        id: 9,
        what: "1000 seeded generations on NSF pass all four properties",
    };
    let nsf = builtin_physical("NSF").unwrap();
    for seed in 0..1000u64 {
        let set = gen_3srlg_set(&nsf, seed, 7).unwrap();
        assert_eq!(set.len(), 7);
        let report = validate_srlg_set(&nsf, &set);
        assert!(report.all_pass(), "seed {seed}:\n{report}");
    }
    c.passed("seeds 0..1000, every set valid".into());
}
