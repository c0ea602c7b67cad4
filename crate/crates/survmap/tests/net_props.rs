//! Property checks for the network model primitives against brute-force
//! oracles on small random instances.

mod common;

use common::*;
use survmap::net::{
    enumerate_cutsets, minimum_spanning_tree, residual_logical, shortest_path, CostVector,
    LogEdgeId, PhysEdgeId,
};
use survmap::rng::SplitMix64;

#[test]
fn lambda_set_matches_route_scan() {
    let mut rng = SplitMix64::new(101);
    for _ in 0..40 {
        let phys = random_phys(&mut rng, 6, 4);
        let logical = random_logical(&mut rng, &phys, 4, 2);
        let mapping = random_mapping(&mut rng, &phys, &logical);
        for p in 0..phys.edge_count() {
            let pe = PhysEdgeId(p as u32);
            let expect = hit_edges_by_scan(&logical, &mapping, &[pe]);
            assert_eq!(mapping.lambda_set(pe).unwrap(), expect.as_slice());
        }
    }
}

#[test]
fn hop_conservation_between_lambda_and_routes() {
    // Every hop is counted once: summing lambda set sizes over physical
    // edges equals summing route lengths over logical edges.
    let mut rng = SplitMix64::new(202);
    for _ in 0..40 {
        let phys = random_phys(&mut rng, 7, 5);
        let logical = random_logical(&mut rng, &phys, 4, 2);
        let mapping = random_mapping(&mut rng, &phys, &logical);
        let lambda_total: usize = (0..phys.edge_count())
            .map(|p| mapping.lambda_set(PhysEdgeId(p as u32)).unwrap().len())
            .sum();
        assert_eq!(lambda_total as u64, mapping.total_route_hops());
    }
}

#[test]
fn residual_equals_definitional_scan() {
    let mut rng = SplitMix64::new(303);
    for _ in 0..40 {
        let phys = random_phys(&mut rng, 6, 4);
        let logical = random_logical(&mut rng, &phys, 4, 2);
        let mapping = random_mapping(&mut rng, &phys, &logical);
        for a in 0..phys.edge_count() {
            for b in a..phys.edge_count() {
                let failed = if a == b {
                    vec![PhysEdgeId(a as u32)]
                } else {
                    vec![PhysEdgeId(a as u32), PhysEdgeId(b as u32)]
                };
                let residual = residual_logical(&logical, &mapping, &failed).unwrap();
                let hit = hit_edges_by_scan(&logical, &mapping, &failed);
                let surviving: Vec<LogEdgeId> = residual.surviving_edges().collect();
                let expect: Vec<LogEdgeId> = (0..logical.edge_count() as u32)
                    .map(LogEdgeId)
                    .filter(|e| !hit.contains(e))
                    .collect();
                assert_eq!(surviving, expect);
            }
        }
    }
}

#[test]
fn residual_of_empty_failure_is_whole_graph() {
    let (_, logical, mapping, _) = worked_example();
    let residual = residual_logical(&logical, &mapping, &[]).unwrap();
    assert_eq!(residual.edge_count(), logical.edge_count());
    assert!(residual.is_connected());
}

#[test]
fn residual_of_total_failure_is_edge_free() {
    let (phys, logical, mapping, _) = worked_example();
    let all: Vec<PhysEdgeId> = (0..phys.edge_count() as u32).map(PhysEdgeId).collect();
    let residual = residual_logical(&logical, &mapping, &all).unwrap();
    assert_eq!(residual.edge_count(), 0);
    assert!(!residual.is_connected());
}

#[test]
fn worked_example_lambda_set_of_middle_edge() {
    let (_, _, mapping, _) = worked_example();
    // Physical edge 1 carries exactly the logical edge c = (2,3).
    assert_eq!(mapping.lambda_set(PhysEdgeId(1)).unwrap(), &[LogEdgeId(2)]);
}

#[test]
fn shortest_path_matches_exhaustive_enumeration() {
    let mut rng = SplitMix64::new(404);
    for _ in 0..60 {
        let phys = random_phys(&mut rng, 8, 5);
        let weights: Vec<f64> = (0..phys.edge_count())
            .map(|_| (1 + rng.gen_range(9)) as f64)
            .collect();
        let costs = CostVector::new(weights.clone(), vec![]).unwrap();
        let a = rng.gen_range(phys.node_count() as u64) as u32;
        let b = rng.gen_range(phys.node_count() as u64) as u32;
        if a == b {
            continue;
        }
        let got = shortest_path(&phys, &costs, a, b).unwrap();
        let cost = |p: &[PhysEdgeId]| p.iter().map(|e| weights[e.index()]).sum::<f64>();
        let enumerated = all_simple_paths(&phys, a, b);
        assert!(!enumerated.is_empty());
        let best = enumerated
            .iter()
            .map(|p| cost(p))
            .fold(f64::INFINITY, f64::min);
        assert_eq!(cost(&got), best);
        // Among minimum-cost paths the lexicographically smallest edge-id
        // sequence is returned (weights are small integers, so cost
        // comparisons are exact).
        let lex_min = enumerated
            .iter()
            .filter(|p| cost(p) == best)
            .min_by(|x, y| x.cmp(y))
            .unwrap();
        assert_eq!(&got, lex_min);
    }
}

#[test]
fn mst_matches_exhaustive_tree_enumeration() {
    let mut rng = SplitMix64::new(505);
    for _ in 0..60 {
        let phys = random_phys(&mut rng, 8, 4);
        let logical = random_logical(&mut rng, &phys, 6, 4);
        let weights: Vec<f64> = (0..logical.edge_count())
            .map(|_| (1 + rng.gen_range(9)) as f64)
            .collect();
        let costs = CostVector::new(vec![1.0; phys.edge_count()], weights.clone()).unwrap();
        let got = minimum_spanning_tree(&logical, &costs).unwrap();
        let tree_cost = |t: &[LogEdgeId]| t.iter().map(|e| weights[e.index()]).sum::<f64>();
        let best = all_spanning_trees(&logical)
            .iter()
            .map(|t| tree_cost(t))
            .fold(f64::INFINITY, f64::min);
        assert_eq!(tree_cost(got.edge_ids()), best);
    }
}

#[test]
fn deterministic_primitives() {
    let mut rng = SplitMix64::new(606);
    let phys = random_phys(&mut rng, 8, 6);
    let logical = random_logical(&mut rng, &phys, 5, 3);
    let weights: Vec<f64> = (0..phys.edge_count())
        .map(|_| (1 + rng.gen_range(9)) as f64)
        .collect();
    let lweights: Vec<f64> = (0..logical.edge_count())
        .map(|_| (1 + rng.gen_range(9)) as f64)
        .collect();
    let costs = CostVector::new(weights, lweights).unwrap();
    let p1 = shortest_path(&phys, &costs, 0, 7).unwrap();
    let t1 = minimum_spanning_tree(&logical, &costs).unwrap();
    for _ in 0..5 {
        assert_eq!(shortest_path(&phys, &costs, 0, 7).unwrap(), p1);
        assert_eq!(minimum_spanning_tree(&logical, &costs).unwrap(), t1);
    }
}

#[test]
fn cutsets_of_fig2_logical_cycle() {
    let (_, logical, _, _) = worked_example();
    let cuts = enumerate_cutsets(&logical).unwrap();
    // 2^(4-1) - 1 bipartitions of the 4-cycle.
    assert_eq!(cuts.len(), 7);
    let mut sizes: Vec<usize> = cuts.iter().map(|c| c.edge_ids.len()).collect();
    sizes.sort_unstable();
    assert_eq!(sizes, vec![2, 2, 2, 2, 2, 2, 4]);
}

#[test]
fn cutsets_are_exactly_the_crossing_sets() {
    let mut rng = SplitMix64::new(707);
    for _ in 0..20 {
        let phys = random_phys(&mut rng, 6, 4);
        let logical = random_logical(&mut rng, &phys, 5, 3);
        let cuts = enumerate_cutsets(&logical).unwrap();
        assert_eq!(cuts.len(), (1 << (logical.node_count() - 1)) - 1);
        for cut in &cuts {
            assert!(!cut.side_a.is_empty());
            assert!(cut.side_a.len() < logical.node_count() as usize);
            for (i, &(s, t)) in logical.edges().iter().enumerate() {
                let in_a = |v: u32| cut.side_a.contains(&v);
                let crossing = in_a(s) != in_a(t);
                assert_eq!(crossing, cut.edge_ids.contains(&LogEdgeId(i as u32)));
            }
        }
    }
}
