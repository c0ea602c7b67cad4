//! Failure scenarios: named sets of physical edges that fail together.
//!
//! Two sources exist: exhaustive enumeration of all `k`-edge combinations
//! (streamed, never materialized here), and seeded generation of SRLG sets
//! whose groups have at most three edges, are mutually subset-free, never
//! disconnect the physical network on their own, and jointly cover it.

use std::fmt;

use thiserror::Error;

use crate::net::{PhysEdgeId, PhysicalNetwork};
use crate::rng::SplitMix64;

#[derive(Debug, Error)]
pub enum FailureError {
    #[error("k must be between 1 and {max} (got {k})")]
    KOutOfRange { k: usize, max: usize },
    #[error("scenario '{0}' has no edges")]
    EmptyScenario(String),
    #[error("scenario '{name}' references unknown physical edge {edge}")]
    UnknownEdge { name: String, edge: u32 },
    #[error("scenario name '{0}' must be nonempty and contain only [A-Za-z0-9_]")]
    BadName(String),
    #[error("duplicate scenario name '{0}'")]
    DuplicateName(String),
    #[error("{count} groups of at most 3 edges cannot cover {edges} physical edges")]
    CoverImpossible { count: usize, edges: usize },
    #[error("target count must be at least 1")]
    ZeroCount,
    #[error(
        "no valid SRLG set with {count} groups found after {rounds} rounds (blocking property: {property})"
    )]
    GenerationFailed {
        count: usize,
        rounds: usize,
        property: &'static str,
    },
}

/// A named set of physical edges that fail simultaneously.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailureScenario {
    name: String,
    edges: Vec<PhysEdgeId>,
}

impl FailureScenario {
    pub fn new(
        name: impl Into<String>,
        mut edges: Vec<PhysEdgeId>,
        phys: &PhysicalNetwork,
    ) -> Result<Self, FailureError> {
        let name = name.into();
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(FailureError::BadName(name));
        }
        edges.sort_unstable();
        edges.dedup();
        if edges.is_empty() {
            return Err(FailureError::EmptyScenario(name));
        }
        for &e in &edges {
            if e.index() >= phys.edge_count() {
                return Err(FailureError::UnknownEdge { name, edge: e.0 });
            }
        }
        Ok(Self { name, edges })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Failed edge ids, ascending.
    pub fn edges(&self) -> &[PhysEdgeId] {
        &self.edges
    }

    /// Number of physical links in the scenario.
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn is_subset_of(&self, other: &FailureScenario) -> bool {
        self.edges
            .iter()
            .all(|e| other.edges.binary_search(e).is_ok())
    }
}

impl fmt::Display for FailureScenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {{", self.name)?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// An ordered collection of failure scenarios with unique names.
#[derive(Debug, Clone)]
pub struct SrlgSet {
    scenarios: Vec<FailureScenario>,
}

impl SrlgSet {
    pub fn new(scenarios: Vec<FailureScenario>) -> Result<Self, FailureError> {
        let mut names: Vec<&str> = scenarios.iter().map(|s| s.name()).collect();
        names.sort_unstable();
        for pair in names.windows(2) {
            if pair[0] == pair[1] {
                return Err(FailureError::DuplicateName(pair[0].to_string()));
            }
        }
        Ok(Self { scenarios })
    }

    pub fn empty() -> Self {
        Self {
            scenarios: Vec::new(),
        }
    }

    pub fn scenarios(&self) -> &[FailureScenario] {
        &self.scenarios
    }

    pub fn len(&self) -> usize {
        self.scenarios.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scenarios.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &FailureScenario> {
        self.scenarios.iter()
    }

    pub fn max_size(&self) -> usize {
        self.scenarios
            .iter()
            .map(FailureScenario::size)
            .max()
            .unwrap_or(0)
    }

    pub fn sum_sizes(&self) -> usize {
        self.scenarios.iter().map(FailureScenario::size).sum()
    }
}

/// Exact number of `k`-subsets of `m` edges, saturating at `u128::MAX`.
pub fn count_k_failures(m: usize, k: usize) -> u128 {
    if k > m {
        return 0;
    }
    let k = k.min(m - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((m - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Streaming enumeration of every `k`-subset of the physical edge set, in
/// lexicographic edge-id order. Nothing is materialized up front.
pub fn gen_k_failures(phys: &PhysicalNetwork, k: usize) -> Result<KFailures, FailureError> {
    let m = phys.edge_count();
    if k == 0 || k > m {
        return Err(FailureError::KOutOfRange { k, max: m });
    }
    Ok(KFailures {
        m,
        combo: Some((0..k as u32).collect()),
    })
}

#[derive(Debug, Clone)]
pub struct KFailures {
    m: usize,
    combo: Option<Vec<u32>>,
}

impl Iterator for KFailures {
    type Item = FailureScenario;

    fn next(&mut self) -> Option<Self::Item> {
        let combo = self.combo.as_mut()?;
        let edges: Vec<PhysEdgeId> = combo.iter().map(|&i| PhysEdgeId(i)).collect();
        let mut name = String::from("f");
        for e in &edges {
            name.push('_');
            name.push_str(&e.0.to_string());
        }
        let item = FailureScenario { name, edges };
        // Advance to the next combination.
        let k = combo.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.combo = None;
                break;
            }
            i -= 1;
            if combo[i] < (self.m - (k - i)) as u32 {
                combo[i] += 1;
                for j in i + 1..k {
                    combo[j] = combo[j - 1] + 1;
                }
                break;
            }
        }
        Some(item)
    }
}

/// Report from checking the four SRLG set properties: group size at most 3,
/// subset-freeness, per-group non-disconnection, full edge cover.
#[derive(Debug, Clone)]
pub struct SrlgValidation {
    /// Scenarios with more than three edges.
    pub oversize: Vec<String>,
    /// Pairs `(a, b)` where scenario `a`'s edges are contained in `b`'s.
    pub subset_pairs: Vec<(String, String)>,
    /// Scenarios whose failure disconnects the physical network.
    pub disconnecting: Vec<String>,
    /// Physical edges covered by no scenario.
    pub uncovered: Vec<PhysEdgeId>,
}

impl SrlgValidation {
    pub fn size_ok(&self) -> bool {
        self.oversize.is_empty()
    }

    pub fn subset_free(&self) -> bool {
        self.subset_pairs.is_empty()
    }

    pub fn non_disconnecting(&self) -> bool {
        self.disconnecting.is_empty()
    }

    pub fn covers(&self) -> bool {
        self.uncovered.is_empty()
    }

    pub fn all_pass(&self) -> bool {
        self.size_ok() && self.subset_free() && self.non_disconnecting() && self.covers()
    }
}

impl fmt::Display for SrlgValidation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let flag = |ok: bool| if ok { "pass" } else { "FAIL" };
        writeln!(f, "group size <= 3 ........ {}", flag(self.size_ok()))?;
        for name in &self.oversize {
            writeln!(f, "    oversize: {name}")?;
        }
        writeln!(f, "subset-free ............ {}", flag(self.subset_free()))?;
        for (a, b) in &self.subset_pairs {
            writeln!(f, "    {a} is contained in {b}")?;
        }
        writeln!(
            f,
            "non-disconnecting ...... {}",
            flag(self.non_disconnecting())
        )?;
        for name in &self.disconnecting {
            writeln!(f, "    {name} disconnects the physical network")?;
        }
        writeln!(f, "covers all edges ....... {}", flag(self.covers()))?;
        if !self.uncovered.is_empty() {
            let ids: Vec<String> = self.uncovered.iter().map(|e| e.to_string()).collect();
            writeln!(f, "    uncovered edges: {}", ids.join(", "))?;
        }
        Ok(())
    }
}

/// Check all four SRLG set properties independently and report every
/// counterexample found.
pub fn validate_srlg_set(phys: &PhysicalNetwork, srlgs: &SrlgSet) -> SrlgValidation {
    let mut oversize = Vec::new();
    let mut subset_pairs = Vec::new();
    let mut disconnecting = Vec::new();
    let mut covered = vec![false; phys.edge_count()];

    for (i, a) in srlgs.scenarios().iter().enumerate() {
        if a.size() > 3 {
            oversize.push(a.name().to_string());
        }
        for e in a.edges() {
            if let Some(slot) = covered.get_mut(e.index()) {
                *slot = true;
            }
        }
        if !phys.connected_without(a.edges()) {
            disconnecting.push(a.name().to_string());
        }
        for b in srlgs.scenarios().iter().skip(i + 1) {
            if a.is_subset_of(b) {
                subset_pairs.push((a.name().to_string(), b.name().to_string()));
            } else if b.is_subset_of(a) {
                subset_pairs.push((b.name().to_string(), a.name().to_string()));
            }
        }
    }

    let uncovered = covered
        .iter()
        .enumerate()
        .filter(|(_, &c)| !c)
        .map(|(i, _)| PhysEdgeId(i as u32))
        .collect();

    SrlgValidation {
        oversize,
        subset_pairs,
        disconnecting,
        uncovered,
    }
}

pub const DEFAULT_SRLG_ROUNDS: usize = 10_000;

/// Seeded generation of an SRLG set with exactly `target_count` groups that
/// passes all four properties. Deterministic per seed; fails with the
/// blocking property after `DEFAULT_SRLG_ROUNDS` rejected proposals.
pub fn gen_3srlg_set(
    phys: &PhysicalNetwork,
    seed: u64,
    target_count: usize,
) -> Result<SrlgSet, FailureError> {
    gen_3srlg_set_bounded(phys, seed, target_count, DEFAULT_SRLG_ROUNDS)
}

pub fn gen_3srlg_set_bounded(
    phys: &PhysicalNetwork,
    seed: u64,
    target_count: usize,
    max_rounds: usize,
) -> Result<SrlgSet, FailureError> {
    if target_count == 0 {
        return Err(FailureError::ZeroCount);
    }
    let m = phys.edge_count();
    if 3 * target_count < m {
        return Err(FailureError::CoverImpossible {
            count: target_count,
            edges: m,
        });
    }
    let mut rng = SplitMix64::new(seed);
    let mut blocking: &'static str = "non-disconnecting";
    for _ in 0..max_rounds {
        let groups = if m >= target_count {
            propose_partition(&mut rng, phys, target_count)
        } else {
            propose_overlapping(&mut rng, m, target_count)
        };
        let Some(groups) = groups else { continue };
        let scenarios: Vec<FailureScenario> = groups
            .into_iter()
            .enumerate()
            .map(|(i, edges)| FailureScenario::new(format!("s{i}"), edges, phys))
            .collect::<Result<_, _>>()?;
        let set = SrlgSet::new(scenarios)?;
        let report = validate_srlg_set(phys, &set);
        if report.all_pass() {
            return Ok(set);
        }
        blocking = if !report.non_disconnecting() {
            "non-disconnecting"
        } else if !report.subset_free() {
            "subset-free"
        } else if !report.covers() {
            "cover"
        } else {
            "group size"
        };
    }
    Err(FailureError::GenerationFailed {
        count: target_count,
        rounds: max_rounds,
        property: blocking,
    })
}

/// Random partition of the edge set into `target` groups of size 1-3,
/// preferring to grow a group with edges that share an endpoint with it
/// (co-located fibers are the SRLGs worth modeling). A partition covers
/// everything and disjoint nonempty groups are automatically subset-free,
/// so only the connectivity property is left to the rejection loop.
fn propose_partition(
    rng: &mut SplitMix64,
    phys: &PhysicalNetwork,
    target: usize,
) -> Option<Vec<Vec<PhysEdgeId>>> {
    let m = phys.edge_count();
    debug_assert!(m >= target && m <= 3 * target);
    // Deterministic size profile: as many triples as the edge count forces.
    let extra = m - target;
    let triples = extra / 2;
    let pairs = extra % 2;
    let mut sizes = vec![3usize; triples];
    sizes.extend(std::iter::repeat_n(2, pairs));
    sizes.extend(std::iter::repeat_n(1, target - triples - pairs));

    let mut order: Vec<u32> = (0..m as u32).collect();
    rng.shuffle(&mut order);
    let mut used = vec![false; m];
    let mut groups = Vec::with_capacity(target);
    for &size in &sizes {
        let mut group: Vec<PhysEdgeId> = Vec::with_capacity(size);
        let mut touched: Vec<u32> = Vec::new();
        let seedling = order.iter().find(|&&e| !used[e as usize]).copied()?;
        used[seedling as usize] = true;
        let (a, b) = phys.endpoints(PhysEdgeId(seedling)).ok()?;
        touched.extend([a, b]);
        group.push(PhysEdgeId(seedling));
        while group.len() < size {
            let adjacent = order.iter().copied().find(|&e| {
                !used[e as usize] && {
                    let (u, v) = phys.endpoints(PhysEdgeId(e)).expect("edge in range");
                    touched.contains(&u) || touched.contains(&v)
                }
            });
            let pick = adjacent.or_else(|| order.iter().copied().find(|&e| !used[e as usize]))?;
            used[pick as usize] = true;
            let (u, v) = phys.endpoints(PhysEdgeId(pick)).ok()?;
            touched.extend([u, v]);
            group.push(PhysEdgeId(pick));
        }
        group.sort_unstable();
        groups.push(group);
    }
    Some(groups)
}

/// Degenerate corner: more groups than edges. Distinct two-edge groups form
/// an antichain; a ring of consecutive pairs covers every edge and random
/// distinct pairs top the count up.
fn propose_overlapping(
    rng: &mut SplitMix64,
    m: usize,
    target: usize,
) -> Option<Vec<Vec<PhysEdgeId>>> {
    if m < 2 || count_k_failures(m, 2) < target as u128 {
        return None;
    }
    let mut picked: Vec<(u32, u32)> = (0..m as u32).map(|i| ring_pair(i, m)).collect();
    picked.sort_unstable();
    picked.dedup();
    let mut guard = 0;
    while picked.len() < target {
        let a = rng.gen_range(m as u64) as u32;
        let b = rng.gen_range(m as u64) as u32;
        if a != b {
            let pair = (a.min(b), a.max(b));
            if !picked.contains(&pair) {
                picked.push(pair);
            }
        }
        guard += 1;
        if guard > 100 * target {
            return None;
        }
    }
    picked.truncate(target);
    Some(
        picked
            .into_iter()
            .map(|(a, b)| vec![PhysEdgeId(a), PhysEdgeId(b)])
            .collect(),
    )
}

fn ring_pair(i: u32, m: usize) -> (u32, u32) {
    let j = (i + 1) % m as u32;
    (i.min(j), i.max(j))
}
