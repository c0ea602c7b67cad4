//! End-to-end experiment pipelines.
//!
//! An [`ExperimentSpec`] names an instance (file or built-ins), a failure
//! mode, and a pipeline; [`run_experiment`] executes it, writes the
//! artifacts into the output directory, and returns a metrics row. Reported
//! survivability counts always come from an independent verifier pass over
//! the emitted plan, never from the heuristic's own bookkeeping. The
//! persisted report files carry no timing so reruns are byte-identical;
//! wall time is returned in the metrics row only.

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use thiserror::Error;

use crate::failure::{gen_3srlg_set, validate_srlg_set, FailureError, SrlgSet};
use crate::heuristic::{
    run_k_heuristic, run_srlg_heuristic, HeuristicConfig, HeuristicError, ProtectionPlan,
};
use crate::instance::{parse_instance, render_instance, render_plan, Instance, ParseError};
use crate::milp::{
    build_cutset_k_model, build_cutset_srlg_model, build_tree_k_model, build_tree_srlg_model,
    emit_lp, Family, MilpError,
};
use crate::net::{LogNodeId, LogicalNetwork, Mapping, NetError, PhysicalNetwork};
use crate::topo::{builtin_logical, builtin_physical};
use crate::verify::{verify_k, verify_srlg, SurvivabilityReport, VerifyError};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("[load] {0}")]
    Load(String),
    #[error("[load] {0}")]
    Parse(#[from] ParseError),
    #[error("[srlg-gen] {0}")]
    SrlgGen(#[from] FailureError),
    #[error("[heuristic] {0}")]
    Heuristic(#[from] HeuristicError),
    #[error("[verify] {0}")]
    Verify(#[from] VerifyError),
    #[error("[milp] {0}")]
    Milp(#[from] MilpError),
    #[error("[net] {0}")]
    Net(#[from] NetError),
    #[error("[io] {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("[spec] {0}")]
    Spec(String),
}

/// Where the two network layers come from.
#[derive(Debug, Clone)]
pub enum InstanceSource {
    /// Parse everything from one instance file.
    File(PathBuf),
    /// Built-in physical and logical topologies by name.
    Builtin { phys: String, logical: String },
}

/// How the failure scenarios are obtained.
#[derive(Debug, Clone)]
pub enum FailureModeSpec {
    /// SRLG groups read from the instance file.
    SrlgFromInstance,
    /// SRLG groups generated with a seed and target count.
    SrlgGenerated { seed: u64, count: usize },
    /// Every k-combination of physical links.
    K(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pipeline {
    /// Heuristic plan plus independent verification.
    Heuristic,
    /// Emit the MILP model only.
    MilpEmit,
    /// Verify the mapping carried by the instance.
    Verify,
    /// Heuristic, verification, and model emission.
    Full,
}

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    /// Row label in reports.
    pub name: String,
    pub source: InstanceSource,
    pub mode: FailureModeSpec,
    pub pipeline: Pipeline,
    /// Output directory; nothing is written when `None`.
    pub out_dir: Option<PathBuf>,
    pub heuristic: HeuristicConfig,
    /// Model family for emission; defaults to the tree family matching the
    /// failure mode.
    pub family: Option<Family>,
    pub root: Option<LogNodeId>,
}

/// One metrics row. `protected`/`total` carry MaxS semantics in SRLG mode
/// and SIdx semantics in k mode.
#[derive(Debug, Clone)]
pub struct MetricsRow {
    pub name: String,
    pub mode: String,
    pub survivable: bool,
    pub protected: u64,
    pub total: u64,
    pub phys_hops: u64,
    pub tree_count: Option<usize>,
    pub logical_edges_used: Option<usize>,
    pub augmented: Option<usize>,
    /// Wall time; excluded from persisted reports to keep them byte-stable.
    pub wall_ms: u128,
}

impl MetricsRow {
    pub fn header(mode_label: &str) -> String {
        format!(
            "{:<18} {:<12} {:>4} {:>12} {:>6} {:>6} {:>6} {:>8}",
            "instance", "mode", "Surv", mode_label, "PhyS", "Tree#", "LogS", "Augment#"
        )
    }

    pub fn to_table_line(&self) -> String {
        let opt = |v: Option<usize>| v.map_or("-".to_string(), |x| x.to_string());
        format!(
            "{:<18} {:<12} {:>4} {:>12} {:>6} {:>6} {:>6} {:>8}",
            self.name,
            self.mode,
            if self.survivable { "Yes" } else { "No" },
            format!("{}/{}", self.protected, self.total),
            self.phys_hops,
            opt(self.tree_count),
            opt(self.logical_edges_used),
            opt(self.augmented),
        )
    }

    pub fn csv_header() -> &'static str {
        "instance,mode,surv,protected,total,phys,trees,logs,augment"
    }

    pub fn to_csv_line(&self) -> String {
        let opt = |v: Option<usize>| v.map_or(String::new(), |x| x.to_string());
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.name,
            self.mode,
            if self.survivable { "yes" } else { "no" },
            self.protected,
            self.total,
            self.phys_hops,
            opt(self.tree_count),
            opt(self.logical_edges_used),
            opt(self.augmented),
        )
    }
}

impl fmt::Display for MetricsRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_table_line())
    }
}

/// Everything a finished run hands back.
#[derive(Debug)]
pub struct ExperimentOutcome {
    pub metrics: MetricsRow,
    pub report: SurvivabilityReport,
    pub plan: Option<ProtectionPlan>,
    /// Files written, for logging.
    pub artifacts: Vec<PathBuf>,
}

struct Loaded {
    phys: PhysicalNetwork,
    logical: LogicalNetwork,
    mapping: Mapping,
    srlgs: SrlgSet,
}

fn load(source: &InstanceSource) -> Result<Loaded, ExperimentError> {
    match source {
        InstanceSource::File(path) => {
            let text = fs::read_to_string(path).map_err(|source| ExperimentError::Io {
                path: path.display().to_string(),
                source,
            })?;
            let Instance {
                phys,
                logical,
                mapping,
                srlgs,
                ..
            } = parse_instance(&text)?;
            Ok(Loaded {
                phys,
                logical,
                mapping,
                srlgs,
            })
        }
        InstanceSource::Builtin { phys, logical } => {
            let phys_net = builtin_physical(phys).ok_or_else(|| {
                ExperimentError::Load(format!("unknown built-in physical topology '{phys}'"))
            })?;
            let logical_net = builtin_logical(logical, &phys_net)
                .ok_or_else(|| {
                    ExperimentError::Load(format!("unknown built-in logical topology '{logical}'"))
                })?
                .map_err(ExperimentError::Net)?;
            let mapping = Mapping::empty(&phys_net, &logical_net);
            Ok(Loaded {
                phys: phys_net,
                logical: logical_net,
                mapping,
                srlgs: SrlgSet::empty(),
            })
        }
    }
}

/// Execute the pipeline described by `spec`.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutcome, ExperimentError> {
    let start = Instant::now();
    let loaded = load(&spec.source)?;
    let mut artifacts = Vec::new();

    let (srlgs, mode_label) = match &spec.mode {
        FailureModeSpec::SrlgFromInstance => {
            if loaded.srlgs.is_empty() {
                return Err(ExperimentError::Spec(
                    "instance carries no srlg records; generate or supply them".into(),
                ));
            }
            (
                Some(loaded.srlgs.clone()),
                format!("srlg({})", loaded.srlgs.len()),
            )
        }
        FailureModeSpec::SrlgGenerated { seed, count } => {
            // A covering 3-SRLG set needs at least ceil(|E_P|/3) groups;
            // smaller experiment sets are prefixes of the covering set.
            let cover_count = loaded.phys.edge_count().div_ceil(3);
            let full = gen_3srlg_set(&loaded.phys, *seed, (*count).max(cover_count))?;
            let check = validate_srlg_set(&loaded.phys, &full);
            debug_assert!(
                check.all_pass(),
                "generator returned an invalid set:\n{check}"
            );
            let set = if full.len() > *count {
                SrlgSet::new(full.scenarios()[..*count].to_vec())
                    .expect("prefix of a valid set is valid")
            } else {
                full
            };
            (Some(set), format!("srlg({count})@{seed}"))
        }
        FailureModeSpec::K(k) => (None, format!("k={k}")),
    };

    let mut plan = None;
    let report;
    match spec.pipeline {
        Pipeline::Verify => {
            if !loaded.mapping.is_complete() {
                return Err(ExperimentError::Spec(
                    "verify pipeline needs a complete mapping in the instance".into(),
                ));
            }
            report = match (&srlgs, &spec.mode) {
                (Some(set), _) => verify_srlg(&loaded.logical, &loaded.mapping, set)?,
                (None, FailureModeSpec::K(k)) => {
                    verify_k(&loaded.phys, &loaded.logical, &loaded.mapping, *k)?
                }
                _ => unreachable!("srlg modes always produce a set"),
            };
        }
        Pipeline::Heuristic | Pipeline::Full => {
            let p = match (&srlgs, &spec.mode) {
                (Some(set), _) => {
                    run_srlg_heuristic(&loaded.phys, &loaded.logical, set, &spec.heuristic)?
                }
                (None, FailureModeSpec::K(k)) => {
                    run_k_heuristic(&loaded.phys, &loaded.logical, *k, &spec.heuristic)?
                }
                _ => unreachable!("srlg modes always produce a set"),
            };
            // Independent verification over the emitted plan.
            report = match (&srlgs, &spec.mode) {
                (Some(set), _) => verify_srlg(&p.logical, &p.mapping, set)?,
                (None, FailureModeSpec::K(k)) => {
                    verify_k(&loaded.phys, &p.logical, &p.mapping, *k)?
                }
                _ => unreachable!(),
            };
            plan = Some(p);
        }
        Pipeline::MilpEmit => {
            if !loaded.mapping.is_complete() {
                report = SurvivabilityReport {
                    survivable: false,
                    protected_count: 0,
                    total_count: srlgs.as_ref().map(|s| s.len() as u64).unwrap_or(0),
                    failed_scenarios: Vec::new(),
                    phys_utilization: 0,
                };
            } else {
                report = match (&srlgs, &spec.mode) {
                    (Some(set), _) => verify_srlg(&loaded.logical, &loaded.mapping, set)?,
                    (None, FailureModeSpec::K(k)) => {
                        verify_k(&loaded.phys, &loaded.logical, &loaded.mapping, *k)?
                    }
                    _ => unreachable!(),
                };
            }
        }
    }

    if matches!(spec.pipeline, Pipeline::MilpEmit | Pipeline::Full) {
        let family = spec.family.unwrap_or(match &spec.mode {
            FailureModeSpec::K(_) => Family::TreeK,
            _ => Family::TreeSrlg,
        });
        let model = match (family, &srlgs, &spec.mode) {
            (Family::TreeSrlg, Some(set), _) => {
                build_tree_srlg_model(&loaded.phys, &loaded.logical, set, spec.root)?
            }
            (Family::CutSrlg, Some(set), _) => {
                build_cutset_srlg_model(&loaded.phys, &loaded.logical, set)?
            }
            (Family::TreeK, _, FailureModeSpec::K(k)) => {
                build_tree_k_model(&loaded.phys, &loaded.logical, *k, spec.root)?
            }
            (Family::CutK, _, FailureModeSpec::K(k)) => {
                build_cutset_k_model(&loaded.phys, &loaded.logical, *k)?
            }
            (f, _, _) => {
                return Err(ExperimentError::Spec(format!(
                    "family {f} does not match the failure mode"
                )))
            }
        };
        if let Some(dir) = &spec.out_dir {
            let path = dir.join(format!("model_{family}.lp"));
            write_artifact(&path, &emit_lp(&model))?;
            artifacts.push(path);
        }
    }

    if let Some(dir) = &spec.out_dir {
        fs::create_dir_all(dir).map_err(|source| ExperimentError::Io {
            path: dir.display().to_string(),
            source,
        })?;
        let inst_path = dir.join("instance.net");
        write_artifact(
            &inst_path,
            &render_instance(
                &loaded.phys,
                &loaded.logical,
                Some(&loaded.mapping),
                srlgs.as_ref(),
            ),
        )?;
        artifacts.push(inst_path);
        if let (Some(p), Some(set)) = (&plan, &srlgs) {
            let plan_path = dir.join("plan.net");
            write_artifact(&plan_path, &render_plan(&loaded.phys, p, set))?;
            artifacts.push(plan_path);
        }
    }

    let metrics = MetricsRow {
        name: spec.name.clone(),
        mode: mode_label,
        survivable: report.survivable,
        protected: report.protected_count,
        total: report.total_count,
        phys_hops: report.phys_utilization,
        tree_count: plan.as_ref().map(ProtectionPlan::tree_count),
        logical_edges_used: plan.as_ref().map(ProtectionPlan::logical_edges_used),
        augmented: plan.as_ref().map(ProtectionPlan::augment_count),
        wall_ms: start.elapsed().as_millis(),
    };

    if let Some(dir) = &spec.out_dir {
        let label = if matches!(spec.mode, FailureModeSpec::K(_)) {
            "SIdx"
        } else {
            "MaxS"
        };
        let table = format!(
            "{}\n{}\n",
            MetricsRow::header(label),
            metrics.to_table_line()
        );
        let txt = dir.join("report.txt");
        write_artifact(&txt, &table)?;
        artifacts.push(txt);
        let csv = format!("{}\n{}\n", MetricsRow::csv_header(), metrics.to_csv_line());
        let csv_path = dir.join("report.csv");
        write_artifact(&csv_path, &csv)?;
        artifacts.push(csv_path);
    }

    Ok(ExperimentOutcome {
        metrics,
        report,
        plan,
        artifacts,
    })
}

fn write_artifact(path: &PathBuf, content: &str) -> Result<(), ExperimentError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|source| ExperimentError::Io {
            path: parent.display().to_string(),
            source,
        })?;
    }
    fs::write(path, content).map_err(|source| ExperimentError::Io {
        path: path.display().to_string(),
        source,
    })
}
