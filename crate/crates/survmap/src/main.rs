//! `survmap` — survivable cross-layer network mapping from the command line.
//!
//! Exit codes: 0 the pipeline ran and the outcome is clean, 2 the outcome is
//! infeasible or leaves scenarios unprotected, 1 an error occurred.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use survmap::experiment::{
    run_experiment, ExperimentSpec, FailureModeSpec, InstanceSource, MetricsRow, Pipeline,
};
use survmap::failure::{gen_3srlg_set, validate_srlg_set, SrlgSet};
use survmap::heuristic::{HeuristicConfig, ScenarioOrder};
use survmap::instance::{parse_instance, render_instance, Instance};
use survmap::milp::{
    build_cutset_k_model, build_cutset_srlg_model, build_tree_k_model, build_tree_srlg_model,
    check_solution, emit_lp, ingest_solution, model_size_report, parse_solution, Family, MilpModel,
};
use survmap::net::{LogNodeId, LogicalNetwork, Mapping, PhysicalNetwork};
use survmap::topo::{builtin_logical, builtin_physical, builtin_topologies, TopologyKind};
use survmap::verify::{phys_utilization, verify_k, verify_srlg};

#[derive(Parser)]
#[command(
    name = "survmap",
    version,
    about = "Construct and verify survivable mappings of a logical network onto a physical network"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate an SRLG set for a physical topology and print the instance.
    GenSrlg(GenSrlgArgs),
    /// Run the protecting-spanning-tree heuristic and verify its plan.
    Heuristic(HeuristicArgs),
    /// Verify the mapping carried by an instance file.
    Verify(VerifyArgs),
    /// Emit a MILP/ILP model in LP format.
    EmitMilp(EmitArgs),
    /// Check a solution file against a model and rebuild its mapping.
    CheckSolution(CheckArgs),
    /// Run a full experiment pipeline and write report files.
    Report(ReportArgs),
    /// List the built-in topologies.
    Topologies,
}

#[derive(Args, Clone)]
struct SourceArgs {
    /// Instance file with pnode/pedge/lnode/ledge records.
    #[arg(long, conflicts_with_all = ["phys", "logical"])]
    instance: Option<PathBuf>,
    /// Built-in physical topology (NSF, NSF1).
    #[arg(long, requires = "logical")]
    phys: Option<String>,
    /// Built-in logical topology (CLN1..CLN4).
    #[arg(long, requires = "phys")]
    logical: Option<String>,
}

impl SourceArgs {
    fn to_source(&self) -> Result<InstanceSource, String> {
        match (&self.instance, &self.phys, &self.logical) {
            (Some(path), None, None) => Ok(InstanceSource::File(path.clone())),
            (None, Some(p), Some(l)) => Ok(InstanceSource::Builtin {
                phys: p.clone(),
                logical: l.clone(),
            }),
            _ => Err("supply either --instance FILE or --phys NAME --logical NAME".into()),
        }
    }

    fn load(&self) -> Result<(PhysicalNetwork, LogicalNetwork, Mapping, SrlgSet), String> {
        match self.to_source()? {
            InstanceSource::File(path) => {
                let text =
                    fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
                let Instance {
                    phys,
                    logical,
                    mapping,
                    srlgs,
                    ..
                } = parse_instance(&text).map_err(|e| format!("{}: {e}", path.display()))?;
                Ok((phys, logical, mapping, srlgs))
            }
            InstanceSource::Builtin { phys, logical } => {
                let p = builtin_physical(&phys)
                    .ok_or_else(|| format!("unknown built-in physical topology '{phys}'"))?;
                let l = builtin_logical(&logical, &p)
                    .ok_or_else(|| format!("unknown built-in logical topology '{logical}'"))?
                    .map_err(|e| e.to_string())?;
                let mapping = Mapping::empty(&p, &l);
                Ok((p, l, mapping, SrlgSet::empty()))
            }
        }
    }
}

#[derive(Args)]
struct GenSrlgArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Generator seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of SRLG groups to generate.
    #[arg(long, default_value_t = 7)]
    count: usize,
    /// Write the instance (with srlg records) here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FailureArgs {
    /// Check arbitrary k-link failures instead of SRLGs.
    #[arg(long)]
    k: Option<usize>,
    /// Generate this many SRLG groups (with --seed) instead of reading them
    /// from the instance.
    #[arg(long, conflicts_with = "k")]
    gen_srlg: Option<usize>,
    /// Seed for --gen-srlg.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl FailureArgs {
    fn to_mode(&self, have_instance_srlgs: bool) -> Result<FailureModeSpec, String> {
        if let Some(k) = self.k {
            return Ok(FailureModeSpec::K(k));
        }
        if let Some(count) = self.gen_srlg {
            return Ok(FailureModeSpec::SrlgGenerated {
                seed: self.seed,
                count,
            });
        }
        if have_instance_srlgs {
            return Ok(FailureModeSpec::SrlgFromInstance);
        }
        Err("no failure mode: pass --k, --gen-srlg, or an instance with srlg records".into())
    }
}

#[derive(Args)]
struct HeuristicTuning {
    /// Cost multiplier applied to a scenario's physical links.
    #[arg(long, default_value_t = 1.0e6)]
    big_m: f64,
    /// Cap on augmentation links (0 disables augmentation; default is the
    /// logical edge count).
    #[arg(long)]
    max_augment: Option<usize>,
    /// Scenario processing order: `given` or `shuffled:<seed>`.
    #[arg(long, default_value = "given", value_parser = parse_order)]
    order: ScenarioOrder,
}

impl HeuristicTuning {
    fn to_config(&self) -> HeuristicConfig {
        HeuristicConfig {
            big_m: self.big_m,
            max_augment: self.max_augment,
            order: self.order,
        }
    }
}

fn parse_order(s: &str) -> Result<ScenarioOrder, String> {
    if s == "given" {
        return Ok(ScenarioOrder::Given);
    }
    if let Some(seed) = s.strip_prefix("shuffled:") {
        let seed: u64 = seed
            .parse()
            .map_err(|_| format!("bad shuffle seed '{seed}'"))?;
        return Ok(ScenarioOrder::Shuffled(seed));
    }
    Err(format!(
        "bad order '{s}' (expected 'given' or 'shuffled:<seed>')"
    ))
}

#[derive(Args)]
struct HeuristicArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    failure: FailureArgs,
    #[command(flatten)]
    tuning: HeuristicTuning,
    /// Directory for plan and report files.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Verify against arbitrary k-link failures instead of the instance's
    /// SRLG records.
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Args)]
struct EmitArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    failure: FailureArgs,
    /// Formulation family: tree-srlg, tree-k, cut-srlg, cut-k.
    #[arg(long)]
    family: String,
    /// Root node for the tree family (default: logical node 0).
    #[arg(long)]
    root: Option<LogNodeId>,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the size accounting alongside.
    #[arg(long)]
    sizes: bool,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    failure: FailureArgs,
    /// Formulation family the solution solves.
    #[arg(long)]
    family: String,
    #[arg(long)]
    root: Option<LogNodeId>,
    /// Solution file (`name value` per line).
    #[arg(long)]
    solution: PathBuf,
    /// Drop solver cycle artifacts instead of failing.
    #[arg(long)]
    prune_cycles: bool,
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    failure: FailureArgs,
    #[command(flatten)]
    tuning: HeuristicTuning,
    /// Pipeline: heuristic, milp-emit, verify, full.
    #[arg(long, default_value = "full")]
    pipeline: String,
    /// Model family for emission pipelines.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    root: Option<LogNodeId>,
    /// Output directory for artifacts.
    #[arg(long)]
    out_dir: PathBuf,
    /// Row label; defaults to the topology names.
    #[arg(long)]
    name: Option<String>,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.cmd {
        Cmd::Topologies => {
            for info in builtin_topologies() {
                println!(
                    "{:<6} {:<8} {:>3} nodes {:>3} edges",
                    info.name,
                    match info.kind {
                        TopologyKind::Physical => "physical",
                        TopologyKind::Logical => "logical",
                    },
                    info.nodes,
                    info.edges
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::GenSrlg(args) => {
            let (phys, logical, mapping, _) = args.source.load()?;
            let srlgs = gen_3srlg_set(&phys, args.seed, args.count).map_err(|e| e.to_string())?;
            let report = validate_srlg_set(&phys, &srlgs);
            if !report.all_pass() {
                return Err(format!("generated set failed validation:\n{report}"));
            }
            let text = render_instance(&phys, &logical, Some(&mapping), Some(&srlgs));
            match &args.out {
                Some(path) => fs::write(path, text).map_err(|e| e.to_string())?,
                None => print!("{text}"),
            }
            eprintln!("generated {} groups (seed {})", srlgs.len(), args.seed);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Heuristic(args) => {
            let (_, _, _, inst_srlgs) = args.source.load()?;
            let mode = args.failure.to_mode(!inst_srlgs.is_empty())?;
            let spec = ExperimentSpec {
                name: source_label(&args.source),
                source: args.source.to_source()?,
                mode,
                pipeline: Pipeline::Heuristic,
                out_dir: args.out_dir.clone(),
                heuristic: args.tuning.to_config(),
                family: None,
                root: None,
            };
            let outcome = run_experiment(&spec).map_err(|e| e.to_string())?;
            print_metrics(&outcome.metrics, &spec.mode);
            if let Some(plan) = &outcome.plan {
                for w in &plan.warnings {
                    eprintln!("warning: {w}");
                }
            }
            Ok(outcome_code(outcome.metrics.survivable))
        }
        Cmd::Verify(args) => {
            let (phys, logical, mapping, srlgs) = args.source.load()?;
            if !mapping.is_complete() {
                return Err("instance carries no complete mapping to verify".into());
            }
            let report = match args.k {
                Some(k) => verify_k(&phys, &logical, &mapping, k).map_err(|e| e.to_string())?,
                None => {
                    if srlgs.is_empty() {
                        return Err(
                            "instance has no srlg records; pass --k for k-failure mode".into()
                        );
                    }
                    verify_srlg(&logical, &mapping, &srlgs).map_err(|e| e.to_string())?
                }
            };
            let label = if args.k.is_some() { "SIdx" } else { "MaxS" };
            print!("{}", report.to_table(label));
            if !report.failed_scenarios.is_empty() {
                println!("unprotected: {}", report.failed_scenarios.join(", "));
            }
            Ok(outcome_code(report.survivable))
        }
        Cmd::EmitMilp(args) => {
            let family = Family::from_str(&args.family)?;
            let (phys, logical, _, inst_srlgs) = args.source.load()?;
            let model = build_model(
                &args.failure,
                family,
                args.root,
                &phys,
                &logical,
                &inst_srlgs,
            )?;
            let text = emit_lp(&model);
            match &args.out {
                Some(path) => fs::write(path, text).map_err(|e| e.to_string())?,
                None => print!("{text}"),
            }
            if args.sizes {
                eprint!("{}", model_size_report(&model));
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::CheckSolution(args) => {
            let family = Family::from_str(&args.family)?;
            let (phys, logical, _, inst_srlgs) = args.source.load()?;
            let model = build_model(
                &args.failure,
                family,
                args.root,
                &phys,
                &logical,
                &inst_srlgs,
            )?;
            let text = fs::read_to_string(&args.solution)
                .map_err(|e| format!("{}: {e}", args.solution.display()))?;
            let values = parse_solution(&text).map_err(|e| e.to_string())?;
            let report = check_solution(&model, &values).map_err(|e| e.to_string())?;
            print!("{report}");
            let mapping = ingest_solution(&model, &phys, &logical, &values, args.prune_cycles)
                .map_err(|e| e.to_string())?;
            println!(
                "reconstructed mapping: {} physical hops",
                phys_utilization(&mapping).map_err(|e| e.to_string())?
            );
            Ok(outcome_code(report.is_feasible()))
        }
        Cmd::Report(args) => {
            let (_, _, _, inst_srlgs) = args.source.load()?;
            let mode = args.failure.to_mode(!inst_srlgs.is_empty())?;
            let pipeline = match args.pipeline.as_str() {
                "heuristic" => Pipeline::Heuristic,
                "milp-emit" => Pipeline::MilpEmit,
                "verify" => Pipeline::Verify,
                "full" => Pipeline::Full,
                other => return Err(format!("unknown pipeline '{other}'")),
            };
            let family = match &args.family {
                Some(f) => Some(Family::from_str(f)?),
                None => None,
            };
            let spec = ExperimentSpec {
                name: args
                    .name
                    .clone()
                    .unwrap_or_else(|| source_label(&args.source)),
                source: args.source.to_source()?,
                mode,
                pipeline,
                out_dir: Some(args.out_dir.clone()),
                heuristic: args.tuning.to_config(),
                family,
                root: args.root,
            };
            let outcome = run_experiment(&spec).map_err(|e| e.to_string())?;
            print_metrics(&outcome.metrics, &spec.mode);
            for path in &outcome.artifacts {
                eprintln!("wrote {}", path.display());
            }
            if pipeline == Pipeline::MilpEmit {
                return Ok(ExitCode::SUCCESS);
            }
            Ok(outcome_code(outcome.metrics.survivable))
        }
    }
}

fn build_model(
    failure: &FailureArgs,
    family: Family,
    root: Option<LogNodeId>,
    phys: &PhysicalNetwork,
    logical: &LogicalNetwork,
    inst_srlgs: &SrlgSet,
) -> Result<MilpModel, String> {
    let mode = failure.to_mode(!inst_srlgs.is_empty())?;
    let srlgs = match &mode {
        FailureModeSpec::SrlgFromInstance => Some(inst_srlgs.clone()),
        FailureModeSpec::SrlgGenerated { seed, count } => {
            Some(gen_3srlg_set(phys, *seed, *count).map_err(|e| e.to_string())?)
        }
        FailureModeSpec::K(_) => None,
    };
    let model = match (family, &mode) {
        (Family::TreeSrlg, _) => {
            let set =
                srlgs.ok_or("tree-srlg needs SRLG groups (instance records or --gen-srlg)")?;
            build_tree_srlg_model(phys, logical, &set, root)
        }
        (Family::CutSrlg, _) => {
            let set = srlgs.ok_or("cut-srlg needs SRLG groups (instance records or --gen-srlg)")?;
            build_cutset_srlg_model(phys, logical, &set)
        }
        (Family::TreeK, FailureModeSpec::K(k)) => build_tree_k_model(phys, logical, *k, root),
        (Family::CutK, FailureModeSpec::K(k)) => build_cutset_k_model(phys, logical, *k),
        (f, _) => return Err(format!("family {f} needs --k")),
    };
    model.map_err(|e| e.to_string())
}

fn source_label(source: &SourceArgs) -> String {
    match (&source.instance, &source.phys, &source.logical) {
        (Some(path), _, _) => path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string()),
        (None, Some(p), Some(l)) => format!("{p}+{l}"),
        _ => "instance".into(),
    }
}

fn print_metrics(metrics: &MetricsRow, mode: &FailureModeSpec) {
    let label = if matches!(mode, FailureModeSpec::K(_)) {
        "SIdx"
    } else {
        "MaxS"
    };
    println!("{}", MetricsRow::header(label));
    println!("{}", metrics.to_table_line());
    eprintln!("wall time: {} ms", metrics.wall_ms);
}

fn outcome_code(clean: bool) -> ExitCode {
    if clean {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}
