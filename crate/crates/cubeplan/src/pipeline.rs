//! The end-to-end pipeline behind the command line: dataset generation,
//! model learning, planning over instance sets, environment-level
//! validation, and cube-graph analysis. Every function here is a thin
//! orchestration layer over the library modules so the same workflow is
//! scriptable without the binary.
//!
//! File formats: transition datasets and instance sets are JSON Lines with a
//! header object; learned domains are PDDL; plan files hold one `(a<k>)`
//! line per step plus a trailing cost comment; trace files hold one bit
//! string per line starting at the initial state; tables are CSV.

use std::collections::HashSet;
use std::fs;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ama::{
    learn_model, memorization_stats, LabelSource, LearnOptions, LearnedModel, PreconditionMode,
};
use crate::bits::BitState;
use crate::cubegraph::{min_diff_assignment, verify_bound, Graph, SearchCaps};
use crate::envs::{
    exhaustive_transitions, gen_instances, sample_transitions, Encoding, Env, EnvValidation,
    InstanceSet, TransitionDataset, DEFAULT_STATE_CAP,
};
use crate::pddl::{emit_domain, emit_problem, parse_domain};
use crate::search::{astar, gbfs, make_heuristic, HeuristicKind, Limits, Outcome, SearchStats};
use crate::strips::{ActionSchema, Condition, GroundTask, Plan, PlanValidation};

#[derive(Debug, Error)]
pub enum PipelineError {
    /// Bad input or configuration; maps to exit code 2.
    #[error("{0}")]
    Usage(String),
    /// Environment failures; maps to exit code 1.
    #[error("io error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl PipelineError {
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Usage(_) => 2,
            PipelineError::Io { .. } => 1,
        }
    }

    fn usage(e: impl std::fmt::Display) -> Self {
        PipelineError::Usage(e.to_string())
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> PipelineError + '_ {
    move |source| PipelineError::Io { path: path.to_path_buf(), source }
}

/// Encoding selection shared by the commands: environment name plus optional
/// scrambling transforms proving representation-agnosticism.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct EncodingConfig {
    pub env: String,
    #[serde(default)]
    pub perm_seed: Option<u64>,
    #[serde(default)]
    pub mask_seed: Option<u64>,
}

impl EncodingConfig {
    pub fn plain(env: &str) -> Self {
        EncodingConfig { env: env.to_string(), perm_seed: None, mask_seed: None }
    }

    pub fn build(&self) -> Result<Encoding, PipelineError> {
        let env = Env::parse_name(&self.env).map_err(PipelineError::usage)?;
        let mut enc = Encoding::ground_truth(env);
        if let Some(seed) = self.perm_seed {
            enc = enc
                .with_permutation(Encoding::derive_permutation(env, seed))
                .expect("derived permutation is a bijection");
        }
        if let Some(seed) = self.mask_seed {
            enc = enc
                .with_mask(Encoding::derive_mask(env, seed))
                .expect("derived mask has the right width");
        }
        Ok(enc)
    }
}

// ---------------------------------------------------------------- gen

#[derive(Clone, Copy, Debug)]
pub enum GenMode {
    Sample { count: usize },
    Exhaustive,
}

#[derive(Debug, Serialize)]
pub struct GenSummary {
    pub num_bits: usize,
    pub count: usize,
    pub distinct_signatures: usize,
    pub path: PathBuf,
}

/// Generates a transition dataset file and reports its shape.
pub fn cmd_gen(
    encoding: &EncodingConfig,
    mode: GenMode,
    seed: u64,
    out: &Path,
) -> Result<GenSummary, PipelineError> {
    let enc = encoding.build()?;
    let dataset = match mode {
        GenMode::Sample { count } => {
            if count == 0 {
                return Err(PipelineError::Usage("sample count must be at least 1".into()));
            }
            sample_transitions(&enc, count, seed).map_err(PipelineError::usage)?
        }
        GenMode::Exhaustive => {
            exhaustive_transitions(&enc, DEFAULT_STATE_CAP).map_err(PipelineError::usage)?
        }
    };
    let distinct = crate::ama::cluster_by_signature(&dataset, None)
        .expect("unbudgeted clustering cannot fail")
        .len();
    let file = fs::File::create(out).map_err(io_err(out))?;
    let mut writer = BufWriter::new(file);
    dataset.write_jsonl(&mut writer).map_err(PipelineError::usage)?;
    writer.flush().map_err(io_err(out))?;
    Ok(GenSummary {
        num_bits: dataset.num_bits,
        count: dataset.len(),
        distinct_signatures: distinct,
        path: out.to_path_buf(),
    })
}

#[derive(Serialize, Deserialize)]
struct InstanceHeader {
    #[serde(rename = "F")]
    num_bits: usize,
    env: String,
    seed: u64,
    l: usize,
}

#[derive(Serialize, Deserialize)]
struct InstanceLine {
    init: String,
    goal: String,
}

#[derive(Debug, Serialize)]
pub struct InstancesSummary {
    pub count: usize,
    pub depth: usize,
    pub frontier_size: usize,
    pub with_replacement: bool,
    pub path: PathBuf,
}

/// Generates planning instances at exact goal distance `depth` and writes
/// them as JSONL.
pub fn cmd_gen_instances(
    encoding: &EncodingConfig,
    depth: usize,
    count: usize,
    seed: u64,
    out: &Path,
) -> Result<InstancesSummary, PipelineError> {
    let enc = encoding.build()?;
    let set = gen_instances(&enc, depth, count, seed).map_err(PipelineError::usage)?;
    write_instances(&enc, &set, seed, out)?;
    Ok(InstancesSummary {
        count: set.instances.len(),
        depth,
        frontier_size: set.frontier_size,
        with_replacement: set.with_replacement,
        path: out.to_path_buf(),
    })
}

fn write_instances(
    enc: &Encoding,
    set: &InstanceSet,
    seed: u64,
    out: &Path,
) -> Result<(), PipelineError> {
    let file = fs::File::create(out).map_err(io_err(out))?;
    let mut w = BufWriter::new(file);
    let header = InstanceHeader {
        num_bits: enc.num_bits(),
        env: enc.env.name(),
        seed,
        l: set.depth,
    };
    writeln!(w, "{}", serde_json::to_string(&header).expect("header serializes")).map_err(io_err(out))?;
    for (init, goal) in &set.instances {
        let line = InstanceLine { init: init.to_string(), goal: goal.to_string() };
        writeln!(w, "{}", serde_json::to_string(&line).expect("line serializes")).map_err(io_err(out))?;
    }
    w.flush().map_err(io_err(out))
}

pub struct LoadedInstances {
    pub num_bits: usize,
    pub env: String,
    pub depth: usize,
    pub instances: Vec<(BitState, BitState)>,
}

pub fn read_instances(path: &Path) -> Result<LoadedInstances, PipelineError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let mut lines = text.lines();
    let header: InstanceHeader = serde_json::from_str(
        lines.next().ok_or_else(|| PipelineError::Usage("empty instance file".into()))?,
    )
    .map_err(PipelineError::usage)?;
    let mut instances = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let parsed: InstanceLine = serde_json::from_str(line).map_err(PipelineError::usage)?;
        let init = BitState::parse(&parsed.init).map_err(PipelineError::usage)?;
        let goal = BitState::parse(&parsed.goal).map_err(PipelineError::usage)?;
        if init.len() != header.num_bits || goal.len() != header.num_bits {
            return Err(PipelineError::Usage("instance width does not match header".into()));
        }
        instances.push((init, goal));
    }
    Ok(LoadedInstances {
        num_bits: header.num_bits,
        env: header.env,
        depth: header.l,
        instances,
    })
}

// ---------------------------------------------------------------- learn

#[derive(Clone, Debug)]
pub struct LearnConfig {
    pub mode: PreconditionMode,
    pub label_source: LabelSource,
    pub budget: Option<usize>,
    pub domain_name: String,
}

impl Default for LearnConfig {
    fn default() -> Self {
        LearnConfig {
            mode: PreconditionMode::Both,
            label_source: LabelSource::Signature,
            budget: None,
            domain_name: "learned".into(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct LearnSummary {
    pub num_bits: usize,
    pub actions: usize,
    pub samples_per_action: Vec<usize>,
    pub warnings: Vec<String>,
    pub domain_path: PathBuf,
    pub diagnostics_path: PathBuf,
}

/// Learns a model from a dataset file and writes `domain.pddl` plus a
/// `diagnostics.json` report into `out_dir`.
pub fn cmd_learn(
    dataset_path: &Path,
    config: &LearnConfig,
    out_dir: &Path,
) -> Result<LearnSummary, PipelineError> {
    let dataset = load_dataset(dataset_path)?;
    let options = LearnOptions {
        mode: config.mode,
        label_source: config.label_source,
        budget: config.budget,
    };
    let model = learn_model(&dataset, &options).map_err(PipelineError::usage)?;
    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let domain_path = out_dir.join("domain.pddl");
    let text = emit_domain(&config.domain_name, model.num_props, &model.schemas);
    fs::write(&domain_path, text).map_err(io_err(&domain_path))?;

    #[derive(Serialize)]
    struct Diagnostics<'a> {
        actions: usize,
        samples_per_action: &'a [usize],
        warnings: &'a [String],
    }
    let diagnostics_path = out_dir.join("diagnostics.json");
    let diag = Diagnostics {
        actions: model.num_actions(),
        samples_per_action: &model.sample_counts,
        warnings: &model.warnings,
    };
    let mut json = serde_json::to_string_pretty(&diag).expect("diagnostics serialize");
    json.push('\n');
    fs::write(&diagnostics_path, json).map_err(io_err(&diagnostics_path))?;
    Ok(LearnSummary {
        num_bits: model.num_props,
        actions: model.num_actions(),
        samples_per_action: model.sample_counts.clone(),
        warnings: model.warnings.clone(),
        domain_path,
        diagnostics_path,
    })
}

pub fn load_dataset(path: &Path) -> Result<TransitionDataset, PipelineError> {
    let file = fs::File::open(path).map_err(io_err(path))?;
    TransitionDataset::read_jsonl(BufReader::new(file)).map_err(PipelineError::usage)
}

// ---------------------------------------------------------------- plan

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchAlgo {
    AStar,
    Gbfs,
}

impl FromStr for SearchAlgo {
    type Err = PipelineError;

    fn from_str(s: &str) -> Result<Self, PipelineError> {
        match s {
            "astar" => Ok(SearchAlgo::AStar),
            "gbfs" => Ok(SearchAlgo::Gbfs),
            other => Err(PipelineError::Usage(format!(
                "unknown search algorithm {other:?} (expected astar or gbfs)"
            ))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceRow {
    pub instance: usize,
    pub found: bool,
    /// Plan validity against the model itself.
    pub valid: bool,
    /// Found with cost exactly the instance's goal distance.
    pub optimal: bool,
    pub cost: Option<usize>,
    pub expanded: u64,
    pub generated: u64,
    pub evaluated: u64,
    pub seconds: f64,
}

#[derive(Debug)]
pub struct PlanSummary {
    pub rows: Vec<InstanceRow>,
    pub found: usize,
    pub valid: usize,
    pub optimal: usize,
    pub csv_path: PathBuf,
}

#[derive(Clone, Debug)]
pub struct PlanConfig {
    pub heuristic: HeuristicKind,
    pub algo: SearchAlgo,
    pub limits: Limits,
    pub jobs: usize,
}

impl Default for PlanConfig {
    fn default() -> Self {
        PlanConfig {
            heuristic: HeuristicKind::LmCut,
            algo: SearchAlgo::AStar,
            limits: Limits::default(),
            jobs: 1,
        }
    }
}

/// One planner run over one instance; the goal pins the full target state.
pub fn solve_instance(
    actions: &[ActionSchema],
    num_bits: usize,
    init: &BitState,
    goal: &BitState,
    config: &PlanConfig,
) -> Result<(Option<Plan>, SearchStats, GroundTask), PipelineError> {
    let task = GroundTask::new(
        num_bits,
        actions.to_vec(),
        init.clone(),
        Condition::full_state(goal),
    )
    .map_err(PipelineError::usage)?;
    let mut heuristic = make_heuristic(config.heuristic, &task).map_err(PipelineError::usage)?;
    let result = match config.algo {
        SearchAlgo::AStar => astar(&task, heuristic.as_mut(), &config.limits),
        SearchAlgo::Gbfs => gbfs(&task, heuristic.as_mut(), &config.limits),
    };
    let plan = match result.outcome {
        Outcome::Solved(plan) => Some(plan),
        Outcome::Unsolvable | Outcome::ResourceExceeded => None,
    };
    Ok((plan, result.stats, task))
}

/// Runs `work(i)` for `0..total`, optionally across threads; outputs are
/// always merged back in instance order.
fn run_indexed<T: Send>(
    total: usize,
    jobs: usize,
    work: impl Fn(usize) -> Result<T, PipelineError> + Sync,
) -> Result<Vec<T>, PipelineError> {
    let jobs = jobs.max(1).min(total.max(1));
    if jobs <= 1 {
        return (0..total).map(work).collect();
    }
    let mut outputs: Vec<Option<Result<T, PipelineError>>> = Vec::new();
    outputs.resize_with(total, || None);
    std::thread::scope(|scope| {
        let work = &work;
        let handles: Vec<_> = (0..jobs)
            .map(|w| {
                scope.spawn(move || {
                    (w..total)
                        .step_by(jobs)
                        .map(|i| (i, work(i)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for handle in handles {
            for (i, result) in handle.join().expect("worker thread panicked") {
                outputs[i] = Some(result);
            }
        }
    });
    outputs
        .into_iter()
        .map(|slot| slot.expect("every instance is scheduled"))
        .collect()
}

/// Plans every instance of a file against a PDDL domain, writing problem,
/// plan, and trace files plus a per-instance CSV into `out_dir`.
pub fn cmd_plan(
    domain_path: &Path,
    instances_path: &Path,
    config: &PlanConfig,
    out_dir: &Path,
) -> Result<PlanSummary, PipelineError> {
    let domain_text = fs::read_to_string(domain_path).map_err(io_err(domain_path))?;
    let domain = parse_domain(&domain_text).map_err(PipelineError::usage)?;
    let loaded = read_instances(instances_path)?;
    if loaded.num_bits != domain.num_props() {
        return Err(PipelineError::Usage(format!(
            "instance width {} does not match domain with {} predicates",
            loaded.num_bits,
            domain.num_props()
        )));
    }
    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;

    let results = run_indexed(loaded.instances.len(), config.jobs, |i| {
        let (init, goal) = &loaded.instances[i];
        solve_instance(&domain.actions, domain.num_props(), init, goal, config)
    })?;

    let mut rows = Vec::new();
    let mut found = 0;
    let mut valid = 0;
    let mut optimal = 0;
    for (i, (plan, stats, task)) in results.iter().enumerate() {
        let problem_path = out_dir.join(format!("problem_{i:03}.pddl"));
        let problem_text = emit_problem(
            &format!("instance-{i:03}"),
            &domain.name,
            &loaded.instances[i].0,
            &task.goal,
        );
        fs::write(&problem_path, problem_text).map_err(io_err(&problem_path))?;
        let mut row = InstanceRow {
            instance: i,
            found: false,
            valid: false,
            optimal: false,
            cost: None,
            expanded: stats.expanded,
            generated: stats.generated,
            evaluated: stats.evaluated,
            seconds: stats.wall_seconds,
        };
        if let Some(plan) = plan {
            row.found = true;
            row.cost = Some(plan.cost());
            row.valid = task.validate_plan(plan) == Ok(PlanValidation::Valid);
            row.optimal = plan.cost() == loaded.depth;
            write_plan_files(out_dir, i, plan, task)?;
        }
        found += row.found as usize;
        valid += row.valid as usize;
        optimal += row.optimal as usize;
        rows.push(row);
    }

    let csv_path = out_dir.join("stats.csv");
    write_plan_csv(&csv_path, &rows)?;
    Ok(PlanSummary { rows, found, valid, optimal, csv_path })
}

fn write_plan_files(
    out_dir: &Path,
    index: usize,
    plan: &Plan,
    task: &GroundTask,
) -> Result<(), PipelineError> {
    let plan_path = out_dir.join(format!("plan_{index:03}.plan"));
    let mut text = String::new();
    for &step in &plan.steps {
        text.push_str(&format!("({})\n", task.actions[step].name));
    }
    text.push_str(&format!("; cost = {} (unit cost)\n", plan.cost()));
    fs::write(&plan_path, text).map_err(io_err(&plan_path))?;

    let trace_path = out_dir.join(format!("plan_{index:03}.trace"));
    let mut trace = String::new();
    let mut state = task.init.clone();
    trace.push_str(&format!("{state}\n"));
    for &step in &plan.steps {
        state = task.actions[step].apply(&state);
        trace.push_str(&format!("{state}\n"));
    }
    fs::write(&trace_path, trace).map_err(io_err(&trace_path))
}

fn write_plan_csv(path: &Path, rows: &[InstanceRow]) -> Result<(), PipelineError> {
    let mut text = String::from("instance,found,valid,optimal,cost,expanded,generated,evaluated,seconds\n");
    for row in rows {
        text.push_str(&format!(
            "{},{},{},{},{},{},{},{},{:.3}\n",
            row.instance,
            row.found,
            row.valid,
            row.optimal,
            row.cost.map_or(String::new(), |c| c.to_string()),
            row.expanded,
            row.generated,
            row.evaluated,
            row.seconds,
        ));
    }
    fs::write(path, text).map_err(io_err(path))
}

// ---------------------------------------------------------------- validate

#[derive(Debug, Serialize)]
pub struct TraceReport {
    pub file: String,
    pub valid: bool,
    pub failed_step: Option<usize>,
    pub reason: Option<String>,
    pub states_seen: Option<usize>,
    pub transitions_seen: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct ValidateSummary {
    pub traces: Vec<TraceReport>,
    pub valid: usize,
    /// Histogram over traces of intermediate states found in the reference
    /// dataset (index = count, value = number of traces).
    pub states_seen_histogram: Vec<usize>,
    pub transitions_seen_histogram: Vec<usize>,
}

/// Validates latent-state trace files against the real environment and, when
/// a reference dataset is given, reports how much of each trace was already
/// present in it.
pub fn cmd_validate(
    encoding: &EncodingConfig,
    trace_paths: &[PathBuf],
    reference: Option<&Path>,
    out: Option<&Path>,
) -> Result<ValidateSummary, PipelineError> {
    let enc = encoding.build()?;
    let dataset = reference.map(load_dataset).transpose()?;
    let mut traces = Vec::new();
    let mut valid = 0;
    let mut states_hist: Vec<usize> = Vec::new();
    let mut transitions_hist: Vec<usize> = Vec::new();
    for path in trace_paths {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        let states: Vec<BitState> = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(BitState::parse)
            .collect::<Result<_, _>>()
            .map_err(PipelineError::usage)?;
        if states.is_empty() {
            return Err(PipelineError::Usage(format!("{} is empty", path.display())));
        }
        let verdict = crate::envs::validate_plan_in_env(&enc, &states[0], &states[1..]);
        let mut report = TraceReport {
            file: path.display().to_string(),
            valid: verdict == EnvValidation::Valid,
            failed_step: None,
            reason: None,
            states_seen: None,
            transitions_seen: None,
        };
        if let EnvValidation::Invalid { step, reason } = verdict {
            report.failed_step = Some(step);
            report.reason = Some(format!("{reason:?}"));
        }
        valid += report.valid as usize;
        if let Some(dataset) = &dataset {
            let intermediate = if states.len() > 2 { &states[1..states.len() - 1] } else { &[] };
            let pairs: Vec<(BitState, BitState)> =
                states.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
            let stats = memorization_stats(intermediate, &pairs, dataset);
            report.states_seen = Some(stats.states_seen);
            report.transitions_seen = Some(stats.transitions_seen);
            bump(&mut states_hist, stats.states_seen);
            bump(&mut transitions_hist, stats.transitions_seen);
        }
        traces.push(report);
    }
    let summary = ValidateSummary {
        traces,
        valid,
        states_seen_histogram: states_hist,
        transitions_seen_histogram: transitions_hist,
    };
    if let Some(out) = out {
        let mut json = serde_json::to_string_pretty(&summary).expect("summary serializes");
        json.push('\n');
        fs::write(out, json).map_err(io_err(out))?;
    }
    Ok(summary)
}

fn bump(hist: &mut Vec<usize>, bucket: usize) {
    if hist.len() <= bucket {
        hist.resize(bucket + 1, 0);
    }
    hist[bucket] += 1;
}

// ---------------------------------------------------------------- analyze

#[derive(Debug, Serialize)]
pub struct AnalyzeReport {
    pub nodes: usize,
    pub edges: usize,
    pub directed: bool,
    pub delta: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<usize>,
    #[serde(rename = "minD")]
    pub min_d: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_holds: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vizing_holds: Option<bool>,
    pub witness: Vec<String>,
}

/// Analyzes a graph file (JSON, or DOT for `.dot`/`.gv`) at the given bit
/// width: chromatic index, minimum difference-family size, and the bound
/// between them. Directed graphs skip the coloring side.
pub fn cmd_analyze(graph_path: &Path, num_bits: usize) -> Result<AnalyzeReport, PipelineError> {
    let text = fs::read_to_string(graph_path).map_err(io_err(graph_path))?;
    let graph = if graph_path.extension().is_some_and(|e| e == "dot" || e == "gv") {
        Graph::from_dot(&text)
    } else {
        Graph::from_json(&text)
    }
    .map_err(PipelineError::usage)?;
    let caps = SearchCaps::default();
    if graph.is_directed() {
        let (assignment, min_d) =
            min_diff_assignment(&graph, num_bits, &caps).map_err(PipelineError::usage)?;
        Ok(AnalyzeReport {
            nodes: graph.num_nodes(),
            edges: graph.num_edges(),
            directed: true,
            delta: graph.max_degree(),
            c: None,
            min_d,
            bound_holds: None,
            vizing_holds: None,
            witness: assignment.codes.iter().map(|c| c.to_string()).collect(),
        })
    } else {
        let report = verify_bound(&graph, num_bits, &caps).map_err(PipelineError::usage)?;
        Ok(AnalyzeReport {
            nodes: graph.num_nodes(),
            edges: graph.num_edges(),
            directed: false,
            delta: report.delta,
            c: Some(report.c),
            min_d: report.min_d,
            bound_holds: Some(report.bound_holds),
            vizing_holds: Some(report.vizing_holds),
            witness: report.witness,
        })
    }
}

// ---------------------------------------------------------------- exp

/// Declarative end-to-end experiment: sample (or exhaust) transitions, learn
/// a model, generate instances, plan with each heuristic, and validate every
/// found plan against the real environment.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub env: String,
    #[serde(default)]
    pub perm_seed: Option<u64>,
    #[serde(default)]
    pub mask_seed: Option<u64>,
    /// Sample size; `None` means exhaustive enumeration.
    #[serde(default)]
    pub samples: Option<usize>,
    pub depth: usize,
    pub instances: usize,
    pub heuristics: Vec<String>,
    #[serde(default = "default_algo")]
    pub search: String,
    #[serde(default = "default_mode")]
    pub mode: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub max_expansions: Option<u64>,
    #[serde(default = "default_seconds")]
    pub max_seconds: Option<f64>,
    #[serde(default = "default_states")]
    pub max_states: Option<usize>,
    #[serde(default = "default_jobs")]
    pub jobs: usize,
}

fn default_algo() -> String {
    "astar".into()
}

fn default_mode() -> String {
    "both".into()
}

fn default_seconds() -> Option<f64> {
    Some(900.0)
}

fn default_states() -> Option<usize> {
    Some(10_000_000)
}

fn default_jobs() -> usize {
    1
}

pub fn parse_precondition_mode(s: &str) -> Result<PreconditionMode, PipelineError> {
    match s {
        "both" => Ok(PreconditionMode::Both),
        "positive-only" | "positive_only" => Ok(PreconditionMode::PositiveOnly),
        other => Err(PipelineError::Usage(format!(
            "unknown precondition mode {other:?} (expected both or positive-only)"
        ))),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HeuristicAggregate {
    pub heuristic: String,
    pub found: usize,
    pub valid_model: usize,
    pub valid_env: usize,
    pub optimal: usize,
    pub mean_expanded: f64,
    pub mean_seconds: f64,
    pub mean_states_seen: f64,
    pub mean_transitions_seen: f64,
}

#[derive(Debug)]
pub struct ExperimentSummary {
    pub num_bits: usize,
    pub actions: usize,
    pub instances: usize,
    pub aggregates: Vec<HeuristicAggregate>,
    pub results_csv: PathBuf,
    pub summary_csv: PathBuf,
}

pub struct ExperimentRow {
    pub instance: usize,
    pub found: bool,
    pub valid_model: bool,
    pub valid_env: bool,
    pub optimal: bool,
    pub cost: Option<usize>,
    pub expanded: u64,
    pub generated: u64,
    pub evaluated: u64,
    pub seconds: f64,
    pub states_seen: Option<usize>,
    pub transitions_seen: Option<usize>,
    pub plan: Option<Plan>,
    pub task: GroundTask,
}

pub fn cmd_exp(spec: &ExperimentSpec, out_dir: &Path) -> Result<ExperimentSummary, PipelineError> {
    let encoding_config = EncodingConfig {
        env: spec.env.clone(),
        perm_seed: spec.perm_seed,
        mask_seed: spec.mask_seed,
    };
    let enc = encoding_config.build()?;
    let algo = SearchAlgo::from_str(&spec.search)?;
    let mode = parse_precondition_mode(&spec.mode)?;
    let heuristics: Vec<HeuristicKind> = spec
        .heuristics
        .iter()
        .map(|h| HeuristicKind::from_str(h).map_err(PipelineError::usage))
        .collect::<Result<_, _>>()?;
    if heuristics.is_empty() {
        return Err(PipelineError::Usage("experiment needs at least one heuristic".into()));
    }
    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;

    let dataset = match spec.samples {
        Some(count) => sample_transitions(&enc, count, spec.seed).map_err(PipelineError::usage)?,
        None => exhaustive_transitions(&enc, DEFAULT_STATE_CAP).map_err(PipelineError::usage)?,
    };
    let dataset_path = out_dir.join("dataset.jsonl");
    {
        let file = fs::File::create(&dataset_path).map_err(io_err(&dataset_path))?;
        let mut w = BufWriter::new(file);
        dataset.write_jsonl(&mut w).map_err(PipelineError::usage)?;
        w.flush().map_err(io_err(&dataset_path))?;
    }

    let options = LearnOptions { mode, label_source: LabelSource::Signature, budget: None };
    let model = learn_model(&dataset, &options).map_err(PipelineError::usage)?;
    let domain_path = out_dir.join("domain.pddl");
    fs::write(&domain_path, emit_domain("learned", model.num_props, &model.schemas))
        .map_err(io_err(&domain_path))?;

    let set = gen_instances(&enc, spec.depth, spec.instances, spec.seed).map_err(PipelineError::usage)?;
    let instances_path = out_dir.join("instances.jsonl");
    write_instances(&enc, &set, spec.seed, &instances_path)?;

    let limits = Limits {
        max_expansions: spec.max_expansions,
        max_seconds: spec.max_seconds,
        max_states: spec.max_states,
    };
    let mut results_text = String::from(
        "heuristic,instance,found,valid_model,valid_env,optimal,cost,expanded,generated,evaluated,seconds,states_seen,transitions_seen\n",
    );
    let mut aggregates = Vec::new();
    for kind in &heuristics {
        let config = PlanConfig { heuristic: *kind, algo, limits, jobs: spec.jobs };
        let rows = run_experiment_heuristic(&model, &enc, &set, &dataset, &config)?;
        let hdir = out_dir.join(kind.name());
        fs::create_dir_all(&hdir).map_err(io_err(&hdir))?;
        let mut agg = HeuristicAggregate {
            heuristic: kind.name().into(),
            found: 0,
            valid_model: 0,
            valid_env: 0,
            optimal: 0,
            mean_expanded: 0.0,
            mean_seconds: 0.0,
            mean_states_seen: 0.0,
            mean_transitions_seen: 0.0,
        };
        let mut mem_count = 0usize;
        for row in &rows {
            agg.found += row.found as usize;
            agg.valid_model += row.valid_model as usize;
            agg.valid_env += row.valid_env as usize;
            agg.optimal += row.optimal as usize;
            agg.mean_expanded += row.expanded as f64;
            agg.mean_seconds += row.seconds;
            if let (Some(s), Some(t)) = (row.states_seen, row.transitions_seen) {
                agg.mean_states_seen += s as f64;
                agg.mean_transitions_seen += t as f64;
                mem_count += 1;
            }
            if let Some(plan) = &row.plan {
                write_plan_files(&hdir, row.instance, plan, &row.task)?;
            }
            results_text.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{:.3},{},{}\n",
                kind.name(),
                row.instance,
                row.found,
                row.valid_model,
                row.valid_env,
                row.optimal,
                row.cost.map_or(String::new(), |c| c.to_string()),
                row.expanded,
                row.generated,
                row.evaluated,
                row.seconds,
                row.states_seen.map_or(String::new(), |c| c.to_string()),
                row.transitions_seen.map_or(String::new(), |c| c.to_string()),
            ));
        }
        let n = rows.len().max(1) as f64;
        agg.mean_expanded /= n;
        agg.mean_seconds /= n;
        if mem_count > 0 {
            agg.mean_states_seen /= mem_count as f64;
            agg.mean_transitions_seen /= mem_count as f64;
        }
        aggregates.push(agg);
    }

    let results_csv = out_dir.join("results.csv");
    fs::write(&results_csv, results_text).map_err(io_err(&results_csv))?;
    let summary_csv = out_dir.join("summary.csv");
    let mut summary_text = String::from(
        "heuristic,f,v_model,v_env,o,mean_expanded,mean_seconds,mean_states_seen,mean_transitions_seen\n",
    );
    for agg in &aggregates {
        summary_text.push_str(&format!(
            "{},{},{},{},{},{:.1},{:.3},{:.3},{:.3}\n",
            agg.heuristic,
            agg.found,
            agg.valid_model,
            agg.valid_env,
            agg.optimal,
            agg.mean_expanded,
            agg.mean_seconds,
            agg.mean_states_seen,
            agg.mean_transitions_seen,
        ));
    }
    fs::write(&summary_csv, summary_text).map_err(io_err(&summary_csv))?;
    Ok(ExperimentSummary {
        num_bits: model.num_props,
        actions: model.num_actions(),
        instances: set.instances.len(),
        aggregates,
        results_csv,
        summary_csv,
    })
}

/// Plans and validates all instances of one experiment under one heuristic;
/// public so the acceptance suite and examples can reuse the exact protocol.
pub fn run_experiment_heuristic(
    model: &LearnedModel,
    enc: &Encoding,
    set: &InstanceSet,
    dataset: &TransitionDataset,
    config: &PlanConfig,
) -> Result<Vec<ExperimentRow>, PipelineError> {
    let actions = model.planning_schemas();
    run_indexed(set.instances.len(), config.jobs, |i| {
        let (init, goal) = &set.instances[i];
        let (plan, stats, task) = solve_instance(&actions, model.num_props, init, goal, config)?;
        let mut row = ExperimentRow {
            instance: i,
            found: false,
            valid_model: false,
            valid_env: false,
            optimal: false,
            cost: None,
            expanded: stats.expanded,
            generated: stats.generated,
            evaluated: stats.evaluated,
            seconds: stats.wall_seconds,
            states_seen: None,
            transitions_seen: None,
            plan: None,
            task,
        };
        if let Some(plan) = plan {
            row.found = true;
            row.cost = Some(plan.cost());
            row.valid_model = row.task.validate_plan(&plan) == Ok(PlanValidation::Valid);
            row.optimal = plan.cost() == set.depth;
            let mut states = vec![init.clone()];
            for &step in &plan.steps {
                let prev = states.last().expect("trace is nonempty");
                states.push(row.task.actions[step].apply(prev));
            }
            row.valid_env = crate::envs::validate_plan_in_env(enc, &states[0], &states[1..])
                == EnvValidation::Valid;
            let intermediate = if states.len() > 2 { &states[1..states.len() - 1] } else { &[] };
            let pairs: Vec<(BitState, BitState)> =
                states.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
            let mem = memorization_stats(intermediate, &pairs, dataset);
            row.states_seen = Some(mem.states_seen);
            row.transitions_seen = Some(mem.transitions_seen);
            row.plan = Some(plan);
        }
        Ok(row)
    })
}

/// Distinct states appearing in a dataset (pre and post sides).
pub fn distinct_states(dataset: &TransitionDataset) -> usize {
    let mut seen: HashSet<&BitState> = HashSet::new();
    for t in &dataset.transitions {
        seen.insert(&t.pre);
        seen.insert(&t.post);
    }
    seen.len()
}
