//! Command-line driver for the learn-and-plan pipeline. All logic lives in
//! the library (`cubeplan::pipeline`); this binary only parses arguments,
//! prints summaries, and maps errors to exit codes: 0 success (a search
//! that finds no plan is still a result), 1 internal error, 2 usage error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use cubeplan::ama::LabelSource;
use cubeplan::pipeline::{
    cmd_analyze, cmd_exp, cmd_gen, cmd_gen_instances, cmd_learn, cmd_plan, cmd_validate,
    parse_precondition_mode, EncodingConfig, ExperimentSpec, GenMode, LearnConfig, PipelineError,
    PlanConfig, SearchAlgo,
};
use cubeplan::search::{HeuristicKind, Limits};

#[derive(Parser)]
#[command(
    name = "cubeplan",
    about = "Learn grounded STRIPS models from binary transitions, emit PDDL, and plan with admissible heuristics",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct EncodingArgs {
    /// Environment name: slide<n>, lightsout<n>, or hanoi<k>
    env: String,
    /// Permute bit positions with this seed
    #[arg(long)]
    perm_seed: Option<u64>,
    /// XOR the code with a mask derived from this seed
    #[arg(long)]
    mask_seed: Option<u64>,
}

impl EncodingArgs {
    fn config(&self) -> EncodingConfig {
        EncodingConfig {
            env: self.env.clone(),
            perm_seed: self.perm_seed,
            mask_seed: self.mask_seed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a transition dataset (or an instance file with --instances-depth)
    Gen {
        #[command(flatten)]
        encoding: EncodingArgs,
        /// Number of sampled transitions
        #[arg(long, conflicts_with = "exhaustive")]
        count: Option<usize>,
        /// Enumerate every (state, move) pair reachable from the goal
        #[arg(long)]
        exhaustive: bool,
        /// Generate planning instances at this exact goal distance instead of
        /// a transition dataset
        #[arg(long, conflicts_with_all = ["count", "exhaustive"])]
        instances_depth: Option<usize>,
        /// Number of instances to draw from the frontier
        #[arg(long, default_value_t = 30)]
        instances_count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output file (JSON Lines)
        #[arg(long)]
        out: PathBuf,
    },
    /// Learn a grounded model from a dataset and emit domain.pddl
    Learn {
        /// Dataset file written by `gen`
        #[arg(long)]
        data: PathBuf,
        /// Precondition extraction: both | positive-only
        #[arg(long, default_value = "both")]
        mode: String,
        /// Cluster by effect signature or by the dataset's external labels
        #[arg(long, default_value = "signature")]
        label_source: String,
        /// Fail if the dataset needs more than this many actions
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, default_value = "learned")]
        domain_name: String,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Plan a set of instances against a PDDL domain
    Plan {
        /// domain.pddl file
        #[arg(long)]
        domain: PathBuf,
        /// Instance file written by `gen --instances-depth`
        #[arg(long)]
        instances: PathBuf,
        /// blind | goalcount | hmax | hadd | lmcut
        #[arg(long, default_value = "lmcut")]
        heuristic: String,
        /// astar | gbfs
        #[arg(long, default_value = "astar")]
        search: String,
        #[arg(long)]
        max_expansions: Option<u64>,
        #[arg(long, default_value_t = 900.0)]
        max_seconds: f64,
        #[arg(long, default_value_t = 10_000_000)]
        max_states: usize,
        /// Solve instances in parallel
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Validate plan traces against the real environment
    Validate {
        #[command(flatten)]
        encoding: EncodingArgs,
        /// Trace files (one bit string per line, starting at the init state)
        #[arg(long, required = true, num_args = 1..)]
        traces: Vec<PathBuf>,
        /// Reference dataset for memorization statistics
        #[arg(long)]
        data: Option<PathBuf>,
        /// Write the JSON report here (stdout summary either way)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Analyze a graph: chromatic index vs minimum difference family
    Analyze {
        /// Graph file; JSON {"n", "edges", "directed"} or DOT (.dot/.gv)
        #[arg(long)]
        graph: PathBuf,
        /// Bit width of the assignment search
        #[arg(long)]
        bits: usize,
    },
    /// Run a full experiment: gen, learn, instances, plan, validate
    Exp {
        /// JSON experiment spec; flags below override its fields
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        env: Option<String>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        exhaustive: bool,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        instances: Option<usize>,
        /// Comma-separated heuristic list
        #[arg(long)]
        heuristics: Option<String>,
        #[arg(long)]
        search: Option<String>,
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<(), PipelineError> {
    match cli.command {
        Command::Gen {
            encoding,
            count,
            exhaustive,
            instances_depth,
            instances_count,
            seed,
            out,
        } => {
            if let Some(depth) = instances_depth {
                let summary =
                    cmd_gen_instances(&encoding.config(), depth, instances_count, seed, &out)?;
                println!(
                    "instances={} depth={} frontier={}{} -> {}",
                    summary.count,
                    summary.depth,
                    summary.frontier_size,
                    if summary.with_replacement { " (with replacement)" } else { "" },
                    summary.path.display()
                );
                return Ok(());
            }
            let mode = match (count, exhaustive) {
                (Some(count), false) => GenMode::Sample { count },
                (None, true) => GenMode::Exhaustive,
                _ => {
                    return Err(PipelineError::Usage(
                        "pass exactly one of --count or --exhaustive".into(),
                    ))
                }
            };
            let summary = cmd_gen(&encoding.config(), mode, seed, &out)?;
            println!(
                "F={} count={} distinct_signatures={} -> {}",
                summary.num_bits,
                summary.count,
                summary.distinct_signatures,
                summary.path.display()
            );
            Ok(())
        }
        Command::Learn { data, mode, label_source, budget, domain_name, out_dir } => {
            let config = LearnConfig {
                mode: parse_precondition_mode(&mode)?,
                label_source: match label_source.as_str() {
                    "signature" => LabelSource::Signature,
                    "external" => LabelSource::External,
                    other => {
                        return Err(PipelineError::Usage(format!(
                            "unknown label source {other:?} (expected signature or external)"
                        )))
                    }
                },
                budget,
                domain_name,
            };
            let summary = cmd_learn(&data, &config, &out_dir)?;
            println!(
                "F={} actions={} -> {}",
                summary.num_bits,
                summary.actions,
                summary.domain_path.display()
            );
            for warning in &summary.warnings {
                println!("warning: {warning}");
            }
            Ok(())
        }
        Command::Plan {
            domain,
            instances,
            heuristic,
            search,
            max_expansions,
            max_seconds,
            max_states,
            jobs,
            out_dir,
        } => {
            let config = PlanConfig {
                heuristic: HeuristicKind::from_str(&heuristic).map_err(to_usage)?,
                algo: SearchAlgo::from_str(&search)?,
                limits: Limits {
                    max_expansions,
                    max_seconds: Some(max_seconds),
                    max_states: Some(max_states),
                },
                jobs,
            };
            let summary = cmd_plan(&domain, &instances, &config, &out_dir)?;
            println!(
                "f={} v={} o={} ({} instances) -> {}",
                summary.found,
                summary.valid,
                summary.optimal,
                summary.rows.len(),
                summary.csv_path.display()
            );
            Ok(())
        }
        Command::Validate { encoding, traces, data, out } => {
            let summary = cmd_validate(&encoding.config(), &traces, data.as_deref(), out.as_deref())?;
            println!("valid={}/{}", summary.valid, summary.traces.len());
            for trace in &summary.traces {
                match (&trace.reason, trace.failed_step) {
                    (Some(reason), Some(step)) => {
                        println!("{}: invalid at step {step} ({reason})", trace.file)
                    }
                    _ => println!("{}: valid", trace.file),
                }
            }
            Ok(())
        }
        Command::Analyze { graph, bits } => {
            let report = cmd_analyze(&graph, bits)?;
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            Ok(())
        }
        Command::Exp {
            spec,
            env,
            samples,
            exhaustive,
            depth,
            instances,
            heuristics,
            search,
            mode,
            seed,
            jobs,
            out_dir,
        } => {
            let mut experiment: ExperimentSpec = match spec {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|source| PipelineError::Io { path: path.clone(), source })?;
                    serde_json::from_str(&text)
                        .map_err(|e| PipelineError::Usage(format!("{}: {e}", path.display())))?
                }
                None => ExperimentSpec {
                    env: String::new(),
                    perm_seed: None,
                    mask_seed: None,
                    samples: None,
                    depth: 0,
                    instances: 0,
                    heuristics: Vec::new(),
                    search: "astar".into(),
                    mode: "both".into(),
                    seed: 1,
                    max_expansions: None,
                    max_seconds: Some(900.0),
                    max_states: Some(10_000_000),
                    jobs: 1,
                },
            };
            if let Some(env) = env {
                experiment.env = env;
            }
            if let Some(samples) = samples {
                experiment.samples = Some(samples);
            }
            if exhaustive {
                experiment.samples = None;
            }
            if let Some(depth) = depth {
                experiment.depth = depth;
            }
            if let Some(instances) = instances {
                experiment.instances = instances;
            }
            if let Some(heuristics) = heuristics {
                experiment.heuristics = heuristics.split(',').map(str::to_string).collect();
            }
            if let Some(search) = search {
                experiment.search = search;
            }
            if let Some(mode) = mode {
                experiment.mode = mode;
            }
            if let Some(seed) = seed {
                experiment.seed = seed;
            }
            if let Some(jobs) = jobs {
                experiment.jobs = jobs;
            }
            if experiment.env.is_empty() {
                return Err(PipelineError::Usage("experiment needs --env or a spec file".into()));
            }
            if experiment.heuristics.is_empty() {
                return Err(PipelineError::Usage(
                    "experiment needs --heuristics or a spec file".into(),
                ));
            }
            let summary = cmd_exp(&experiment, &out_dir)?;
            println!(
                "F={} actions={} instances={}",
                summary.num_bits, summary.actions, summary.instances
            );
            for agg in &summary.aggregates {
                println!(
                    "{}: f={} v={} o={} mean_expanded={:.1}",
                    agg.heuristic, agg.found, agg.valid_env, agg.optimal, agg.mean_expanded
                );
            }
            println!("-> {}", summary.results_csv.display());
            Ok(())
        }
    }
}

fn to_usage(e: impl std::fmt::Display) -> PipelineError {
    PipelineError::Usage(e.to_string())
}
