//! The full pipeline on the 8-puzzle: sample transitions, learn a model,
//! draw planning instances at a fixed goal distance, solve them optimally
//! with landmark-cut, and validate every plan against the real simulator.
//!
//! ```sh
//! cargo run --example plan_sliding_tile
//! ```

use cubeplan::ama::{learn_model, LearnOptions, PreconditionMode};
use cubeplan::envs::{gen_instances, sample_transitions, Encoding, Env};
use cubeplan::pipeline::{run_experiment_heuristic, PlanConfig};
use cubeplan::search::{HeuristicKind, Limits};

fn main() {
    let encoding = Encoding::ground_truth(Env::Slide { n: 3 });
    let dataset = sample_transitions(&encoding, 5000, 2).expect("sampling");
    let options = LearnOptions { mode: PreconditionMode::PositiveOnly, ..Default::default() };
    let model = learn_model(&dataset, &options).expect("learning");
    println!("model: {} bits, {} actions", model.num_props, model.num_actions());

    let depth = 7;
    let set = gen_instances(&encoding, depth, 10, 2).expect("instances");
    println!("{} instances at goal distance {} (frontier {})", set.instances.len(), depth, set.frontier_size);

    let config = PlanConfig {
        heuristic: HeuristicKind::LmCut,
        limits: Limits::none(),
        ..Default::default()
    };
    let rows = run_experiment_heuristic(&model, &encoding, &set, &dataset, &config).expect("planning");

    let mut found = 0;
    let mut valid_env = 0;
    let mut optimal = 0;
    for row in &rows {
        found += row.found as usize;
        valid_env += row.valid_env as usize;
        optimal += row.optimal as usize;
        println!(
            "instance {:2}: cost {:?} expanded {:4} env-valid {} memorized-states {:?}",
            row.instance, row.cost, row.expanded, row.valid_env, row.states_seen
        );
    }
    println!("\nf={found} v={valid_env} o={optimal} out of {}", rows.len());
    assert_eq!(found, rows.len(), "the exact model solves every instance");
}
