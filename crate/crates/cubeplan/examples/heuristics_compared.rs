//! Compare node expansions across heuristics on learned 8-puzzle models,
//! and check the admissible chain h_blind <= h_max <= h_lmcut <= h* on an
//! exhaustively learned space.
//!
//! ```sh
//! cargo run --example heuristics_compared
//! ```

use cubeplan::ama::{learn_model, LearnOptions, PreconditionMode};
use cubeplan::envs::{
    exhaustive_transitions, gen_instances, sample_transitions, Encoding, Env, DEFAULT_STATE_CAP,
};
use cubeplan::search::{astar, goal_distances, make_heuristic, HeuristicKind, Limits};
use cubeplan::strips::Condition;

fn main() {
    // expansions on sampled 8-puzzle instances at goal distance 12
    let encoding = Encoding::ground_truth(Env::Slide { n: 3 });
    let dataset = sample_transitions(&encoding, 5000, 7).expect("sampling");
    let options = LearnOptions { mode: PreconditionMode::PositiveOnly, ..Default::default() };
    let model = learn_model(&dataset, &options).expect("learning");
    let set = gen_instances(&encoding, 12, 8, 7).expect("instances");

    println!("heuristic  mean expanded  mean evaluated  all optimal");
    for kind in [HeuristicKind::Blind, HeuristicKind::HMax, HeuristicKind::LmCut] {
        let mut expanded = 0.0;
        let mut evaluated = 0.0;
        let mut all_optimal = true;
        for (init, goal) in &set.instances {
            let task = model
                .to_task(init.clone(), Condition::full_state(goal))
                .expect("task");
            let mut h = make_heuristic(kind, &task).expect("heuristic");
            let result = astar(&task, h.as_mut(), &Limits::none());
            let plan = result.plan().expect("exact models solve every instance");
            all_optimal &= plan.cost() == 12;
            expanded += result.stats.expanded as f64;
            evaluated += result.stats.evaluated as f64;
        }
        let n = set.instances.len() as f64;
        println!(
            "{:<9}  {:>13.1}  {:>14.1}  {}",
            kind.name(),
            expanded / n,
            evaluated / n,
            all_optimal
        );
    }

    // the admissibility chain, state by state, on a small exhaustive space
    let encoding = Encoding::ground_truth(Env::Hanoi { disks: 4 });
    let dataset = exhaustive_transitions(&encoding, DEFAULT_STATE_CAP).expect("enumerate");
    let model = learn_model(&dataset, &LearnOptions::default()).expect("learn");
    let goal = encoding.goal_code();
    let task = model
        .to_task(goal.clone(), Condition::full_state(&goal))
        .expect("task");
    let h_star = goal_distances(&task, 1 << 20).expect("reference distances");
    let mut blind = make_heuristic(HeuristicKind::Blind, &task).unwrap();
    let mut hmax = make_heuristic(HeuristicKind::HMax, &task).unwrap();
    let mut lmcut = make_heuristic(HeuristicKind::LmCut, &task).unwrap();
    let mut worst_gap = 0i64;
    for (state, &true_cost) in &h_star {
        let b = blind.eval(state).unwrap();
        let m = hmax.eval(state).unwrap();
        let l = lmcut.eval(state).unwrap();
        assert!(b <= m && m <= l && l <= true_cost, "chain broken at {state}");
        worst_gap = worst_gap.max(true_cost as i64 - l as i64);
    }
    println!(
        "\nadmissibility chain holds on all {} states (largest h* - lmcut gap: {})",
        h_star.len(),
        worst_gap
    );
}
