//! The pipeline never inspects the meaning of individual bits: permuting
//! bit positions and XOR-masking the codes changes nothing about learning,
//! planning, or validation, as long as the same encoding decodes the
//! results.
//!
//! ```sh
//! cargo run --example scrambled_encoding
//! ```

use cubeplan::ama::{learn_model, LearnOptions};
use cubeplan::envs::{gen_instances, sample_transitions, Encoding, Env};
use cubeplan::pipeline::{run_experiment_heuristic, PlanConfig};
use cubeplan::search::{HeuristicKind, Limits};

fn main() {
    let env = Env::Lights { n: 4 };
    for (label, encoding) in [
        ("ground-truth bits", Encoding::ground_truth(env)),
        ("permuted + masked bits", Encoding::scrambled(env, 99)),
    ] {
        let dataset = sample_transitions(&encoding, 4000, 5).expect("sampling");
        let model = learn_model(&dataset, &LearnOptions::default()).expect("learning");
        let set = gen_instances(&encoding, 5, 10, 5).expect("instances");
        let config = PlanConfig {
            heuristic: HeuristicKind::LmCut,
            limits: Limits::none(),
            ..Default::default()
        };
        let rows = run_experiment_heuristic(&model, &encoding, &set, &dataset, &config)
            .expect("planning");
        let found = rows.iter().filter(|r| r.found).count();
        let valid = rows.iter().filter(|r| r.valid_env).count();
        let optimal = rows.iter().filter(|r| r.optimal).count();
        println!(
            "{label:<24} actions={:<3} f={found} v={valid} o={optimal}",
            model.num_actions()
        );
        assert_eq!(valid, found, "soundness does not depend on the bit layout");
    }
}
