//! Sample transitions from a puzzle simulator and learn a grounded STRIPS
//! model from nothing but the bit vectors.
//!
//! ```sh
//! cargo run --example sample_and_learn
//! ```

use cubeplan::ama::{learn_model, LearnOptions};
use cubeplan::envs::{sample_transitions, Encoding, Env};
use cubeplan::pddl::emit_domain;

fn main() {
    let encoding = Encoding::ground_truth(Env::Lights { n: 3 });
    let dataset = sample_transitions(&encoding, 2000, 42).expect("sampling");
    println!(
        "sampled {} transitions over {} bits from {}",
        dataset.len(),
        dataset.num_bits,
        dataset.env
    );

    let model = learn_model(&dataset, &LearnOptions::default()).expect("learning");
    println!("learned {} grounded actions", model.num_actions());
    let coverage: usize = model.sample_counts.iter().sum();
    println!(
        "samples per action: min {} / max {} (total {coverage})",
        model.sample_counts.iter().min().unwrap(),
        model.sample_counts.iter().max().unwrap(),
    );
    for warning in &model.warnings {
        println!("warning: {warning}");
    }

    let text = emit_domain("lightsout", model.num_props, &model.schemas);
    println!("\nfirst action of the emitted domain:");
    for line in text.lines().skip(3).take(4) {
        println!("{line}");
    }
    println!("...\n({} bytes of PDDL total)", text.len());
}
