//! Emit a learned model as grounded PDDL, parse it back, and show that
//! emission is a byte-stable normal form. Also demonstrates the parser's
//! position-carrying diagnostics.
//!
//! ```sh
//! cargo run --example pddl_roundtrip
//! ```

use cubeplan::ama::{learn_model, LearnOptions};
use cubeplan::envs::{exhaustive_transitions, Encoding, Env, DEFAULT_STATE_CAP};
use cubeplan::pddl::{emit_domain, emit_problem, parse_domain, parse_problem};
use cubeplan::strips::Condition;

fn main() {
    let encoding = Encoding::ground_truth(Env::Hanoi { disks: 3 });
    let dataset = exhaustive_transitions(&encoding, DEFAULT_STATE_CAP).expect("enumerate");
    let model = learn_model(&dataset, &LearnOptions::default()).expect("learn");

    let domain_text = emit_domain("hanoi", model.num_props, &model.schemas);
    println!("emitted domain: {} bytes, {} actions", domain_text.len(), model.num_actions());

    let parsed = parse_domain(&domain_text).expect("parse back");
    assert_eq!(parsed.actions, model.schemas);
    let re_emitted = emit_domain("hanoi", parsed.num_props(), &parsed.actions);
    assert_eq!(re_emitted, domain_text, "emission is a normal form");
    println!("parse(emit(model)) is structurally identical; re-emission is byte-identical");

    let goal = encoding.goal_code();
    let problem_text = emit_problem("tower", "hanoi", &goal, &Condition::full_state(&goal));
    println!("\n{problem_text}");
    let problem = parse_problem(&problem_text, &parsed).expect("parse problem");
    assert_eq!(problem.init, goal);

    // diagnostics carry line and column
    let broken = "(define (domain d)\n  (:predicates (z0)\n";
    match parse_domain(broken) {
        Err(err) => println!("diagnostic for a truncated file: {err}"),
        Ok(_) => unreachable!(),
    }
    let unsupported = "(define (domain d) (:predicates (z0))\n  (:action a :parameters ()\n   :precondition (or (z0)) :effect (and)))";
    match parse_domain(unsupported) {
        Err(err) => println!("diagnostic for an out-of-fragment file: {err}"),
        Ok(_) => unreachable!(),
    }
}
