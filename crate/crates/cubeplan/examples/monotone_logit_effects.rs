//! The monotone-logit apply operator: re-encode bits through batch-norm
//! statistics, add a per-bit effect logit, re-discretize with a step
//! function. A positive-scale (hence order-preserving) state map forces
//! every action's bit flips to be state-independent, which is what makes
//! effects readable straight off clustered transitions.
//!
//! ```sh
//! cargo run --example monotone_logit_effects
//! ```

use cubeplan::btl::{
    binconcrete, btl_apply, logits_from_schema, minmax_apply, smooth_apply, step, verify_theorem2,
    BNStats, EffectTable, Temperature, Theorem2Outcome,
};
use cubeplan::strips::{ActionSchema, Condition};
use cubeplan::BitState;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    // batch-norm statistics of a balanced binary batch: m(0) = -1, m(1) = +1
    let batch = vec![vec![0.0, 0.0], vec![1.0, 1.0]];
    let bn = BNStats::fit(&batch, &[1.0, 1.0], &[0.0, 0.0], 0.0).expect("fit");
    println!("m(0) = {}, m(1) = {}", bn.logit_of_bit(0, false), bn.logit_of_bit(0, true));

    // effect logits constructed from a schema make the logit-space apply
    // agree with STRIPS progression on every state
    let width = 2;
    let schema = ActionSchema::new(
        0,
        "a0",
        Condition::empty(width),
        BitState::from_indices(width, &[0]), // add bit 0
        BitState::from_indices(width, &[1]), // delete bit 1
    )
    .expect("schema");
    let row = logits_from_schema(&schema, &bn).expect("logits");
    println!("effect logits realizing +z0/-z1: {row:?}");
    let table = EffectTable::Scalar { rows: vec![row] };
    let temp = Temperature::deterministic();
    for value in 0..4u32 {
        let state = BitState::from_bools(&[(value & 1) == 1, (value & 2) == 2]);
        let logit_result = btl_apply(&state, 0, &table, &bn, None, &temp).expect("apply");
        assert_eq!(logit_result, schema.apply(&state));
        println!("  {state} -> {logit_result}");
    }

    // the add/delete implication on batches produced by a shared effect row
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let effect: Vec<f64> = (0..width).map(|_| rng.gen_range(-3.0..3.0)).collect();
    let pairs: Vec<(BitState, BitState)> = (0..64)
        .map(|_| {
            let pre = BitState::from_bools(&[(rng.gen::<bool>()), (rng.gen::<bool>())]);
            let post = BitState::from_bools(
                &(0..width)
                    .map(|f| step(bn.logit_of_bit(f, pre.get(f)) + effect[f]) == 1.0)
                    .collect::<Vec<_>>(),
            );
            (pre, post)
        })
        .collect();
    let outcome = verify_theorem2(&pairs, &bn, &effect).expect("check");
    assert_eq!(outcome, Theorem2Outcome::Ok);
    println!("add/delete implication holds on a 64-transition batch");

    // the naive min/max alternative agrees on binary inputs, and its smooth
    // log-sum-exp variant approaches it under input scaling
    let z = BitState::from_bools(&[true, false]);
    let hard = minmax_apply(&z, &schema.add, &schema.del).expect("minmax");
    assert_eq!(hard, schema.apply(&z));
    let scale = 100.0;
    let soft = smooth_apply(&[scale * 0.9, scale * 0.2], &[scale * 0.1, scale * 0.05], &[0.0, 0.0]);
    println!("smooth apply at scale {scale}: {:?} (divide by scale ~ hard max/min)", soft);

    // annealing: the relaxation approaches the step function as tau drops
    let logits = [1.2, -0.4];
    for tau in [1.0, 0.1, 0.01] {
        let relaxed = binconcrete(&logits, &Temperature::stochastic(tau).expect("tau"), None).unwrap();
        println!("tau {tau:>4}: {relaxed:?}");
    }
    println!("tau -> 0 limit: {:?}", binconcrete(&logits, &temp, None).unwrap());
}
