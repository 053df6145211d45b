//! Property tests for the algebraic invariants of progression and encoding.

use proptest::prelude::*;

use cubeplan::ama::{cluster_by_signature, extract_effects};
use cubeplan::bits::BitState;
use cubeplan::envs::{Encoding, Env, Transition, TransitionDataset};
use cubeplan::strips::{ActionSchema, Condition, GroundTask, Plan, PlanValidation};

const WIDTH: usize = 12;

fn bits(width: usize) -> impl Strategy<Value = BitState> {
    prop::collection::vec(any::<bool>(), width).prop_map(|v| BitState::from_bools(&v))
}

fn action(width: usize) -> impl Strategy<Value = ActionSchema> {
    (bits(width), bits(width), bits(width), bits(width)).prop_map(move |(pp, pn, add, del)| {
        let pre_neg = pn.and_not(&pp);
        let del = del.and_not(&add);
        ActionSchema::new(
            0,
            "a0",
            Condition::new(pp, pre_neg).unwrap(),
            add,
            del,
        )
        .unwrap()
    })
}

proptest! {
    /// With disjoint add/del the progression is order-independent:
    /// (s \ del) ∪ add equals (s ∪ add) \ (del \ add) bitwise.
    #[test]
    fn apply_is_order_independent(state in bits(WIDTH), a in action(WIDTH)) {
        let delete_then_add = state.and_not(&a.del).or(&a.add);
        let add_then_delete = state.or(&a.add).and_not(&a.del.and_not(&a.add));
        prop_assert_eq!(a.apply(&state), delete_then_add.clone());
        prop_assert_eq!(delete_then_add, add_then_delete);
    }

    /// Effect application is idempotent, and when an action's adds avoid its
    /// own negative preconditions (and deletes its positive ones) a second
    /// application is still applicable.
    #[test]
    fn apply_twice_equals_apply_once(state in bits(WIDTH), a in action(WIDTH)) {
        let once = a.apply(&state);
        prop_assert_eq!(a.apply(&once), once.clone());
        if a.applicable(&state)
            && a.add.is_disjoint(&a.pre.neg)
            && a.del.is_disjoint(&a.pre.pos)
        {
            prop_assert!(a.applicable(&once));
        }
    }

    /// A valid plan replays exactly through the successor function.
    #[test]
    fn valid_plans_replay_through_successors(
        seed_actions in prop::collection::vec(action(WIDTH), 1..6),
        walk in prop::collection::vec(0usize..6, 0..8),
        init in bits(WIDTH),
    ) {
        let actions: Vec<ActionSchema> = seed_actions
            .into_iter()
            .enumerate()
            .map(|(id, mut a)| { a.id = id; a.name = format!("a{id}"); a })
            .collect();
        // follow applicable actions to build a plan that is valid by construction
        let mut state = init.clone();
        let mut steps = Vec::new();
        for pick in walk {
            let applicable: Vec<usize> = actions
                .iter()
                .filter(|a| a.applicable(&state))
                .map(|a| a.id)
                .collect();
            if applicable.is_empty() {
                break;
            }
            let id = applicable[pick % applicable.len()];
            state = actions[id].apply(&state);
            steps.push(id);
        }
        let task = GroundTask::new(
            WIDTH,
            actions,
            init,
            Condition::full_state(&state),
        ).unwrap();
        let plan = Plan::new(steps);
        prop_assert_eq!(task.validate_plan(&plan).unwrap(), PlanValidation::Valid);
        // replay: every step appears among the successors of its state
        let mut replay = task.init.clone();
        for &step in &plan.steps {
            let succ = task.successors(&replay);
            let next = succ.into_iter().find(|(id, _)| *id == step);
            prop_assert!(next.is_some());
            replay = next.unwrap().1;
        }
        prop_assert!(task.is_goal(&replay));
    }

    /// Encoding round-trips for every environment state under arbitrary
    /// seed-derived permutations and masks.
    #[test]
    fn encode_decode_round_trip(env_seed in 0u64..3, scramble in any::<Option<u64>>(), state_seed in any::<u64>()) {
        use rand::SeedableRng;
        let env = match env_seed {
            0 => Env::Slide { n: 3 },
            1 => Env::Lights { n: 4 },
            _ => Env::Hanoi { disks: 5 },
        };
        let enc = match scramble {
            None => Encoding::ground_truth(env),
            Some(seed) => Encoding::scrambled(env, seed),
        };
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(state_seed);
        let state = env.random_state(&mut rng);
        let code = enc.encode(&state).unwrap();
        prop_assert_eq!(enc.decode(&code).unwrap(), state);
    }

    /// Extracting effects from a signature cluster returns the signature.
    #[test]
    fn signature_extraction_is_identity(pre in bits(WIDTH), post in bits(WIDTH)) {
        let dataset = TransitionDataset {
            num_bits: WIDTH,
            env: "synthetic".into(),
            seed: 0,
            transitions: vec![
                Transition { pre: pre.clone(), post: post.clone(), label: None };
                3
            ],
        };
        let clusters = cluster_by_signature(&dataset, None).unwrap();
        prop_assert_eq!(clusters.len(), 1);
        let (add, del) = extract_effects(&clusters[0], &dataset).unwrap();
        prop_assert_eq!(add, post.and_not(&pre));
        prop_assert_eq!(del, pre.and_not(&post));
    }
}
