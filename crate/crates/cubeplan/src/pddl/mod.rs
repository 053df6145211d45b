//! Grounded PDDL emission and parsing, byte-exact round-trippable.
//!
//! The supported fragment is grounded STRIPS with zero-ary predicates
//! `z<bit>`, negative preconditions, and when-effects. Emitted files are
//! directly consumable by classical planners; the grammar is documented in
//! `docs/pddl-fragment.md`.

mod emit;
mod parse;

pub use emit::{emit_domain, emit_problem};
pub use parse::{parse_domain, parse_problem, ParsedDomain, ParsedProblem};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PddlError {
    #[error("{line}:{col}: syntax error: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("{line}:{col}: unsupported construct: {construct}")]
    Unsupported { line: usize, col: usize, construct: String },
    #[error("{line}:{col}: {message}")]
    Semantic { line: usize, col: usize, message: String },
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitState;
    use crate::strips::{ActionSchema, CondEffect, Condition, Literal};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_condition(f: usize, rng: &mut ChaCha8Rng) -> Condition {
        let pos = BitState::from_bools(&(0..f).map(|_| rng.gen_bool(0.3)).collect::<Vec<_>>());
        let neg = BitState::from_bools(&(0..f).map(|_| rng.gen_bool(0.3)).collect::<Vec<_>>())
            .and_not(&pos);
        Condition::new(pos, neg).unwrap()
    }

    fn random_action(id: usize, f: usize, with_cond: bool, rng: &mut ChaCha8Rng) -> ActionSchema {
        let add = BitState::from_bools(&(0..f).map(|_| rng.gen_bool(0.3)).collect::<Vec<_>>());
        let del = BitState::from_bools(&(0..f).map(|_| rng.gen_bool(0.3)).collect::<Vec<_>>())
            .and_not(&add);
        let mut schema =
            ActionSchema::new(id, format!("a{id}"), random_condition(f, rng), add, del).unwrap();
        if with_cond && rng.gen_bool(0.5) {
            let ce_add = BitState::from_bools(&(0..f).map(|_| rng.gen_bool(0.2)).collect::<Vec<_>>());
            let ce_del = BitState::from_bools(&(0..f).map(|_| rng.gen_bool(0.2)).collect::<Vec<_>>())
                .and_not(&ce_add);
            schema = schema.with_cond_effects(vec![CondEffect::new(
                random_condition(f, rng),
                ce_add,
                ce_del,
            )
            .unwrap()]);
        }
        schema
    }

    #[test]
    fn domain_round_trip_on_random_models() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        for case in 0..100 {
            let f = rng.gen_range(1..12);
            let num_actions = rng.gen_range(0..8);
            let actions: Vec<ActionSchema> = (0..num_actions)
                .map(|id| random_action(id, f, case % 3 == 0, &mut rng))
                .collect();
            let text = emit_domain("m", f, &actions);
            let parsed = parse_domain(&text).unwrap_or_else(|e| panic!("case {case}: {e}\n{text}"));
            assert_eq!(parsed.name, "m");
            assert_eq!(parsed.num_props(), f);
            assert_eq!(parsed.actions, actions, "case {case}");
            // emission is a normal form: emit . parse . emit = emit
            assert_eq!(emit_domain("m", parsed.num_props(), &parsed.actions), text);
        }
    }

    #[test]
    fn problem_round_trip_on_random_tasks() {
        let mut rng = ChaCha8Rng::seed_from_u64(72);
        for _ in 0..100 {
            let f = rng.gen_range(1..12);
            let domain = parse_domain(&emit_domain("d", f, &[])).unwrap();
            let init = BitState::from_bools(&(0..f).map(|_| rng.gen()).collect::<Vec<_>>());
            let goal = random_condition(f, &mut rng);
            let text = emit_problem("p", "d", &init, &goal);
            let parsed = parse_problem(&text, &domain).unwrap();
            assert_eq!(parsed.name, "p");
            assert_eq!(parsed.domain, "d");
            assert_eq!(parsed.init, init);
            assert_eq!(parsed.goal, goal);
            assert_eq!(emit_problem("p", "d", &parsed.init, &parsed.goal), text);
        }
    }

    #[test]
    fn nested_ands_flatten() {
        let domain = parse_domain("(define (domain d) (:predicates (z0) (z1)))").unwrap();
        let text = "(define (problem p) (:domain d) (:init) (:goal (and (and (z0)) (not (z1)))))";
        let parsed = parse_problem(text, &domain).unwrap();
        assert_eq!(parsed.goal, Condition::from_literals(2, &[Literal::pos(0), Literal::neg(1)]).unwrap());
    }

    #[test]
    fn keywords_are_case_insensitive_and_comments_skipped() {
        let text = "(DEFINE (DOMAIN D) ; a comment\n (:PREDICATES (Z0))\n (:ACTION A0 :PARAMETERS () :PRECONDITION (AND) :EFFECT (AND (Z0))))";
        let domain = parse_domain(text).unwrap();
        assert_eq!(domain.name, "d");
        assert_eq!(domain.actions.len(), 1);
        assert!(domain.actions[0].add.get(0));
    }

    #[test]
    fn disjunctive_preconditions_are_rejected() {
        let text = "(define (domain d) (:predicates (z0) (z1))\n  (:action a0 :parameters () :precondition (or (z0) (z1)) :effect (and (z0))))";
        let err = parse_domain(text).unwrap_err();
        assert!(matches!(err, PddlError::Unsupported { construct, .. } if construct.contains("or")));
    }

    #[test]
    fn unbalanced_parens_report_position() {
        let err = parse_domain("(define (domain d)\n  (:predicates (z0)").unwrap_err();
        let PddlError::Syntax { line, .. } = err else { panic!("expected syntax error") };
        assert_eq!(line, 2);
    }

    #[test]
    fn unknown_requirement_and_arity_rejected() {
        let err = parse_domain("(define (domain d) (:requirements :typing))").unwrap_err();
        assert!(matches!(err, PddlError::Unsupported { construct, .. } if construct.contains(":typing")));
        let err = parse_domain("(define (domain d) (:predicates (on ?x)))").unwrap_err();
        assert!(matches!(err, PddlError::Unsupported { .. }));
    }

    #[test]
    fn undeclared_predicate_in_init_is_semantic() {
        let domain = parse_domain("(define (domain d) (:predicates (z0)))").unwrap();
        let err = parse_problem("(define (problem p) (:domain d) (:init (z9)) (:goal (and)))", &domain)
            .unwrap_err();
        assert!(matches!(err, PddlError::Semantic { .. }));
    }
}
