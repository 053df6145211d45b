//! Grounded PDDL emission in a fixed normal form.
//!
//! Normal form: lowercase keywords, two-space indent, one action per block,
//! predicates `z<bit>` in index order, literals ordered positives-ascending
//! then negatives-ascending, actions in id order. Emission is a pure
//! function of the model, so output bytes are stable across runs.

use std::fmt::Write;

use crate::bits::BitState;
use crate::strips::{ActionSchema, Condition};

fn write_literals(out: &mut String, cond: &Condition) {
    for lit in cond.literals() {
        if lit.positive {
            write!(out, " (z{})", lit.prop).unwrap();
        } else {
            write!(out, " (not (z{}))", lit.prop).unwrap();
        }
    }
}

fn write_effects(out: &mut String, add: &BitState, del: &BitState) {
    for bit in add.iter_ones() {
        write!(out, " (z{bit})").unwrap();
    }
    for bit in del.iter_ones() {
        write!(out, " (not (z{bit}))").unwrap();
    }
}

fn condition_text(cond: &Condition) -> String {
    let mut s = String::from("(and");
    write_literals(&mut s, cond);
    s.push(')');
    s
}

/// Emits `(define (domain <name>) ...)` for the given actions over
/// `num_props` zero-ary predicates.
pub fn emit_domain(name: &str, num_props: usize, actions: &[ActionSchema]) -> String {
    let mut out = String::new();
    writeln!(out, "(define (domain {name})").unwrap();
    let mut requirements = String::from(":strips :negative-preconditions");
    if actions.iter().any(|a| a.has_cond_effects()) {
        requirements.push_str(" :conditional-effects");
    }
    writeln!(out, "  (:requirements {requirements})").unwrap();
    let mut predicates = String::new();
    for bit in 0..num_props {
        write!(predicates, " (z{bit})").unwrap();
    }
    writeln!(out, "  (:predicates{predicates})").unwrap();
    for action in actions {
        writeln!(out, "  (:action {}", action.name).unwrap();
        writeln!(out, "    :parameters ()").unwrap();
        writeln!(out, "    :precondition {}", condition_text(&action.pre)).unwrap();
        let mut effect = String::from("(and");
        write_effects(&mut effect, &action.add, &action.del);
        for ce in &action.cond_effects {
            let mut inner = String::from("(and");
            write_effects(&mut inner, &ce.add, &ce.del);
            inner.push(')');
            write!(effect, " (when {} {})", condition_text(&ce.condition), inner).unwrap();
        }
        effect.push(')');
        writeln!(out, "    :effect {effect})").unwrap();
    }
    out.push_str(")\n");
    out
}

/// Emits `(define (problem <name>) ...)`. The init section lists only true
/// bits; the goal emits whatever literals the condition carries (both
/// polarities for a full-state goal).
pub fn emit_problem(name: &str, domain_name: &str, init: &BitState, goal: &Condition) -> String {
    let mut out = String::new();
    writeln!(out, "(define (problem {name})").unwrap();
    writeln!(out, "  (:domain {domain_name})").unwrap();
    let mut init_text = String::new();
    for bit in init.iter_ones() {
        write!(init_text, " (z{bit})").unwrap();
    }
    writeln!(out, "  (:init{init_text})").unwrap();
    writeln!(out, "  (:goal {})", condition_text(goal)).unwrap();
    out.push_str(")\n");
    out
}
