//! Compiling labeled graphs into grounded action models.
//!
//! With conditional effects, one action per edge color suffices: each edge
//! contributes a conditional effect whose condition is the full source code
//! and whose effects rewrite it into the target code. Without conditional
//! effects, one precondition-free action per directed difference pair is
//! needed, which is two per undirected mask.

use super::{check_assignment, directed_diff, Assignment, EdgeColoring, Graph, GraphError};
use crate::bits::BitState;
use crate::strips::{ActionSchema, CondEffect, Condition};

/// One action per color. Each edge of that color contributes a conditional
/// effect keyed on the full source state; undirected edges contribute both
/// directions.
pub fn compile_conditional(
    graph: &Graph,
    coloring: &EdgeColoring,
    assignment: &Assignment,
) -> Result<Vec<ActionSchema>, GraphError> {
    check_assignment(graph, assignment)?;
    coloring.check_proper(graph)?;
    let num_bits = assignment.num_bits;
    let mut per_color: Vec<Vec<CondEffect>> = vec![Vec::new(); coloring.num_colors];
    let mut add_effect = |color: usize, from: &BitState, to: &BitState| {
        let (add, del) = directed_diff(from, to);
        let effect = CondEffect::new(Condition::full_state(from), add, del)
            .expect("difference masks are disjoint");
        per_color[color].push(effect);
    };
    for (edge, &(u, v)) in graph.edges().iter().enumerate() {
        let color = coloring.colors[edge];
        let cu = &assignment.codes[u];
        let cv = &assignment.codes[v];
        add_effect(color, cu, cv);
        if !graph.is_directed() {
            add_effect(color, cv, cu);
        }
    }
    Ok(per_color
        .into_iter()
        .enumerate()
        .map(|(id, effects)| {
            ActionSchema::new(
                id,
                format!("a{id}"),
                Condition::empty(num_bits),
                BitState::zeros(num_bits),
                BitState::zeros(num_bits),
            )
            .expect("empty effects never overlap")
            .with_cond_effects(effects)
        })
        .collect())
}

#[derive(Clone, Debug)]
pub struct StripsCompilation {
    pub actions: Vec<ActionSchema>,
    /// Size of the undirected XOR family, when the input was undirected.
    pub undirected_diffs: Option<usize>,
    /// For undirected graphs: whether all edges sharing an XOR mask agree on
    /// their directed (add, delete) split, i.e. whether the action count is
    /// exactly twice the family size.
    pub direction_consistent: bool,
}

/// Precondition-free actions, one per distinct directed difference pair.
/// Undirected edges contribute both directions. A mask alone does not
/// determine the directed split, so edges sharing a mask may still produce
/// more than two actions; the report flags that case.
pub fn compile_strips(graph: &Graph, assignment: &Assignment) -> Result<StripsCompilation, GraphError> {
    check_assignment(graph, assignment)?;
    let num_bits = assignment.num_bits;
    let mut pairs: Vec<(BitState, BitState)> = Vec::new();
    let mut undirected_masks: Vec<BitState> = Vec::new();
    for &(u, v) in graph.edges() {
        let cu = &assignment.codes[u];
        let cv = &assignment.codes[v];
        let fwd = directed_diff(cu, cv);
        if !pairs.contains(&fwd) {
            pairs.push(fwd);
        }
        if !graph.is_directed() {
            let back = directed_diff(cv, cu);
            if !pairs.contains(&back) {
                pairs.push(back);
            }
            let mask = cu.xor(cv);
            if !undirected_masks.contains(&mask) {
                undirected_masks.push(mask);
            }
        }
    }
    let actions = pairs
        .iter()
        .enumerate()
        .map(|(id, (add, del))| {
            ActionSchema::new(id, format!("a{id}"), Condition::empty(num_bits), add.clone(), del.clone())
                .expect("directed differences are disjoint")
        })
        .collect();
    let (undirected_diffs, direction_consistent) = if graph.is_directed() {
        (None, true)
    } else {
        let consistent = pairs.len() == 2 * undirected_masks.len();
        (Some(undirected_masks.len()), consistent)
    };
    Ok(StripsCompilation { actions, undirected_diffs, direction_consistent })
}
