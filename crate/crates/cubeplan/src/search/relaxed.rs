//! Literal-space compilation and delete-relaxation heuristics.
//!
//! Every proposition `p` becomes two literals: `2p` (p true) and `2p+1`
//! (p false). An action deleting `p` adds literal `2p+1`; the relaxation
//! drops the deletes. Two artificial literals provide a shared start fact
//! for precondition-free actions and a single goal fact achieved by a
//! zero-cost goal operator, so the heuristic of a state is the relaxed cost
//! of that goal fact.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::{Heuristic, SearchError};
use crate::bits::BitState;
use crate::strips::{Condition, GroundTask};

pub(crate) const INF: u32 = u32::MAX;

pub(crate) struct RelaxOp {
    /// Sorted literal indices.
    pub pre: Vec<u32>,
    pub add: Vec<u32>,
    pub base_cost: u32,
}

pub(crate) struct RelaxedTask {
    pub num_props: usize,
    pub num_lits: usize,
    pub ops: Vec<RelaxOp>,
    pub start_lit: u32,
    pub goal_lit: u32,
    /// For each literal, the ops having it as a precondition.
    pub needed_by: Vec<Vec<u32>>,
    /// For each literal, the ops adding it.
    pub added_by: Vec<Vec<u32>>,
}

fn condition_lits(cond: &Condition) -> Vec<u32> {
    let mut lits: Vec<u32> = cond
        .pos
        .iter_ones()
        .map(|p| 2 * p as u32)
        .chain(cond.neg.iter_ones().map(|p| 2 * p as u32 + 1))
        .collect();
    lits.sort_unstable();
    lits
}

impl RelaxedTask {
    pub fn new(task: &GroundTask, heuristic_name: &'static str) -> Result<Self, SearchError> {
        if task.actions.iter().any(|a| a.has_cond_effects()) {
            return Err(SearchError::ConditionalEffectsUnsupported(heuristic_name));
        }
        let num_props = task.num_props;
        let start_lit = 2 * num_props as u32;
        let goal_lit = start_lit + 1;
        let num_lits = 2 * num_props + 2;
        let mut ops: Vec<RelaxOp> = task
            .actions
            .iter()
            .map(|a| {
                let mut pre = condition_lits(&a.pre);
                if pre.is_empty() {
                    pre.push(start_lit);
                }
                let add: Vec<u32> = a
                    .add
                    .iter_ones()
                    .map(|p| 2 * p as u32)
                    .chain(a.del.iter_ones().map(|p| 2 * p as u32 + 1))
                    .collect();
                RelaxOp { pre, add, base_cost: 1 }
            })
            .collect();
        let mut goal_pre = condition_lits(&task.goal);
        if goal_pre.is_empty() {
            goal_pre.push(start_lit);
        }
        ops.push(RelaxOp { pre: goal_pre, add: vec![goal_lit], base_cost: 0 });

        let mut needed_by = vec![Vec::new(); num_lits];
        let mut added_by = vec![Vec::new(); num_lits];
        for (i, op) in ops.iter().enumerate() {
            for &lit in &op.pre {
                needed_by[lit as usize].push(i as u32);
            }
            for &lit in &op.add {
                added_by[lit as usize].push(i as u32);
            }
        }
        Ok(RelaxedTask { num_props, num_lits, ops, start_lit, goal_lit, needed_by, added_by })
    }

    /// Seeds the literal costs of `state` (plus the start literal) into
    /// `cost` and returns the seed literals.
    pub fn seed_lits(&self, state: &BitState) -> Vec<u32> {
        let mut seeds = Vec::with_capacity(self.num_props + 1);
        for p in 0..self.num_props {
            seeds.push(if state.get(p) { 2 * p as u32 } else { 2 * p as u32 + 1 });
        }
        seeds.push(self.start_lit);
        seeds
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum Combine {
    Max,
    Add,
}

/// Scratch buffers for the generalized Dijkstra fixpoint shared by h-max,
/// h-add, and the landmark-cut rounds.
pub(crate) struct Fixpoint {
    pub cost: Vec<u32>,
    done: Vec<bool>,
    unsat: Vec<u32>,
    accum: Vec<u32>,
    /// Whether every precondition of the op was reached.
    pub reached: Vec<bool>,
    heap: BinaryHeap<Reverse<(u32, u32)>>,
}

impl Fixpoint {
    pub fn new(task: &RelaxedTask) -> Self {
        Fixpoint {
            cost: vec![INF; task.num_lits],
            done: vec![false; task.num_lits],
            unsat: vec![0; task.ops.len()],
            accum: vec![0; task.ops.len()],
            reached: vec![false; task.ops.len()],
            heap: BinaryHeap::new(),
        }
    }

    /// Runs the relaxed fixpoint from `state` with per-op costs
    /// `op_cost(i)`, combining precondition costs by max or sum.
    pub fn run(
        &mut self,
        task: &RelaxedTask,
        state: &BitState,
        combine: Combine,
        op_cost: impl Fn(usize) -> u32,
    ) {
        self.cost.iter_mut().for_each(|c| *c = INF);
        self.done.iter_mut().for_each(|d| *d = false);
        self.accum.iter_mut().for_each(|a| *a = 0);
        self.reached.iter_mut().for_each(|r| *r = false);
        for (i, op) in task.ops.iter().enumerate() {
            self.unsat[i] = op.pre.len() as u32;
        }
        self.heap.clear();
        for lit in task.seed_lits(state) {
            if self.cost[lit as usize] != 0 {
                self.cost[lit as usize] = 0;
                self.heap.push(Reverse((0, lit)));
            }
        }
        while let Some(Reverse((c, lit))) = self.heap.pop() {
            let lit = lit as usize;
            if self.done[lit] {
                continue;
            }
            self.done[lit] = true;
            for &op_idx in &task.needed_by[lit] {
                let i = op_idx as usize;
                match combine {
                    // literals finalize in cost order, so the last one is the max
                    Combine::Max => self.accum[i] = self.accum[i].max(c),
                    Combine::Add => self.accum[i] = self.accum[i].saturating_add(c),
                }
                self.unsat[i] -= 1;
                if self.unsat[i] == 0 {
                    self.reached[i] = true;
                    let achieve = self.accum[i].saturating_add(op_cost(i));
                    for &out in &task.ops[i].add {
                        let out = out as usize;
                        if achieve < self.cost[out] {
                            self.cost[out] = achieve;
                            self.heap.push(Reverse((achieve, out as u32)));
                        }
                    }
                }
            }
        }
    }

    pub fn goal_cost(&self, task: &RelaxedTask) -> Option<u32> {
        match self.cost[task.goal_lit as usize] {
            INF => None,
            c => Some(c),
        }
    }
}

/// Classical delete-relaxation max heuristic: admissible, the base of
/// landmark-cut.
pub struct HMax {
    task: RelaxedTask,
    fixpoint: Fixpoint,
}

impl HMax {
    pub fn new(task: &GroundTask) -> Result<Self, SearchError> {
        let relaxed = RelaxedTask::new(task, "hmax")?;
        let fixpoint = Fixpoint::new(&relaxed);
        Ok(HMax { task: relaxed, fixpoint })
    }
}

impl Heuristic for HMax {
    fn eval(&mut self, state: &BitState) -> Option<u32> {
        let task = &self.task;
        self.fixpoint.run(task, state, Combine::Max, |i| task.ops[i].base_cost);
        self.fixpoint.goal_cost(task)
    }
}

/// Additive delete-relaxation heuristic: informative but inadmissible.
pub struct HAdd {
    task: RelaxedTask,
    fixpoint: Fixpoint,
}

impl HAdd {
    pub fn new(task: &GroundTask) -> Result<Self, SearchError> {
        let relaxed = RelaxedTask::new(task, "hadd")?;
        let fixpoint = Fixpoint::new(&relaxed);
        Ok(HAdd { task: relaxed, fixpoint })
    }
}

impl Heuristic for HAdd {
    fn eval(&mut self, state: &BitState) -> Option<u32> {
        let task = &self.task;
        self.fixpoint.run(task, state, Combine::Add, |i| task.ops[i].base_cost);
        self.fixpoint.goal_cost(task)
    }
}
