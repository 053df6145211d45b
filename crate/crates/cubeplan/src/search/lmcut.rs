//! The landmark-cut heuristic.
//!
//! Each round recomputes h-max under the current remaining op costs, picks
//! every op's supporter (its most expensive precondition literal, ties to
//! the lowest literal index), extracts the cut between the zero-cost goal
//! zone and the region reachable from the state in the justification graph,
//! adds the cut's minimum cost to the heuristic, and decrements the cut ops
//! by that amount. The accumulated cut costs sit between h-max and the true
//! cost.

use super::relaxed::{Combine, Fixpoint, RelaxedTask, INF};
use super::{Heuristic, SearchError};
use crate::bits::BitState;
use crate::strips::GroundTask;

pub struct LmCut {
    task: RelaxedTask,
    fixpoint: Fixpoint,
    remaining: Vec<u32>,
    supporter: Vec<u32>,
    in_goal_zone: Vec<bool>,
    in_before_zone: Vec<bool>,
    /// Ops grouped by supporter, rebuilt each round.
    by_supporter: Vec<Vec<u32>>,
    queue: Vec<u32>,
}

impl LmCut {
    pub fn new(task: &GroundTask) -> Result<Self, SearchError> {
        let relaxed = RelaxedTask::new(task, "lmcut")?;
        let fixpoint = Fixpoint::new(&relaxed);
        let num_ops = relaxed.ops.len();
        let num_lits = relaxed.num_lits;
        Ok(LmCut {
            task: relaxed,
            fixpoint,
            remaining: vec![0; num_ops],
            supporter: vec![0; num_ops],
            in_goal_zone: vec![false; num_lits],
            in_before_zone: vec![false; num_lits],
            by_supporter: vec![Vec::new(); num_lits],
            queue: Vec::new(),
        })
    }

    fn compute_supporters(&mut self) {
        for lists in &mut self.by_supporter {
            lists.clear();
        }
        for (i, op) in self.task.ops.iter().enumerate() {
            if !self.fixpoint.reached[i] {
                continue;
            }
            // max-cost precondition, ties to the lowest literal index;
            // preconditions are stored sorted ascending
            let mut best = op.pre[0];
            let mut best_cost = self.fixpoint.cost[best as usize];
            for &lit in &op.pre[1..] {
                let c = self.fixpoint.cost[lit as usize];
                if c > best_cost {
                    best = lit;
                    best_cost = c;
                }
            }
            self.supporter[i] = best;
            self.by_supporter[best as usize].push(i as u32);
        }
    }

    /// Literals from which the goal fact is reachable through zero-cost
    /// justification edges.
    fn compute_goal_zone(&mut self) {
        self.in_goal_zone.iter_mut().for_each(|z| *z = false);
        self.in_goal_zone[self.task.goal_lit as usize] = true;
        self.queue.clear();
        self.queue.push(self.task.goal_lit);
        while let Some(lit) = self.queue.pop() {
            for &op_idx in &self.task.added_by[lit as usize] {
                let i = op_idx as usize;
                if !self.fixpoint.reached[i] || self.remaining[i] != 0 {
                    continue;
                }
                let s = self.supporter[i] as usize;
                if !self.in_goal_zone[s] {
                    self.in_goal_zone[s] = true;
                    self.queue.push(s as u32);
                }
            }
        }
    }

    /// Literals reachable from the evaluated state along justification edges
    /// without entering the goal zone, and the resulting cut.
    fn collect_cut(&mut self, state: &BitState, cut: &mut Vec<u32>) {
        self.in_before_zone.iter_mut().for_each(|z| *z = false);
        self.queue.clear();
        for lit in self.task.seed_lits(state) {
            let l = lit as usize;
            if !self.in_goal_zone[l] && !self.in_before_zone[l] {
                self.in_before_zone[l] = true;
                self.queue.push(lit);
            }
        }
        cut.clear();
        while let Some(lit) = self.queue.pop() {
            for &op_idx in &self.by_supporter[lit as usize] {
                let i = op_idx as usize;
                let mut crosses = false;
                for &out in &self.task.ops[i].add {
                    let o = out as usize;
                    if self.in_goal_zone[o] {
                        crosses = true;
                    } else if !self.in_before_zone[o] {
                        self.in_before_zone[o] = true;
                        self.queue.push(out);
                    }
                }
                if crosses && !cut.contains(&op_idx) {
                    cut.push(op_idx);
                }
            }
        }
    }
}

impl Heuristic for LmCut {
    fn eval(&mut self, state: &BitState) -> Option<u32> {
        for (i, op) in self.task.ops.iter().enumerate() {
            self.remaining[i] = op.base_cost;
        }
        let mut total = 0u32;
        let mut cut = Vec::new();
        loop {
            let task = &self.task;
            let remaining = &self.remaining;
            self.fixpoint.run(task, state, Combine::Max, |i| remaining[i]);
            let goal_cost = self.fixpoint.cost[task.goal_lit as usize];
            if goal_cost == INF {
                return None;
            }
            if goal_cost == 0 {
                return Some(total);
            }
            self.compute_supporters();
            self.compute_goal_zone();
            self.collect_cut(state, &mut cut);
            debug_assert!(!cut.is_empty(), "landmark cut must be nonempty while h-max > 0");
            let m = cut
                .iter()
                .map(|&i| self.remaining[i as usize])
                .min()
                .expect("cut is nonempty");
            debug_assert!(m > 0);
            total = total.saturating_add(m);
            for &i in &cut {
                self.remaining[i as usize] -= m;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::relaxed::tests::chain_task;
    use super::*;
    use crate::strips::{ActionSchema, Condition, Literal};

    #[test]
    fn chain_needs_two_cuts() {
        let task = chain_task();
        let mut h = LmCut::new(&task).unwrap();
        assert_eq!(h.eval(&task.init), Some(2));
        assert_eq!(h.eval(&BitState::parse("11").unwrap()), Some(0));
    }

    #[test]
    fn dead_end_is_infinite() {
        let f = 1;
        let task = GroundTask::new(
            f,
            vec![],
            BitState::zeros(f),
            Condition::from_literals(f, &[Literal::pos(0)]).unwrap(),
        )
        .unwrap();
        let mut h = LmCut::new(&task).unwrap();
        assert_eq!(h.eval(&task.init), None);
    }

    #[test]
    fn parallel_goals_count_separately() {
        // two independent goals, one action each: lmcut should see 2
        let f = 2;
        let task = GroundTask::new(
            f,
            vec![
                ActionSchema::new(0, "a0", Condition::empty(f), BitState::from_indices(f, &[0]), BitState::zeros(f)).unwrap(),
                ActionSchema::new(1, "a1", Condition::empty(f), BitState::from_indices(f, &[1]), BitState::zeros(f)).unwrap(),
            ],
            BitState::zeros(f),
            Condition::from_literals(f, &[Literal::pos(0), Literal::pos(1)]).unwrap(),
        )
        .unwrap();
        let mut h = LmCut::new(&task).unwrap();
        // h-max sees 1, the two cuts see 2
        assert_eq!(h.eval(&task.init), Some(2));
    }

    #[test]
    fn shared_achiever_counts_once() {
        // one action achieves both goals: a single landmark
        let f = 2;
        let task = GroundTask::new(
            f,
            vec![ActionSchema::new(
                0,
                "a0",
                Condition::empty(f),
                BitState::from_indices(f, &[0, 1]),
                BitState::zeros(f),
            )
            .unwrap()],
            BitState::zeros(f),
            Condition::from_literals(f, &[Literal::pos(0), Literal::pos(1)]).unwrap(),
        )
        .unwrap();
        let mut h = LmCut::new(&task).unwrap();
        assert_eq!(h.eval(&task.init), Some(1));
    }

    #[test]
    fn conditional_effects_are_rejected() {
        use crate::strips::CondEffect;
        let f = 1;
        let action = ActionSchema::new(0, "a0", Condition::empty(f), BitState::zeros(f), BitState::zeros(f))
            .unwrap()
            .with_cond_effects(vec![CondEffect::new(
                Condition::empty(f),
                BitState::from_indices(f, &[0]),
                BitState::zeros(f),
            )
            .unwrap()]);
        let task = GroundTask::new(f, vec![action], BitState::zeros(f), Condition::empty(f)).unwrap();
        let err = LmCut::new(&task).map(|_| ()).unwrap_err();
        assert_eq!(err, SearchError::ConditionalEffectsUnsupported("lmcut"));
    }
}
