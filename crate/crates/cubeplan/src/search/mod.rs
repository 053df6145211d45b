//! Forward state-space planning over ground tasks with domain-independent
//! heuristics and instrumentation.
//!
//! The admissible family (blind, h-max, landmark-cut) pairs with A* for
//! optimal plans; goal-count and h-add pair with greedy best-first search
//! for the satisficing track. Negative preconditions and goals are handled
//! by the literal-space compilation in [`relaxed`]: every proposition gets a
//! companion "false" literal, deletes add the companion, and conditions are
//! rewritten positively, which is what delete-relaxation heuristics expect.

mod best_first;
mod bfs;
mod lmcut;
mod relaxed;

pub use best_first::{astar, gbfs};
pub use bfs::{bfs_distances, bfs_optimal_cost, goal_distances};
pub use lmcut::LmCut;
pub use relaxed::{HAdd, HMax};

use std::str::FromStr;

use thiserror::Error;

use crate::bits::BitState;
use crate::strips::{Condition, GroundTask, Plan};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("reachable state space exceeds cap of {cap} states")]
    CapExceeded { cap: usize },
    #[error("heuristic {0} does not support conditional effects")]
    ConditionalEffectsUnsupported(&'static str),
    #[error("unknown heuristic {0:?} (expected blind, goalcount, hmax, hadd, or lmcut)")]
    UnknownHeuristic(String),
}

/// A state evaluator; `None` means the goal is provably unreachable from the
/// state. Implementations may keep internal scratch buffers.
pub trait Heuristic {
    fn eval(&mut self, state: &BitState) -> Option<u32>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeuristicKind {
    Blind,
    GoalCount,
    HMax,
    HAdd,
    LmCut,
}

impl HeuristicKind {
    pub const ALL: [HeuristicKind; 5] = [
        HeuristicKind::Blind,
        HeuristicKind::GoalCount,
        HeuristicKind::HMax,
        HeuristicKind::HAdd,
        HeuristicKind::LmCut,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            HeuristicKind::Blind => "blind",
            HeuristicKind::GoalCount => "goalcount",
            HeuristicKind::HMax => "hmax",
            HeuristicKind::HAdd => "hadd",
            HeuristicKind::LmCut => "lmcut",
        }
    }

    pub fn is_admissible(&self) -> bool {
        matches!(self, HeuristicKind::Blind | HeuristicKind::HMax | HeuristicKind::LmCut)
    }
}

impl FromStr for HeuristicKind {
    type Err = SearchError;

    fn from_str(s: &str) -> Result<Self, SearchError> {
        match s {
            "blind" => Ok(HeuristicKind::Blind),
            "goalcount" | "gc" => Ok(HeuristicKind::GoalCount),
            "hmax" => Ok(HeuristicKind::HMax),
            "hadd" => Ok(HeuristicKind::HAdd),
            "lmcut" => Ok(HeuristicKind::LmCut),
            other => Err(SearchError::UnknownHeuristic(other.to_string())),
        }
    }
}

pub fn make_heuristic(kind: HeuristicKind, task: &GroundTask) -> Result<Box<dyn Heuristic>, SearchError> {
    Ok(match kind {
        HeuristicKind::Blind => Box::new(Blind { goal: task.goal.clone() }),
        HeuristicKind::GoalCount => Box::new(GoalCount { goal: task.goal.clone() }),
        HeuristicKind::HMax => Box::new(HMax::new(task)?),
        HeuristicKind::HAdd => Box::new(HAdd::new(task)?),
        HeuristicKind::LmCut => Box::new(LmCut::new(task)?),
    })
}

/// 0 on goal states, otherwise the cheapest action cost (1 under unit costs).
pub struct Blind {
    goal: Condition,
}

impl Heuristic for Blind {
    fn eval(&mut self, state: &BitState) -> Option<u32> {
        Some(if self.goal.satisfied_by(state) { 0 } else { 1 })
    }
}

/// Number of unsatisfied goal literals.
pub struct GoalCount {
    goal: Condition,
}

impl Heuristic for GoalCount {
    fn eval(&mut self, state: &BitState) -> Option<u32> {
        Some(self.goal.count_unsatisfied(state) as u32)
    }
}

/// Search resource limits. The defaults mirror a classical benchmark setup:
/// 15 minutes and a stored-state proxy for a 2 GB memory budget.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_expansions: Option<u64>,
    pub max_seconds: Option<f64>,
    pub max_states: Option<usize>,
}

impl Limits {
    pub fn none() -> Self {
        Limits { max_expansions: None, max_seconds: None, max_states: None }
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_expansions: None,
            max_seconds: Some(900.0),
            max_states: Some(10_000_000),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SearchStats {
    pub expanded: u64,
    pub generated: u64,
    pub evaluated: u64,
    pub peak_open: usize,
    pub peak_closed: usize,
    pub wall_seconds: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Solved(Plan),
    Unsolvable,
    ResourceExceeded,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub outcome: Outcome,
    pub stats: SearchStats,
}

impl SearchResult {
    pub fn plan(&self) -> Option<&Plan> {
        match &self.outcome {
            Outcome::Solved(plan) => Some(plan),
            _ => None,
        }
    }
}
