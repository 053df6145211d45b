//! Best-first search with duplicate detection and deterministic
//! tie-breaking: lower f first, then higher g, then FIFO insertion order.
//! Closed states are reopened on a cheaper path, so A* stays optimal with
//! admissible but inconsistent heuristics (landmark-cut in particular).

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::time::Instant;

use super::{Heuristic, Limits, Outcome, SearchResult, SearchStats};
use crate::bits::BitState;
use crate::strips::{GroundTask, Plan};

#[derive(PartialEq, Eq)]
struct Entry {
    f: u32,
    g: u32,
    seq: u64,
    node: u32,
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // BinaryHeap pops the greatest entry, so "greater" means "expand first"
        other
            .f
            .cmp(&self.f)
            .then(self.g.cmp(&other.g))
            .then(other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct NodeInfo {
    g: u32,
    h: u32,
    parent: u32,
    action: u32,
    closed: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    AStar,
    Greedy,
}

/// A*: optimal plans under admissible heuristics.
pub fn astar(task: &GroundTask, heuristic: &mut dyn Heuristic, limits: &Limits) -> SearchResult {
    best_first(task, heuristic, limits, Mode::AStar)
}

/// Greedy best-first on h alone; no optimality contract.
pub fn gbfs(task: &GroundTask, heuristic: &mut dyn Heuristic, limits: &Limits) -> SearchResult {
    best_first(task, heuristic, limits, Mode::Greedy)
}

fn best_first(
    task: &GroundTask,
    heuristic: &mut dyn Heuristic,
    limits: &Limits,
    mode: Mode,
) -> SearchResult {
    let start_time = Instant::now();
    let mut stats = SearchStats::default();
    let mut states: Vec<BitState> = Vec::new();
    let mut index: HashMap<BitState, u32> = HashMap::new();
    let mut info: Vec<NodeInfo> = Vec::new();
    let mut open: BinaryHeap<Entry> = BinaryHeap::new();
    let mut seq = 0u64;
    let mut closed_count = 0usize;

    let priority = |g: u32, h: u32| match mode {
        Mode::AStar => g.saturating_add(h),
        Mode::Greedy => h,
    };

    stats.generated = 1;
    stats.evaluated = 1;
    let Some(h0) = heuristic.eval(&task.init) else {
        stats.wall_seconds = start_time.elapsed().as_secs_f64();
        return SearchResult { outcome: Outcome::Unsolvable, stats };
    };
    states.push(task.init.clone());
    index.insert(task.init.clone(), 0);
    info.push(NodeInfo { g: 0, h: h0, parent: u32::MAX, action: u32::MAX, closed: false });
    open.push(Entry { f: priority(0, h0), g: 0, seq, node: 0 });

    let finish = |outcome: Outcome, mut stats: SearchStats| {
        stats.wall_seconds = start_time.elapsed().as_secs_f64();
        SearchResult { outcome, stats }
    };

    while let Some(entry) = open.pop() {
        let node = entry.node as usize;
        if info[node].closed || entry.g > info[node].g {
            continue; // stale entry
        }
        info[node].closed = true;
        closed_count += 1;
        stats.peak_closed = stats.peak_closed.max(closed_count);

        let state = states[node].clone();
        if task.is_goal(&state) {
            let plan = reconstruct(&info, node);
            debug_assert_eq!(
                task.validate_plan(&plan),
                Ok(crate::strips::PlanValidation::Valid)
            );
            return finish(Outcome::Solved(plan), stats);
        }

        if let Some(max) = limits.max_expansions {
            if stats.expanded >= max {
                return finish(Outcome::ResourceExceeded, stats);
            }
        }
        if let Some(max) = limits.max_seconds {
            if stats.expanded % 512 == 0 && start_time.elapsed().as_secs_f64() > max {
                return finish(Outcome::ResourceExceeded, stats);
            }
        }

        stats.expanded += 1;
        let succ_g = info[node].g + 1;
        for (action, succ) in task.successors(&state) {
            stats.generated += 1;
            match index.get(&succ) {
                None => {
                    if let Some(max) = limits.max_states {
                        if states.len() >= max {
                            return finish(Outcome::ResourceExceeded, stats);
                        }
                    }
                    stats.evaluated += 1;
                    let Some(h) = heuristic.eval(&succ) else {
                        // dead end: remember it so we never evaluate it again
                        let id = states.len() as u32;
                        states.push(succ.clone());
                        index.insert(succ, id);
                        info.push(NodeInfo {
                            g: succ_g,
                            h: u32::MAX,
                            parent: node as u32,
                            action: action as u32,
                            closed: true,
                        });
                        closed_count += 1;
                        continue;
                    };
                    let id = states.len() as u32;
                    states.push(succ.clone());
                    index.insert(succ, id);
                    info.push(NodeInfo {
                        g: succ_g,
                        h,
                        parent: node as u32,
                        action: action as u32,
                        closed: false,
                    });
                    seq += 1;
                    open.push(Entry { f: priority(succ_g, h), g: succ_g, seq, node: id });
                }
                Some(&id) => {
                    let id = id as usize;
                    if succ_g < info[id].g && info[id].h != u32::MAX {
                        info[id].g = succ_g;
                        info[id].parent = node as u32;
                        info[id].action = action as u32;
                        if info[id].closed {
                            info[id].closed = false;
                            closed_count -= 1;
                        }
                        seq += 1;
                        open.push(Entry {
                            f: priority(succ_g, info[id].h),
                            g: succ_g,
                            seq,
                            node: id as u32,
                        });
                    }
                }
            }
        }
        stats.peak_open = stats.peak_open.max(open.len());
    }
    finish(Outcome::Unsolvable, stats)
}

fn reconstruct(info: &[NodeInfo], mut node: usize) -> Plan {
    let mut steps = Vec::new();
    while info[node].parent != u32::MAX {
        steps.push(info[node].action as usize);
        node = info[node].parent as usize;
    }
    steps.reverse();
    Plan::new(steps)
}

#[cfg(test)]
mod tests {
    use super::super::relaxed::tests::chain_task;
    use super::super::{make_heuristic, HeuristicKind};
    use super::*;
    use crate::strips::{ActionSchema, Condition, Literal};

    fn solve(task: &GroundTask, kind: HeuristicKind) -> SearchResult {
        let mut h = make_heuristic(kind, task).unwrap();
        astar(task, h.as_mut(), &Limits::none())
    }

    #[test]
    fn trivial_task_solves_with_empty_plan() {
        let f = 1;
        let task = GroundTask::new(f, vec![], BitState::zeros(f), Condition::empty(f)).unwrap();
        let result = solve(&task, HeuristicKind::Blind);
        assert_eq!(result.plan().unwrap().cost(), 0);
        assert_eq!(result.stats.expanded, 0);
        assert!(result.stats.expanded <= result.stats.generated);
    }

    #[test]
    fn chain_task_costs_two_under_every_heuristic() {
        let task = chain_task();
        for kind in HeuristicKind::ALL {
            let result = solve(&task, kind);
            let plan = result.plan().unwrap_or_else(|| panic!("{} failed", kind.name()));
            assert_eq!(plan.cost(), 2, "{}", kind.name());
        }
    }

    #[test]
    fn unsolvable_task_reports_unsolvable() {
        let f = 2;
        let task = GroundTask::new(
            f,
            vec![ActionSchema::new(
                0,
                "a0",
                Condition::empty(f),
                BitState::from_indices(f, &[0]),
                BitState::zeros(f),
            )
            .unwrap()],
            BitState::zeros(f),
            Condition::from_literals(f, &[Literal::pos(1)]).unwrap(),
        )
        .unwrap();
        for kind in [HeuristicKind::Blind, HeuristicKind::LmCut] {
            let result = solve(&task, kind);
            assert_eq!(result.outcome, Outcome::Unsolvable, "{}", kind.name());
        }
    }

    #[test]
    fn expansion_limit_reports_resource_exceeded() {
        let task = chain_task();
        let mut h = make_heuristic(HeuristicKind::Blind, &task).unwrap();
        let limits = Limits { max_expansions: Some(0), ..Limits::none() };
        let result = astar(&task, h.as_mut(), &limits);
        assert_eq!(result.outcome, Outcome::ResourceExceeded);
    }

    #[test]
    fn state_limit_reports_resource_exceeded() {
        let task = chain_task();
        let mut h = make_heuristic(HeuristicKind::Blind, &task).unwrap();
        let limits = Limits { max_states: Some(1), ..Limits::none() };
        let result = astar(&task, h.as_mut(), &limits);
        assert_eq!(result.outcome, Outcome::ResourceExceeded);
    }

    #[test]
    fn gbfs_finds_valid_plans_and_astar_is_never_worse() {
        let task = chain_task();
        let mut h = make_heuristic(HeuristicKind::GoalCount, &task).unwrap();
        let greedy = gbfs(&task, h.as_mut(), &Limits::none());
        let mut lm = make_heuristic(HeuristicKind::LmCut, &task).unwrap();
        let optimal = astar(&task, lm.as_mut(), &Limits::none());
        assert!(greedy.plan().unwrap().cost() >= optimal.plan().unwrap().cost());
    }

    #[test]
    fn search_is_deterministic() {
        let task = chain_task();
        let run = || {
            let mut h = make_heuristic(HeuristicKind::HMax, &task).unwrap();
            let r = astar(&task, h.as_mut(), &Limits::none());
            (r.plan().unwrap().clone(), r.stats.expanded, r.stats.generated, r.stats.evaluated)
        };
        assert_eq!(run(), run());
    }
}
