//! Breadth-first oracles for ground-truth distances in small tasks. These
//! provide the h* reference the heuristic admissibility tests compare
//! against; they are not meant for large spaces.

use std::collections::{HashMap, VecDeque};

use super::SearchError;
use crate::bits::BitState;
use crate::strips::GroundTask;

/// Exact unit-cost distances from the initial state to every reachable
/// state. Errors when the reachable space exceeds `cap`.
pub fn bfs_distances(task: &GroundTask, cap: usize) -> Result<HashMap<BitState, u32>, SearchError> {
    let mut dist = HashMap::new();
    dist.insert(task.init.clone(), 0u32);
    let mut queue = VecDeque::from([task.init.clone()]);
    while let Some(state) = queue.pop_front() {
        let d = dist[&state];
        for (_, succ) in task.successors(&state) {
            if !dist.contains_key(&succ) {
                if dist.len() >= cap {
                    return Err(SearchError::CapExceeded { cap });
                }
                dist.insert(succ.clone(), d + 1);
                queue.push_back(succ);
            }
        }
    }
    Ok(dist)
}

/// Optimal plan cost from init to the goal, or `None` when unreachable.
pub fn bfs_optimal_cost(task: &GroundTask, cap: usize) -> Result<Option<u32>, SearchError> {
    if task.is_goal(&task.init) {
        return Ok(Some(0));
    }
    let mut dist = HashMap::new();
    dist.insert(task.init.clone(), 0u32);
    let mut queue = VecDeque::from([task.init.clone()]);
    while let Some(state) = queue.pop_front() {
        let d = dist[&state];
        for (_, succ) in task.successors(&state) {
            if !dist.contains_key(&succ) {
                if task.is_goal(&succ) {
                    return Ok(Some(d + 1));
                }
                if dist.len() >= cap {
                    return Err(SearchError::CapExceeded { cap });
                }
                dist.insert(succ.clone(), d + 1);
                queue.push_back(succ);
            }
        }
    }
    Ok(None)
}

/// Exact distance-to-goal (h*) for every state reachable from init:
/// enumerates the forward component, then runs a reverse breadth-first
/// search from its goal states. States that cannot reach the goal are
/// absent from the map.
pub fn goal_distances(task: &GroundTask, cap: usize) -> Result<HashMap<BitState, u32>, SearchError> {
    let mut ids: HashMap<BitState, u32> = HashMap::new();
    let mut states: Vec<BitState> = vec![task.init.clone()];
    ids.insert(task.init.clone(), 0);
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut head = 0usize;
    while head < states.len() {
        let state = states[head].clone();
        for (_, succ) in task.successors(&state) {
            let next_id = match ids.get(&succ) {
                Some(&id) => id,
                None => {
                    if states.len() >= cap {
                        return Err(SearchError::CapExceeded { cap });
                    }
                    let id = states.len() as u32;
                    ids.insert(succ.clone(), id);
                    states.push(succ);
                    id
                }
            };
            edges.push((head as u32, next_id));
        }
        head += 1;
    }
    let mut reverse = vec![Vec::new(); states.len()];
    for (from, to) in edges {
        reverse[to as usize].push(from);
    }
    let mut dist = vec![u32::MAX; states.len()];
    let mut queue = VecDeque::new();
    for (i, state) in states.iter().enumerate() {
        if task.is_goal(state) {
            dist[i] = 0;
            queue.push_back(i as u32);
        }
    }
    while let Some(node) = queue.pop_front() {
        let d = dist[node as usize];
        for &prev in &reverse[node as usize] {
            if dist[prev as usize] == u32::MAX {
                dist[prev as usize] = d + 1;
                queue.push_back(prev);
            }
        }
    }
    Ok(states
        .into_iter()
        .zip(dist)
        .filter(|(_, d)| *d != u32::MAX)
        .collect())
}
