//! Transition datasets and planning-instance generation.
//!
//! Dataset files are JSON Lines: a header object `{"F", "env", "seed"}`
//! followed by one `{"pre", "post", "label"?}` object per transition. Bit
//! strings are index-0-first.

use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::BitState;
use crate::envs::{Encoding, EnvError};

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

/// One observed latent transition. `label`, when present, names the
/// ground-truth move; it is diagnostic only and never consulted by the
/// default learning path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub pre: BitState,
    pub post: BitState,
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionDataset {
    pub num_bits: usize,
    pub env: String,
    pub seed: u64,
    pub transitions: Vec<Transition>,
}

#[derive(Serialize, Deserialize)]
struct HeaderLine {
    #[serde(rename = "F")]
    num_bits: usize,
    env: String,
    seed: u64,
}

#[derive(Serialize, Deserialize)]
struct TransitionLine {
    pre: String,
    post: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

impl TransitionDataset {
    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }

    pub fn write_jsonl(&self, w: &mut impl Write) -> Result<(), DatasetError> {
        let header = HeaderLine {
            num_bits: self.num_bits,
            env: self.env.clone(),
            seed: self.seed,
        };
        writeln!(w, "{}", serde_json::to_string(&header).expect("header serializes"))?;
        for t in &self.transitions {
            let line = TransitionLine {
                pre: t.pre.to_string(),
                post: t.post.to_string(),
                label: t.label.clone(),
            };
            writeln!(w, "{}", serde_json::to_string(&line).expect("transition serializes"))?;
        }
        Ok(())
    }

    pub fn read_jsonl(r: impl BufRead) -> Result<Self, DatasetError> {
        let mut lines = r.lines();
        let header_text = lines
            .next()
            .ok_or(DatasetError::Format { line: 1, message: "missing header line".into() })??;
        let header: HeaderLine = serde_json::from_str(&header_text)
            .map_err(|e| DatasetError::Format { line: 1, message: e.to_string() })?;
        let mut transitions = Vec::new();
        for (idx, line) in lines.enumerate() {
            let line_no = idx + 2;
            let text = line?;
            if text.trim().is_empty() {
                continue;
            }
            let parsed: TransitionLine = serde_json::from_str(&text)
                .map_err(|e| DatasetError::Format { line: line_no, message: e.to_string() })?;
            let pre = BitState::parse(&parsed.pre)
                .map_err(|e| DatasetError::Format { line: line_no, message: e.to_string() })?;
            let post = BitState::parse(&parsed.post)
                .map_err(|e| DatasetError::Format { line: line_no, message: e.to_string() })?;
            if pre.len() != header.num_bits || post.len() != header.num_bits {
                return Err(DatasetError::Format {
                    line: line_no,
                    message: format!(
                        "state width {} does not match header F={}",
                        pre.len().max(post.len()),
                        header.num_bits
                    ),
                });
            }
            transitions.push(Transition { pre, post, label: parsed.label });
        }
        Ok(TransitionDataset {
            num_bits: header.num_bits,
            env: header.env,
            seed: header.seed,
            transitions,
        })
    }
}

/// Samples `count` i.i.d. transitions: a uniform random environment state,
/// then a uniformly random applicable move, both endpoints encoded.
/// Deterministic for a given seed.
pub fn sample_transitions(
    encoding: &Encoding,
    count: usize,
    seed: u64,
) -> Result<TransitionDataset, DatasetError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut transitions = Vec::with_capacity(count);
    for _ in 0..count {
        let state = encoding.env.random_state(&mut rng);
        let moves = encoding.env.moves(&state)?;
        let (label, next) = &moves[rng.gen_range(0..moves.len())];
        transitions.push(Transition {
            pre: encoding.encode(&state)?,
            post: encoding.encode(next)?,
            label: Some(label.clone()),
        });
    }
    Ok(TransitionDataset {
        num_bits: encoding.num_bits(),
        env: encoding.env.name(),
        seed,
        transitions,
    })
}

pub const DEFAULT_STATE_CAP: usize = 1_000_000;

/// Every (state, move) pair of the component reachable from the goal state,
/// in BFS order. Errors when the component exceeds `cap`.
pub fn exhaustive_transitions(
    encoding: &Encoding,
    cap: usize,
) -> Result<TransitionDataset, DatasetError> {
    let states = encoding.env.reachable_states(cap)?;
    let mut transitions = Vec::new();
    for state in &states {
        let pre = encoding.encode(state)?;
        for (label, next) in encoding.env.moves(state)? {
            transitions.push(Transition {
                pre: pre.clone(),
                post: encoding.encode(&next)?,
                label: Some(label),
            });
        }
    }
    Ok(TransitionDataset {
        num_bits: encoding.num_bits(),
        env: encoding.env.name(),
        seed: 0,
        transitions,
    })
}

/// Planning instances drawn from the depth-`depth` frontier of a
/// breadth-first search backward from the goal (unit costs make this the
/// Dijkstra frontier). Each init therefore has true shortest-path distance
/// exactly `depth`.
#[derive(Clone, Debug)]
pub struct InstanceSet {
    pub instances: Vec<(BitState, BitState)>,
    pub depth: usize,
    pub frontier_size: usize,
    /// Set when the frontier was smaller than the requested count and
    /// sampling fell back to drawing with replacement.
    pub with_replacement: bool,
}

pub fn gen_instances(
    encoding: &Encoding,
    depth: usize,
    count: usize,
    seed: u64,
) -> Result<InstanceSet, DatasetError> {
    use std::collections::HashSet;
    let env = encoding.env;
    let goal = env.goal_state();
    let goal_code = encoding.goal_code();

    // layered BFS, keeping only the current frontier
    let mut seen: HashSet<crate::envs::EnvState> = HashSet::new();
    seen.insert(goal.clone());
    let mut frontier = vec![goal];
    for _ in 0..depth {
        let mut next_frontier = Vec::new();
        for state in &frontier {
            for (_, next) in env.moves(state)? {
                if seen.insert(next.clone()) {
                    next_frontier.push(next);
                }
            }
        }
        frontier = next_frontier;
        if frontier.is_empty() {
            return Err(EnvError::EmptyFrontier { depth }.into());
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let frontier_size = frontier.len();
    let with_replacement = frontier_size < count;
    let chosen: Vec<&crate::envs::EnvState> = if with_replacement {
        (0..count).map(|_| &frontier[rng.gen_range(0..frontier_size)]).collect()
    } else {
        let mut idx: Vec<usize> = (0..frontier_size).collect();
        idx.shuffle(&mut rng);
        idx.truncate(count);
        idx.into_iter().map(|i| &frontier[i]).collect()
    };
    let instances = chosen
        .into_iter()
        .map(|s| Ok((encoding.encode(s)?, goal_code.clone())))
        .collect::<Result<Vec<_>, EnvError>>()?;
    Ok(InstanceSet { instances, depth, frontier_size, with_replacement })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envs::{Env, EnvState};

    fn gt(env: Env) -> Encoding {
        Encoding::ground_truth(env)
    }

    #[test]
    fn sampling_is_deterministic_and_sized() {
        let enc = gt(Env::Lights { n: 3 });
        let a = sample_transitions(&enc, 500, 42).unwrap();
        let b = sample_transitions(&enc, 500, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 500);
        let c = sample_transitions(&enc, 500, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn sampled_pairs_resimulate_as_legal_moves() {
        for env in [Env::Slide { n: 3 }, Env::Lights { n: 3 }, Env::Hanoi { disks: 4 }] {
            let enc = gt(env);
            let ds = sample_transitions(&enc, 200, 7).unwrap();
            for t in &ds.transitions {
                let pre = enc.decode(&t.pre).unwrap();
                let post = enc.decode(&t.post).unwrap();
                let moves = env.moves(&pre).unwrap();
                let label = t.label.as_deref().unwrap();
                assert!(moves.iter().any(|(l, s)| l == label && *s == post));
                if let (EnvState::Slide(p), Env::Slide { .. }) = (&pre, env) {
                    assert!(p.is_solvable());
                }
            }
        }
    }

    #[test]
    fn exhaustive_counts() {
        assert_eq!(exhaustive_transitions(&gt(Env::Lights { n: 3 }), DEFAULT_STATE_CAP).unwrap().len(), 4608);
        assert_eq!(exhaustive_transitions(&gt(Env::Slide { n: 2 }), DEFAULT_STATE_CAP).unwrap().len(), 24);
        let hanoi = exhaustive_transitions(&gt(Env::Hanoi { disks: 4 }), DEFAULT_STATE_CAP).unwrap();
        let states: std::collections::HashSet<_> = hanoi.transitions.iter().map(|t| t.pre.clone()).collect();
        assert_eq!(states.len(), 81);
    }

    #[test]
    fn jsonl_round_trip() {
        let enc = gt(Env::Hanoi { disks: 3 });
        let ds = sample_transitions(&enc, 50, 9).unwrap();
        let mut buf = Vec::new();
        ds.write_jsonl(&mut buf).unwrap();
        let back = TransitionDataset::read_jsonl(buf.as_slice()).unwrap();
        assert_eq!(ds, back);
    }

    #[test]
    fn jsonl_rejects_bad_width() {
        let text = "{\"F\":4,\"env\":\"hanoi1\",\"seed\":0}\n{\"pre\":\"010\",\"post\":\"001\"}\n";
        let err = TransitionDataset::read_jsonl(text.as_bytes()).unwrap_err();
        assert!(matches!(err, DatasetError::Format { line: 2, .. }));
    }

    #[test]
    fn instance_depths_are_exact() {
        let enc = gt(Env::Slide { n: 2 });
        let set = gen_instances(&enc, 1, 2, 5).unwrap();
        assert_eq!(set.frontier_size, 2);
        assert!(!set.with_replacement);

        // verify true distance by BFS over the simulator for a deeper case
        let set3 = gen_instances(&enc, 3, 3, 5).unwrap();
        for (init, goal) in &set3.instances {
            assert_eq!(*goal, enc.goal_code());
            let start = enc.decode(init).unwrap();
            let mut dist = std::collections::HashMap::new();
            dist.insert(start.clone(), 0usize);
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(s) = queue.pop_front() {
                let d = dist[&s];
                for (_, next) in enc.env.moves(&s).unwrap() {
                    if !dist.contains_key(&next) {
                        dist.insert(next.clone(), d + 1);
                        queue.push_back(next);
                    }
                }
            }
            assert_eq!(dist[&enc.env.goal_state()], 3);
        }
    }

    #[test]
    fn depth_zero_instances_are_the_goal() {
        let enc = gt(Env::Hanoi { disks: 3 });
        let set = gen_instances(&enc, 0, 1, 1).unwrap();
        assert_eq!(set.instances[0].0, set.instances[0].1);
    }

    #[test]
    fn small_frontier_falls_back_to_replacement() {
        let enc = gt(Env::Hanoi { disks: 4 });
        let set = gen_instances(&enc, 1, 10, 1).unwrap();
        assert_eq!(set.frontier_size, 2);
        assert!(set.with_replacement);
        assert_eq!(set.instances.len(), 10);
    }
}
