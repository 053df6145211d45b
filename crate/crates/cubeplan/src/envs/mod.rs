//! Ground-truth puzzle simulators, binary encoders, transition sampling, and
//! planning-instance generation.
//!
//! The one-hot encodings stand in for a learned bidirectional state mapping;
//! the optional bit permutation and XOR mask exist to show the rest of the
//! pipeline is representation-agnostic.

mod hanoi;
mod lights;
mod slide;

pub mod dataset;

pub use dataset::{
    exhaustive_transitions, gen_instances, sample_transitions, InstanceSet, Transition,
    TransitionDataset, DEFAULT_STATE_CAP,
};
pub use hanoi::{hanoi_moves, HanoiState};
pub use lights::{lights_moves, lightsout_press, LightsState};
pub use slide::{slide_moves, SlideState};

use rand::Rng;
use thiserror::Error;

use crate::bits::BitState;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnvError {
    #[error("state does not belong to environment {expected}")]
    StateMismatch { expected: String },
    #[error("code has {found} bits, environment expects {expected}")]
    CodeWidthMismatch { found: usize, expected: usize },
    #[error("one-hot group {group} has {count} set bits")]
    InvalidOneHot { group: usize, count: usize },
    #[error("decoded tile layout is not a permutation")]
    NotAPermutation,
    #[error("permutation is not a bijection on 0..{expected}")]
    BadPermutation { expected: usize },
    #[error("xor mask has {found} bits, expected {expected}")]
    BadMask { found: usize, expected: usize },
    #[error("reachable state space exceeds cap of {cap} states")]
    CapExceeded { cap: usize },
    #[error("no states at depth {depth} (frontier is empty)")]
    EmptyFrontier { depth: usize },
    #[error("unknown environment name {0:?}")]
    UnknownEnv(String),
}

/// Which puzzle family and size a dataset or instance set talks about.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Env {
    /// n×n sliding-tile puzzle; 2 → the 2x2 toy, 3 → 8-puzzle, 4 → 15-puzzle.
    Slide { n: usize },
    /// n×n LightsOut grid.
    Lights { n: usize },
    /// Tower of Hanoi with `disks` disks on 3 pegs.
    Hanoi { disks: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EnvState {
    Slide(SlideState),
    Lights(LightsState),
    Hanoi(HanoiState),
}

impl Env {
    /// Number of latent bits the one-hot encoding uses.
    pub fn num_bits(&self) -> usize {
        match *self {
            Env::Slide { n } => n * n * n * n,
            Env::Lights { n } => n * n,
            Env::Hanoi { disks } => 3 * disks,
        }
    }

    /// The fixed goal state: solved board, all lights off, full tower on peg 2.
    pub fn goal_state(&self) -> EnvState {
        match *self {
            Env::Slide { n } => EnvState::Slide(SlideState::solved(n)),
            Env::Lights { n } => EnvState::Lights(LightsState::all_off(n)),
            Env::Hanoi { disks } => EnvState::Hanoi(HanoiState::tower_on(disks, 2)),
        }
    }

    pub fn name(&self) -> String {
        match *self {
            Env::Slide { n } => format!("slide{n}"),
            Env::Lights { n } => format!("lightsout{n}"),
            Env::Hanoi { disks } => format!("hanoi{disks}"),
        }
    }

    pub fn parse_name(name: &str) -> Result<Self, EnvError> {
        let split = name.find(|c: char| c.is_ascii_digit()).unwrap_or(name.len());
        let (kind, size) = name.split_at(split);
        let size: usize = size.parse().map_err(|_| EnvError::UnknownEnv(name.to_string()))?;
        match kind {
            "slide" if size >= 2 => Ok(Env::Slide { n: size }),
            "lightsout" if size >= 1 => Ok(Env::Lights { n: size }),
            "hanoi" if size >= 1 => Ok(Env::Hanoi { disks: size }),
            _ => Err(EnvError::UnknownEnv(name.to_string())),
        }
    }

    /// Legal moves of `state` with ground-truth labels, in a deterministic
    /// per-environment order.
    pub fn moves(&self, state: &EnvState) -> Result<Vec<(String, EnvState)>, EnvError> {
        match (self, state) {
            (Env::Slide { n }, EnvState::Slide(s)) if s.n == *n => {
                Ok(slide_moves(s).into_iter().map(|(l, s)| (l, EnvState::Slide(s))).collect())
            }
            (Env::Lights { n }, EnvState::Lights(s)) if s.n == *n => {
                Ok(lights_moves(s).into_iter().map(|(l, s)| (l, EnvState::Lights(s))).collect())
            }
            (Env::Hanoi { disks }, EnvState::Hanoi(s)) if s.disks() == *disks => {
                Ok(hanoi_moves(s).into_iter().map(|(l, s)| (l, EnvState::Hanoi(s))).collect())
            }
            _ => Err(EnvError::StateMismatch { expected: self.name() }),
        }
    }

    /// A uniform random state: slide puzzles draw uniformly from the goal's
    /// parity class, LightsOut from all 2^(n²) grids, Hanoi from all 3^k
    /// assignments.
    pub fn random_state(&self, rng: &mut impl Rng) -> EnvState {
        match *self {
            Env::Slide { n } => EnvState::Slide(SlideState::random_solvable(n, rng)),
            Env::Lights { n } => EnvState::Lights(LightsState::random(n, rng)),
            Env::Hanoi { disks } => EnvState::Hanoi(HanoiState::random(disks, rng)),
        }
    }

    fn encode_raw(&self, state: &EnvState) -> Result<BitState, EnvError> {
        let f = self.num_bits();
        match (self, state) {
            (Env::Slide { n }, EnvState::Slide(s)) if s.n == *n => {
                let nn = n * n;
                let mut bits = BitState::zeros(f);
                for (cell, &tile) in s.cells.iter().enumerate() {
                    bits.set(tile as usize * nn + cell, true);
                }
                Ok(bits)
            }
            (Env::Lights { n }, EnvState::Lights(s)) if s.n == *n => {
                Ok(BitState::from_bools(&s.on))
            }
            (Env::Hanoi { disks }, EnvState::Hanoi(s)) if s.disks() == *disks => {
                let mut bits = BitState::zeros(f);
                for (disk, &peg) in s.peg_of.iter().enumerate() {
                    bits.set(3 * disk + peg as usize, true);
                }
                Ok(bits)
            }
            _ => Err(EnvError::StateMismatch { expected: self.name() }),
        }
    }

    fn decode_raw(&self, bits: &BitState) -> Result<EnvState, EnvError> {
        let f = self.num_bits();
        if bits.len() != f {
            return Err(EnvError::CodeWidthMismatch { found: bits.len(), expected: f });
        }
        match *self {
            Env::Slide { n } => {
                let nn = n * n;
                let mut cells = vec![u8::MAX; nn];
                for tile in 0..nn {
                    let mut cell = None;
                    let mut count = 0;
                    for c in 0..nn {
                        if bits.get(tile * nn + c) {
                            cell = Some(c);
                            count += 1;
                        }
                    }
                    if count != 1 {
                        return Err(EnvError::InvalidOneHot { group: tile, count });
                    }
                    let c = cell.unwrap();
                    if cells[c] != u8::MAX {
                        return Err(EnvError::NotAPermutation);
                    }
                    cells[c] = tile as u8;
                }
                Ok(EnvState::Slide(SlideState { n, cells }))
            }
            Env::Lights { n } => Ok(EnvState::Lights(LightsState { n, on: bits.to_bools() })),
            Env::Hanoi { disks } => {
                let mut peg_of = Vec::with_capacity(disks);
                for disk in 0..disks {
                    let mut peg = None;
                    let mut count = 0;
                    for p in 0..3 {
                        if bits.get(3 * disk + p) {
                            peg = Some(p as u8);
                            count += 1;
                        }
                    }
                    if count != 1 {
                        return Err(EnvError::InvalidOneHot { group: disk, count });
                    }
                    peg_of.push(peg.unwrap());
                }
                Ok(EnvState::Hanoi(HanoiState { peg_of }))
            }
        }
    }

    /// All states reachable from the goal state, in BFS order. Errors when
    /// the component exceeds `cap`.
    pub fn reachable_states(&self, cap: usize) -> Result<Vec<EnvState>, EnvError> {
        use std::collections::HashSet;
        let start = self.goal_state();
        let mut order = vec![start.clone()];
        let mut seen: HashSet<EnvState> = order.iter().cloned().collect();
        let mut head = 0;
        while head < order.len() {
            let state = order[head].clone();
            head += 1;
            for (_, next) in self.moves(&state)? {
                if seen.insert(next.clone()) {
                    if order.len() >= cap {
                        return Err(EnvError::CapExceeded { cap });
                    }
                    order.push(next);
                }
            }
        }
        Ok(order)
    }
}

/// An environment plus the optional bit permutation π and XOR mask μ applied
/// on top of the raw one-hot code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Encoding {
    pub env: Env,
    perm: Option<Vec<usize>>,
    mask: Option<BitState>,
}

impl Encoding {
    pub fn ground_truth(env: Env) -> Self {
        Encoding { env, perm: None, mask: None }
    }

    /// `perm[i]` is the output position of raw bit `i`.
    pub fn with_permutation(mut self, perm: Vec<usize>) -> Result<Self, EnvError> {
        let f = self.env.num_bits();
        let mut seen = vec![false; f];
        if perm.len() != f || perm.iter().any(|&p| p >= f || std::mem::replace(&mut seen[p], true)) {
            return Err(EnvError::BadPermutation { expected: f });
        }
        self.perm = Some(perm);
        Ok(self)
    }

    pub fn with_mask(mut self, mask: BitState) -> Result<Self, EnvError> {
        if mask.len() != self.env.num_bits() {
            return Err(EnvError::BadMask { found: mask.len(), expected: self.env.num_bits() });
        }
        self.mask = Some(mask);
        Ok(self)
    }

    /// A shuffled permutation and random mask derived from `seed`, for
    /// exercising representation-agnosticism.
    pub fn scrambled(env: Env, seed: u64) -> Self {
        Encoding {
            env,
            perm: Some(Self::derive_permutation(env, seed)),
            mask: Some(Self::derive_mask(env, seed)),
        }
    }

    /// A seed-determined bijection on bit positions.
    pub fn derive_permutation(env: Env, seed: u64) -> Vec<usize> {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<usize> = (0..env.num_bits()).collect();
        perm.shuffle(&mut rng);
        perm
    }

    /// A seed-determined XOR mask.
    pub fn derive_mask(env: Env, seed: u64) -> BitState {
        use rand::SeedableRng;
        // offset keeps the mask stream independent of the permutation stream
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x9e3779b97f4a7c15);
        let f = env.num_bits();
        let mut mask = BitState::zeros(f);
        for i in 0..f {
            if rng.gen() {
                mask.set(i, true);
            }
        }
        mask
    }

    pub fn permutation(&self) -> Option<&[usize]> {
        self.perm.as_deref()
    }

    pub fn mask(&self) -> Option<&BitState> {
        self.mask.as_ref()
    }

    pub fn num_bits(&self) -> usize {
        self.env.num_bits()
    }

    pub fn is_ground_truth(&self) -> bool {
        self.perm.is_none() && self.mask.is_none()
    }

    /// One-hot layout, then π, then XOR μ.
    pub fn encode(&self, state: &EnvState) -> Result<BitState, EnvError> {
        let raw = self.env.encode_raw(state)?;
        let permuted = match &self.perm {
            None => raw,
            Some(p) => {
                let mut out = BitState::zeros(raw.len());
                for i in raw.iter_ones() {
                    out.set(p[i], true);
                }
                out
            }
        };
        Ok(match &self.mask {
            None => permuted,
            Some(m) => permuted.xor(m),
        })
    }

    /// Undo μ, undo π, then parse the one-hot groups. A code whose groups
    /// are not one-hot (or whose tile layout is not a permutation) has no
    /// ground-truth meaning and is rejected.
    pub fn decode(&self, bits: &BitState) -> Result<EnvState, EnvError> {
        if bits.len() != self.num_bits() {
            return Err(EnvError::CodeWidthMismatch { found: bits.len(), expected: self.num_bits() });
        }
        let unmasked = match &self.mask {
            None => bits.clone(),
            Some(m) => bits.xor(m),
        };
        let raw = match &self.perm {
            None => unmasked,
            Some(p) => {
                let mut out = BitState::zeros(unmasked.len());
                for (i, &target) in p.iter().enumerate() {
                    if unmasked.get(target) {
                        out.set(i, true);
                    }
                }
                out
            }
        };
        self.env.decode_raw(&raw)
    }

    pub fn goal_code(&self) -> BitState {
        self.encode(&self.env.goal_state()).expect("goal state always encodes")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnvValidation {
    Valid,
    Invalid { step: usize, reason: EnvInvalidReason },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnvInvalidReason {
    Undecodable,
    IllegalMove,
    GoalUnsatisfied,
}

/// Validates a latent-state trajectory against the real environment: every
/// state must decode, every consecutive pair must be a legal move, and the
/// final state must be the fixed goal. Step 0 is `init`; the transition into
/// `states[k]` is reported as step `k + 1`.
pub fn validate_plan_in_env(
    encoding: &Encoding,
    init: &BitState,
    states: &[BitState],
) -> EnvValidation {
    let mut decoded = Vec::with_capacity(states.len() + 1);
    for (step, code) in std::iter::once(init).chain(states.iter()).enumerate() {
        match encoding.decode(code) {
            Ok(s) => decoded.push(s),
            Err(_) => return EnvValidation::Invalid { step, reason: EnvInvalidReason::Undecodable },
        }
    }
    for step in 1..decoded.len() {
        let legal = encoding
            .env
            .moves(&decoded[step - 1])
            .map(|moves| moves.iter().any(|(_, next)| *next == decoded[step]))
            .unwrap_or(false);
        if !legal {
            return EnvValidation::Invalid { step, reason: EnvInvalidReason::IllegalMove };
        }
    }
    if decoded.last() != Some(&encoding.env.goal_state()) {
        return EnvValidation::Invalid {
            step: decoded.len() - 1,
            reason: EnvInvalidReason::GoalUnsatisfied,
        };
    }
    EnvValidation::Valid
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn lights_all_off_encodes_to_zeros() {
        let enc = Encoding::ground_truth(Env::Lights { n: 3 });
        assert_eq!(enc.goal_code().to_string(), "000000000");
    }

    #[test]
    fn hanoi_one_disk_one_hot() {
        let enc = Encoding::ground_truth(Env::Hanoi { disks: 1 });
        let code = enc.encode(&EnvState::Hanoi(HanoiState { peg_of: vec![2] })).unwrap();
        assert_eq!(code.to_string(), "001");
    }

    #[test]
    fn all_ones_mask_complements_the_code() {
        let env = Env::Hanoi { disks: 2 };
        let plain = Encoding::ground_truth(env);
        let masked = Encoding::ground_truth(env)
            .with_mask(BitState::ones(env.num_bits()))
            .unwrap();
        let state = EnvState::Hanoi(HanoiState { peg_of: vec![0, 1] });
        assert_eq!(masked.encode(&state).unwrap(), plain.encode(&state).unwrap().not());
    }

    #[test]
    fn encode_decode_round_trip_under_transforms() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for env in [Env::Slide { n: 3 }, Env::Lights { n: 4 }, Env::Hanoi { disks: 5 }] {
            for seed in 0..4 {
                let enc = if seed == 0 {
                    Encoding::ground_truth(env)
                } else {
                    Encoding::scrambled(env, seed)
                };
                for _ in 0..25 {
                    let s = env.random_state(&mut rng);
                    let code = enc.encode(&s).unwrap();
                    assert_eq!(enc.decode(&code).unwrap(), s);
                }
            }
        }
    }

    #[test]
    fn lights_codes_are_always_decodable() {
        let enc = Encoding::ground_truth(Env::Lights { n: 2 });
        for v in 0..16u32 {
            let bits = BitState::from_bools(&(0..4).map(|i| v >> i & 1 == 1).collect::<Vec<_>>());
            assert!(enc.decode(&bits).is_ok());
        }
    }

    #[test]
    fn slide_code_with_doubled_tile_is_rejected() {
        let enc = Encoding::ground_truth(Env::Slide { n: 2 });
        let solved = enc.goal_code();
        let mut broken = solved.clone();
        // tile 1 claims two cells
        broken.set(4, true);
        broken.set(5, true);
        assert!(matches!(enc.decode(&broken), Err(EnvError::InvalidOneHot { .. })));
        // two tiles claim one cell: tile 1 moves onto tile 2's cell
        let mut clash = solved.clone();
        clash.set(5, false);
        clash.set(6, true);
        assert!(matches!(
            enc.decode(&clash),
            Err(EnvError::NotAPermutation) | Err(EnvError::InvalidOneHot { .. })
        ));
    }

    #[test]
    fn reachable_component_sizes() {
        assert_eq!(Env::Slide { n: 2 }.reachable_states(1_000).unwrap().len(), 12);
        assert_eq!(Env::Lights { n: 3 }.reachable_states(1_000).unwrap().len(), 512);
        assert_eq!(Env::Hanoi { disks: 4 }.reachable_states(1_000).unwrap().len(), 81);
        assert_eq!(
            Env::Lights { n: 3 }.reachable_states(100),
            Err(EnvError::CapExceeded { cap: 100 })
        );
    }

    #[test]
    fn env_names_round_trip() {
        for env in [Env::Slide { n: 4 }, Env::Lights { n: 3 }, Env::Hanoi { disks: 9 }] {
            assert_eq!(Env::parse_name(&env.name()).unwrap(), env);
        }
        assert!(Env::parse_name("tetris3").is_err());
    }

    #[test]
    fn env_validation_detects_teleport_and_off_goal() {
        let env = Env::Slide { n: 2 };
        let enc = Encoding::ground_truth(env);
        // a real two-step walk ending at the goal
        let goal = env.goal_state();
        let (_, mid) = env.moves(&goal).unwrap().into_iter().next().unwrap();
        let init = enc.encode(&mid).unwrap();
        let back = enc.goal_code();
        assert_eq!(validate_plan_in_env(&enc, &init, &[back.clone()]), EnvValidation::Valid);
        // teleporting directly between two states at distance 2
        let (_, far) = env.moves(&mid).unwrap().into_iter().find(|(_, s)| *s != goal).unwrap();
        let far_code = enc.encode(&far).unwrap();
        assert_eq!(
            validate_plan_in_env(&enc, &back, &[far_code.clone(), back.clone()]),
            EnvValidation::Invalid { step: 1, reason: EnvInvalidReason::IllegalMove }
        );
        // ending somewhere other than the goal
        assert_eq!(
            validate_plan_in_env(&enc, &back, &[init.clone()]),
            EnvValidation::Invalid { step: 1, reason: EnvInvalidReason::GoalUnsatisfied }
        );
        // an undecodable middle state
        let mut junk = init.clone();
        junk.set(0, true);
        junk.set(1, true);
        assert_eq!(
            validate_plan_in_env(&enc, &init, &[junk, back]),
            EnvValidation::Invalid { step: 1, reason: EnvInvalidReason::Undecodable }
        );
    }
}
