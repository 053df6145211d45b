//! Tower of Hanoi with three pegs. Disk 0 is the smallest; any peg
//! assignment is a legal configuration because stacking order is implied by
//! size.

use rand::Rng;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HanoiState {
    /// `peg_of[d]` is the peg (0..2) holding disk `d`.
    pub peg_of: Vec<u8>,
}

impl HanoiState {
    pub fn tower_on(disks: usize, peg: u8) -> Self {
        HanoiState { peg_of: vec![peg; disks] }
    }

    pub fn disks(&self) -> usize {
        self.peg_of.len()
    }

    pub fn random(disks: usize, rng: &mut impl Rng) -> Self {
        HanoiState {
            peg_of: (0..disks).map(|_| rng.gen_range(0..3u8)).collect(),
        }
    }

    /// Smallest (= topmost) disk on `peg`, if any.
    pub fn top_disk(&self, peg: u8) -> Option<usize> {
        self.peg_of.iter().position(|&p| p == peg)
    }
}

/// Legal moves `(disk, from → to)`: the top disk of `from` may move to `to`
/// when `to` holds no smaller disk. Enumerated over ordered peg pairs.
pub fn hanoi_moves(state: &HanoiState) -> Vec<(String, HanoiState)> {
    let mut moves = Vec::new();
    for from in 0..3u8 {
        let Some(disk) = state.top_disk(from) else { continue };
        for to in 0..3u8 {
            if to == from {
                continue;
            }
            let legal = match state.top_disk(to) {
                Some(other) => other > disk,
                None => true,
            };
            if legal {
                let mut next = state.clone();
                next.peg_of[disk] = to;
                moves.push((format!("d{disk}-{from}-{to}"), next));
            }
        }
    }
    moves
}
