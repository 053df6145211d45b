//! Sliding-tile puzzle on an n×n board. Tile value 0 is the blank; a move
//! swaps the blank with an orthogonal neighbor.

use rand::seq::SliceRandom;
use rand::Rng;

/// Cells laid out row-major; `cells[c]` is the tile at cell `c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SlideState {
    pub n: usize,
    pub cells: Vec<u8>,
}

impl SlideState {
    /// Tiles in order with the blank at cell 0.
    pub fn solved(n: usize) -> Self {
        SlideState {
            n,
            cells: (0..(n * n) as u8).collect(),
        }
    }

    pub fn blank_cell(&self) -> usize {
        self.cells.iter().position(|&t| t == 0).expect("blank tile missing")
    }

    pub fn is_permutation(&self) -> bool {
        let nn = self.n * self.n;
        if self.cells.len() != nn {
            return false;
        }
        let mut seen = vec![false; nn];
        for &t in &self.cells {
            let t = t as usize;
            if t >= nn || seen[t] {
                return false;
            }
            seen[t] = true;
        }
        true
    }

    /// Permutation parity of `cells` (as a mapping cell → tile).
    fn permutation_parity(&self) -> bool {
        let mut perm: Vec<usize> = self.cells.iter().map(|&t| t as usize).collect();
        let mut swaps = 0usize;
        for i in 0..perm.len() {
            while perm[i] != i {
                let j = perm[i];
                perm.swap(i, j);
                swaps += 1;
            }
        }
        swaps % 2 == 1
    }

    /// Every blank swap flips both the permutation parity and the parity of
    /// the blank's taxicab distance to cell 0, so their XOR is invariant.
    /// States reachable from [`SlideState::solved`] have XOR = false.
    pub fn is_solvable(&self) -> bool {
        let blank = self.blank_cell();
        let taxicab = blank / self.n + blank % self.n;
        self.permutation_parity() == (taxicab % 2 == 1)
    }

    /// Uniform over the solvable parity class: shuffle, then swap tiles 1 and
    /// 2 if the shuffle landed in the unreachable class.
    pub fn random_solvable(n: usize, rng: &mut impl Rng) -> Self {
        let mut state = SlideState::solved(n);
        state.cells.shuffle(rng);
        if !state.is_solvable() {
            let i = state.cells.iter().position(|&t| t == 1).unwrap();
            let j = state.cells.iter().position(|&t| t == 2).unwrap();
            state.cells.swap(i, j);
        }
        state
    }
}

const DIRECTIONS: [(isize, isize, &str); 4] =
    [(-1, 0, "up"), (1, 0, "down"), (0, -1, "left"), (0, 1, "right")];

/// Successors of `state`: one per orthogonal neighbor of the blank, in
/// up/down/left/right order filtered by bounds. The label carries the blank
/// cell, the direction, and the tile that moves into the blank.
pub fn slide_moves(state: &SlideState) -> Vec<(String, SlideState)> {
    let n = state.n;
    let blank = state.blank_cell();
    let (row, col) = (blank / n, blank % n);
    let mut moves = Vec::new();
    for (dr, dc, dir) in DIRECTIONS {
        let (r2, c2) = (row as isize + dr, col as isize + dc);
        if r2 < 0 || c2 < 0 || r2 >= n as isize || c2 >= n as isize {
            continue;
        }
        let from = r2 as usize * n + c2 as usize;
        let tile = state.cells[from];
        let mut next = state.clone();
        next.cells.swap(blank, from);
        moves.push((format!("b{blank}-{dir}-t{tile}"), next));
    }
    moves
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn solved_corner_blank_has_two_moves() {
        let s = SlideState::solved(2);
        assert_eq!(slide_moves(&s).len(), 2);
    }

    #[test]
    fn center_blank_has_four_moves() {
        let mut s = SlideState::solved(3);
        // move blank to center cell 4
        s.cells.swap(0, 1);
        s.cells.swap(1, 4);
        assert_eq!(s.blank_cell(), 4);
        assert_eq!(slide_moves(&s).len(), 4);
    }

    #[test]
    fn moves_are_involutions() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let s = SlideState::random_solvable(3, &mut rng);
            for (_, next) in slide_moves(&s) {
                assert!(slide_moves(&next).iter().any(|(_, back)| back == &s));
            }
        }
    }

    #[test]
    fn random_states_stay_in_the_solvable_class() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let s = SlideState::random_solvable(3, &mut rng);
            assert!(s.is_permutation());
            assert!(s.is_solvable());
        }
    }

    #[test]
    fn solvability_matches_reachability_on_2x2() {
        // BFS from solved must visit exactly the 12 solvable permutations.
        use std::collections::HashSet;
        let mut seen = HashSet::new();
        let mut queue = vec![SlideState::solved(2)];
        seen.insert(queue[0].clone());
        while let Some(s) = queue.pop() {
            for (_, next) in slide_moves(&s) {
                if seen.insert(next.clone()) {
                    queue.push(next);
                }
            }
        }
        assert_eq!(seen.len(), 12);
        assert!(seen.iter().all(|s| s.is_solvable()));
    }
}
