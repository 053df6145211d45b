//! LightsOut on an n×n grid: pressing a light toggles it and its in-bounds
//! orthogonal neighbors. The goal is all lights off.

use rand::Rng;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LightsState {
    pub n: usize,
    pub on: Vec<bool>,
}

impl LightsState {
    pub fn all_off(n: usize) -> Self {
        LightsState { n, on: vec![false; n * n] }
    }

    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        LightsState {
            n,
            on: (0..n * n).map(|_| rng.gen()).collect(),
        }
    }
}

/// Flips cell `(row, col)` and its orthogonal in-bounds neighbors.
pub fn lightsout_press(state: &LightsState, row: usize, col: usize) -> LightsState {
    let n = state.n;
    assert!(row < n && col < n, "press ({row},{col}) out of range for {n}x{n} grid");
    let mut next = state.clone();
    let mut toggle = |r: isize, c: isize| {
        if r >= 0 && c >= 0 && r < n as isize && c < n as isize {
            let i = r as usize * n + c as usize;
            next.on[i] = !next.on[i];
        }
    };
    let (r, c) = (row as isize, col as isize);
    toggle(r, c);
    toggle(r - 1, c);
    toggle(r + 1, c);
    toggle(r, c - 1);
    toggle(r, c + 1);
    next
}

/// All n² presses in row-major order; every press is applicable everywhere.
pub fn lights_moves(state: &LightsState) -> Vec<(String, LightsState)> {
    let n = state.n;
    (0..n)
        .flat_map(|r| (0..n).map(move |c| (r, c)))
        .map(|(r, c)| (format!("p{r}-{c}"), lightsout_press(state, r, c)))
        .collect()
}
