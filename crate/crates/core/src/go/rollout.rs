//! Mutable playout boards for Monte-Carlo position evaluation.
//!
//! Rollouts play uniformly random legal moves, never fill a point that
//! looks like the mover's own eye, and stop at two consecutive passes
//! (with a generous ply cap against pathological cycling; only the
//! simple-ko point is tracked here). Games are then scored by area.
//!
//! The move selection consumes randomness in a color-symmetric way:
//! recoloring every stone and flipping the side to move yields the
//! mirrored game under the same random stream. The ownership estimator
//! relies on that exactness.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::board::{Color, GoState};

const EMPTY: u8 = 0;

#[derive(Clone)]
pub(crate) struct PlayoutBoard {
    size: usize,
    grid: Vec<u8>, // 0 empty, 1 black, 2 white
    to_move: u8,
    empties: Vec<u32>,
    empty_slot: Vec<u32>, // point index -> slot in `empties` (u32::MAX when filled)
    ko_point: Option<usize>,
    // reusable scratch for chain scans
    stack: Vec<u32>,
    mark: Vec<u32>,
    mark_epoch: u32,
}

fn color_code(c: Color) -> u8 {
    match c {
        Color::Black => 1,
        Color::White => 2,
    }
}

impl PlayoutBoard {
    pub fn from_state(state: &GoState) -> PlayoutBoard {
        let size = state.size();
        let cells = size * size;
        let mut grid = vec![EMPTY; cells];
        let mut empties = Vec::with_capacity(cells);
        let mut empty_slot = vec![u32::MAX; cells];
        for idx in 0..cells {
            match state.grid()[idx] {
                Some(c) => grid[idx] = color_code(c),
                None => {
                    empty_slot[idx] = empties.len() as u32;
                    empties.push(idx as u32);
                }
            }
        }
        PlayoutBoard {
            size,
            grid,
            to_move: color_code(state.to_move()),
            empties,
            empty_slot,
            ko_point: None,
            stack: Vec::with_capacity(cells),
            mark: vec![0; cells],
            mark_epoch: 0,
        }
    }

    fn neighbors(&self, idx: usize, buf: &mut [usize; 4]) -> usize {
        let size = self.size;
        let row = idx / size;
        let col = idx % size;
        let mut n = 0;
        if row > 0 {
            buf[n] = idx - size;
            n += 1;
        }
        if row + 1 < size {
            buf[n] = idx + size;
            n += 1;
        }
        if col > 0 {
            buf[n] = idx - 1;
            n += 1;
        }
        if col + 1 < size {
            buf[n] = idx + 1;
            n += 1;
        }
        n
    }

    /// Liberty count of the chain containing `start`, early-exiting once
    /// `cap` liberties are seen.
    fn chain_liberties_capped(&mut self, start: usize, cap: usize) -> usize {
        let color = self.grid[start];
        self.mark_epoch += 1;
        let epoch = self.mark_epoch;
        self.stack.clear();
        self.stack.push(start as u32);
        self.mark[start] = epoch;
        let mut libs = 0;
        let mut nbs = [0usize; 4];
        let mut cursor = 0;
        while cursor < self.stack.len() {
            let cur = self.stack[cursor] as usize;
            cursor += 1;
            let n = self.neighbors(cur, &mut nbs);
            for &nb in &nbs[..n] {
                if self.mark[nb] == epoch {
                    continue;
                }
                if self.grid[nb] == EMPTY {
                    self.mark[nb] = epoch;
                    libs += 1;
                    if libs >= cap {
                        return libs;
                    }
                } else if self.grid[nb] == color {
                    self.mark[nb] = epoch;
                    self.stack.push(nb as u32);
                }
            }
        }
        libs
    }

    fn remove_chain(&mut self, start: usize) -> usize {
        let color = self.grid[start];
        self.mark_epoch += 1;
        let epoch = self.mark_epoch;
        self.stack.clear();
        self.stack.push(start as u32);
        self.mark[start] = epoch;
        let mut cursor = 0;
        let mut nbs = [0usize; 4];
        while cursor < self.stack.len() {
            let cur = self.stack[cursor] as usize;
            cursor += 1;
            self.grid[cur] = EMPTY;
            self.empty_slot[cur] = self.empties.len() as u32;
            self.empties.push(cur as u32);
            let n = self.neighbors(cur, &mut nbs);
            for &nb in &nbs[..n] {
                if self.grid[nb] == color && self.mark[nb] != epoch {
                    self.mark[nb] = epoch;
                    self.stack.push(nb as u32);
                }
            }
        }
        cursor
    }

    /// Drop `idx` from the empty-point tracking once a stone is committed.
    fn remove_empty(&mut self, idx: usize) {
        let slot = self.empty_slot[idx] as usize;
        let last = *self.empties.last().expect("filling a tracked empty");
        self.empties[slot] = last;
        self.empty_slot[last as usize] = slot as u32;
        self.empties.pop();
        self.empty_slot[idx] = u32::MAX;
    }

    /// True when `idx` looks like an eye for `color`: every orthogonal
    /// neighbor is own (or edge) and the enemy holds at most one diagonal
    /// (none at the edge).
    fn is_own_eye(&self, idx: usize, color: u8) -> bool {
        let size = self.size;
        let row = idx / size;
        let col = idx % size;
        let mut nbs = [0usize; 4];
        let n = {
            let mut n = 0;
            if row > 0 {
                nbs[n] = idx - size;
                n += 1;
            }
            if row + 1 < size {
                nbs[n] = idx + size;
                n += 1;
            }
            if col > 0 {
                nbs[n] = idx - 1;
                n += 1;
            }
            if col + 1 < size {
                nbs[n] = idx + 1;
                n += 1;
            }
            n
        };
        for &nb in &nbs[..n] {
            if self.grid[nb] != color {
                return false;
            }
        }
        let enemy = 3 - color;
        let mut enemy_diag = 0;
        let mut edge = n < 4;
        for (dr, dc) in [(-1i32, -1i32), (-1, 1), (1, -1), (1, 1)] {
            let r = row as i32 + dr;
            let c = col as i32 + dc;
            if r < 0 || c < 0 || r >= size as i32 || c >= size as i32 {
                edge = true;
                continue;
            }
            if self.grid[(r as usize) * size + c as usize] == enemy {
                enemy_diag += 1;
            }
        }
        if edge {
            enemy_diag == 0
        } else {
            enemy_diag <= 1
        }
    }

    /// Try to play at `idx` for the side to move. Returns false when the
    /// point is illegal (suicide or ko). Does not check eye shape.
    fn try_play(&mut self, idx: usize) -> bool {
        debug_assert_eq!(self.grid[idx], EMPTY);
        if self.ko_point == Some(idx) {
            return false;
        }
        let color = self.to_move;
        let enemy = 3 - color;
        let mut nbs = [0usize; 4];
        let n = self.neighbors(idx, &mut nbs);

        // Probe on the grid only; empty-point tracking is committed after
        // the legality verdict so a revert leaves the scan order intact.
        self.grid[idx] = color;
        let mut captured_total = 0usize;
        let mut last_captured = 0usize;
        for i in 0..n {
            let nb = nbs[i];
            if self.grid[nb] == enemy && self.chain_liberties_capped(nb, 1) == 0 {
                last_captured = nb;
                captured_total += self.remove_chain(nb);
            }
        }
        if captured_total == 0 && self.chain_liberties_capped(idx, 1) == 0 {
            self.grid[idx] = EMPTY;
            return false;
        }
        self.remove_empty(idx);
        // Simple-ko bookkeeping: single-stone capture by a lone stone with
        // exactly the captured point as its liberty.
        self.ko_point = None;
        if captured_total == 1 {
            let mut lone = true;
            for i in 0..n {
                if self.grid[nbs[i]] == color {
                    lone = false;
                    break;
                }
            }
            if lone && self.chain_liberties_capped(idx, 2) == 1 {
                self.ko_point = Some(last_captured);
            }
        }
        self.to_move = enemy;
        true
    }

    /// One random move; returns false when the side passes.
    fn random_move(&mut self, rng: &mut ChaCha8Rng) -> bool {
        let color = self.to_move;
        let total = self.empties.len();
        let mut attempt = 0;
        while attempt < total {
            // Progressive Fisher-Yates: each tried point moves to the front
            // so no point is probed twice this turn.
            let j = rng.gen_range(attempt..total);
            self.empties.swap(attempt, j);
            self.empty_slot[self.empties[attempt] as usize] = attempt as u32;
            self.empty_slot[self.empties[j] as usize] = j as u32;
            let idx = self.empties[attempt] as usize;
            if !self.is_own_eye(idx, color) && self.try_play(idx) {
                return true;
            }
            attempt += 1;
        }
        self.to_move = 3 - color;
        self.ko_point = None;
        false
    }

    /// Random playout to two consecutive passes (or the ply cap); returns
    /// per-point area ownership (+1 black, -1 white, 0 neutral) and the
    /// area counts.
    pub fn playout_and_score(&mut self, rng: &mut ChaCha8Rng) -> (Vec<i8>, u32, u32) {
        let cap = 3 * self.size * self.size;
        let mut passes = 0;
        let mut plies = 0;
        while passes < 2 && plies < cap {
            if self.random_move(rng) {
                passes = 0;
            } else {
                passes += 1;
            }
            plies += 1;
        }
        self.score()
    }

    fn score(&mut self) -> (Vec<i8>, u32, u32) {
        let cells = self.size * self.size;
        let mut own = vec![0i8; cells];
        let mut black = 0u32;
        let mut white = 0u32;
        let mut region = Vec::new();
        self.mark_epoch += 1;
        let epoch = self.mark_epoch;
        let mut nbs = [0usize; 4];
        for idx in 0..cells {
            match self.grid[idx] {
                1 => {
                    own[idx] = 1;
                    black += 1;
                }
                2 => {
                    own[idx] = -1;
                    white += 1;
                }
                _ => {
                    if self.mark[idx] == epoch {
                        continue;
                    }
                    region.clear();
                    region.push(idx);
                    self.mark[idx] = epoch;
                    let mut touches = (false, false);
                    let mut cursor = 0;
                    while cursor < region.len() {
                        let cur = region[cursor];
                        cursor += 1;
                        let n = self.neighbors(cur, &mut nbs);
                        for &nb in &nbs[..n] {
                            match self.grid[nb] {
                                1 => touches.0 = true,
                                2 => touches.1 = true,
                                _ => {
                                    if self.mark[nb] != epoch {
                                        self.mark[nb] = epoch;
                                        region.push(nb);
                                    }
                                }
                            }
                        }
                    }
                    let value = match touches {
                        (true, false) => 1,
                        (false, true) => -1,
                        _ => 0,
                    };
                    for &p in &region {
                        own[p] = value;
                        match value {
                            1 => black += 1,
                            -1 => white += 1,
                            _ => {}
                        }
                    }
                }
            }
        }
        (own, black, white)
    }
}

/// Accumulated rollout statistics for one position.
pub(crate) struct RolloutStats {
    pub n: u32,
    pub ownership_sum: Vec<i64>,
    pub black_wins: u32,
}

/// Run `n` seeded rollouts from `state`. Substreams are indexed by
/// rollout, so accumulation order never matters. A rollout counts as a
/// black win when `black_area - white_area - komi > 0`.
pub(crate) fn run_rollouts(
    state: &GoState,
    n: u32,
    seed: u64,
    label: &str,
    komi: f64,
) -> RolloutStats {
    let template = PlayoutBoard::from_state(state);
    let cells = state.size() * state.size();
    let mut stats = RolloutStats { n, ownership_sum: vec![0; cells], black_wins: 0 };
    for j in 0..n {
        let mut rng = crate::seeding::rng(seed, label, u64::from(j));
        let mut board = template.clone();
        let (own, black, white) = board.playout_and_score(&mut rng);
        for (acc, v) in stats.ownership_sum.iter_mut().zip(own.iter()) {
            *acc += i64::from(*v);
        }
        if f64::from(black) - f64::from(white) - komi > 0.0 {
            stats.black_wins += 1;
        }
    }
    stats
}
