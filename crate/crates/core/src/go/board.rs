//! Board state and rules: placement, capture, suicide, ko.
//!
//! Suicide is illegal. Ko enforcement is a flag: positional superko
//! (default) rejects recreating any earlier stone arrangement, the
//! simple-ko mode rejects exactly the immediate-recapture case.

use std::fmt;
use std::sync::OnceLock;

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAX_SIZE: usize = 19;
pub const MIN_SIZE: usize = 5;

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn opposite(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Color::Black => 0,
            Color::White => 1,
        }
    }
}

/// 1-based board coordinate; `(1, 1)` is the bottom-left corner A1.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Point {
    pub col: u8,
    pub row: u8,
}

impl Point {
    pub fn new(col: u8, row: u8) -> Point {
        Point { col, row }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Vertex {
    Pass,
    Point(Point),
}

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct GoMove {
    pub color: Color,
    pub vertex: Vertex,
}

impl GoMove {
    pub fn place(color: Color, col: u8, row: u8) -> GoMove {
        GoMove { color, vertex: Vertex::Point(Point::new(col, row)) }
    }

    pub fn pass(color: Color) -> GoMove {
        GoMove { color, vertex: Vertex::Pass }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KoRule {
    SimpleKo,
    PositionalSuperko,
}

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum GoError {
    #[error("point ({0}, {1}) is outside the {2}x{2} board")]
    OutOfBounds(u8, u8, usize),
    #[error("point ({0}, {1}) is occupied")]
    Occupied(u8, u8),
    #[error("move at ({0}, {1}) would be suicide")]
    Suicide(u8, u8),
    #[error("move at ({0}, {1}) violates the ko rule")]
    KoViolation(u8, u8),
    #[error("invalid position: {0}")]
    InvalidPosition(String),
}

/// Stone bookkeeping for annotations: which ply placed the stone that
/// currently occupies a point, and that color's placement ordinal.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub(crate) struct Placement {
    pub ply: u32,
    pub per_color_index: u32,
}

/// An immutable Go position. `apply_move` returns the successor.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GoState {
    size: usize,
    grid: Vec<Option<Color>>,
    to_move: Color,
    history: Vec<GoMove>,
    position_history: Vec<u64>,
    captured: [u32; 2],
    ko_rule: KoRule,
    placement: Vec<Option<Placement>>,
    placements_made: [u32; 2],
}

fn zobrist() -> &'static [[u64; 2]; MAX_SIZE * MAX_SIZE] {
    static TABLE: OnceLock<[[u64; 2]; MAX_SIZE * MAX_SIZE]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(0x60_BA_2D);
        let mut t = [[0u64; 2]; MAX_SIZE * MAX_SIZE];
        for cell in t.iter_mut() {
            cell[0] = rng.next_u64();
            cell[1] = rng.next_u64();
        }
        t
    })
}

impl GoState {
    pub fn new(size: usize) -> GoState {
        assert!(
            (MIN_SIZE..=MAX_SIZE).contains(&size),
            "board size must lie in {MIN_SIZE}..={MAX_SIZE}"
        );
        let cells = size * size;
        let mut st = GoState {
            size,
            grid: vec![None; cells],
            to_move: Color::Black,
            history: Vec::new(),
            position_history: Vec::new(),
            captured: [0, 0],
            ko_rule: KoRule::PositionalSuperko,
            placement: vec![None; cells],
            placements_made: [0, 0],
        };
        st.position_history.push(st.hash());
        st
    }

    /// Restore a position from a raw stone layout. History is unknown;
    /// the superko record starts at this position.
    pub fn from_grid(
        size: usize,
        grid: Vec<Option<Color>>,
        to_move: Color,
    ) -> Result<GoState, GoError> {
        if grid.len() != size * size {
            return Err(GoError::InvalidPosition(format!(
                "grid holds {} cells, expected {}",
                grid.len(),
                size * size
            )));
        }
        let mut st = GoState::new(size);
        st.grid = grid;
        st.to_move = to_move;
        st.position_history = vec![st.hash()];
        // No chain may sit without liberties.
        let mut seen = vec![false; size * size];
        for idx in 0..st.grid.len() {
            if st.grid[idx].is_some() && !seen[idx] {
                let (chain, libs) = st.chain_and_liberties(&st.grid, idx);
                if libs == 0 {
                    let p = st.point_of(idx);
                    return Err(GoError::InvalidPosition(format!(
                        "chain at ({}, {}) has no liberties",
                        p.col, p.row
                    )));
                }
                for c in chain {
                    seen[c] = true;
                }
            }
        }
        Ok(st)
    }

    pub fn with_ko_rule(mut self, rule: KoRule) -> GoState {
        self.ko_rule = rule;
        self
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn to_move(&self) -> Color {
        self.to_move
    }

    pub fn ko_rule(&self) -> KoRule {
        self.ko_rule
    }

    pub fn history(&self) -> &[GoMove] {
        &self.history
    }

    pub fn grid(&self) -> &[Option<Color>] {
        &self.grid
    }

    /// Stones of `color` removed from the board so far.
    pub fn captured(&self, color: Color) -> u32 {
        self.captured[color.index()]
    }

    pub fn stone_at(&self, p: Point) -> Option<Color> {
        self.grid[self.index_of(p)]
    }

    pub fn index_of(&self, p: Point) -> usize {
        debug_assert!(self.in_bounds(p));
        (usize::from(p.row) - 1) * self.size + usize::from(p.col) - 1
    }

    pub fn point_of(&self, idx: usize) -> Point {
        Point::new((idx % self.size + 1) as u8, (idx / self.size + 1) as u8)
    }

    pub fn in_bounds(&self, p: Point) -> bool {
        (1..=self.size as u8).contains(&p.col) && (1..=self.size as u8).contains(&p.row)
    }

    pub(crate) fn placement_at(&self, idx: usize) -> Option<Placement> {
        self.placement[idx]
    }

    pub fn hash(&self) -> u64 {
        let table = zobrist();
        let mut h = 0u64;
        for (idx, cell) in self.grid.iter().enumerate() {
            if let Some(color) = cell {
                let row = idx / self.size;
                let col = idx % self.size;
                h ^= table[row * MAX_SIZE + col][color.index()];
            }
        }
        h
    }

    fn neighbors(&self, idx: usize) -> impl Iterator<Item = usize> {
        let size = self.size;
        let row = idx / size;
        let col = idx % size;
        [
            (row > 0).then(|| idx - size),
            (row + 1 < size).then(|| idx + size),
            (col > 0).then(|| idx - 1),
            (col + 1 < size).then(|| idx + 1),
        ]
        .into_iter()
        .flatten()
    }

    /// The chain containing `start` and its liberty count, scanned fresh.
    fn chain_and_liberties(&self, grid: &[Option<Color>], start: usize) -> (Vec<usize>, usize) {
        let color = grid[start].expect("chain scan starts on a stone");
        let mut chain = vec![start];
        let mut on_chain = vec![false; grid.len()];
        on_chain[start] = true;
        let mut liberties = vec![false; grid.len()];
        let mut libs = 0usize;
        let mut i = 0;
        while i < chain.len() {
            let cur = chain[i];
            i += 1;
            for nb in self.neighbors(cur) {
                match grid[nb] {
                    None => {
                        if !liberties[nb] {
                            liberties[nb] = true;
                            libs += 1;
                        }
                    }
                    Some(c) if c == color && !on_chain[nb] => {
                        on_chain[nb] = true;
                        chain.push(nb);
                    }
                    _ => {}
                }
            }
        }
        (chain, libs)
    }

    /// Play a move and return the successor state.
    ///
    /// The move's color need not match the side to move (game records may
    /// contain irregular orders); the side to move afterwards is always
    /// the opposite of the mover.
    pub fn apply_move(&self, mv: GoMove) -> Result<GoState, GoError> {
        let point = match mv.vertex {
            Vertex::Pass => {
                let mut next = self.clone();
                next.history.push(mv);
                let h = *next.position_history.last().expect("seeded at construction");
                next.position_history.push(h);
                next.to_move = mv.color.opposite();
                return Ok(next);
            }
            Vertex::Point(p) => p,
        };
        if !self.in_bounds(point) {
            return Err(GoError::OutOfBounds(point.col, point.row, self.size));
        }
        let idx = self.index_of(point);
        if self.grid[idx].is_some() {
            return Err(GoError::Occupied(point.col, point.row));
        }

        let mut grid = self.grid.clone();
        grid[idx] = Some(mv.color);
        let mut captured_points: Vec<usize> = Vec::new();
        let enemy = mv.color.opposite();
        for nb in self.neighbors(idx) {
            if grid[nb] == Some(enemy) && !captured_points.contains(&nb) {
                let (chain, libs) = self.chain_and_liberties(&grid, nb);
                if libs == 0 {
                    captured_points.extend(chain);
                }
            }
        }
        for &c in &captured_points {
            grid[c] = None;
        }
        let (_, own_libs) = self.chain_and_liberties(&grid, idx);
        if own_libs == 0 {
            return Err(GoError::Suicide(point.col, point.row));
        }

        // Position hashing for ko: recompute incrementally.
        let table = zobrist();
        let cell_key = |i: usize, color: Color| {
            let row = i / self.size;
            let col = i % self.size;
            table[row * MAX_SIZE + col][color.index()]
        };
        let mut new_hash = *self.position_history.last().expect("seeded") ^ cell_key(idx, mv.color);
        for &c in &captured_points {
            new_hash ^= cell_key(c, enemy);
        }
        match self.ko_rule {
            KoRule::SimpleKo => {
                let n = self.position_history.len();
                if n >= 2 && new_hash == self.position_history[n - 2] {
                    return Err(GoError::KoViolation(point.col, point.row));
                }
            }
            KoRule::PositionalSuperko => {
                if self.position_history.contains(&new_hash) {
                    return Err(GoError::KoViolation(point.col, point.row));
                }
            }
        }

        let mut next = self.clone();
        next.grid = grid;
        next.captured[enemy.index()] += captured_points.len() as u32;
        for &c in &captured_points {
            next.placement[c] = None;
        }
        next.placements_made[mv.color.index()] += 1;
        next.placement[idx] = Some(Placement {
            ply: self.history.len() as u32 + 1,
            per_color_index: next.placements_made[mv.color.index()],
        });
        next.history.push(mv);
        next.position_history.push(new_hash);
        next.to_move = mv.color.opposite();
        Ok(next)
    }

    /// All legal moves for the side to move, pass excluded.
    pub fn legal_points(&self) -> Vec<Point> {
        let mut out = Vec::new();
        for idx in 0..self.grid.len() {
            if self.grid[idx].is_none() {
                let p = self.point_of(idx);
                if self.apply_move(GoMove { color: self.to_move, vertex: Vertex::Point(p) }).is_ok() {
                    out.push(p);
                }
            }
        }
        out
    }

    pub fn stones_on_board(&self) -> u32 {
        self.grid.iter().filter(|c| c.is_some()).count() as u32
    }

    /// Tromp-Taylor area ownership per point: a stone owns its point, an
    /// empty region bordered by one color only belongs to that color.
    pub fn area_ownership(&self) -> Vec<Option<Color>> {
        area_ownership_of(&self.grid, self.size)
    }

    /// Area score (black, white) under Tromp-Taylor counting.
    pub fn area_score(&self) -> (u32, u32) {
        let own = self.area_ownership();
        let black = own.iter().filter(|o| **o == Some(Color::Black)).count() as u32;
        let white = own.iter().filter(|o| **o == Some(Color::White)).count() as u32;
        (black, white)
    }
}

pub(crate) fn area_ownership_of(grid: &[Option<Color>], size: usize) -> Vec<Option<Color>> {
    let mut own: Vec<Option<Color>> = grid.to_vec();
    let mut seen = vec![false; grid.len()];
    for start in 0..grid.len() {
        if grid[start].is_some() || seen[start] {
            continue;
        }
        // Flood the empty region, recording which colors border it.
        let mut region = vec![start];
        seen[start] = true;
        let mut touches = [false; 2];
        let mut i = 0;
        while i < region.len() {
            let cur = region[i];
            i += 1;
            let row = cur / size;
            let col = cur % size;
            let nbs = [
                (row > 0).then(|| cur - size),
                (row + 1 < size).then(|| cur + size),
                (col > 0).then(|| cur - 1),
                (col + 1 < size).then(|| cur + 1),
            ];
            for nb in nbs.into_iter().flatten() {
                match grid[nb] {
                    Some(c) => touches[c.index()] = true,
                    None => {
                        if !seen[nb] {
                            seen[nb] = true;
                            region.push(nb);
                        }
                    }
                }
            }
        }
        let owner = match (touches[0], touches[1]) {
            (true, false) => Some(Color::Black),
            (false, true) => Some(Color::White),
            _ => None,
        };
        for p in region {
            own[p] = owner;
        }
    }
    own
}

/// The unique move taking `s` to `s_next`.
///
/// Identical stone layouts with a flipped side to move diff to a pass.
pub fn diff_states(s: &GoState, s_next: &GoState) -> Result<GoMove, GoError> {
    if s.size() != s_next.size() {
        return Err(GoError::InvalidPosition("board sizes differ".into()));
    }
    if s.grid() == s_next.grid() {
        if s_next.to_move() == s.to_move().opposite() {
            return Ok(GoMove::pass(s.to_move()));
        }
        return Err(GoError::InvalidPosition(
            "identical boards with unchanged side to move".into(),
        ));
    }
    // The added stone of the mover's color identifies the move.
    let mover = s.to_move();
    let mut added: Vec<usize> = Vec::new();
    for idx in 0..s.grid().len() {
        if s.grid()[idx].is_none() && s_next.grid()[idx] == Some(mover) {
            added.push(idx);
        }
    }
    if let [idx] = added[..] {
        let mv = GoMove { color: mover, vertex: Vertex::Point(s.point_of(idx)) };
        let replayed = s.apply_move(mv)?;
        if replayed.grid() == s_next.grid() {
            return Ok(mv);
        }
    }
    Err(GoError::InvalidPosition(
        "no single legal move explains the board difference".into(),
    ))
}

impl fmt::Display for GoState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::codec::serialize_board(self, 0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeding;
    use rand::Rng;
    use std::collections::HashSet;

    fn replay(size: usize, moves: &[(Color, u8, u8)]) -> GoState {
        let mut st = GoState::new(size);
        for &(c, col, row) in moves {
            st = st.apply_move(GoMove::place(c, col, row)).unwrap();
        }
        st
    }

    /// Independent liberty oracle: set-based region growth, no shared code
    /// with the engine's scan.
    fn oracle_captures(grid: &[Option<Color>], size: usize, idx: usize, color: Color) -> HashSet<usize> {
        let mut after: Vec<Option<Color>> = grid.to_vec();
        after[idx] = Some(color);
        let enemy = color.opposite();
        let mut dead = HashSet::new();
        for start in 0..after.len() {
            if after[start] != Some(enemy) || dead.contains(&start) {
                continue;
            }
            let mut region = HashSet::from([start]);
            let mut frontier = vec![start];
            let mut has_liberty = false;
            while let Some(cur) = frontier.pop() {
                let row = cur / size;
                let col = cur % size;
                let mut nbs = Vec::new();
                if row > 0 {
                    nbs.push(cur - size);
                }
                if row + 1 < size {
                    nbs.push(cur + size);
                }
                if col > 0 {
                    nbs.push(cur - 1);
                }
                if col + 1 < size {
                    nbs.push(cur + 1);
                }
                for nb in nbs {
                    match after[nb] {
                        None => has_liberty = true,
                        Some(c) if c == enemy && region.insert(nb) => frontier.push(nb),
                        _ => {}
                    }
                }
            }
            if !has_liberty {
                dead.extend(region);
            }
        }
        dead
    }

    #[test]
    fn single_stone_on_empty_board() {
        let st = replay(19, &[(Color::Black, 10, 10)]);
        assert_eq!(st.stone_at(Point::new(10, 10)), Some(Color::Black));
        assert_eq!(st.stones_on_board(), 1);
        assert_eq!(st.captured(Color::White), 0);
        assert_eq!(st.to_move(), Color::White);
    }

    #[test]
    fn filling_last_liberty_captures() {
        // White stone at (1,1) with liberties (2,1) and (1,2).
        let st = replay(
            5,
            &[
                (Color::White, 1, 1),
                (Color::Black, 2, 1),
                (Color::White, 5, 5),
                (Color::Black, 1, 2),
            ],
        );
        assert_eq!(st.stone_at(Point::new(1, 1)), None);
        assert_eq!(st.captured(Color::White), 1);
    }

    #[test]
    fn multi_chain_capture_spanning_rows_matches_oracle() {
        // Two separate three-stone white rows share their last liberty at
        // (3, 3); one black move removes both chains at once.
        let mut st = GoState::new(7);
        let whites = [(2, 2), (3, 2), (4, 2), (2, 4), (3, 4), (4, 4)];
        let blacks = [
            (1, 2), (2, 1), (3, 1), (4, 1), (5, 2), (2, 3), (4, 3),
            (1, 4), (2, 5), (3, 5), (4, 5), (5, 4),
        ];
        for &(c, r) in &whites {
            st = st.apply_move(GoMove::place(Color::White, c, r)).unwrap();
            st = st.apply_move(GoMove::pass(Color::Black)).unwrap();
        }
        for &(c, r) in &blacks {
            st = st.apply_move(GoMove::place(Color::Black, c, r)).unwrap();
            st = st.apply_move(GoMove::pass(Color::White)).unwrap();
        }
        let fill = Point::new(3, 3);
        let idx = st.index_of(fill);
        let expected = oracle_captures(st.grid(), 7, idx, Color::Black);
        assert_eq!(expected.len(), 6, "both chains share the last liberty");
        let after = st.apply_move(GoMove::place(Color::Black, 3, 3)).unwrap();
        for &dead in &expected {
            assert_eq!(after.grid()[dead], None);
        }
        assert_eq!(after.captured(Color::White), 6);
        assert_eq!(after.stone_at(fill), Some(Color::Black));
    }

    #[test]
    fn suicide_is_rejected() {
        // Black surrounds (1,1); white playing there would be suicide.
        let st = replay(5, &[(Color::Black, 2, 1), (Color::White, 5, 5), (Color::Black, 1, 2)]);
        let err = st.apply_move(GoMove::place(Color::White, 1, 1)).unwrap_err();
        assert_eq!(err, GoError::Suicide(1, 1));
    }

    #[test]
    fn occupied_and_out_of_bounds_are_distinct_errors() {
        let st = replay(5, &[(Color::Black, 3, 3)]);
        assert_eq!(
            st.apply_move(GoMove::place(Color::White, 3, 3)).unwrap_err(),
            GoError::Occupied(3, 3)
        );
        assert_eq!(
            st.apply_move(GoMove::place(Color::White, 6, 1)).unwrap_err(),
            GoError::OutOfBounds(6, 1, 5)
        );
    }

    /// Classic ko shape; white recapturing immediately is rejected under
    /// both rules, and allowed under neither.
    fn ko_position(rule: KoRule) -> GoState {
        let mut st = GoState::new(5).with_ko_rule(rule);
        for mv in [
            GoMove::place(Color::Black, 2, 1),
            GoMove::place(Color::White, 3, 1),
            GoMove::place(Color::Black, 1, 2),
            GoMove::place(Color::White, 4, 2),
            GoMove::place(Color::Black, 2, 3),
            GoMove::place(Color::White, 3, 3),
            GoMove::place(Color::Black, 5, 5),
            GoMove::place(Color::White, 2, 2),
            // Black takes the ko at (3, 2), capturing (2, 2).
            GoMove::place(Color::Black, 3, 2),
        ] {
            st = st.apply_move(mv).unwrap();
        }
        assert_eq!(st.stone_at(Point::new(2, 2)), None);
        assert_eq!(st.captured(Color::White), 1);
        st
    }

    #[test]
    fn simple_ko_rejects_exactly_immediate_recapture() {
        let st = ko_position(KoRule::SimpleKo);
        let err = st.apply_move(GoMove::place(Color::White, 2, 2)).unwrap_err();
        assert_eq!(err, GoError::KoViolation(2, 2));
        // After a pass exchange, simple ko allows the retake.
        let st = st
            .apply_move(GoMove::pass(Color::White))
            .unwrap()
            .apply_move(GoMove::pass(Color::Black))
            .unwrap();
        assert!(st.apply_move(GoMove::place(Color::White, 2, 2)).is_ok());
    }

    #[test]
    fn positional_superko_rejects_any_repetition() {
        let st = ko_position(KoRule::PositionalSuperko);
        assert_eq!(
            st.apply_move(GoMove::place(Color::White, 2, 2)).unwrap_err(),
            GoError::KoViolation(2, 2)
        );
        // Even via passes the earlier position may not be recreated.
        let st = st
            .apply_move(GoMove::pass(Color::White))
            .unwrap()
            .apply_move(GoMove::pass(Color::Black))
            .unwrap();
        assert_eq!(
            st.apply_move(GoMove::place(Color::White, 2, 2)).unwrap_err(),
            GoError::KoViolation(2, 2)
        );
    }

    #[test]
    fn no_zero_liberty_chain_after_any_move_and_capture_accounting() {
        for seed in 0..20u64 {
            let mut rng = seeding::rng(seed, "go-fuzz", 0);
            let mut st = GoState::new(7);
            let mut placed = 0u32;
            for _ in 0..120 {
                let col = rng.gen_range(1..=7);
                let row = rng.gen_range(1..=7);
                let mv = GoMove { color: st.to_move(), vertex: Vertex::Point(Point::new(col, row)) };
                if let Ok(next) = st.apply_move(mv) {
                    st = next;
                    placed += 1;
                    // Global scan: every chain keeps at least one liberty.
                    let mut seen = vec![false; st.grid().len()];
                    for idx in 0..st.grid().len() {
                        if st.grid()[idx].is_some() && !seen[idx] {
                            let (chain, libs) = st.chain_and_liberties(st.grid(), idx);
                            assert!(libs > 0);
                            for c in chain {
                                seen[c] = true;
                            }
                        }
                    }
                    assert_eq!(
                        st.stones_on_board() + st.captured(Color::Black) + st.captured(Color::White),
                        placed
                    );
                }
            }
        }
    }

    #[test]
    fn diff_states_identifies_placements_captures_and_passes() {
        let st = replay(5, &[(Color::Black, 2, 1), (Color::White, 4, 4)]);
        // Plain placement.
        let next = st.apply_move(GoMove::place(Color::Black, 1, 2)).unwrap();
        assert_eq!(diff_states(&st, &next).unwrap(), GoMove::place(Color::Black, 1, 2));
        // Pass: same stones, flipped mover.
        let passed = st.apply_move(GoMove::pass(Color::Black)).unwrap();
        assert_eq!(diff_states(&st, &passed).unwrap(), GoMove::pass(Color::Black));
        // Capturing move.
        let pre = replay(
            5,
            &[
                (Color::White, 1, 1),
                (Color::Black, 2, 1),
                (Color::White, 5, 5),
            ],
        );
        let post = pre.apply_move(GoMove::place(Color::Black, 1, 2)).unwrap();
        assert_eq!(diff_states(&pre, &post).unwrap(), GoMove::place(Color::Black, 1, 2));
        // Unreachable pair.
        let far = replay(5, &[(Color::Black, 5, 1), (Color::White, 1, 5), (Color::Black, 5, 3)]);
        assert!(diff_states(&st, &far).is_err());
    }

    #[test]
    fn diff_matches_brute_force_search_on_random_games() {
        // Oracle: try every legal move (and pass) and keep the matches.
        for seed in 0..10u64 {
            let mut rng = seeding::rng(seed, "go-diff-fuzz", 0);
            let mut st = GoState::new(5);
            for _ in 0..30 {
                let legal = st.legal_points();
                if legal.is_empty() {
                    break;
                }
                let p = legal[rng.gen_range(0..legal.len())];
                let next = st.apply_move(GoMove { color: st.to_move(), vertex: Vertex::Point(p) }).unwrap();

                let mut matches = Vec::new();
                for cand in st.legal_points() {
                    let mv = GoMove { color: st.to_move(), vertex: Vertex::Point(cand) };
                    if st.apply_move(mv).unwrap().grid() == next.grid() {
                        matches.push(mv);
                    }
                }
                assert_eq!(matches.len(), 1, "move must be uniquely recoverable");
                assert_eq!(diff_states(&st, &next).unwrap(), matches[0]);
                st = next;
            }
        }
    }

    #[test]
    fn from_grid_rejects_dead_chains() {
        let mut grid = vec![None; 25];
        grid[0] = Some(Color::White); // (1,1)
        grid[1] = Some(Color::Black); // (2,1)
        grid[5] = Some(Color::Black); // (1,2)
        assert!(matches!(
            GoState::from_grid(5, grid, Color::Black),
            Err(GoError::InvalidPosition(_))
        ));
    }
}
