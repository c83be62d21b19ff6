//! Self-play move policies for data generation.
//!
//! A cheap heuristic scores every legal move (captures, rescues from
//! atari, contact, centrality, self-atari penalty). The strong tier plays
//! the argmax; the suboptimal tier softmaxes the scores, keeps the Top-p
//! nucleus and samples inside it. Both are fully seeded.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::board::{Color, GoMove, GoState, Point, Vertex};

/// Tiered move selection.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum GoTier {
    /// Always the highest-scoring move.
    Strong,
    /// Nucleus sampling over the score softmax.
    TopPSampler { p: f64 },
}

/// Score every legal move for the side to move. Empty when only passing
/// remains.
pub fn heuristic_scores(state: &GoState) -> Vec<(Point, f64)> {
    let size = state.size() as f64;
    let center = (size + 1.0) / 2.0;
    let mover = state.to_move();
    let mut out = Vec::new();
    for p in state.legal_points() {
        if is_simple_own_eye(state, p, mover) {
            continue;
        }
        let next = state
            .apply_move(GoMove { color: mover, vertex: Vertex::Point(p) })
            .expect("legal_points returned it");
        let captures = next.captured(mover.opposite()) - state.captured(mover.opposite());
        let rescued = rescues_from_atari(state, &next, p, mover);
        let self_atari = own_chain_in_atari(&next, p);
        let contact = touches_any_stone(state, p);
        let centrality = 1.0
            - ((f64::from(p.col) - center).abs() + (f64::from(p.row) - center).abs())
                / (size - 1.0);
        let score = 8.0 * f64::from(captures) + 6.0 * f64::from(u8::from(rescued))
            + 2.0 * f64::from(u8::from(contact))
            + centrality
            - 6.0 * f64::from(u8::from(self_atari));
        out.push((p, score));
    }
    out
}

fn touches_any_stone(state: &GoState, p: Point) -> bool {
    neighbor_points(state, p)
        .into_iter()
        .any(|n| state.stone_at(n).is_some())
}

fn neighbor_points(state: &GoState, p: Point) -> Vec<Point> {
    let size = state.size() as u8;
    let mut out = Vec::with_capacity(4);
    if p.row > 1 {
        out.push(Point::new(p.col, p.row - 1));
    }
    if p.row < size {
        out.push(Point::new(p.col, p.row + 1));
    }
    if p.col > 1 {
        out.push(Point::new(p.col - 1, p.row));
    }
    if p.col < size {
        out.push(Point::new(p.col + 1, p.row));
    }
    out
}

fn liberties_of_chain(state: &GoState, start: Point) -> usize {
    let color = match state.stone_at(start) {
        Some(c) => c,
        None => return 0,
    };
    let mut seen = vec![false; state.size() * state.size()];
    let mut libs = vec![false; state.size() * state.size()];
    let mut stack = vec![start];
    seen[state.index_of(start)] = true;
    let mut count = 0;
    while let Some(cur) = stack.pop() {
        for nb in neighbor_points(state, cur) {
            let idx = state.index_of(nb);
            match state.stone_at(nb) {
                None => {
                    if !libs[idx] {
                        libs[idx] = true;
                        count += 1;
                    }
                }
                Some(c) if c == color && !seen[idx] => {
                    seen[idx] = true;
                    stack.push(nb);
                }
                _ => {}
            }
        }
    }
    count
}

fn rescues_from_atari(state: &GoState, next: &GoState, p: Point, mover: Color) -> bool {
    for nb in neighbor_points(state, p) {
        if state.stone_at(nb) == Some(mover)
            && liberties_of_chain(state, nb) == 1
            && liberties_of_chain(next, nb) > 1
        {
            return true;
        }
    }
    false
}

fn own_chain_in_atari(next: &GoState, p: Point) -> bool {
    liberties_of_chain(next, p) == 1
}

/// Single-point eye of the mover; kept out of the candidate set so games
/// end instead of self-destructing.
fn is_simple_own_eye(state: &GoState, p: Point, color: Color) -> bool {
    neighbor_points(state, p)
        .into_iter()
        .all(|n| state.stone_at(n) == Some(color))
}

/// Choose a move for the side to move; passes when no candidate remains.
pub fn choose_move(state: &GoState, tier: GoTier, rng: &mut ChaCha8Rng) -> GoMove {
    let scored = heuristic_scores(state);
    if scored.is_empty() {
        return GoMove::pass(state.to_move());
    }
    let point = match tier {
        GoTier::Strong => {
            let mut best = scored[0];
            for &(p, s) in &scored[1..] {
                if s > best.1 {
                    best = (p, s);
                }
            }
            best.0
        }
        GoTier::TopPSampler { p } => sample_nucleus(&scored, p, rng),
    };
    GoMove { color: state.to_move(), vertex: Vertex::Point(point) }
}

/// Softmax the scores, keep the minimal prefix with mass >= p, and sample
/// within it proportionally.
fn sample_nucleus(scored: &[(Point, f64)], p: f64, rng: &mut ChaCha8Rng) -> Point {
    debug_assert!(p > 0.0 && p <= 1.0);
    let max = scored.iter().map(|(_, s)| *s).fold(f64::NEG_INFINITY, f64::max);
    let mut probs: Vec<(Point, f64)> =
        scored.iter().map(|&(pt, s)| (pt, (s - max).exp())).collect();
    let sum: f64 = probs.iter().map(|(_, w)| w).sum();
    for (_, w) in probs.iter_mut() {
        *w /= sum;
    }
    probs.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| (a.0.row, a.0.col).cmp(&(b.0.row, b.0.col)))
    });
    let mut nucleus_mass = 0.0;
    let mut cut = probs.len();
    for (i, (_, w)) in probs.iter().enumerate() {
        nucleus_mass += w;
        if nucleus_mass >= p - 1e-9 {
            cut = i + 1;
            break;
        }
    }
    let draw = rng.gen_range(0.0..nucleus_mass);
    let mut acc = 0.0;
    for &(pt, w) in &probs[..cut] {
        acc += w;
        if draw < acc {
            return pt;
        }
    }
    probs[cut - 1].0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeding;

    #[test]
    fn strong_tier_takes_the_capture() {
        // White (1,1) in atari; capturing scores far above anything else.
        let st = GoState::new(5)
            .apply_move(GoMove::place(Color::White, 1, 1))
            .unwrap()
            .apply_move(GoMove::place(Color::Black, 2, 1))
            .unwrap()
            .apply_move(GoMove::place(Color::White, 5, 5))
            .unwrap();
        let mv = choose_move(&st, GoTier::Strong, &mut seeding::rng(0, "p", 0));
        assert_eq!(mv, GoMove::place(Color::Black, 1, 2));
    }

    #[test]
    fn sampler_is_seeded_and_legal() {
        let st = GoState::new(5);
        let mut a = seeding::rng(3, "p", 1);
        let mut b = seeding::rng(3, "p", 1);
        let mv1 = choose_move(&st, GoTier::TopPSampler { p: 0.4 }, &mut a);
        let mv2 = choose_move(&st, GoTier::TopPSampler { p: 0.4 }, &mut b);
        assert_eq!(mv1, mv2);
        assert!(st.apply_move(mv1).is_ok());
    }

    #[test]
    fn tiers_pass_only_when_nothing_remains() {
        // Sealed black board: black's only empties are its own eyes.
        let mut grid = vec![Some(Color::Black); 25];
        grid[6] = None;
        grid[18] = None;
        let st = GoState::from_grid(5, grid, Color::Black).unwrap();
        let mv = choose_move(&st, GoTier::Strong, &mut seeding::rng(0, "p", 2));
        assert_eq!(mv, GoMove::pass(Color::Black));
    }
}
