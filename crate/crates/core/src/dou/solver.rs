//! Exhaustive small-endgame solver.
//!
//! Full minimax over the legal-move tree for perfect-information
//! positions holding at most ten cards in total. Both farmer seats share
//! one objective, so the game value is simply the side that wins under
//! optimal play everywhere. Used as the oracle for Monte-Carlo argmax
//! checks and for exact claims about worked endgames.

use std::collections::HashMap;

use thiserror::Error;

use super::card::RANK_COUNT;
use super::combo::Category;
use super::state::{DouState, Side, StateError};

/// Card cap for the exhaustive search.
pub const SOLVER_CARD_CAP: usize = 10;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolverError {
    #[error("position holds {0} cards; the solver caps at {SOLVER_CARD_CAP}")]
    TooLarge(usize),
    #[error("hidden-information positions are not solvable; pass visible=true")]
    HiddenInformation,
    #[error(transparent)]
    Engine(#[from] StateError),
}

#[derive(PartialEq, Eq, Hash)]
struct Key {
    hands: Vec<[u8; RANK_COUNT]>,
    to_move: u8,
    dominant: Option<(Category, u8, u8)>,
    pass_streak: u8,
}

impl Key {
    fn of(state: &DouState) -> Key {
        Key {
            hands: (0..state.seats()).map(|s| *state.hand(s).counts()).collect(),
            to_move: state.to_move() as u8,
            dominant: state
                .dominant()
                .map(|(_, c)| (c.category(), c.principal().index() as u8, c.run_len())),
            pass_streak: trailing_passes(state),
        }
    }
}

fn trailing_passes(state: &DouState) -> u8 {
    if state.dominant().is_none() {
        return 0;
    }
    let mut n = 0;
    for (_, c) in state.history().iter().rev() {
        if c.is_pass() {
            n += 1;
        } else {
            break;
        }
    }
    n
}

/// Exact game value of a small perfect-information endgame: the side that
/// wins when every seat plays optimally for its own side.
pub fn solve_endgame(state: &DouState, visible: bool) -> Result<Side, SolverError> {
    if !visible {
        return Err(SolverError::HiddenInformation);
    }
    let total: usize = (0..state.seats()).map(|s| state.hand(s).size()).sum();
    if total > SOLVER_CARD_CAP {
        return Err(SolverError::TooLarge(total));
    }
    let mut memo = HashMap::new();
    Ok(value(state, &mut memo))
}

fn value(state: &DouState, memo: &mut HashMap<Key, Side>) -> Side {
    if let Some(winner) = state.is_terminal() {
        return winner;
    }
    let key = Key::of(state);
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let my_side = state.side_of(state.to_move());
    let mut result = other(my_side);
    for action in state.legal_actions().expect("non-terminal") {
        let next = state.apply_action(&action).expect("legal action applies");
        if value(&next, memo) == my_side {
            result = my_side;
            break;
        }
    }
    memo.insert(key, result);
    result
}

fn other(side: Side) -> Side {
    match side {
        Side::Landlord => Side::Farmers,
        Side::Farmers => Side::Landlord,
    }
}

/// Per-seat view of the value: +1 for seats on the winning side, -1 else.
pub fn seat_values(state: &DouState, winner: Side) -> Vec<i8> {
    (0..state.seats())
        .map(|s| if state.side_of(s) == winner { 1 } else { -1 })
        .collect()
}
