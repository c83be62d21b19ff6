//! Game state and transitions.
//!
//! Bidding is not modeled: the landlord seat and its three bonus cards
//! are inputs to the deal. A two-seat reduced variant (seat 0 against
//! seat 1, rules otherwise identical) backs the worked endgame tests.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::card::{Card, Hand, DECK_SIZE};
use super::combo::{beats, Combo};
use super::moves::{beating_moves, moves_from_hand};
use crate::seeding;

/// Which side a seat plays for, and who won.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Landlord,
    Farmers,
}

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum StateError {
    #[error("state is terminal; no legal actions")]
    TerminalState,
    #[error("illegal action: {0}")]
    IllegalAction(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
}

/// A Doudizhu position.
///
/// Values are immutable: `apply_action` returns the successor state.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DouState {
    hands: Vec<Hand>,
    landlord: usize,
    to_move: usize,
    history: Vec<(usize, Combo)>,
    /// The combo that must be beaten and the seat that played it; cleared
    /// once every other seat has passed on it.
    dominant: Option<(usize, Combo)>,
    pass_streak: u8,
    initial_cards: usize,
}

impl DouState {
    /// Standard three-seat deal: 17 cards each, the landlord seat takes
    /// the 3 bonus cards and leads.
    pub fn deal(seed: u64, landlord: usize) -> DouState {
        assert!(landlord < 3, "landlord seat out of range");
        let mut deck: Vec<Card> = Hand::full_deck().cards().collect();
        let mut rng = seeding::rng(seed, "deal", 0);
        use rand::seq::SliceRandom;
        deck.shuffle(&mut rng);
        let mut hands = vec![Hand::empty(); 3];
        for (i, card) in deck.iter().enumerate() {
            let seat = if i < 51 { i % 3 } else { landlord };
            hands[seat].add(*card, 1).expect("deck respects multiplicity");
        }
        DouState::from_hands(hands, landlord, landlord).expect("full deal is valid")
    }

    /// Build a position from explicit hands. Two hands select the reduced
    /// two-seat variant.
    pub fn from_hands(hands: Vec<Hand>, landlord: usize, to_move: usize) -> Result<DouState, StateError> {
        if hands.len() != 2 && hands.len() != 3 {
            return Err(StateError::InvalidState(format!(
                "expected 2 or 3 seats, got {}",
                hands.len()
            )));
        }
        if landlord >= hands.len() || to_move >= hands.len() {
            return Err(StateError::InvalidState("seat index out of range".into()));
        }
        let total: usize = hands.iter().map(Hand::size).sum();
        if total > DECK_SIZE {
            return Err(StateError::InvalidState(format!("{total} cards exceed the deck")));
        }
        let mut union = Hand::empty();
        for h in &hands {
            union = union
                .merged(h)
                .map_err(|e| StateError::InvalidState(e.to_string()))?;
        }
        Ok(DouState {
            hands,
            landlord,
            to_move,
            history: Vec::new(),
            dominant: None,
            pass_streak: 0,
            initial_cards: total,
        })
    }

    pub fn seats(&self) -> usize {
        self.hands.len()
    }

    pub fn landlord_seat(&self) -> usize {
        self.landlord
    }

    pub fn to_move(&self) -> usize {
        self.to_move
    }

    pub fn hand(&self, seat: usize) -> &Hand {
        &self.hands[seat]
    }

    pub fn history(&self) -> &[(usize, Combo)] {
        &self.history
    }

    pub fn dominant(&self) -> Option<&(usize, Combo)> {
        self.dominant.as_ref()
    }

    /// Cards dealt at the start; conserved across play.
    pub fn initial_cards(&self) -> usize {
        self.initial_cards
    }

    pub fn side_of(&self, seat: usize) -> Side {
        if seat == self.landlord {
            Side::Landlord
        } else {
            Side::Farmers
        }
    }

    /// The union of every hand except `seat` — the "opponents' handcards"
    /// view used by the textual templates.
    pub fn other_hands_union(&self, seat: usize) -> Hand {
        let mut union = Hand::empty();
        for (s, h) in self.hands.iter().enumerate() {
            if s != seat {
                union = union.merged(h).expect("hands come from one deck");
            }
        }
        union
    }

    /// The winning side, if any hand has emptied.
    pub fn is_terminal(&self) -> Option<Side> {
        self.hands
            .iter()
            .position(Hand::is_empty)
            .map(|seat| self.side_of(seat))
    }

    /// Legal actions for the seat to move, canonically ordered with pass
    /// (when allowed) last. Passing is only legal while following.
    pub fn legal_actions(&self) -> Result<Vec<Combo>, StateError> {
        if self.is_terminal().is_some() {
            return Err(StateError::TerminalState);
        }
        let hand = &self.hands[self.to_move];
        let mut actions = match &self.dominant {
            None => moves_from_hand(hand),
            Some((_, dom)) => {
                let mut v = beating_moves(hand, dom);
                v.push(Combo::pass());
                v
            }
        };
        actions.shrink_to_fit();
        Ok(actions)
    }

    /// Play a combo for the seat to move and return the successor state.
    pub fn apply_action(&self, combo: &Combo) -> Result<DouState, StateError> {
        if self.is_terminal().is_some() {
            return Err(StateError::TerminalState);
        }
        let hand = &self.hands[self.to_move];
        if combo.is_pass() {
            if self.dominant.is_none() {
                return Err(StateError::IllegalAction("cannot pass while leading".into()));
            }
        } else {
            if !hand.contains(combo.cards()) {
                return Err(StateError::IllegalAction(format!(
                    "cards {} not all in hand",
                    combo.encode()
                )));
            }
            if let Some((_, dom)) = &self.dominant {
                if !beats(combo, dom) {
                    return Err(StateError::IllegalAction(format!(
                        "{} does not beat the dominant {}",
                        combo.encode(),
                        dom.encode()
                    )));
                }
            }
        }

        let mut next = self.clone();
        if combo.is_pass() {
            next.pass_streak += 1;
            // Once every other seat has passed, the lead returns to the
            // dominant combo's seat with dominance cleared.
            if usize::from(next.pass_streak) == self.seats() - 1 {
                next.dominant = None;
                next.pass_streak = 0;
            }
        } else {
            next.hands[self.to_move].remove(combo.cards());
            next.dominant = Some((self.to_move, *combo));
            next.pass_streak = 0;
        }
        next.history.push((self.to_move, *combo));
        next.to_move = (self.to_move + 1) % self.seats();
        Ok(next)
    }
}
