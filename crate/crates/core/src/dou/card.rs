//! Cards and hands.
//!
//! Suits never matter in Doudizhu, so a card is just its rank and a hand
//! is a multiset of ranks. Ranks map to the integers 3..14 for 3..A,
//! 17 for 2, 20 for the black joker and 30 for the red joker; a larger
//! integer is a stronger card.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Number of distinct ranks in the deck.
pub const RANK_COUNT: usize = 15;

/// Integer code for each rank, in strength order.
pub const RANK_VALUES: [u8; RANK_COUNT] = [3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 17, 20, 30];

/// Copies of each rank in a full 54-card deck.
pub const DECK_COUNTS: [u8; RANK_COUNT] = [4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 1, 1];

/// Total cards in the deck.
pub const DECK_SIZE: usize = 54;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum CardError {
    #[error("unknown rank: {0:?}")]
    UnknownRank(String),
    #[error("too many copies of rank {rank}: {count} (max {max})")]
    MultiplicityExceeded { rank: u8, count: u8, max: u8 },
}

/// A single card, identified by rank. Ordering equals card strength.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Card(u8); // dense index 0..RANK_COUNT

impl Card {
    pub const TWO: Card = Card(12);
    pub const BLACK_JOKER: Card = Card(13);
    pub const RED_JOKER: Card = Card(14);

    /// Card from its dense index (0 = rank 3, 14 = red joker).
    pub fn from_index(idx: usize) -> Card {
        assert!(idx < RANK_COUNT, "card index out of range");
        Card(idx as u8)
    }

    /// Card from its integer code per the rank table.
    pub fn from_value(value: u32) -> Result<Card, CardError> {
        RANK_VALUES
            .iter()
            .position(|&v| u32::from(v) == value)
            .map(Card::from_index)
            .ok_or_else(|| CardError::UnknownRank(value.to_string()))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// The integer code (3..14, 17, 20, 30).
    pub fn value(self) -> u8 {
        RANK_VALUES[self.index()]
    }

    pub fn is_joker(self) -> bool {
        self.0 >= 13
    }

    /// Ranks 3..A may appear in chains; 2 and the jokers may not.
    pub fn chainable(self) -> bool {
        self.0 <= 11
    }

    pub fn all() -> impl Iterator<Item = Card> {
        (0..RANK_COUNT).map(Card::from_index)
    }
}

impl fmt::Debug for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// A multiset of cards.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Hand {
    counts: [u8; RANK_COUNT],
}

impl Hand {
    pub fn empty() -> Hand {
        Hand::default()
    }

    /// The full 54-card deck.
    pub fn full_deck() -> Hand {
        Hand { counts: DECK_COUNTS }
    }

    pub fn from_cards(cards: &[Card]) -> Result<Hand, CardError> {
        let mut h = Hand::empty();
        for &c in cards {
            h.add(c, 1)?;
        }
        Ok(h)
    }

    /// Convenience constructor from integer codes.
    pub fn from_values(values: &[u32]) -> Result<Hand, CardError> {
        let mut h = Hand::empty();
        for &v in values {
            h.add(Card::from_value(v)?, 1)?;
        }
        Ok(h)
    }

    pub fn add(&mut self, card: Card, n: u8) -> Result<(), CardError> {
        let idx = card.index();
        let next = self.counts[idx] + n;
        let max = DECK_COUNTS[idx];
        if next > max {
            return Err(CardError::MultiplicityExceeded { rank: card.value(), count: next, max });
        }
        self.counts[idx] = next;
        Ok(())
    }

    /// Remove `other` from this hand; caller guarantees containment.
    pub fn remove(&mut self, other: &Hand) {
        debug_assert!(self.contains(other));
        for i in 0..RANK_COUNT {
            self.counts[i] -= other.counts[i];
        }
    }

    pub fn count(&self, card: Card) -> u8 {
        self.counts[card.index()]
    }

    pub fn counts(&self) -> &[u8; RANK_COUNT] {
        &self.counts
    }

    pub fn size(&self) -> usize {
        self.counts.iter().map(|&c| usize::from(c)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    pub fn contains(&self, other: &Hand) -> bool {
        (0..RANK_COUNT).all(|i| self.counts[i] >= other.counts[i])
    }

    pub fn merged(&self, other: &Hand) -> Result<Hand, CardError> {
        let mut h = *self;
        for i in 0..RANK_COUNT {
            if other.counts[i] > 0 {
                h.add(Card::from_index(i), other.counts[i])?;
            }
        }
        Ok(h)
    }

    pub fn cards(&self) -> impl Iterator<Item = Card> + '_ {
        (0..RANK_COUNT).flat_map(move |i| {
            std::iter::repeat(Card::from_index(i)).take(usize::from(self.counts[i]))
        })
    }
}

impl fmt::Debug for Hand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", encode_cards(self))
    }
}

impl fmt::Display for Hand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", encode_cards(self))
    }
}

/// Render a hand as an ascending, space-separated integer list.
///
/// The empty hand renders as the empty string.
pub fn encode_cards(hand: &Hand) -> String {
    let mut out = String::new();
    for card in hand.cards() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(&card.value().to_string());
    }
    out
}

/// Inverse of [`encode_cards`]; accepts any whitespace separation.
pub fn parse_cards(text: &str) -> Result<Hand, CardError> {
    let mut hand = Hand::empty();
    for token in text.split_whitespace() {
        let value: u32 = token
            .parse()
            .map_err(|_| CardError::UnknownRank(token.to_string()))?;
        hand.add(Card::from_value(value)?, 1)?;
    }
    Ok(hand)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::Rng;

    #[test]
    fn encode_single_cards_per_rank_table() {
        let h = Hand::from_values(&[3]).unwrap();
        assert_eq!(encode_cards(&h), "3");
        let two = Hand::from_values(&[17]).unwrap();
        assert_eq!(encode_cards(&two), "17");
        let rj = Hand::from_values(&[30]).unwrap();
        assert_eq!(encode_cards(&rj), "30");
    }

    #[test]
    fn encode_empty_hand() {
        assert_eq!(encode_cards(&Hand::empty()), "");
    }

    #[test]
    fn encode_sorts_ascending() {
        let h = Hand::from_values(&[14, 3, 3, 20]).unwrap();
        assert_eq!(encode_cards(&h), "3 3 14 20");
    }

    #[test]
    fn parse_direct_map() {
        let h = parse_cards("3 3 14").unwrap();
        assert_eq!(h.count(Card::from_value(3).unwrap()), 2);
        assert_eq!(h.count(Card::from_value(14).unwrap()), 1);
        assert_eq!(h.size(), 3);
    }

    #[test]
    fn parse_rejects_unknown_rank() {
        assert_eq!(parse_cards("16"), Err(CardError::UnknownRank("16".into())));
        assert!(matches!(parse_cards("x"), Err(CardError::UnknownRank(_))));
    }

    #[test]
    fn parse_rejects_multiplicity() {
        assert!(matches!(
            parse_cards("3 3 3 3 3"),
            Err(CardError::MultiplicityExceeded { rank: 3, .. })
        ));
        assert!(matches!(
            parse_cards("20 20"),
            Err(CardError::MultiplicityExceeded { rank: 20, .. })
        ));
    }

    #[test]
    fn round_trip_on_seeded_random_hands() {
        let mut rng = crate::seeding::rng(0xD0D0, "card-roundtrip", 0);
        let mut deck: Vec<Card> = Hand::full_deck().cards().collect();
        for _ in 0..1000 {
            deck.shuffle(&mut rng);
            let n = rng.gen_range(0..=20);
            let hand = Hand::from_cards(&deck[..n]).unwrap();
            assert_eq!(parse_cards(&encode_cards(&hand)).unwrap(), hand);
        }
    }
}
