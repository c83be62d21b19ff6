//! Combo taxonomy and dominance.
//!
//! A combo is a playable card combination: its category, the principal
//! rank that decides dominance inside the category, the length of the
//! principal run for chains and airplanes, and the full card multiset
//! (kickers included). Two combos with the same principal ranks but
//! different kickers are distinct actions.
//!
//! Kicker conventions, fixed here and used consistently by the move
//! generators:
//! - a kicker never shares a rank with a principal (trio/bomb) rank;
//! - solo kickers form a multiset bounded by deck multiplicity, so two
//!   kickers of the same rank are fine and so are both jokers together;
//! - pair kickers are distinct regular (non-joker, non-duplicable) ranks.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::card::{encode_cards, Card, Hand};

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    Pass,
    Solo,
    Pair,
    Trio,
    TrioSolo,
    TrioPair,
    SoloChain,
    PairChain,
    Airplane,
    AirplaneSoloWings,
    AirplanePairWings,
    FourTwoSolo,
    FourTwoPair,
    Bomb,
    Rocket,
}

impl Category {
    /// Sort key for the canonical action order. Pass sorts last.
    fn order_key(self) -> u8 {
        match self {
            Category::Pass => u8::MAX,
            other => other as u8,
        }
    }
}

/// A playable action: a card combination or a pass.
#[derive(Copy, Clone, PartialEq, Eq, Hash)]
pub struct Combo {
    category: Category,
    /// Highest rank of the principal run; meaningless for Pass.
    principal: Card,
    /// Number of ranks in the principal run (1 outside chains/airplanes, 0 for Pass).
    run_len: u8,
    cards: Hand,
}

impl Combo {
    pub fn pass() -> Combo {
        Combo {
            category: Category::Pass,
            principal: Card::from_index(0),
            run_len: 0,
            cards: Hand::empty(),
        }
    }

    /// Assemble a combo from already-validated parts. Used by the move
    /// generators; `debug_assert`s guard the invariants there.
    pub(crate) fn from_parts(category: Category, principal: Card, run_len: u8, cards: Hand) -> Combo {
        Combo { category, principal, run_len, cards }
    }

    pub fn category(&self) -> Category {
        self.category
    }

    pub fn is_pass(&self) -> bool {
        self.category == Category::Pass
    }

    pub fn principal(&self) -> Card {
        self.principal
    }

    pub fn run_len(&self) -> u8 {
        self.run_len
    }

    pub fn cards(&self) -> &Hand {
        &self.cards
    }

    pub fn size(&self) -> usize {
        self.cards.size()
    }

    /// Text encoding: the card list for a play, `pass` otherwise.
    pub fn encode(&self) -> String {
        if self.is_pass() {
            "pass".to_string()
        } else {
            encode_cards(&self.cards)
        }
    }

    /// Canonical action order: category, then principal rank, then card
    /// multiset; pass sorts after every play.
    pub fn canonical_cmp(&self, other: &Combo) -> Ordering {
        self.category
            .order_key()
            .cmp(&other.category.order_key())
            .then_with(|| self.principal.cmp(&other.principal))
            .then_with(|| self.run_len.cmp(&other.run_len))
            .then_with(|| self.cards.cmp(&other.cards))
    }
}

impl fmt::Debug for Combo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_pass() {
            write!(f, "pass")
        } else {
            write!(f, "{:?}[{}]", self.category, self.encode())
        }
    }
}

impl fmt::Display for Combo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.encode())
    }
}

/// Does `challenger` beat `dominant`? Neither may be a pass.
///
/// Rocket over anything, bomb over any non-bomb or a lower bomb,
/// otherwise same category and same run length with a higher principal.
pub fn beats(challenger: &Combo, dominant: &Combo) -> bool {
    debug_assert!(!challenger.is_pass() && !dominant.is_pass());
    match (challenger.category, dominant.category) {
        (Category::Rocket, Category::Rocket) => false,
        (Category::Rocket, _) => true,
        (_, Category::Rocket) => false,
        (Category::Bomb, Category::Bomb) => challenger.principal > dominant.principal,
        (Category::Bomb, _) => true,
        (_, Category::Bomb) => false,
        (a, b) => {
            a == b
                && challenger.run_len == dominant.run_len
                && challenger.principal > dominant.principal
        }
    }
}

/// Classify an arbitrary card multiset into a combo.
///
/// A few multisets admit more than one reading (for example four
/// consecutive trios are both a plain airplane and a shorter airplane
/// whose wings reuse the leftover trio); classification is deterministic:
/// plain shapes win over winged ones, and among winged readings the
/// longest, highest-placed principal run wins. Returns `None` when the
/// multiset fits no category.
pub fn classify(cards: &Hand) -> Option<Combo> {
    if cards.is_empty() {
        return Some(Combo::pass());
    }
    let counts = cards.counts();
    let total = cards.size();

    let ranks_with = |n: u8| -> Vec<usize> {
        (0..counts.len()).filter(|&i| counts[i] >= n).collect()
    };
    let exact = |n: u8| -> Vec<usize> {
        (0..counts.len()).filter(|&i| counts[i] == n).collect()
    };

    // Rocket.
    if total == 2
        && counts[Card::BLACK_JOKER.index()] == 1
        && counts[Card::RED_JOKER.index()] == 1
    {
        return Some(Combo::from_parts(
            Category::Rocket,
            Card::RED_JOKER,
            1,
            *cards,
        ));
    }
    // Bomb.
    if total == 4 {
        if let [r] = exact(4)[..] {
            return Some(Combo::from_parts(Category::Bomb, Card::from_index(r), 1, *cards));
        }
    }
    // Solo / pair / trio.
    if total <= 3 {
        let r = (0..counts.len()).find(|&i| counts[i] == total as u8)?;
        if counts.iter().filter(|&&c| c > 0).count() != 1 {
            return None;
        }
        let cat = match total {
            1 => Category::Solo,
            2 => Category::Pair,
            _ => Category::Trio,
        };
        return Some(Combo::from_parts(cat, Card::from_index(r), 1, *cards));
    }
    // Chains (all ranks chainable, consecutive, uniform multiplicity).
    let chain = |mult: u8, min_len: usize| -> Option<Combo> {
        let rs = exact(mult);
        if rs.len() * usize::from(mult) != total || rs.len() < min_len {
            return None;
        }
        let consecutive = rs.windows(2).all(|w| w[1] == w[0] + 1);
        if !consecutive || !Card::from_index(*rs.last().unwrap()).chainable() {
            return None;
        }
        let cat = match mult {
            1 => Category::SoloChain,
            2 => Category::PairChain,
            _ => Category::Airplane,
        };
        Some(Combo::from_parts(
            cat,
            Card::from_index(*rs.last().unwrap()),
            rs.len() as u8,
            *cards,
        ))
    };
    if let Some(c) = chain(1, 5) {
        return Some(c);
    }
    if let Some(c) = chain(2, 3) {
        return Some(c);
    }
    if let Some(c) = chain(3, 2) {
        return Some(c);
    }

    // Trio or airplane with wings: find the longest run of trios, preferring
    // the highest placement, whose kicker remainder matches the category shape.
    let trio_ranks = ranks_with(3);
    // Candidate principal runs, longest first, then highest principal first.
    let mut runs: Vec<(usize, usize)> = Vec::new(); // (start, len)
    for len in (1..=trio_ranks.len()).rev() {
        for w in trio_ranks.windows(len).rev() {
            if w.windows(2).all(|p| p[1] == p[0] + 1)
                && (len == 1 || Card::from_index(*w.last().unwrap()).chainable())
            {
                runs.push((w[0], len));
            }
        }
    }
    for &(start, len) in &runs {
        let mut rest = *cards;
        let mut principal_run = Hand::empty();
        for r in start..start + len {
            principal_run.add(Card::from_index(r), 3).ok()?;
        }
        if !rest.contains(&principal_run) {
            continue;
        }
        rest.remove(&principal_run);
        // Kickers must avoid principal ranks.
        if (start..start + len).any(|r| rest.counts()[r] > 0) {
            continue;
        }
        let k = rest.size();
        let principal = Card::from_index(start + len - 1);
        if len == 1 {
            if k == 1 {
                return Some(Combo::from_parts(Category::TrioSolo, principal, 1, *cards));
            }
            if k == 2 && rest.counts().iter().any(|&c| c == 2) {
                return Some(Combo::from_parts(Category::TrioPair, principal, 1, *cards));
            }
        } else {
            if k == len {
                return Some(Combo::from_parts(
                    Category::AirplaneSoloWings,
                    principal,
                    len as u8,
                    *cards,
                ));
            }
            if k == 2 * len
                && rest.counts().iter().filter(|&&c| c == 2).count() == len
                && rest.counts().iter().all(|&c| c == 0 || c == 2)
                && rest.counts()[Card::BLACK_JOKER.index()] == 0
                && rest.counts()[Card::RED_JOKER.index()] == 0
            {
                return Some(Combo::from_parts(
                    Category::AirplanePairWings,
                    principal,
                    len as u8,
                    *cards,
                ));
            }
        }
    }

    // Four with two: prefer the highest bomb rank.
    for &r in ranks_with(4).iter().rev() {
        let mut rest = *cards;
        let mut bomb = Hand::empty();
        bomb.add(Card::from_index(r), 4).ok()?;
        rest.remove(&bomb);
        if rest.counts()[r] > 0 {
            continue;
        }
        if rest.size() == 2 {
            return Some(Combo::from_parts(
                Category::FourTwoSolo,
                Card::from_index(r),
                1,
                *cards,
            ));
        }
        if rest.size() == 4
            && rest.counts().iter().filter(|&&c| c == 2).count() == 2
            && rest.counts().iter().all(|&c| c == 0 || c == 2)
        {
            return Some(Combo::from_parts(
                Category::FourTwoPair,
                Card::from_index(r),
                1,
                *cards,
            ));
        }
    }
    None
}
