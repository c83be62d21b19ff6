//! Move generation.
//!
//! One template walker produces every combo constructible from an
//! availability vector. Run against the full deck it yields the abstract
//! action space (cached); run against a hand it yields that hand's
//! playable combos. Both paths share the kicker conventions documented
//! in [`super::combo`], so hand-constrained generation always equals
//! filtering the abstract space by containment.

use std::sync::OnceLock;

use super::card::{Card, Hand, DECK_COUNTS, RANK_COUNT};
use super::combo::{beats, Category, Combo};

/// Distinct card-carrying combos in the abstract action space (pass not
/// counted). Frozen golden value; `enumerate_all_actions` must agree.
pub const ACTION_SPACE_SIZE: usize = 30_383;

/// The full abstract action space for a 54-card deck, canonically ordered.
/// Computed once and cached.
pub fn enumerate_all_actions() -> &'static [Combo] {
    static SPACE: OnceLock<Vec<Combo>> = OnceLock::new();
    SPACE.get_or_init(|| generate(&DECK_COUNTS))
}

/// Every combo playable from `hand`, canonically ordered.
pub fn moves_from_hand(hand: &Hand) -> Vec<Combo> {
    generate(hand.counts())
}

/// Every combo playable from `hand` that beats `dominant`, canonically
/// ordered.
pub fn beating_moves(hand: &Hand, dominant: &Combo) -> Vec<Combo> {
    moves_from_hand(hand)
        .into_iter()
        .filter(|c| beats(c, dominant))
        .collect()
}

fn uniform(start: usize, len: usize, mult: u8) -> Hand {
    let mut h = Hand::empty();
    for r in start..start + len {
        h.add(Card::from_index(r), mult).expect("within deck multiplicity");
    }
    h
}

fn push(out: &mut Vec<Combo>, cat: Category, principal: usize, run_len: u8, cards: Hand) {
    out.push(Combo::from_parts(cat, Card::from_index(principal), run_len, cards));
}

fn generate(avail: &[u8; RANK_COUNT]) -> Vec<Combo> {
    let mut out = Vec::new();

    // Solo, pair, trio, bomb.
    for r in 0..RANK_COUNT {
        for (need, cat) in [
            (1, Category::Solo),
            (2, Category::Pair),
            (3, Category::Trio),
            (4, Category::Bomb),
        ] {
            if avail[r] >= need {
                push(&mut out, cat, r, 1, uniform(r, 1, need));
            }
        }
    }
    // Rocket.
    if avail[Card::BLACK_JOKER.index()] >= 1 && avail[Card::RED_JOKER.index()] >= 1 {
        let mut h = Hand::empty();
        h.add(Card::BLACK_JOKER, 1).unwrap();
        h.add(Card::RED_JOKER, 1).unwrap();
        push(&mut out, Category::Rocket, Card::RED_JOKER.index(), 1, h);
    }

    // Chains. Chainable ranks are 3..A (indices 0..=11).
    for (mult, min_len, max_len, cat) in [
        (1u8, 5usize, 12usize, Category::SoloChain),
        (2, 3, 10, Category::PairChain),
        (3, 2, 6, Category::Airplane),
    ] {
        for len in min_len..=max_len {
            for start in 0..=(12 - len) {
                if (start..start + len).all(|r| avail[r] >= mult) {
                    push(&mut out, cat, start + len - 1, len as u8, uniform(start, len, mult));
                }
            }
        }
    }

    // Trio with kickers.
    for r in 0..RANK_COUNT {
        if avail[r] < 3 {
            continue;
        }
        let base = uniform(r, 1, 3);
        for k in 0..RANK_COUNT {
            if k == r {
                continue;
            }
            if avail[k] >= 1 {
                let mut cards = base;
                cards.add(Card::from_index(k), 1).unwrap();
                push(&mut out, Category::TrioSolo, r, 1, cards);
            }
            if avail[k] >= 2 {
                let mut cards = base;
                cards.add(Card::from_index(k), 2).unwrap();
                push(&mut out, Category::TrioPair, r, 1, cards);
            }
        }
    }

    // Airplanes with wings.
    for len in 2..=5usize {
        for start in 0..=(12 - len) {
            if !(start..start + len).all(|r| avail[r] >= 3) {
                continue;
            }
            let base = uniform(start, len, 3);
            let principal = start + len - 1;
            for kickers in solo_kicker_multisets(avail, start..start + len, len) {
                let cards = base.merged(&kickers).expect("kickers avoid principal ranks");
                push(&mut out, Category::AirplaneSoloWings, principal, len as u8, cards);
            }
            if len <= 4 {
                for kickers in pair_kicker_sets(avail, start..start + len, len) {
                    let cards = base.merged(&kickers).expect("kickers avoid principal ranks");
                    push(&mut out, Category::AirplanePairWings, principal, len as u8, cards);
                }
            }
        }
    }

    // Four with two.
    for r in 0..RANK_COUNT {
        if avail[r] < 4 {
            continue;
        }
        let base = uniform(r, 1, 4);
        for kickers in solo_kicker_multisets(avail, r..r + 1, 2) {
            let cards = base.merged(&kickers).expect("kickers avoid principal ranks");
            push(&mut out, Category::FourTwoSolo, r, 1, cards);
        }
        for kickers in pair_kicker_sets(avail, r..r + 1, 2) {
            let cards = base.merged(&kickers).expect("kickers avoid principal ranks");
            push(&mut out, Category::FourTwoPair, r, 1, cards);
        }
    }

    out.sort_by(|a, b| a.canonical_cmp(b));
    out
}

/// Multisets of `n` solo kickers drawn outside `exclude`, bounded per rank
/// by availability (which already respects deck multiplicity).
fn solo_kicker_multisets(
    avail: &[u8; RANK_COUNT],
    exclude: std::ops::Range<usize>,
    n: usize,
) -> Vec<Hand> {
    let mut out = Vec::new();
    let mut current = Hand::empty();
    fn rec(
        avail: &[u8; RANK_COUNT],
        exclude: &std::ops::Range<usize>,
        rank: usize,
        remaining: usize,
        current: &mut Hand,
        out: &mut Vec<Hand>,
    ) {
        if remaining == 0 {
            out.push(*current);
            return;
        }
        if rank >= RANK_COUNT {
            return;
        }
        let cap = if exclude.contains(&rank) { 0 } else { usize::from(avail[rank]) };
        for take in (0..=cap.min(remaining)).rev() {
            if take > 0 {
                current.add(Card::from_index(rank), take as u8).unwrap();
            }
            rec(avail, exclude, rank + 1, remaining - take, current, out);
            if take > 0 {
                let mut taken = Hand::empty();
                taken.add(Card::from_index(rank), take as u8).unwrap();
                current.remove(&taken);
            }
        }
    }
    rec(avail, &exclude, 0, n, &mut current, &mut out);
    out
}

/// Sets of `n` distinct pair kickers drawn outside `exclude`.
fn pair_kicker_sets(
    avail: &[u8; RANK_COUNT],
    exclude: std::ops::Range<usize>,
    n: usize,
) -> Vec<Hand> {
    let eligible: Vec<usize> = (0..RANK_COUNT)
        .filter(|r| !exclude.contains(r) && avail[*r] >= 2)
        .collect();
    let mut out = Vec::new();
    let mut picked = Vec::new();
    fn rec(eligible: &[usize], from: usize, n: usize, picked: &mut Vec<usize>, out: &mut Vec<Hand>) {
        if picked.len() == n {
            let mut h = Hand::empty();
            for &r in picked.iter() {
                h.add(Card::from_index(r), 2).unwrap();
            }
            out.push(h);
            return;
        }
        for i in from..eligible.len() {
            picked.push(eligible[i]);
            rec(eligible, i + 1, n, picked, out);
            picked.pop();
        }
    }
    rec(&eligible, 0, n, &mut picked, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dou::card::parse_cards;
    use crate::dou::combo::classify;

    #[test]
    fn action_space_exceeds_27000_and_matches_frozen_count() {
        let space = enumerate_all_actions();
        assert!(space.len() > 27_000, "got {}", space.len());
        assert_eq!(space.len(), ACTION_SPACE_SIZE);
        // Stable across calls (cache) and across fresh generation.
        assert_eq!(generate(&DECK_COUNTS).len(), ACTION_SPACE_SIZE);
    }

    #[test]
    fn rocket_appears_exactly_once() {
        let rockets: Vec<_> = enumerate_all_actions()
            .iter()
            .filter(|c| c.category() == Category::Rocket)
            .collect();
        assert_eq!(rockets.len(), 1);
        assert_eq!(rockets[0].encode(), "20 30");
    }

    #[test]
    fn space_is_deduplicated_and_canonically_sorted() {
        let space = enumerate_all_actions();
        for w in space.windows(2) {
            assert!(w[0].canonical_cmp(&w[1]).is_lt());
        }
    }

    #[test]
    fn every_abstract_action_classifies_back_to_itself() {
        for combo in enumerate_all_actions() {
            let c = classify(combo.cards()).expect("generated combos classify");
            assert_eq!(c.category(), combo.category(), "{combo:?} vs {c:?}");
            assert_eq!(c.cards(), combo.cards());
        }
    }

    #[test]
    fn hand_moves_equal_containment_filter_small_hand() {
        let hand = parse_cards("3 3 3 4 5 5 20 30").unwrap();
        let direct = moves_from_hand(&hand);
        let filtered: Vec<Combo> = enumerate_all_actions()
            .iter()
            .filter(|c| hand.contains(c.cards()))
            .cloned()
            .collect();
        assert_eq!(direct, filtered);
    }

    #[test]
    fn category_counts_match_closed_forms() {
        let space = enumerate_all_actions();
        let count = |cat: Category| space.iter().filter(|c| c.category() == cat).count();
        assert_eq!(count(Category::Solo), 15);
        assert_eq!(count(Category::Pair), 13);
        assert_eq!(count(Category::Trio), 13);
        assert_eq!(count(Category::Bomb), 13);
        assert_eq!(count(Category::Rocket), 1);
        assert_eq!(count(Category::TrioSolo), 182);
        assert_eq!(count(Category::TrioPair), 156);
        assert_eq!(count(Category::SoloChain), 36);
        assert_eq!(count(Category::PairChain), 52);
        assert_eq!(count(Category::Airplane), 45);
        assert_eq!(count(Category::FourTwoPair), 858);
        assert_eq!(count(Category::FourTwoSolo), 1_339);
        assert_eq!(count(Category::AirplanePairWings), 2_939);
        assert_eq!(count(Category::AirplaneSoloWings), 24_721);
    }
}
