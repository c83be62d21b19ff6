//! Count-vector playouts.
//!
//! Monte-Carlo rollouts burn most of their time stepping random games, so
//! this module keeps a stripped state (per-seat rank counts plus the
//! dominance key) and picks moves by shape first: one skeleton =
//! (category, principal, run length). The skeleton is drawn uniformly,
//! kickers are then drawn uniformly from the eligible ranks, which keeps
//! every generated move legal without materializing the full combo list.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::card::{Hand, RANK_COUNT};
use super::combo::{Category, Combo};
use super::state::{DouState, Side};

const JOKER_B: usize = 13;
const JOKER_R: usize = 14;

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub(crate) struct Dom {
    pub cat: Category,
    pub principal: u8,
    pub run_len: u8,
}

impl Dom {
    pub fn of(combo: &Combo) -> Dom {
        Dom {
            cat: combo.category(),
            principal: combo.principal().index() as u8,
            run_len: combo.run_len(),
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
struct Skeleton {
    cat: Category,
    principal: u8,
    run_len: u8,
}

#[derive(Clone)]
pub(crate) struct FastState {
    counts: [[u8; RANK_COUNT]; 3],
    sizes: [u8; 3],
    seats: u8,
    landlord: u8,
    pub to_move: u8,
    dominant: Option<Dom>,
    pass_streak: u8,
}

impl FastState {
    /// Perfect-information view of a full state.
    pub fn from_state(state: &DouState) -> FastState {
        let mut counts = [[0u8; RANK_COUNT]; 3];
        let mut sizes = [0u8; 3];
        for seat in 0..state.seats() {
            counts[seat] = *state.hand(seat).counts();
            sizes[seat] = state.hand(seat).size() as u8;
        }
        FastState {
            counts,
            sizes,
            seats: state.seats() as u8,
            landlord: state.landlord_seat() as u8,
            to_move: state.to_move() as u8,
            dominant: state.dominant().map(|(_, c)| Dom::of(c)),
            pass_streak: pass_streak_of(state),
        }
    }

    /// Observer view: `observer` keeps their hand, the hidden cards are
    /// dealt uniformly at random to the other seats, sized to match.
    pub fn determinize(state: &DouState, observer: usize, rng: &mut ChaCha8Rng) -> FastState {
        let mut fast = FastState::from_state(state);
        let mut unseen = Hand::full_deck();
        unseen.remove(state.hand(observer));
        for (_, combo) in state.history() {
            unseen.remove(combo.cards());
        }
        let mut pool: Vec<u8> = Vec::with_capacity(unseen.size());
        for (rank, &n) in unseen.counts().iter().enumerate() {
            for _ in 0..n {
                pool.push(rank as u8);
            }
        }
        // Fisher-Yates, then split the pool by the known hand sizes.
        for i in (1..pool.len()).rev() {
            pool.swap(i, rng.gen_range(0..=i));
        }
        let mut cursor = 0usize;
        for seat in 0..state.seats() {
            if seat == observer {
                continue;
            }
            let take = usize::from(fast.sizes[seat]);
            let mut counts = [0u8; RANK_COUNT];
            for &rank in &pool[cursor..cursor + take] {
                counts[usize::from(rank)] += 1;
            }
            fast.counts[seat] = counts;
            cursor += take;
        }
        fast
    }

    pub fn winner(&self) -> Option<Side> {
        for seat in 0..usize::from(self.seats) {
            if self.sizes[seat] == 0 {
                return Some(if seat == usize::from(self.landlord) {
                    Side::Landlord
                } else {
                    Side::Farmers
                });
            }
        }
        None
    }

    /// Remove an exact card multiset for the seat to move and advance.
    pub fn apply_exact(&mut self, combo: &Combo) {
        if combo.is_pass() {
            self.apply_pass();
            return;
        }
        let seat = usize::from(self.to_move);
        for (rank, &n) in combo.cards().counts().iter().enumerate() {
            debug_assert!(self.counts[seat][rank] >= n);
            self.counts[seat][rank] -= n;
            self.sizes[seat] -= n;
        }
        self.dominant = Some(Dom::of(combo));
        self.pass_streak = 0;
        self.advance();
    }

    fn apply_pass(&mut self) {
        debug_assert!(self.dominant.is_some());
        self.pass_streak += 1;
        if self.pass_streak == self.seats - 1 {
            self.dominant = None;
            self.pass_streak = 0;
        }
        self.advance();
    }

    fn advance(&mut self) {
        self.to_move = (self.to_move + 1) % self.seats;
    }

    /// Play uniformly random legal shapes to the end and report the winner.
    pub fn playout(&mut self, rng: &mut ChaCha8Rng) -> Side {
        let mut scratch = Vec::with_capacity(128);
        loop {
            if let Some(side) = self.winner() {
                return side;
            }
            self.random_step(rng, &mut scratch);
        }
    }

    /// One random move; returns the shape played (`None` for a pass).
    fn random_step(&mut self, rng: &mut ChaCha8Rng, scratch: &mut Vec<Skeleton>) -> Option<Skeleton> {
        let seat = usize::from(self.to_move);
        scratch.clear();
        match self.dominant {
            None => lead_skeletons(&self.counts[seat], scratch),
            Some(dom) => beating_skeletons(&self.counts[seat], dom, scratch),
        }
        if self.dominant.is_some() {
            // Pass competes uniformly with the beating shapes.
            let pick = rng.gen_range(0..=scratch.len());
            if pick == scratch.len() {
                self.apply_pass();
                return None;
            }
            let skel = scratch[pick];
            self.play_skeleton(seat, skel, rng);
            Some(skel)
        } else {
            debug_assert!(!scratch.is_empty(), "leader always has a move");
            let skel = scratch[rng.gen_range(0..scratch.len())];
            self.play_skeleton(seat, skel, rng);
            Some(skel)
        }
    }

    fn play_skeleton(&mut self, seat: usize, skel: Skeleton, rng: &mut ChaCha8Rng) {
        let counts = &mut self.counts[seat];
        let p = usize::from(skel.principal);
        let len = usize::from(skel.run_len);
        let start = p + 1 - len;
        let mut removed = 0u8;
        let mut take = |counts: &mut [u8; RANK_COUNT], rank: usize, n: u8, removed: &mut u8| {
            debug_assert!(counts[rank] >= n);
            counts[rank] -= n;
            *removed += n;
        };
        match skel.cat {
            Category::Solo => take(counts, p, 1, &mut removed),
            Category::Pair => take(counts, p, 2, &mut removed),
            Category::Trio => take(counts, p, 3, &mut removed),
            Category::Bomb => take(counts, p, 4, &mut removed),
            Category::Rocket => {
                take(counts, JOKER_B, 1, &mut removed);
                take(counts, JOKER_R, 1, &mut removed);
            }
            Category::SoloChain => {
                for r in start..=p {
                    take(counts, r, 1, &mut removed);
                }
            }
            Category::PairChain => {
                for r in start..=p {
                    take(counts, r, 2, &mut removed);
                }
            }
            Category::Airplane => {
                for r in start..=p {
                    take(counts, r, 3, &mut removed);
                }
            }
            Category::TrioSolo | Category::TrioPair => {
                take(counts, p, 3, &mut removed);
                let per = if skel.cat == Category::TrioSolo { 1 } else { 2 };
                draw_solo_kickers(counts, p..p + 1, 1, per, rng, &mut removed);
            }
            Category::AirplaneSoloWings | Category::AirplanePairWings => {
                for r in start..=p {
                    take(counts, r, 3, &mut removed);
                }
                let per = if skel.cat == Category::AirplaneSoloWings { 1 } else { 2 };
                draw_solo_kickers(counts, start..p + 1, len, per, rng, &mut removed);
            }
            Category::FourTwoSolo | Category::FourTwoPair => {
                take(counts, p, 4, &mut removed);
                let per = if skel.cat == Category::FourTwoSolo { 1 } else { 2 };
                draw_solo_kickers(counts, p..p + 1, 2, per, rng, &mut removed);
            }
            Category::Pass => unreachable!("pass handled by caller"),
        }
        self.sizes[seat] -= removed;
        self.dominant = Some(Dom {
            cat: skel.cat,
            principal: skel.principal,
            run_len: skel.run_len,
        });
        self.pass_streak = 0;
        self.advance();
    }
}

/// Draw `n` kicker units of size `per` (1 = solos, 2 = pairs) uniformly
/// from ranks outside the principal run. Pair units use distinct ranks;
/// solo units may repeat a rank while copies remain.
fn draw_solo_kickers(
    counts: &mut [u8; RANK_COUNT],
    exclude: std::ops::Range<usize>,
    n: usize,
    per: u8,
    rng: &mut ChaCha8Rng,
    removed: &mut u8,
) {
    for _ in 0..n {
        let mut total = 0u32;
        for (rank, &c) in counts.iter().enumerate() {
            if !exclude.contains(&rank) && c >= per {
                total += 1;
            }
        }
        debug_assert!(total > 0, "skeleton emitted without kicker capacity");
        let mut pick = rng.gen_range(0..total);
        for rank in 0..RANK_COUNT {
            if exclude.contains(&rank) || counts[rank] < per {
                continue;
            }
            if pick == 0 {
                counts[rank] -= per;
                *removed += per;
                // A consumed pair rank may no longer host a second pair;
                // repeated solo ranks stay eligible while copies remain.
                break;
            }
            pick -= 1;
        }
    }
}

fn lead_skeletons(counts: &[u8; RANK_COUNT], out: &mut Vec<Skeleton>) {
    let total: u8 = counts.iter().sum();
    let pair_ranks: u8 = counts.iter().map(|&c| u8::from(c >= 2)).sum();
    for rank in 0..RANK_COUNT {
        let c = counts[rank];
        if c == 0 {
            continue;
        }
        let r = rank as u8;
        out.push(Skeleton { cat: Category::Solo, principal: r, run_len: 1 });
        if c >= 2 {
            out.push(Skeleton { cat: Category::Pair, principal: r, run_len: 1 });
        }
        if c >= 3 {
            out.push(Skeleton { cat: Category::Trio, principal: r, run_len: 1 });
            if total > c {
                out.push(Skeleton { cat: Category::TrioSolo, principal: r, run_len: 1 });
            }
            if pair_ranks > 1 {
                out.push(Skeleton { cat: Category::TrioPair, principal: r, run_len: 1 });
            }
        }
        if c >= 4 {
            out.push(Skeleton { cat: Category::Bomb, principal: r, run_len: 1 });
            if total - 4 >= 2 {
                out.push(Skeleton { cat: Category::FourTwoSolo, principal: r, run_len: 1 });
            }
            if pair_ranks > 2 {
                out.push(Skeleton { cat: Category::FourTwoPair, principal: r, run_len: 1 });
            }
        }
    }
    if counts[JOKER_B] >= 1 && counts[JOKER_R] >= 1 {
        out.push(Skeleton { cat: Category::Rocket, principal: JOKER_R as u8, run_len: 1 });
    }
    chain_skeletons(counts, out);
}

fn chain_skeletons(counts: &[u8; RANK_COUNT], out: &mut Vec<Skeleton>) {
    for (mult, min_len, max_len) in [(1u8, 5usize, 12usize), (2, 3, 10), (3, 2, 6)] {
        for start in 0..12usize {
            if counts[start] < mult || (start > 0 && counts[start - 1] >= mult) {
                continue; // only scan each maximal run once
            }
            let mut end = start;
            while end + 1 < 12 && counts[end + 1] >= mult {
                end += 1;
            }
            let run = end - start + 1;
            for len in min_len..=max_len.min(run) {
                for s in start..=end + 1 - len {
                    let principal = (s + len - 1) as u8;
                    let cat = match mult {
                        1 => Category::SoloChain,
                        2 => Category::PairChain,
                        _ => Category::Airplane,
                    };
                    out.push(Skeleton { cat, principal, run_len: len as u8 });
                    if mult == 3 {
                        wing_skeletons(counts, s, len, out);
                    }
                }
            }
        }
    }
}

fn wing_skeletons(counts: &[u8; RANK_COUNT], start: usize, len: usize, out: &mut Vec<Skeleton>) {
    if len > 5 {
        return;
    }
    let principal = (start + len - 1) as u8;
    if kicker_capacity(counts, start..start + len, 1) >= len {
        out.push(Skeleton {
            cat: Category::AirplaneSoloWings,
            principal,
            run_len: len as u8,
        });
    }
    if len <= 4 && kicker_capacity(counts, start..start + len, 2) >= len {
        out.push(Skeleton {
            cat: Category::AirplanePairWings,
            principal,
            run_len: len as u8,
        });
    }
}

fn beating_skeletons(counts: &[u8; RANK_COUNT], dom: Dom, out: &mut Vec<Skeleton>) {
    // Bombs and the rocket beat everything below them.
    let min_bomb = if dom.cat == Category::Bomb { usize::from(dom.principal) + 1 } else { 0 };
    for rank in min_bomb..13 {
        if counts[rank] >= 4 {
            out.push(Skeleton { cat: Category::Bomb, principal: rank as u8, run_len: 1 });
        }
    }
    if dom.cat != Category::Rocket && counts[JOKER_B] >= 1 && counts[JOKER_R] >= 1 {
        out.push(Skeleton { cat: Category::Rocket, principal: JOKER_R as u8, run_len: 1 });
    }
    if dom.cat == Category::Bomb || dom.cat == Category::Rocket {
        return;
    }

    let len = usize::from(dom.run_len);
    let lowest = usize::from(dom.principal) + 1;
    match dom.cat {
        Category::Solo | Category::Pair | Category::Trio => {
            let need = match dom.cat {
                Category::Solo => 1,
                Category::Pair => 2,
                _ => 3,
            };
            for rank in lowest..RANK_COUNT {
                if counts[rank] >= need {
                    out.push(Skeleton { cat: dom.cat, principal: rank as u8, run_len: 1 });
                }
            }
        }
        Category::TrioSolo | Category::TrioPair => {
            let per: u8 = if dom.cat == Category::TrioSolo { 1 } else { 2 };
            for rank in lowest..RANK_COUNT {
                if counts[rank] < 3 {
                    continue;
                }
                if kicker_capacity(counts, rank..rank + 1, per) >= 1 {
                    out.push(Skeleton { cat: dom.cat, principal: rank as u8, run_len: 1 });
                }
            }
        }
        Category::SoloChain | Category::PairChain | Category::Airplane => {
            let mult = match dom.cat {
                Category::SoloChain => 1,
                Category::PairChain => 2,
                _ => 3,
            };
            for start in (lowest + 1).saturating_sub(len)..=12 - len {
                if start + len - 1 < lowest {
                    continue;
                }
                if (start..start + len).all(|r| counts[r] >= mult) {
                    out.push(Skeleton {
                        cat: dom.cat,
                        principal: (start + len - 1) as u8,
                        run_len: len as u8,
                    });
                }
            }
        }
        Category::AirplaneSoloWings | Category::AirplanePairWings => {
            let per: u8 = if dom.cat == Category::AirplaneSoloWings { 1 } else { 2 };
            for start in (lowest + 1).saturating_sub(len)..=12usize.saturating_sub(len) {
                if start + len - 1 < lowest {
                    continue;
                }
                if !(start..start + len).all(|r| counts[r] >= 3) {
                    continue;
                }
                if kicker_capacity(counts, start..start + len, per) >= len {
                    out.push(Skeleton {
                        cat: dom.cat,
                        principal: (start + len - 1) as u8,
                        run_len: len as u8,
                    });
                }
            }
        }
        Category::FourTwoSolo | Category::FourTwoPair => {
            let per: u8 = if dom.cat == Category::FourTwoSolo { 1 } else { 2 };
            for rank in lowest..13 {
                if counts[rank] >= 4 && kicker_capacity(counts, rank..rank + 1, per) >= 2 {
                    out.push(Skeleton { cat: dom.cat, principal: rank as u8, run_len: 1 });
                }
            }
        }
        Category::Bomb | Category::Rocket | Category::Pass => unreachable!(),
    }
}

/// How many kicker units of size `per` are available outside `exclude`.
fn kicker_capacity(counts: &[u8; RANK_COUNT], exclude: std::ops::Range<usize>, per: u8) -> usize {
    let mut units = 0usize;
    for rank in 0..RANK_COUNT {
        if exclude.contains(&rank) {
            continue;
        }
        if per == 1 {
            units += usize::from(counts[rank]);
        } else if counts[rank] >= 2 {
            units += 1;
        }
    }
    units
}

fn pass_streak_of(state: &DouState) -> u8 {
    let mut streak = 0u8;
    for (_, combo) in state.history().iter().rev() {
        if combo.is_pass() {
            streak += 1;
        } else {
            break;
        }
    }
    // A cleared dominance means the streak already did its job.
    if state.dominant().is_none() {
        0
    } else {
        streak
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dou::card::{parse_cards, Card};
    use crate::seeding;

    fn fast(hands: &[&str], landlord: usize, to_move: usize) -> FastState {
        let hands = hands.iter().map(|h| parse_cards(h).unwrap()).collect();
        FastState::from_state(&DouState::from_hands(hands, landlord, to_move).unwrap())
    }

    #[test]
    fn playout_terminates_and_reports_a_winner() {
        for seed in 0..50u64 {
            let state = DouState::deal(seed, 0);
            let mut rng = seeding::rng(seed, "playout-test", 0);
            let mut f = FastState::from_state(&state);
            let side = f.playout(&mut rng);
            assert!(side == Side::Landlord || side == Side::Farmers);
        }
    }

    #[test]
    fn forced_win_is_always_found() {
        // Landlord leads with one card: the playout must end immediately.
        let mut f = fast(&["14", "3 3 3", "4 4 4"], 0, 0);
        let mut rng = seeding::rng(1, "forced", 0);
        assert_eq!(f.playout(&mut rng), Side::Landlord);
    }

    #[test]
    fn determinize_preserves_sizes_and_own_hand() {
        let state = DouState::deal(11, 1);
        let mut rng = seeding::rng(11, "det", 0);
        let f = FastState::determinize(&state, 0, &mut rng);
        assert_eq!(&f.counts[0], state.hand(0).counts());
        for seat in 0..3 {
            assert_eq!(usize::from(f.sizes[seat]), state.hand(seat).size());
            let sum: u8 = f.counts[seat].iter().sum();
            assert_eq!(sum, f.sizes[seat]);
        }
    }

    #[test]
    fn playout_moves_are_always_legal_against_engine() {
        // Mirror a playout step-by-step on the exact engine: every shape
        // the fast path plays must appear in the engine's legal list.
        for seed in 0..10u64 {
            let mut state = DouState::deal(seed, 0);
            let mut f = FastState::from_state(&state);
            let mut rng = seeding::rng(seed, "legal-mirror", 0);
            let mut scratch = Vec::new();
            while f.winner().is_none() {
                let seat = usize::from(f.to_move);
                let before = f.counts[seat];
                let skel = f.random_step(&mut rng, &mut scratch);
                let combo = match skel {
                    None => Combo::pass(),
                    Some(skel) => {
                        // Reconstruct the played multiset from the count delta.
                        let mut played = Hand::empty();
                        for rank in 0..RANK_COUNT {
                            let d = before[rank] - f.counts[seat][rank];
                            if d > 0 {
                                played.add(Card::from_index(rank), d).unwrap();
                            }
                        }
                        Combo::from_parts(
                            skel.cat,
                            Card::from_index(usize::from(skel.principal)),
                            skel.run_len,
                            played,
                        )
                    }
                };
                assert!(
                    state.legal_actions().unwrap().contains(&combo),
                    "fast move {combo:?} missing from engine legal list"
                );
                state = state
                    .apply_action(&combo)
                    .expect("playout move is legal on the engine");
            }
            assert_eq!(state.is_terminal(), Some(f.winner().unwrap()));
        }
    }
}
