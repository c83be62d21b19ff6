//! Position evaluation: ownership estimation, the Count territory tool,
//! score lead and win-rate estimation.
//!
//! The built-in estimator runs seeded random playouts and is a weak but
//! exact-contract oracle; paper-grade evaluations come from an external
//! engine through the bridge and pass through the same validation. Score
//! leads are always reported from black's perspective (positive favors
//! black); callers needing the mover's perspective negate when white is
//! to move.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::board::{Color, GoState};
use super::rollout::run_rollouts;
use crate::bridge::AnalysisRecord;

/// Default discretization threshold for ownership values.
pub const DEFAULT_OWNERSHIP_THRESHOLD: f64 = 0.6;

/// Default komi, matching common area-scoring conventions.
pub const DEFAULT_KOMI: f64 = 7.5;

#[derive(Debug, Error, PartialEq, Clone)]
pub enum EvalError {
    #[error("ownership grid holds {got} cells, expected {expected}")]
    GridSizeMismatch { expected: usize, got: usize },
    #[error("ownership value {0} outside [-1, 1]")]
    OwnershipOutOfRange(f64),
    #[error("win rate {0} outside [0, 1]")]
    WinRateOutOfRange(f64),
    #[error("score lead {0} is not finite")]
    ScoreLeadNotFinite(f64),
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ownership {
    Black,
    White,
    Undecided,
}

/// Per-point ownership: raw values in [-1, 1] (+1 black) and their
/// three-way discretization under a threshold θ.
#[derive(Clone, PartialEq, Debug)]
pub struct OwnershipMap {
    size: usize,
    raw: Vec<f64>,
    discrete: Vec<Ownership>,
    theta: f64,
}

impl OwnershipMap {
    /// Discretize raw values: black at or above +θ, white at or below -θ,
    /// undecided between.
    pub fn from_raw(size: usize, raw: Vec<f64>, theta: f64) -> Result<OwnershipMap, EvalError> {
        if raw.len() != size * size {
            return Err(EvalError::GridSizeMismatch { expected: size * size, got: raw.len() });
        }
        for &v in &raw {
            if !(-1.0..=1.0).contains(&v) {
                return Err(EvalError::OwnershipOutOfRange(v));
            }
        }
        let discrete = raw
            .iter()
            .map(|&v| {
                if v >= theta {
                    Ownership::Black
                } else if v <= -theta {
                    Ownership::White
                } else {
                    Ownership::Undecided
                }
            })
            .collect();
        Ok(OwnershipMap { size, raw, discrete, theta })
    }

    /// Build directly from discrete symbols (raw set to ±1/0).
    pub fn from_discrete(size: usize, discrete: Vec<Ownership>, theta: f64) -> Result<OwnershipMap, EvalError> {
        if discrete.len() != size * size {
            return Err(EvalError::GridSizeMismatch {
                expected: size * size,
                got: discrete.len(),
            });
        }
        let raw = discrete
            .iter()
            .map(|o| match o {
                Ownership::Black => 1.0,
                Ownership::White => -1.0,
                Ownership::Undecided => 0.0,
            })
            .collect();
        Ok(OwnershipMap { size, raw, discrete, theta })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn raw(&self) -> &[f64] {
        &self.raw
    }

    pub fn discrete(&self) -> &[Ownership] {
        &self.discrete
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// Mean final ownership per point under seeded uniform-random play to two
/// consecutive passes, scored by area rules. Deterministic in
/// `(state, n_rollouts, seed)`.
pub fn estimate_ownership(state: &GoState, n_rollouts: u32, seed: u64, theta: f64) -> OwnershipMap {
    assert!(n_rollouts >= 1, "n_rollouts must be at least 1");
    let stats = run_rollouts(state, n_rollouts, seed, "go-ownership", 0.0);
    let raw: Vec<f64> = stats
        .ownership_sum
        .iter()
        .map(|&s| s as f64 / f64::from(n_rollouts))
        .collect();
    OwnershipMap::from_raw(state.size(), raw, theta).expect("rollout means stay within [-1, 1]")
}

/// The Count tool: exact counts of black- and white-discrete cells.
pub fn count_territory(map: &OwnershipMap) -> (u32, u32) {
    let mut black = 0;
    let mut white = 0;
    for o in map.discrete() {
        match o {
            Ownership::Black => black += 1,
            Ownership::White => white += 1,
            Ownership::Undecided => {}
        }
    }
    (black, white)
}

/// Point lead from black's perspective: `black - white - komi`.
pub fn score_lead(counts: (u32, u32), komi: f64) -> f64 {
    f64::from(counts.0) - f64::from(counts.1) - komi
}

/// Fraction of seeded random playouts that black wins by area score
/// against `komi`. Deterministic in `(state, n_rollouts, seed)`.
pub fn estimate_winrate(state: &GoState, n_rollouts: u32, seed: u64, komi: f64) -> f64 {
    assert!(n_rollouts >= 1, "n_rollouts must be at least 1");
    let stats = run_rollouts(state, n_rollouts, seed, "go-winrate", komi);
    f64::from(stats.black_wins) / f64::from(n_rollouts)
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalSource {
    BuiltinMc,
    ExternalEngine,
}

/// The analysis triple for one position: ownership, black-perspective
/// score lead, and black win rate.
#[derive(Clone, PartialEq, Debug)]
pub struct PositionEval {
    pub ownership: OwnershipMap,
    pub score_lead: f64,
    pub win_rate: f64,
    pub source: EvalSource,
}

impl PositionEval {
    pub fn validate(&self) -> Result<(), EvalError> {
        if !(0.0..=1.0).contains(&self.win_rate) {
            return Err(EvalError::WinRateOutOfRange(self.win_rate));
        }
        if !self.score_lead.is_finite() {
            return Err(EvalError::ScoreLeadNotFinite(self.score_lead));
        }
        Ok(())
    }

    /// Validate and adopt an external engine's analysis.
    pub fn from_analysis(
        record: &AnalysisRecord,
        size: usize,
        theta: f64,
    ) -> Result<PositionEval, EvalError> {
        let ownership = OwnershipMap::from_raw(size, record.ownership.clone(), theta)?;
        let eval = PositionEval {
            ownership,
            score_lead: record.score_lead,
            win_rate: record.win_rate,
            source: EvalSource::ExternalEngine,
        };
        eval.validate()?;
        Ok(eval)
    }
}

/// Built-in evaluation producing a self-consistent triple: one rollout
/// budget yields the ownership map, the lead recomputed from its counts,
/// and the win rate.
pub fn evaluate_position(
    state: &GoState,
    n_rollouts: u32,
    seed: u64,
    komi: f64,
    theta: f64,
) -> PositionEval {
    assert!(n_rollouts >= 1, "n_rollouts must be at least 1");
    let stats = run_rollouts(state, n_rollouts, seed, "go-eval", komi);
    let raw: Vec<f64> = stats
        .ownership_sum
        .iter()
        .map(|&s| s as f64 / f64::from(n_rollouts))
        .collect();
    let ownership =
        OwnershipMap::from_raw(state.size(), raw, theta).expect("rollout means stay within [-1, 1]");
    let lead = score_lead(count_territory(&ownership), komi);
    PositionEval {
        ownership,
        score_lead: lead,
        win_rate: f64::from(stats.black_wins) / f64::from(n_rollouts),
        source: EvalSource::BuiltinMc,
    }
}
