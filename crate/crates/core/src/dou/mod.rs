//! Doudizhu: card encoding, combo taxonomy, rules, agents and an
//! exhaustive endgame solver.

pub mod agents;
pub mod card;
pub mod combo;
pub mod moves;
pub mod rollout;
pub mod solver;
pub mod state;

pub use agents::{
    monte_carlo_policy, predict_opponent_responses, rule_policy, top_p_filter, Agent,
    AgentError, AgentKind, AgentProfile, ScoredActions,
};
pub use card::{encode_cards, parse_cards, Card, CardError, Hand};
pub use combo::{beats, classify, Category, Combo};
pub use moves::{beating_moves, enumerate_all_actions, moves_from_hand, ACTION_SPACE_SIZE};
pub use solver::{solve_endgame, SolverError};
pub use state::{DouState, Side, StateError};
