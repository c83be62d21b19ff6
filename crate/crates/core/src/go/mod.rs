//! Go: rules, the textual board codec, state diffing, SGF ingestion,
//! position evaluation and the self-play policies used for data
//! generation.

pub mod board;
pub mod codec;
pub mod eval;
pub mod policy;
pub mod rollout;
pub mod sgf;

pub use board::{diff_states, Color, GoError, GoMove, GoState, KoRule, Point, Vertex};
pub use codec::{parse_board, serialize_board, vertex_from_str, vertex_to_str, Annotation, CodecError};
pub use eval::{
    count_territory, estimate_ownership, estimate_winrate, evaluate_position, score_lead,
    EvalError, EvalSource, Ownership, OwnershipMap, PositionEval,
};
pub use sgf::{load_sgf, SgfEntry, SgfError, SgfGame};
