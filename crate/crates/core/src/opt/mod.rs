//! Word search and sieve-level linear programs over exponent pairs.

mod bounds;
mod level;
mod search;

pub use bounds::{
    bound_eval_akb, bound_eval_bakb, divisor_level, optimal_split, subconvex_delta, divisor_target,
};
pub use level::{
    bt_constant, constraint_slacks, gamma_left_limit, gamma_of_theta, gamma_pieces, level_max_gamma, validity_range,
    ConstraintId, GammaPiece, LevelProblem, LevelResult, LpVariant, GAMMA_DOMAIN,
};
pub use search::{
    optimize_word, optimize_word_with, word_bound, Objective, PrunedNode, SearchOptions, SearchReport,
};
