//! Choosing multiplier sets.
//!
//! The choice is posed as a small mixed-integer program over membership
//! indicators `z` and product indicators `f`; it is solved exactly by branch
//! and bound or approximately by a greedy repair loop.

mod assignment;
mod exact;
mod greedy;
mod model;

pub use assignment::{ConstraintMultipliers, DesignError, Membership, MultiplierAssignment, MultiplierKind};
pub use exact::{solve_cover_exact, CoverSolution, SearchStats};
pub use greedy::{solve_cover_greedy, solve_cover_greedy_model};
pub use model::{
    build_cover_model, build_cover_model_excluding, CoverError, CoverModel, CoverRow, CoverRowKind, CoverWeights,
};
