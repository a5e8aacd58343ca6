//! Closed-form rate evaluation: single-user and TIN rates, regime capacity
//! regions and sum-rate capacities, trace-constrained waterfilling, and the
//! generalized upper-bound objective with its min-max heuristic.

mod bound;
mod rates;
mod region;
mod waterfill;

pub use bound::{bound_minimax_heuristic, bound_objective, BoundError, MinimaxOutcome};
pub use rates::{
    aligned_strong_region, mixed_sum_capacity, noisy_sum_capacity, single_user_rate, tin_rate,
    very_strong_region, CapacityResult, FormulaId,
};
pub use region::{RateBound, RateRegion};
pub use waterfill::{parallel_tin_powers, parallel_tin_sum_rate, water_levels, waterfill};
