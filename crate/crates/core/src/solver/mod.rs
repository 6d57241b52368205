//! Sliding local search and the baselines around it.

mod greedy;
mod markers;
mod scaling;
mod sliding;
mod swap;

pub use greedy::greedy;
pub use markers::{compute_markers, interval_count, sample_tau, IntervalScheme, WeightInterval};
pub(crate) use markers::check_marker_ratio;
pub use scaling::scale_weights;
pub use sliding::{
    best_of_runs, derive_seed, sliding_local_search, sliding_with_tau, solve_scaled, BestOfRuns,
    IntervalRecord, SlidingConfig, SolverTrace, SwapRecord,
};
pub use swap::{find_improving_swap, interval_local_search, SwapMove, SwapRule};
