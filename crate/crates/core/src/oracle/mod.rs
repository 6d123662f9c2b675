//! Independent checks for the closed-form optimizers: exhaustive search over
//! a rational simplex grid, the KKT system of the partial-investment problem,
//! and seeded Monte Carlo simulation of repeated races.

mod grid;
mod kkt;
mod simulate;

pub use grid::{
    grid_search_full, grid_search_limit, grid_search_partial, grid_search_side_info, Compositions, GridSpec,
    MAX_GRID_POINTS,
};
pub use kkt::{kkt_residual, KktReport};
pub use simulate::{
    estimate_ubeta, estimate_ubeta_detailed, race_uniform, simulate_growth, summarize_growth,
    GrowthSummary, MonteCarloEstimate, WealthTrajectory,
};
