//! Performance of product nodes: exact solves and a Monte-Carlo cross-check.

mod exact;
mod linalg;
mod mc;
mod scc;

pub use exact::{bellman_residual, exact_value, reward_bounds, ValueTable, BELLMAN_TOL, DIRECT_SOLVE_LIMIT};
pub use linalg::solve as dense_solve;
pub use mc::{mc_estimate_value, McEstimate};
pub use scc::{recurrent_classes, strongly_connected};
