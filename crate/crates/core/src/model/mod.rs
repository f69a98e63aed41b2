//! Interfaces, agents, environments and performance statistics.

mod agent;
mod dist;
mod env;
mod history;
mod interface;
mod performance;
mod validate;

pub use agent::{check_last_obs_condition, validate_agent, BoundedAgent, LastObsWitness};
pub use dist::{canonical_dist, CanonicalDist, Dist, OutputClasses, DEFAULT_DIST_TOL, NORMALIZATION_TOL};
pub use env::{validate_env, FiniteEnvironment};
pub use history::History;
pub use interface::Interface;
pub use performance::PerformanceSpec;
pub use validate::{ValidationReport, Violation};
