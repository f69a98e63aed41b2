//! Exact convergence analysis for finite-state agents interacting with
//! finite environments.
//!
//! Given a [`BoundedAgent`](model::BoundedAgent) and a
//! [`FiniteEnvironment`](model::FiniteEnvironment), the crate computes
//!
//! * the minimal-size sequence `c_t`: how many states any agent needs to
//!   reproduce the agent's behavior on every realizable future from time `t`,
//! * the distortion sequence `δ_t`: the largest performance gap between two
//!   realizable moments at which the agent occupies the same state,
//!
//! together with their limits and the convergence times `t_β`, `t_ε`.
//!
//! ```
//! use agent_convergence::prelude::*;
//!
//! let iface = Interface::new(["left", "right"], ["o"]).unwrap();
//! let agent = agents::constant_agent(&iface, Dist::point(2, 0));
//! let env = envs::bandit_env(&iface, &[0.0, 1.0]).unwrap();
//! let g = build_product(&iface, &agent, &env).unwrap();
//! let ls = layer_sequence(&g, None).unwrap();
//! let values = exact_value(&g, PerformanceSpec::Myopic);
//! let delta = distortion_sequence(&g, &values, &ls).unwrap();
//! assert_eq!(delta.limit(), 0.0);
//! ```

pub mod agents;
pub mod analysis;
pub mod distortion;
pub mod envs;
mod error;
pub mod export;
pub mod model;
pub mod product;
pub mod scenario;
pub mod size;
pub mod value;

pub use error::{Error, Result};

/// The types and entry points most programs need.
pub mod prelude {
    pub use crate::agents;
    pub use crate::distortion::{convergence_time_eps, distortion_at, distortion_sequence, DistortionSequence};
    pub use crate::envs;
    pub use crate::model::{
        check_last_obs_condition, validate_agent, validate_env, BoundedAgent, Dist, FiniteEnvironment, History,
        Interface, PerformanceSpec,
    };
    pub use crate::product::{build_product, layer_sequence, reachable_from_time, revisit_pairs, ProductGraph};
    pub use crate::size::{convergence_time_beta, future_machine, min_closed_cover, size_sequence, SizeOptions};
    pub use crate::value::{exact_value, ValueTable};
    pub use crate::{Error, Result};
}
