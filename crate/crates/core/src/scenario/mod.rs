//! Scenario files: a JSON description of an interface, an agent, an
//! environment, a performance statistic and analysis options.
//!
//! Agents and environments are either named builders with parameters or
//! explicit tables, so the analysis is not limited to the bundled fixtures.

mod resolve;
mod schema;

pub use resolve::{agent_tables, list_builders, load_scenario, override_seed, parse_scenario, resolve, Resolved, BUILDERS};
pub use schema::{
    AgentDecl, AgentTables, AnalysisOptions, DistDecl, EnvDecl, EnvTables, InterfaceDecl, MonteCarloOptions,
    OutputTargets, RewardChannelDecl, Scenario,
};
