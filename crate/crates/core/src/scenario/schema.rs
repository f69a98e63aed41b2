use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::model::{PerformanceSpec, DEFAULT_DIST_TOL};
use crate::size::CoverBudget;

/// A distribution written as `symbol -> probability`; omitted symbols have
/// probability 0.
pub type DistDecl = BTreeMap<String, f64>;

/// A complete analysis request.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub interface: InterfaceDecl,
    pub agent: AgentDecl,
    pub environment: EnvDecl,
    pub performance: PerformanceSpec,
    #[serde(default)]
    pub analysis: AnalysisOptions,
    #[serde(default, skip_serializing_if = "OutputTargets::is_empty")]
    pub outputs: OutputTargets,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterfaceDecl {
    pub actions: Vec<String>,
    pub observations: Vec<String>,
}

/// An agent given by builder name and parameters, or by explicit tables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "builder", rename_all = "snake_case")]
pub enum AgentDecl {
    Constant {
        dist: DistDecl,
    },
    Memoryless {
        policy: BTreeMap<String, DistDecl>,
        initial_observation: String,
    },
    Korder {
        k: usize,
        /// Keyed by the window, oldest observation first, joined with `,`.
        #[serde(default)]
        policy: BTreeMap<String, DistDecl>,
        /// Used for windows missing from `policy`.
        #[serde(default)]
        default: Option<DistDecl>,
        pad: String,
    },
    Switching {
        n_switch: usize,
        dist_a: DistDecl,
        dist_b: DistDecl,
        dist_final: DistDecl,
    },
    BoundedQ {
        q_grid: Vec<f64>,
        alpha: f64,
        epsilon: f64,
        /// Aggregate cell per observation.
        aggregation: BTreeMap<String, usize>,
        reward_channel: RewardChannelDecl,
        #[serde(default)]
        q_init: f64,
        initial_observation: String,
        #[serde(default)]
        discount: f64,
        #[serde(default)]
        max_states: Option<usize>,
    },
    Random {
        seed: u64,
        states: usize,
    },
    Tables(AgentTables),
}

/// Where a Q-learner gets its reward signal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RewardChannelDecl {
    /// `"observable"`: derive from the environment, which must pay a reward
    /// determined by `(action, observation)`. `"recalled"`: charge each
    /// transition as leaving the first observation of the remembered cell.
    Derived(String),
    /// `action -> observation -> reward`; omitted entries are 0.
    Explicit(BTreeMap<String, BTreeMap<String, f64>>),
}

/// Explicit agent tables. Also the export format for witness machines.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgentTables {
    pub states: Vec<String>,
    pub start: String,
    pub policy: BTreeMap<String, DistDecl>,
    /// `state -> action -> observation -> next state`.
    pub update: BTreeMap<String, BTreeMap<String, BTreeMap<String, String>>>,
}

/// An environment given by builder name and parameters, or by explicit tables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "builder", rename_all = "snake_case")]
pub enum EnvDecl {
    Bandit {
        rewards: BTreeMap<String, f64>,
    },
    /// Fully observable MDP; states are the observation symbols.
    Mdp {
        start: String,
        transitions: BTreeMap<String, BTreeMap<String, DistDecl>>,
        /// `state -> action -> next state -> reward`; omitted entries are 0.
        #[serde(default)]
        rewards: BTreeMap<String, BTreeMap<String, BTreeMap<String, f64>>>,
    },
    Prop45 {},
    Clocked {
        base: Box<EnvDecl>,
        switch_time: usize,
        reward_before: f64,
        reward_after: f64,
    },
    Random {
        seed: u64,
        states: usize,
    },
    RandomMdp {
        seed: u64,
    },
    Tables(EnvTables),
}

/// Explicit environment tables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvTables {
    pub states: Vec<String>,
    pub start: String,
    /// `state -> action -> observation distribution`.
    pub emission: BTreeMap<String, BTreeMap<String, DistDecl>>,
    /// `state -> action -> observation -> next state`.
    pub update: BTreeMap<String, BTreeMap<String, BTreeMap<String, String>>>,
    /// `state -> action -> observation -> reward`; omitted entries are 0.
    #[serde(default)]
    pub reward: BTreeMap<String, BTreeMap<String, BTreeMap<String, f64>>>,
}

/// What to compute and with which tolerances and budgets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisOptions {
    #[serde(default = "yes")]
    pub sizes: bool,
    #[serde(default = "yes")]
    pub distortion: bool,
    #[serde(default)]
    pub beta: f64,
    #[serde(default)]
    pub epsilon: f64,
    #[serde(default = "default_tol")]
    pub tolerance: f64,
    #[serde(default)]
    pub budget: CoverBudget,
    #[serde(default)]
    pub layer_cap: Option<usize>,
    #[serde(default = "default_oracle_depth")]
    pub oracle_depth: usize,
    #[serde(default)]
    pub monte_carlo: Option<MonteCarloOptions>,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            sizes: true,
            distortion: true,
            beta: 0.0,
            epsilon: 0.0,
            tolerance: DEFAULT_DIST_TOL,
            budget: CoverBudget::default(),
            layer_cap: None,
            oracle_depth: default_oracle_depth(),
            monte_carlo: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloOptions {
    pub rollouts: usize,
    pub horizon: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputTargets {
    #[serde(default)]
    pub csv: Option<String>,
    #[serde(default)]
    pub json: Option<String>,
}

impl OutputTargets {
    pub fn is_empty(&self) -> bool {
        self.csv.is_none() && self.json.is_none()
    }
}

fn yes() -> bool {
    true
}

fn default_tol() -> f64 {
    DEFAULT_DIST_TOL
}

fn default_oracle_depth() -> usize {
    6
}
