#![allow(dead_code)]

use std::path::PathBuf;

use agent_convergence::prelude::*;
use agent_convergence::scenario::{load_scenario, Resolved};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn scenario_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(format!("{name}.json"))
}

pub fn bundled(name: &str) -> Resolved {
    load_scenario(scenario_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub const BUNDLED: &[&str] = &[
    "bandit-constant",
    "mdp-memoryless",
    "korder",
    "prop45",
    "example1",
    "example2",
    "random-tiny-seed1",
    "random-tiny-seed2",
    "random-tiny-seed3",
];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn symbols(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// A seeded random pair with every state count at most `max_states` and
/// every alphabet size at most `max_symbols`.
pub fn random_pair(seed: u64, max_states: usize, max_symbols: usize) -> (Interface, BoundedAgent, FiniteEnvironment) {
    let mut r = rng(seed);
    let na = r.gen_range(1..=max_symbols);
    let no = r.gen_range(1..=max_symbols);
    let iface = Interface::new(symbols("a", na), symbols("o", no)).unwrap();
    let agent = agents::random_agent(&iface, r.gen_range(1..=max_states), &mut r);
    let env = envs::random_env(&iface, r.gen_range(1..=max_states), &mut r);
    (iface, agent, env)
}

/// A seeded random fully observable MDP with a random last-observation agent.
pub fn random_mdp_pair(seed: u64) -> (Interface, BoundedAgent, FiniteEnvironment) {
    let mut r = rng(seed);
    let na = r.gen_range(1..=3);
    let no = r.gen_range(2..=4);
    let iface = Interface::new(symbols("a", na), symbols("x", no)).unwrap();
    let env = envs::random_mdp(&iface, &mut r);
    let policy = (0..no).map(|_| agents::random_dist(na, &mut r)).collect();
    let agent = agents::memoryless_agent(&iface, policy, env.start()).unwrap();
    (iface, agent, env)
}
