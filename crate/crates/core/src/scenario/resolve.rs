use std::collections::BTreeMap;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::agents::{self, QAgentConfig};
use crate::envs;
use crate::error::{Error, Result};
use crate::model::{
    validate_agent, validate_env, BoundedAgent, Dist, FiniteEnvironment, Interface, PerformanceSpec,
};
use crate::scenario::schema::*;

/// Builder names accepted in scenario files, with a one-line summary.
pub const BUILDERS: &[(&str, &str, &str)] = &[
    ("agent", "constant", "one state playing a fixed distribution"),
    ("agent", "memoryless", "state = last observation"),
    ("agent", "korder", "state = window of the last k observations"),
    ("agent", "switching", "alternates two distributions for n_switch steps, then commits"),
    ("agent", "bounded_q", "quantized epsilon-greedy tabular Q-learner"),
    ("agent", "random", "seeded random agent"),
    ("agent", "tables", "explicit policy and update tables"),
    ("environment", "bandit", "one state, one observation, reward per arm"),
    ("environment", "mdp", "fully observable MDP, observation = next state"),
    ("environment", "prop45", "two-state move/stay MDP with origin-dependent reward"),
    ("environment", "clocked", "base environment with a hidden saturating reward clock"),
    ("environment", "random", "seeded random environment"),
    ("environment", "random_mdp", "seeded random fully observable MDP"),
    ("environment", "tables", "explicit emission, update and reward tables"),
];

/// One line per builder: `kind name  summary`.
pub fn list_builders() -> String {
    BUILDERS
        .iter()
        .map(|(kind, name, doc)| format!("{kind:<12} {name:<12} {doc}\n"))
        .collect()
}

/// A scenario with its agent and environment built and validated.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub scenario: Scenario,
    pub interface: Interface,
    pub agent: BoundedAgent,
    pub environment: FiniteEnvironment,
    pub performance: PerformanceSpec,
    /// SHA-256 of the canonical JSON form of the scenario.
    pub digest: String,
}

/// Parses JSON text into a scenario. Errors carry line and column.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    serde_json::from_str(text).map_err(|e| Error::input(format!("scenario parse error: {e}")))
}

/// Reads, parses and resolves a scenario file.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<Resolved> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
    resolve(parse_scenario(&text)?)
}

/// Builds and validates the agent and environment of a scenario.
pub fn resolve(scenario: Scenario) -> Result<Resolved> {
    let interface = Interface::new(scenario.interface.actions.clone(), scenario.interface.observations.clone())?;
    scenario.performance.validate()?;
    let opts = &scenario.analysis;
    if !(opts.tolerance >= 0.0 && opts.beta >= 0.0 && opts.epsilon >= 0.0) {
        return Err(Error::input("tolerance, beta and epsilon must be non-negative"));
    }
    let environment = build_env(&interface, &scenario.environment)?;
    let agent = build_agent(&interface, &scenario.agent, &environment)?;
    let mut report = validate_agent(&agent, &interface);
    report.extend(validate_env(&environment, &interface));
    report.into_result()?;
    let canonical = serde_json::to_vec(&scenario).expect("scenario serializes");
    let digest = Sha256::digest(&canonical).iter().map(|b| format!("{b:02x}")).collect();
    Ok(Resolved { performance: scenario.performance, scenario, interface, agent, environment, digest })
}

fn dist(symbols: &[String], decl: &DistDecl, what: &str) -> Result<Dist> {
    let mut probs = vec![0.0; symbols.len()];
    for (name, &p) in decl {
        let i = symbols
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::input(format!("{what}: unknown symbol `{name}`")))?;
        probs[i] = p;
    }
    Ok(Dist::unchecked(probs))
}

fn action_dist(iface: &Interface, decl: &DistDecl) -> Result<Dist> {
    dist(iface.actions(), decl, "action distribution")
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn build_agent(iface: &Interface, decl: &AgentDecl, env: &FiniteEnvironment) -> Result<BoundedAgent> {
    match decl {
        AgentDecl::Constant { dist } => Ok(agents::constant_agent(iface, action_dist(iface, dist)?)),
        AgentDecl::Memoryless { policy, initial_observation } => {
            let rows = iface
                .observations()
                .iter()
                .map(|o| {
                    let d = policy.get(o).ok_or_else(|| Error::input(format!("memoryless policy missing `{o}`")))?;
                    action_dist(iface, d)
                })
                .collect::<Result<Vec<_>>>()?;
            check_keys(policy.keys(), iface.observations(), "memoryless policy")?;
            agents::memoryless_agent(iface, rows, iface.observation_index(initial_observation)?)
        }
        AgentDecl::Korder { k, policy, default, pad } => {
            let pad = iface.observation_index(pad)?;
            let default = default.as_ref().map(|d| action_dist(iface, d)).transpose()?;
            let mut parsed = BTreeMap::new();
            for (window, d) in policy {
                let idx = window
                    .split(',')
                    .map(|o| iface.observation_index(o.trim()))
                    .collect::<Result<Vec<_>>>()?;
                if idx.len() != *k {
                    return Err(Error::input(format!("window `{window}` does not have {k} observations")));
                }
                parsed.insert(idx, action_dist(iface, d)?);
            }
            let mut missing = None;
            let agent = agents::korder_agent(
                iface,
                *k,
                |w| match parsed.get(w).or(default.as_ref()) {
                    Some(d) => d.clone(),
                    None => {
                        missing.get_or_insert_with(|| w.to_vec());
                        Dist::uniform(iface.num_actions())
                    }
                },
                pad,
            )?;
            if let Some(w) = missing {
                let names: Vec<&str> = w.iter().map(|&o| iface.observations()[o].as_str()).collect();
                return Err(Error::input(format!("korder policy has no entry for window `{}`", names.join(","))));
            }
            Ok(agent)
        }
        AgentDecl::Switching { n_switch, dist_a, dist_b, dist_final } => agents::switching_agent(
            iface,
            *n_switch,
            action_dist(iface, dist_a)?,
            action_dist(iface, dist_b)?,
            action_dist(iface, dist_final)?,
        ),
        AgentDecl::BoundedQ {
            q_grid,
            alpha,
            epsilon,
            aggregation,
            reward_channel,
            q_init,
            initial_observation,
            discount,
            max_states,
        } => {
            check_keys(aggregation.keys(), iface.observations(), "aggregation")?;
            let aggregation = iface
                .observations()
                .iter()
                .map(|o| aggregation.get(o).copied().ok_or_else(|| Error::input(format!("aggregation missing `{o}`"))))
                .collect::<Result<Vec<_>>>()?;
            let cells = aggregation.iter().max().map_or(0, |c| c + 1);
            let broadcast = |ch: Vec<f64>| ch.repeat(cells);
            let reward_channel = match reward_channel {
                RewardChannelDecl::Derived(kind) if kind == "observable" => {
                    broadcast(envs::observable_reward_channel(iface, env)?)
                }
                RewardChannelDecl::Derived(kind) if kind == "recalled" => {
                    envs::recalled_reward_channel(iface, env, &aggregation)?
                }
                RewardChannelDecl::Derived(other) => {
                    return Err(Error::input(format!(
                        "unknown reward channel `{other}` (expected observable or recalled)"
                    )))
                }
                RewardChannelDecl::Explicit(map) => {
                    let no = iface.num_observations();
                    let mut ch = vec![0.0; iface.num_actions() * no];
                    for (a, row) in map {
                        let a = iface.action_index(a)?;
                        for (o, &r) in row {
                            ch[a * no + iface.observation_index(o)?] = r;
                        }
                    }
                    broadcast(ch)
                }
            };
            let cfg = QAgentConfig {
                q_grid: q_grid.clone(),
                alpha: *alpha,
                epsilon: *epsilon,
                aggregation,
                reward_channel,
                q_init: *q_init,
                initial_observation: iface.observation_index(initial_observation)?,
                discount: *discount,
                max_states: max_states.unwrap_or(100_000),
            };
            agents::bounded_q_agent(&cfg, iface)
        }
        AgentDecl::Random { seed, states } => {
            if *states == 0 {
                return Err(Error::input("random agent needs at least one state"));
            }
            Ok(agents::random_agent(iface, *states, &mut rng_for(*seed, 1)))
        }
        AgentDecl::Tables(t) => agent_from_tables(iface, t),
    }
}

fn check_keys<'a>(keys: impl Iterator<Item = &'a String>, symbols: &[String], what: &str) -> Result<()> {
    for k in keys {
        if !symbols.contains(k) {
            return Err(Error::input(format!("{what}: unknown symbol `{k}`")));
        }
    }
    Ok(())
}

fn state_index(states: &[String], name: &str) -> usize {
    // Unknown names map past the end so validation reports them as dangling.
    states.iter().position(|s| s == name).unwrap_or(states.len())
}

fn agent_from_tables(iface: &Interface, t: &AgentTables) -> Result<BoundedAgent> {
    let (na, no) = (iface.num_actions(), iface.num_observations());
    let n = t.states.len();
    check_keys(t.policy.keys(), &t.states, "policy")?;
    check_keys(t.update.keys(), &t.states, "update")?;
    let policy = t
        .states
        .iter()
        .map(|s| match t.policy.get(s) {
            Some(d) => action_dist(iface, d),
            None => Ok(Dist::unchecked(vec![0.0; na])),
        })
        .collect::<Result<Vec<_>>>()?;
    let update = nested_lookup(iface, &t.states, &t.update, n, na, no)?;
    Ok(BoundedAgent::new(t.states.clone(), state_index(&t.states, &t.start), na, no, policy, update))
}

fn nested_lookup(
    iface: &Interface,
    states: &[String],
    table: &BTreeMap<String, BTreeMap<String, BTreeMap<String, String>>>,
    n: usize,
    na: usize,
    no: usize,
) -> Result<Vec<Option<usize>>> {
    let mut update = vec![None; n * na * no];
    for (s, row) in table {
        let si = state_index(states, s);
        for (a, cells) in row {
            let ai = iface.action_index(a)?;
            for (o, target) in cells {
                let oi = iface.observation_index(o)?;
                update[(si * na + ai) * no + oi] = Some(state_index(states, target));
            }
        }
    }
    Ok(update)
}

fn build_env(iface: &Interface, decl: &EnvDecl) -> Result<FiniteEnvironment> {
    match decl {
        EnvDecl::Bandit { rewards } => {
            check_keys(rewards.keys(), iface.actions(), "bandit rewards")?;
            let r: Vec<f64> = iface.actions().iter().map(|a| rewards.get(a).copied().unwrap_or(0.0)).collect();
            envs::bandit_env(iface, &r)
        }
        EnvDecl::Mdp { start, transitions, rewards } => {
            check_keys(transitions.keys(), iface.observations(), "MDP transitions")?;
            let rows = iface
                .observations()
                .iter()
                .map(|x| {
                    let row = transitions.get(x).ok_or_else(|| Error::input(format!("MDP has no transitions from `{x}`")))?;
                    iface
                        .actions()
                        .iter()
                        .map(|a| match row.get(a) {
                            Some(d) => dist(iface.observations(), d, "MDP transition"),
                            None => Err(Error::input(format!("MDP has no transition for (`{x}`, `{a}`)"))),
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let mut r = BTreeMap::new();
            for (x, row) in rewards {
                for (a, cells) in row {
                    for (x2, &v) in cells {
                        r.insert(
                            (iface.observation_index(x)?, iface.action_index(a)?, iface.observation_index(x2)?),
                            v,
                        );
                    }
                }
            }
            envs::mdp_env(iface, iface.observation_index(start)?, &rows, |x, a, o| {
                r.get(&(x, a, o)).copied().unwrap_or(0.0)
            })
        }
        EnvDecl::Prop45 {} => {
            let (own, env) = envs::prop45_env();
            if &own != iface {
                return Err(Error::input(
                    "prop45 environment requires actions [move, stay] and observations [o1, o2]",
                ));
            }
            Ok(env)
        }
        EnvDecl::Clocked { base, switch_time, reward_before, reward_after } => {
            envs::clocked_env(&build_env(iface, base)?, *switch_time, *reward_before, *reward_after)
        }
        EnvDecl::Random { seed, states } => {
            if *states == 0 {
                return Err(Error::input("random environment needs at least one state"));
            }
            Ok(envs::random_env(iface, *states, &mut rng_for(*seed, 2)))
        }
        EnvDecl::RandomMdp { seed } => Ok(envs::random_mdp(iface, &mut rng_for(*seed, 2))),
        EnvDecl::Tables(t) => env_from_tables(iface, t),
    }
}

fn env_from_tables(iface: &Interface, t: &EnvTables) -> Result<FiniteEnvironment> {
    let (na, no) = (iface.num_actions(), iface.num_observations());
    let n = t.states.len();
    check_keys(t.emission.keys(), &t.states, "emission")?;
    check_keys(t.update.keys(), &t.states, "update")?;
    check_keys(t.reward.keys(), &t.states, "reward")?;
    let mut emission = Vec::with_capacity(n * na);
    for x in &t.states {
        for a in iface.actions() {
            emission.push(match t.emission.get(x).and_then(|row| row.get(a)) {
                Some(d) => dist(iface.observations(), d, "emission")?,
                None => Dist::unchecked(vec![0.0; no]),
            });
        }
    }
    let update = nested_lookup(iface, &t.states, &t.update, n, na, no)?;
    let mut reward = vec![0.0; n * na * no];
    for (x, row) in &t.reward {
        let xi = state_index(&t.states, x);
        for (a, cells) in row {
            let ai = iface.action_index(a)?;
            for (o, &r) in cells {
                reward[(xi * na + ai) * no + iface.observation_index(o)?] = r;
            }
        }
    }
    Ok(FiniteEnvironment::new(t.states.clone(), state_index(&t.states, &t.start), na, no, emission, update, reward))
}

/// Explicit tables for `agent`, the same format scenario files accept.
pub fn agent_tables(iface: &Interface, agent: &BoundedAgent) -> AgentTables {
    let names = agent.state_names();
    let mut policy = BTreeMap::new();
    let mut update = BTreeMap::new();
    for s in 0..agent.num_states() {
        let d: DistDecl = agent
            .policy(s)
            .support()
            .map(|a| (iface.actions()[a].clone(), agent.policy(s).prob(a)))
            .collect();
        policy.insert(names[s].clone(), d);
        let mut row = BTreeMap::new();
        for (a, an) in iface.actions().iter().enumerate() {
            let mut cells = BTreeMap::new();
            for (o, on) in iface.observations().iter().enumerate() {
                if let Some(t) = agent.next_state(s, a, o) {
                    cells.insert(on.clone(), names[t].clone());
                }
            }
            row.insert(an.clone(), cells);
        }
        update.insert(names[s].clone(), row);
    }
    AgentTables { states: names.to_vec(), start: names[agent.start()].clone(), policy, update }
}

/// Replaces every seed stored in the scenario (random builders and the
/// Monte-Carlo check) with `seed`.
pub fn override_seed(scenario: &mut Scenario, seed: u64) {
    if let AgentDecl::Random { seed: s, .. } = &mut scenario.agent {
        *s = seed;
    }
    let mut env = &mut scenario.environment;
    loop {
        match env {
            EnvDecl::Random { seed: s, .. } | EnvDecl::RandomMdp { seed: s } => *s = seed,
            EnvDecl::Clocked { base, .. } => {
                env = base;
                continue;
            }
            _ => {}
        }
        break;
    }
    if let Some(mc) = &mut scenario.analysis.monte_carlo {
        mc.seed = seed;
    }
}
