use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BoundedAgent, Dist, Interface};

/// Parameters of a finite-state tabular Q-learner.
///
/// The agent state is the quantized Q-table over `(cell, action)` together
/// with the cell of the latest observation. Rewards are read from
/// `reward_channel[(cell * |A| + a) * |O| + o]`, the reward the agent
/// attributes to playing `a` from `cell` and then observing `o`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QAgentConfig {
    /// Representable Q-values, sorted ascending.
    pub q_grid: Vec<f64>,
    pub alpha: f64,
    pub epsilon: f64,
    /// Aggregate cell of each observation.
    pub aggregation: Vec<usize>,
    pub reward_channel: Vec<f64>,
    /// Initial value of every Q entry; must be a grid point.
    pub q_init: f64,
    pub initial_observation: usize,
    /// Bootstrap discount in the Q target; 0 gives `Q ← (1−α)Q + α r`.
    #[serde(default)]
    pub discount: f64,
    /// Cap on enumerated agent states.
    #[serde(default = "default_max_states")]
    pub max_states: usize,
}

fn default_max_states() -> usize {
    100_000
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct QState {
    q: Vec<usize>,
    cell: usize,
}

/// Enumerates the reachable Q-learner states and returns them as a
/// [`BoundedAgent`].
///
/// Policy: ε-greedy over the current cell's Q-row, greedy ties to the lowest
/// action index. Update on `(a, o)`: the entry for the current cell and `a`
/// moves to the grid point nearest `(1−α)Q + α(r + γ max Q[cell(o)])`, ties
/// toward the larger value; then the current cell becomes `cell(o)`.
pub fn bounded_q_agent(cfg: &QAgentConfig, iface: &Interface) -> Result<BoundedAgent> {
    let (na, no) = (iface.num_actions(), iface.num_observations());
    check_config(cfg, na, no)?;
    let cells = cfg.aggregation.iter().max().map_or(0, |c| c + 1);
    let init = grid_index(&cfg.q_grid, cfg.q_init)
        .ok_or_else(|| Error::input(format!("q_init {} is not a grid point", cfg.q_init)))?;
    let start = QState { q: vec![init; cells * na], cell: cfg.aggregation[cfg.initial_observation] };

    let mut states = vec![start.clone()];
    let mut index = HashMap::from([(start, 0usize)]);
    let mut update: Vec<Option<usize>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let mut row = Vec::with_capacity(na * no);
        for a in 0..na {
            for o in 0..no {
                let next = step(cfg, &states[i], a, o, na)?;
                let len = states.len();
                let id = *index.entry(next.clone()).or_insert(len);
                if id == len {
                    if len >= cfg.max_states {
                        return Err(Error::Resource(format!("Q-agent exceeds {} states", cfg.max_states)));
                    }
                    states.push(next);
                    queue.push_back(id);
                }
                row.push(Some(id));
            }
        }
        if update.len() < (i + 1) * na * no {
            update.resize((i + 1) * na * no, None);
        }
        update[i * na * no..(i + 1) * na * no].copy_from_slice(&row);
    }
    update.resize(states.len() * na * no, None);

    let names = states.iter().map(|s| state_name(cfg, s, na)).collect();
    let policy = states.iter().map(|s| epsilon_greedy(cfg, s, na)).collect();
    Ok(BoundedAgent::new(names, 0, na, no, policy, update))
}

fn check_config(cfg: &QAgentConfig, na: usize, no: usize) -> Result<()> {
    if cfg.q_grid.is_empty() || cfg.q_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::input("q_grid must be non-empty and strictly increasing"));
    }
    if !(cfg.alpha > 0.0 && cfg.alpha <= 1.0) {
        return Err(Error::input(format!("alpha {} outside (0, 1]", cfg.alpha)));
    }
    if !(cfg.epsilon > 0.0 && cfg.epsilon <= 1.0) {
        return Err(Error::input(format!("epsilon {} outside (0, 1]", cfg.epsilon)));
    }
    if !(0.0..1.0).contains(&cfg.discount) {
        return Err(Error::input(format!("discount {} outside [0, 1)", cfg.discount)));
    }
    if cfg.aggregation.len() != no {
        return Err(Error::input(format!("aggregation needs {no} entries")));
    }
    let cells = cfg.aggregation.iter().max().map_or(0, |c| c + 1);
    if cfg.reward_channel.len() != cells * na * no {
        return Err(Error::input(format!("reward channel needs {} entries", cells * na * no)));
    }
    if cfg.initial_observation >= no {
        return Err(Error::input("initial observation out of range"));
    }
    Ok(())
}

fn grid_index(grid: &[f64], v: f64) -> Option<usize> {
    grid.iter().position(|&g| g == v)
}

/// Nearest grid point, ties toward the larger value.
fn quantize(grid: &[f64], v: f64) -> usize {
    let mut best = 0;
    for (i, &g) in grid.iter().enumerate() {
        if (g - v).abs() <= (grid[best] - v).abs() {
            best = i;
        }
    }
    best
}

fn step(cfg: &QAgentConfig, s: &QState, a: usize, o: usize, na: usize) -> Result<QState> {
    let grid = &cfg.q_grid;
    let no = cfg.aggregation.len();
    let r = cfg.reward_channel[(s.cell * na + a) * no + o];
    let next_cell = cfg.aggregation[o];
    let bootstrap = if cfg.discount > 0.0 {
        (0..na).map(|b| grid[s.q[next_cell * na + b]]).fold(f64::NEG_INFINITY, f64::max)
    } else {
        0.0
    };
    let slot = s.cell * na + a;
    let target = (1.0 - cfg.alpha) * grid[s.q[slot]] + cfg.alpha * (r + cfg.discount * bootstrap);
    let (lo, hi) = (grid[0], grid[grid.len() - 1]);
    if target < lo - 1e-12 || target > hi + 1e-12 {
        return Err(Error::input(format!(
            "Q update escapes the grid: action {a}, observation {o} targets {target} outside [{lo}, {hi}]"
        )));
    }
    let mut q = s.q.clone();
    q[slot] = quantize(grid, target);
    Ok(QState { q, cell: next_cell })
}

fn epsilon_greedy(cfg: &QAgentConfig, s: &QState, na: usize) -> Dist {
    let row = &s.q[s.cell * na..(s.cell + 1) * na];
    let greedy = (0..na).fold(0, |best, a| if row[a] > row[best] { a } else { best });
    Dist::unchecked(
        (0..na)
            .map(|a| cfg.epsilon / na as f64 + if a == greedy { 1.0 - cfg.epsilon } else { 0.0 })
            .collect(),
    )
}

fn state_name(cfg: &QAgentConfig, s: &QState, na: usize) -> String {
    let rows: Vec<String> = s
        .q
        .chunks(na)
        .map(|r| r.iter().map(|&i| cfg.q_grid[i].to_string()).collect::<Vec<_>>().join(","))
        .collect();
    format!("Q[{}]@c{}", rows.join("|"), s.cell)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantize_ties_go_up() {
        let grid = [-1.0, 0.0, 1.0];
        assert_eq!(quantize(&grid, 0.5), 2);
        assert_eq!(quantize(&grid, -0.5), 1);
        assert_eq!(quantize(&grid, 0.2), 1);
    }

    #[test]
    fn escaping_grid_is_rejected() {
        let iface = Interface::new(["a"], ["o"]).unwrap();
        let cfg = QAgentConfig {
            q_grid: vec![0.0, 1.0],
            alpha: 1.0,
            epsilon: 0.5,
            aggregation: vec![0],
            reward_channel: vec![2.0],
            q_init: 0.0,
            initial_observation: 0,
            discount: 0.0,
            max_states: 100,
        };
        let err = bounded_q_agent(&cfg, &iface).unwrap_err();
        assert!(err.to_string().contains("escapes the grid"));
    }
}
