//! Builders for the canonical environments.

use rand::Rng;

use crate::agents::random_dist;
use crate::error::{Error, Result};
use crate::model::{Dist, FiniteEnvironment, Interface};

/// A bandit: one hidden state, one observation, reward by arm.
pub fn bandit_env(iface: &Interface, rewards: &[f64]) -> Result<FiniteEnvironment> {
    if iface.num_observations() != 1 {
        return Err(Error::input("a bandit has exactly one observation"));
    }
    if rewards.len() != iface.num_actions() {
        return Err(Error::input(format!("bandit needs {} arm rewards", iface.num_actions())));
    }
    Ok(FiniteEnvironment::from_fn(vec!["x0".into()], 0, iface, |_, _| Dist::point(1, 0), |_, _, _| 0, |_, a, _| rewards[a]))
}

/// A fully observable MDP: the observation is the next state.
///
/// `transitions[x][a]` is a distribution over next states and `reward(x, a,
/// x')` is paid on that transition. State names are the observation names.
pub fn mdp_env(
    iface: &Interface,
    start: usize,
    transitions: &[Vec<Dist>],
    reward: impl FnMut(usize, usize, usize) -> f64,
) -> Result<FiniteEnvironment> {
    let n = iface.num_observations();
    if transitions.len() != n || transitions.iter().any(|row| row.len() != iface.num_actions()) {
        return Err(Error::input(format!("MDP transitions must be {n} x {}", iface.num_actions())));
    }
    Ok(FiniteEnvironment::from_fn(
        iface.observations().to_vec(),
        start,
        iface,
        |x, a| transitions[x][a].clone(),
        |_, _, o| o,
        reward,
    ))
}

/// The two-state MDP in which a non-Markov Q-learner keeps positive
/// distortion. Actions `move`, `stay`; observations (= states) `o1`, `o2`;
/// `move` switches state, `stay` keeps it; reward −1 on leaving `o1`, +1 on
/// leaving `o2`. Starts in `o1`.
pub fn prop45_env() -> (Interface, FiniteEnvironment) {
    let iface = Interface::new(["move", "stay"], ["o1", "o2"]).expect("static interface");
    let transitions: Vec<Vec<Dist>> =
        (0..2).map(|x| vec![Dist::point(2, 1 - x), Dist::point(2, x)]).collect();
    let env = mdp_env(&iface, 0, &transitions, |x, _, _| if x == 0 { -1.0 } else { 1.0 }).expect("static MDP");
    (iface, env)
}

/// Reward the agent can attribute to each `(a, o)` input without seeing the
/// hidden state: defined when every state that can emit `o` under `a` pays
/// the same reward for it. Entries no state can produce are 0.
pub fn observable_reward_channel(iface: &Interface, env: &FiniteEnvironment) -> Result<Vec<f64>> {
    let (na, no) = (iface.num_actions(), iface.num_observations());
    let mut channel = vec![None; na * no];
    for x in 0..env.num_states() {
        for a in 0..na {
            for o in env.emission(x, a).support() {
                let r = env.reward(x, a, o);
                match channel[a * no + o] {
                    None => channel[a * no + o] = Some(r),
                    Some(prev) if prev != r => {
                        return Err(Error::input(format!(
                            "reward of ({}, {}) depends on the hidden state",
                            iface.actions()[a],
                            iface.observations()[o]
                        )))
                    }
                    Some(_) => {}
                }
            }
        }
    }
    Ok(channel.into_iter().map(|r| r.unwrap_or(0.0)).collect())
}

/// Reward a learner with aggregated memory attributes to each
/// `(cell, a, o)`, indexed `(cell * |A| + a) * |O| + o`. The learner only
/// remembers the cell of its previous observation, so it charges every
/// transition from `cell` as if it had left the cell's first observation.
/// Requires the environment states to be the observations, as in
/// [`mdp_env`].
pub fn recalled_reward_channel(
    iface: &Interface,
    env: &FiniteEnvironment,
    aggregation: &[usize],
) -> Result<Vec<f64>> {
    let (na, no) = (iface.num_actions(), iface.num_observations());
    if env.num_states() != no || aggregation.len() != no {
        return Err(Error::input("a recalled reward channel needs one environment state per observation"));
    }
    let cells = aggregation.iter().max().map_or(0, |c| c + 1);
    let mut channel = Vec::with_capacity(cells * na * no);
    for cell in 0..cells {
        let rep = aggregation
            .iter()
            .position(|&c| c == cell)
            .ok_or_else(|| Error::input(format!("aggregation leaves cell {cell} empty")))?;
        for a in 0..na {
            channel.extend((0..no).map(|o| env.reward(rep, a, o)));
        }
    }
    Ok(channel)
}

/// `base` with a hidden saturating clock `0 ..= switch_time`. Transitions
/// leaving a clock value below `switch_time` pay `reward_before`; once the
/// clock has saturated they pay `reward_after`. Observations are unchanged.
pub fn clocked_env(
    base: &FiniteEnvironment,
    switch_time: usize,
    reward_before: f64,
    reward_after: f64,
) -> Result<FiniteEnvironment> {
    if switch_time == 0 {
        return Err(Error::input("switch_time must be at least 1"));
    }
    let clocks = switch_time + 1;
    let (na, no) = (base.num_actions(), base.num_observations());
    let names = (0..base.num_states())
        .flat_map(|x| (0..clocks).map(move |k| (x, k)))
        .map(|(x, k)| format!("{}@{k}", base.state_name(x)))
        .collect();
    let mut emission = Vec::new();
    let mut update = Vec::new();
    let mut reward = Vec::new();
    for x in 0..base.num_states() {
        for k in 0..clocks {
            for a in 0..na {
                emission.push(base.emission(x, a).clone());
                for o in 0..no {
                    update.push(base.next_state(x, a, o).map(|x2| x2 * clocks + (k + 1).min(switch_time)));
                    reward.push(if k >= switch_time { reward_after } else { reward_before });
                }
            }
        }
    }
    Ok(FiniteEnvironment::new(names, base.start() * clocks, na, no, emission, update, reward))
}

/// Rewards drawn for random fixtures.
const REWARD_LEVELS: [f64; 5] = [-1.0, -0.5, 0.0, 0.5, 1.0];

/// A random environment with `states` hidden states over `iface`.
pub fn random_env<R: Rng>(iface: &Interface, states: usize, rng: &mut R) -> FiniteEnvironment {
    let (na, no) = (iface.num_actions(), iface.num_observations());
    let emission: Vec<Dist> = (0..states * na).map(|_| random_dist(no, rng)).collect();
    let update: Vec<Option<usize>> = (0..states * na * no).map(|_| Some(rng.gen_range(0..states))).collect();
    let reward: Vec<f64> = (0..states * na * no).map(|_| REWARD_LEVELS[rng.gen_range(0..5)]).collect();
    FiniteEnvironment::new((0..states).map(|x| format!("x{x}")).collect(), 0, na, no, emission, update, reward)
}

/// A random fully observable MDP over `iface` (one state per observation).
pub fn random_mdp<R: Rng>(iface: &Interface, rng: &mut R) -> FiniteEnvironment {
    let n = iface.num_observations();
    let transitions: Vec<Vec<Dist>> =
        (0..n).map(|_| (0..iface.num_actions()).map(|_| random_dist(n, rng)).collect()).collect();
    let rewards: Vec<f64> = (0..n * iface.num_actions() * n).map(|_| REWARD_LEVELS[rng.gen_range(0..5)]).collect();
    let na = iface.num_actions();
    mdp_env(iface, 0, &transitions, |x, a, o| rewards[(x * na + a) * n + o]).expect("shapes match")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_env;

    #[test]
    fn bandit_has_one_state() {
        let iface = Interface::new(["a1", "a2"], ["o"]).unwrap();
        let env = bandit_env(&iface, &[0.0, 1.0]).unwrap();
        assert_eq!(env.num_states(), 1);
        assert_eq!(env.reward(0, 1, 0), 1.0);
        assert!(validate_env(&env, &iface).is_ok());
        assert!(bandit_env(&Interface::new(["a"], ["o1", "o2"]).unwrap(), &[0.0]).is_err());
    }

    #[test]
    fn prop45_rewards_follow_the_origin_state() {
        let (iface, env) = prop45_env();
        assert!(validate_env(&env, &iface).is_ok());
        for a in 0..2 {
            for o in 0..2 {
                assert_eq!(env.reward(0, a, o), -1.0);
                assert_eq!(env.reward(1, a, o), 1.0);
            }
        }
        // move flips the state, stay keeps it
        assert_eq!(env.emission(0, 0), &Dist::point(2, 1));
        assert_eq!(env.emission(1, 1), &Dist::point(2, 1));
        let channel = observable_reward_channel(&iface, &env).unwrap();
        // (move, o1) came from o2; (move, o2) from o1; stay keeps the state.
        assert_eq!(channel, vec![1.0, -1.0, -1.0, 1.0]);
        // one cell: every transition is charged as leaving o1
        assert_eq!(recalled_reward_channel(&iface, &env, &[0, 0]).unwrap(), vec![-1.0; 4]);
        assert_eq!(recalled_reward_channel(&iface, &env, &[0, 1]).unwrap(), [[-1.0; 4], [1.0; 4]].concat());
    }

    #[test]
    fn clock_saturates() {
        let iface = Interface::new(["a"], ["o"]).unwrap();
        let base = bandit_env(&iface, &[0.0]).unwrap();
        let env = clocked_env(&base, 10, 0.0, 1.0).unwrap();
        assert_eq!(env.num_states(), 11);
        assert!(validate_env(&env, &iface).is_ok());
        assert_eq!(env.next_state(10, 0, 0), Some(10));
        assert_eq!(env.next_state(3, 0, 0), Some(4));
        assert_eq!(env.reward(9, 0, 0), 0.0);
        assert_eq!(env.reward(10, 0, 0), 1.0);
        assert_eq!(env.num_observations(), base.num_observations());
    }

    #[test]
    fn one_state_mdp_is_a_bandit() {
        let iface = Interface::new(["a1", "a2"], ["o"]).unwrap();
        let mdp = mdp_env(&iface, 0, &[vec![Dist::point(1, 0), Dist::point(1, 0)]], |_, a, _| a as f64).unwrap();
        assert_eq!(mdp.emission(0, 1), bandit_env(&iface, &[0.0, 1.0]).unwrap().emission(0, 1));
        assert_eq!(mdp.reward(0, 1, 0), 1.0);
    }
}
