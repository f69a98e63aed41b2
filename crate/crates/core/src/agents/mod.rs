//! Builders for the canonical agents used throughout the analysis.

mod qlearning;

pub use qlearning::{bounded_q_agent, QAgentConfig};

use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{BoundedAgent, Dist, Interface, DEFAULT_DIST_TOL};

/// One state playing `dist` forever.
pub fn constant_agent(iface: &Interface, dist: Dist) -> BoundedAgent {
    BoundedAgent::from_fn(vec!["s0".into()], 0, iface, vec![dist], |_, _, _| 0)
}

/// Agent whose state is the last observation: `S = O`, `u(s, a, o) = o`.
pub fn memoryless_agent(iface: &Interface, policy: Vec<Dist>, initial_observation: usize) -> Result<BoundedAgent> {
    if policy.len() != iface.num_observations() {
        return Err(Error::input(format!(
            "memoryless policy needs {} rows, got {}",
            iface.num_observations(),
            policy.len()
        )));
    }
    if initial_observation >= iface.num_observations() {
        return Err(Error::input("initial observation out of range"));
    }
    Ok(BoundedAgent::from_fn(iface.observations().to_vec(), initial_observation, iface, policy, |_, _, o| o))
}

/// Agent remembering the last `k` observations, oldest first, with the
/// window initially filled by `pad`. `|λ| = |O|^k`; `policy` receives the
/// window.
pub fn korder_agent(
    iface: &Interface,
    k: usize,
    mut policy: impl FnMut(&[usize]) -> Dist,
    pad: usize,
) -> Result<BoundedAgent> {
    let no = iface.num_observations();
    if k == 0 {
        return Err(Error::input("k-th order agent needs k >= 1"));
    }
    if pad >= no {
        return Err(Error::input("pad observation out of range"));
    }
    let count = no
        .checked_pow(k as u32)
        .filter(|&c| c <= 1 << 20)
        .ok_or_else(|| Error::input(format!("|O|^k = {no}^{k} states is too many")))?;
    let window = |mut idx: usize| {
        let mut w = vec![0; k];
        for slot in w.iter_mut().rev() {
            *slot = idx % no;
            idx /= no;
        }
        w
    };
    let names = (0..count)
        .map(|i| window(i).iter().map(|&o| iface.observations()[o].as_str()).collect::<Vec<_>>().join(","))
        .collect();
    let dists = (0..count).map(|i| policy(&window(i))).collect();
    let start = (0..k).fold(0, |acc, _| acc * no + pad);
    Ok(BoundedAgent::from_fn(names, start, iface, dists, |s, _, o| (s * no + o) % count))
}

/// Counter agent: states `0 ..= n_switch`, even counters play `dist_a`, odd
/// ones `dist_b`, and the saturated counter plays `dist_final` forever.
pub fn switching_agent(
    iface: &Interface,
    n_switch: usize,
    dist_a: Dist,
    dist_b: Dist,
    dist_final: Dist,
) -> Result<BoundedAgent> {
    if dist_a.canonical(DEFAULT_DIST_TOL).same_as(&dist_b.canonical(DEFAULT_DIST_TOL)) {
        return Err(Error::input("switching agent needs two distinct distributions"));
    }
    let names = (0..=n_switch).map(|c| format!("c{c}")).collect();
    let policy = (0..=n_switch)
        .map(|c| match c {
            c if c == n_switch => dist_final.clone(),
            c if c % 2 == 0 => dist_a.clone(),
            _ => dist_b.clone(),
        })
        .collect();
    Ok(BoundedAgent::from_fn(names, 0, iface, policy, |s, _, _| (s + 1).min(n_switch)))
}

/// A random distribution over `n` symbols with random non-empty support.
///
/// Weights are small integers so that ties and equalities in downstream
/// values are exact.
pub fn random_dist<R: Rng>(n: usize, rng: &mut R) -> Dist {
    loop {
        let w: Vec<u32> = (0..n).map(|_| if rng.gen_bool(0.6) { rng.gen_range(1..=4) } else { 0 }).collect();
        let total: u32 = w.iter().sum();
        if total > 0 {
            return Dist::unchecked(w.iter().map(|&x| x as f64 / total as f64).collect());
        }
    }
}

/// A random agent with `states` states over `iface`.
pub fn random_agent<R: Rng>(iface: &Interface, states: usize, rng: &mut R) -> BoundedAgent {
    let policy = (0..states).map(|_| random_dist(iface.num_actions(), rng)).collect();
    BoundedAgent::from_fn((0..states).map(|s| format!("s{s}")).collect(), 0, iface, policy, |_, _, _| {
        rng.gen_range(0..states)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{check_last_obs_condition, validate_agent, History};

    fn iface() -> Interface {
        Interface::new(["a1", "a2"], ["o1", "o2"]).unwrap()
    }

    #[test]
    fn builders_validate() {
        let iface = iface();
        let agents = [
            constant_agent(&iface, Dist::uniform(2)),
            memoryless_agent(&iface, vec![Dist::point(2, 0), Dist::point(2, 1)], 0).unwrap(),
            korder_agent(&iface, 2, |w| Dist::point(2, w[1]), 0).unwrap(),
            switching_agent(&iface, 4, Dist::point(2, 0), Dist::point(2, 1), Dist::point(2, 0)).unwrap(),
        ];
        for a in &agents {
            assert!(validate_agent(a, &iface).is_ok(), "{a:?}");
        }
    }

    #[test]
    fn korder_window_slides() {
        let iface = iface();
        let agent = korder_agent(&iface, 2, |_| Dist::point(2, 0), 1).unwrap();
        assert_eq!(agent.num_states(), 4);
        assert_eq!(agent.state_name(agent.start()), "o2,o2");
        let h = History::from_symbols(&iface, &[("a1", "o1")]).unwrap();
        assert_eq!(agent.state_name(agent.run_update(&h).unwrap()), "o2,o1");
        let h = h.extended(0, 0);
        assert_eq!(agent.state_name(agent.run_update(&h).unwrap()), "o1,o1");
    }

    #[test]
    fn switching_counts_and_saturates() {
        let iface = Interface::new(["a1", "a2"], ["o"]).unwrap();
        let agent = switching_agent(&iface, 10, Dist::point(2, 0), Dist::point(2, 1), Dist::point(2, 0)).unwrap();
        let h = History::from_indices(vec![(0, 0), (1, 0), (0, 0)]);
        assert_eq!(agent.state_name(agent.run_update(&h).unwrap()), "c3");
        assert_eq!(agent.policy(3), &Dist::point(2, 1));
        let long = History::from_indices(vec![(0, 0); 25]);
        assert_eq!(agent.run_update(&long).unwrap(), 10);
        let degenerate = switching_agent(&iface, 0, Dist::point(2, 0), Dist::point(2, 1), Dist::point(2, 1)).unwrap();
        assert_eq!(degenerate.num_states(), 1);
        assert!(switching_agent(&iface, 3, Dist::point(2, 0), Dist::point(2, 0), Dist::point(2, 0)).is_err());
    }

    #[test]
    fn constant_agent_fails_last_obs_condition() {
        let iface = iface();
        assert!(!check_last_obs_condition(&constant_agent(&iface, Dist::uniform(2))).0);
        let m = memoryless_agent(&iface, vec![Dist::uniform(2), Dist::point(2, 1)], 1).unwrap();
        assert!(check_last_obs_condition(&m).0);
    }
}
