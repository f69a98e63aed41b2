use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BoundedAgent, Dist, FiniteEnvironment, PerformanceSpec};
use crate::product::ProductNode;

/// Two-sided 99% standard normal quantile.
const Z_99: f64 = 2.575_829_303_548_900_4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    /// Half-width of the normal-approximation 99% confidence interval.
    pub half_width: f64,
}

/// Monte-Carlo estimate of the performance at `start` from `rollouts`
/// independent rollouts truncated at `horizon` steps.
///
/// Rollout `i` draws from the ChaCha stream `i` of `seed`, so results are
/// bit-identical for a fixed seed regardless of how rollouts are scheduled.
/// Average-reward performance is rejected: truncation bias is unbounded.
pub fn mc_estimate_value(
    agent: &BoundedAgent,
    env: &FiniteEnvironment,
    start: ProductNode,
    spec: PerformanceSpec,
    rollouts: usize,
    horizon: usize,
    seed: u64,
) -> Result<McEstimate> {
    let gamma = spec
        .discount()
        .ok_or_else(|| Error::Unsupported("Monte-Carlo estimation of average reward".into()))?;
    if rollouts < 2 {
        return Err(Error::input("at least two rollouts are needed for a confidence interval"));
    }
    let returns: Vec<f64> = (0..rollouts)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            rollout(agent, env, start, gamma, horizon, &mut rng)
        })
        .collect();
    let n = rollouts as f64;
    let mean = returns.iter().sum::<f64>() / n;
    let var = returns.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(McEstimate { estimate: mean, half_width: Z_99 * (var / n).sqrt() })
}

fn rollout(
    agent: &BoundedAgent,
    env: &FiniteEnvironment,
    start: ProductNode,
    gamma: f64,
    horizon: usize,
    rng: &mut ChaCha8Rng,
) -> f64 {
    let (mut s, mut x) = (start.agent_state, start.env_state);
    let mut total = 0.0;
    let mut weight = 1.0;
    for _ in 0..horizon {
        let a = sample(agent.policy(s), rng);
        let o = sample(env.emission(x, a), rng);
        total += weight * env.reward(x, a, o);
        s = agent.next_state(s, a, o).expect("validated agent");
        x = env.next_state(x, a, o).expect("validated environment");
        weight *= gamma;
        if weight == 0.0 {
            break;
        }
    }
    total
}

fn sample(d: &Dist, rng: &mut ChaCha8Rng) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut last = 0;
    for i in d.support() {
        acc += d.prob(i);
        last = i;
        if u < acc {
            return i;
        }
    }
    last
}
