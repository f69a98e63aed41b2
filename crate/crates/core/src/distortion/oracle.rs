use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::{BoundedAgent, FiniteEnvironment, Interface, PerformanceSpec};
use crate::product::build_product;
use crate::value::exact_value;

/// Brute-force distortion from explicitly enumerated histories.
///
/// Walks every realizable history of length at most `depth` by simulating
/// the agent and environment directly, and maximizes `|v(h) − v(hh')|` over
/// pairs with `|h| ≥ t`, `|h'| ≥ 1` and equal agent state. Node values come
/// from [`exact_value`]. The result is a lower bound on `δ_t` that becomes
/// exact once `depth` reaches a maximizing pair.
pub fn distortion_oracle(
    iface: &Interface,
    agent: &BoundedAgent,
    env: &FiniteEnvironment,
    spec: PerformanceSpec,
    depth: usize,
    t: usize,
    budget: usize,
) -> Result<f64> {
    let g = build_product(iface, agent, env)?;
    let vt = exact_value(&g, spec);
    let values: HashMap<(usize, usize), f64> = g
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, n)| ((n.agent_state, n.env_state), vt.value(i)))
        .collect();
    let mut walk = Walk { agent, env, values: &values, depth, t, budget, visited: 0, best: 0.0, stack: Vec::new() };
    walk.visit(agent.start(), env.start())?;
    Ok(walk.best)
}

struct Walk<'a> {
    agent: &'a BoundedAgent,
    env: &'a FiniteEnvironment,
    values: &'a HashMap<(usize, usize), f64>,
    depth: usize,
    t: usize,
    budget: usize,
    visited: usize,
    best: f64,
    /// `(agent state, value)` along the current history, indexed by length.
    stack: Vec<(usize, f64)>,
}

impl Walk<'_> {
    fn visit(&mut self, s: usize, x: usize) -> Result<()> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(Error::Resource(format!("distortion oracle exceeded {} histories", self.budget)));
        }
        let v = self.values[&(s, x)];
        for (len, &(s0, v0)) in self.stack.iter().enumerate() {
            if len >= self.t && s0 == s {
                self.best = self.best.max((v0 - v).abs());
            }
        }
        if self.stack.len() == self.depth {
            return Ok(());
        }
        self.stack.push((s, v));
        let policy = self.agent.policy(s);
        for a in policy.support() {
            for o in self.env.emission(x, a).support() {
                let s2 = self.agent.next_state(s, a, o).expect("validated");
                let x2 = self.env.next_state(x, a, o).expect("validated");
                self.visit(s2, x2)?;
            }
        }
        self.stack.pop();
        Ok(())
    }
}
