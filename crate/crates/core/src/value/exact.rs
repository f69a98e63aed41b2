use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::model::PerformanceSpec;
use crate::product::{ProductGraph, ProductNode};
use crate::value::linalg;
use crate::value::scc::recurrent_classes;

/// Above this many nodes the discounted system is solved iteratively.
pub const DIRECT_SOLVE_LIMIT: usize = 2000;

/// Target Bellman residual for discounted solutions.
pub const BELLMAN_TOL: f64 = 1e-12;

/// Performance of every product node under one [`PerformanceSpec`].
///
/// Values count rewards of transitions strictly after the history that ends
/// at the node.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValueTable {
    pub values: Vec<f64>,
    pub spec: PerformanceSpec,
    pub v_min: f64,
    pub v_max: f64,
    nodes: Vec<ProductNode>,
}

impl ValueTable {
    pub fn value(&self, id: usize) -> f64 {
        self.values[id]
    }

    /// Value at the node with the given `(agent state, env state)`, if reachable.
    pub fn value_at(&self, node: ProductNode) -> Option<f64> {
        self.nodes.iter().position(|n| *n == node).map(|i| self.values[i])
    }

    /// CSV with columns `node,agent_state,env_state,value`.
    pub fn to_csv(&self, g: &ProductGraph) -> String {
        let mut out = String::from("node,agent_state,env_state,value\n");
        for (id, n) in self.nodes.iter().enumerate() {
            let _ = writeln!(
                out,
                "{id},{},{},{}",
                g.agent_state_name(n.agent_state),
                g.env_state_name(n.env_state),
                self.values[id]
            );
        }
        out
    }
}

/// Exact performance of every node of `g`.
///
/// * myopic: expected reward of the next transition;
/// * discounted: the unique fixed point of `v = r̄ + γ P v`;
/// * average: absorption-weighted gains of the recurrent classes.
pub fn exact_value(g: &ProductGraph, spec: PerformanceSpec) -> ValueTable {
    let rbar: Vec<f64> = (0..g.len()).map(|q| g.expected_reward(q)).collect();
    let values = match spec {
        PerformanceSpec::Myopic => rbar,
        PerformanceSpec::Discounted { gamma } => discounted(g, &rbar, gamma),
        PerformanceSpec::Average => average(g, &rbar),
    };
    let (r_min, r_max) = reward_bounds(g);
    let (v_min, v_max) = spec.value_bounds(r_min, r_max);
    ValueTable { values, spec, v_min, v_max, nodes: g.nodes().to_vec() }
}

/// Reward bounds over realizable transitions of `g`.
pub fn reward_bounds(g: &ProductGraph) -> (f64, f64) {
    (0..g.len())
        .flat_map(|q| g.edges(q).iter().map(|e| e.reward))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r), hi.max(r)))
}

/// Largest `|v(q) − r̄(q) − γ Σ p v(q')|` over nodes.
pub fn bellman_residual(g: &ProductGraph, values: &[f64], gamma: f64) -> f64 {
    (0..g.len())
        .map(|q| {
            let backup: f64 = g.edges(q).iter().map(|e| e.prob * (e.reward + gamma * values[e.target])).sum();
            (values[q] - backup).abs()
        })
        .fold(0.0, f64::max)
}

fn discounted(g: &ProductGraph, rbar: &[f64], gamma: f64) -> Vec<f64> {
    let n = g.len();
    if gamma == 0.0 {
        return rbar.to_vec();
    }
    if n <= DIRECT_SOLVE_LIMIT {
        let mut a = vec![0.0; n * n];
        for q in 0..n {
            a[q * n + q] += 1.0;
            for e in g.edges(q) {
                a[q * n + e.target] -= gamma * e.prob;
            }
        }
        if let Some(v) = linalg::solve(&a, rbar, 2) {
            if bellman_residual(g, &v, gamma) <= BELLMAN_TOL {
                return v;
            }
            return gauss_seidel(g, rbar, gamma, v);
        }
    }
    gauss_seidel(g, rbar, gamma, rbar.to_vec())
}

fn gauss_seidel(g: &ProductGraph, rbar: &[f64], gamma: f64, mut v: Vec<f64>) -> Vec<f64> {
    let n = g.len();
    // Contraction in sup norm guarantees convergence; the cap only guards
    // against a residual floor set by rounding.
    for _ in 0..1_000_000 {
        let mut change: f64 = 0.0;
        for q in 0..n {
            let mut self_p = 0.0;
            let mut acc = rbar[q];
            for e in g.edges(q) {
                if e.target == q {
                    self_p += e.prob;
                } else {
                    acc += gamma * e.prob * v[e.target];
                }
            }
            let new = acc / (1.0 - gamma * self_p);
            change = change.max((new - v[q]).abs());
            v[q] = new;
        }
        if change == 0.0 || bellman_residual(g, &v, gamma) <= BELLMAN_TOL {
            break;
        }
    }
    v
}

fn average(g: &ProductGraph, rbar: &[f64]) -> Vec<f64> {
    let n = g.len();
    let mut values = vec![0.0; n];
    let mut recurrent = vec![false; n];
    for class in recurrent_classes(g) {
        let gain = class_gain(g, rbar, &class);
        for &q in &class {
            values[q] = gain;
            recurrent[q] = true;
        }
    }
    let transient: Vec<usize> = (0..n).filter(|&q| !recurrent[q]).collect();
    if transient.is_empty() {
        return values;
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &q) in transient.iter().enumerate() {
        pos[q] = i;
    }
    // (I − P_TT) v_T = P_TR g_R
    let m = transient.len();
    let mut a = vec![0.0; m * m];
    let mut b = vec![0.0; m];
    for (i, &q) in transient.iter().enumerate() {
        a[i * m + i] += 1.0;
        for e in g.edges(q) {
            if recurrent[e.target] {
                b[i] += e.prob * values[e.target];
            } else {
                a[i * m + pos[e.target]] -= e.prob;
            }
        }
    }
    let v = linalg::solve(&a, &b, 2).expect("transient block of a finite chain is nonsingular");
    for (i, &q) in transient.iter().enumerate() {
        values[q] = v[i];
    }
    values
}

/// Long-run average reward of a closed class from its stationary distribution.
fn class_gain(g: &ProductGraph, rbar: &[f64], class: &[usize]) -> f64 {
    let k = class.len();
    if k == 1 {
        return rbar[class[0]];
    }
    let pos = |q: usize| class.iter().position(|&c| c == q).expect("closed class");
    // Rows 0..k-1 of (Pᵀ − I) π = 0, last row replaced by Σ π = 1.
    let mut a = vec![0.0; k * k];
    for (j, &q) in class.iter().enumerate() {
        a[j * k + j] -= 1.0;
        for e in g.edges(q) {
            a[pos(e.target) * k + j] += e.prob;
        }
    }
    for j in 0..k {
        a[(k - 1) * k + j] = 1.0;
    }
    let mut b = vec![0.0; k];
    b[k - 1] = 1.0;
    let pi = linalg::solve(&a, &b, 2).expect("irreducible class has a unique stationary distribution");
    class.iter().zip(&pi).map(|(&q, p)| p * rbar[q]).sum()
}
