mod common;

use agent_convergence::distortion::{distortion_oracle, witness_depth};
use agent_convergence::prelude::*;
use agent_convergence::product::enumerate_histories;
use agent_convergence::size::{heuristic_size, size_oracle};
use agent_convergence::value::bellman_residual;
use common::{random_pair, rng};

/// Expected discounted reward truncated after `k` steps, by backward
/// recursion over the agent and environment tables.
fn truncated_value(agent: &BoundedAgent, env: &FiniteEnvironment, gamma: f64, k: usize) -> Vec<Vec<f64>> {
    let (ns, nx) = (agent.num_states(), env.num_states());
    let mut v = vec![vec![0.0; nx]; ns];
    for _ in 0..k {
        let mut next = vec![vec![0.0; nx]; ns];
        for s in 0..ns {
            for x in 0..nx {
                let mut total = 0.0;
                for (a, &pa) in agent.policy(s).probs().iter().enumerate() {
                    for (o, &po) in env.emission(x, a).probs().iter().enumerate() {
                        if pa * po == 0.0 {
                            continue;
                        }
                        let (s2, x2) = (agent.next_state(s, a, o).unwrap(), env.next_state(x, a, o).unwrap());
                        total += pa * po * (env.reward(x, a, o) + gamma * v[s2][x2]);
                    }
                }
                next[s][x] = total;
            }
        }
        v = next;
    }
    v
}

#[test]
fn discounted_values_match_truncated_series() {
    for seed in 0..40 {
        let (iface, agent, env) = random_pair(seed, 4, 3);
        let g = build_product(&iface, &agent, &env).unwrap();
        let gamma = 0.9;
        let vt = exact_value(&g, PerformanceSpec::Discounted { gamma });
        let k = 400;
        let oracle = truncated_value(&agent, &env, gamma, k);
        let tail = gamma.powi(k as i32) / (1.0 - gamma);
        for (id, n) in g.nodes().iter().enumerate() {
            let o = oracle[n.agent_state][n.env_state];
            assert!((vt.value(id) - o).abs() <= tail + 1e-9, "seed {seed} node {id}: {} vs {o}", vt.value(id));
        }
        assert!(bellman_residual(&g, &vt.values, gamma) <= 1e-12);
    }
}

#[test]
fn myopic_value_is_one_step_series() {
    for seed in 0..20 {
        let (iface, agent, env) = random_pair(seed, 4, 3);
        let g = build_product(&iface, &agent, &env).unwrap();
        let vt = exact_value(&g, PerformanceSpec::Myopic);
        let oracle = truncated_value(&agent, &env, 0.0, 1);
        for (id, n) in g.nodes().iter().enumerate() {
            assert!((vt.value(id) - oracle[n.agent_state][n.env_state]).abs() <= 1e-12);
        }
    }
}

#[test]
fn average_value_matches_cesaro_mean() {
    for seed in 0..15 {
        let (iface, agent, env) = random_pair(100 + seed, 3, 2);
        let g = build_product(&iface, &agent, &env).unwrap();
        let vt = exact_value(&g, PerformanceSpec::Average);
        // (1/N) Σ_{k<N} P^k r̄, accumulated directly on the tables.
        let n = 4000;
        let one = truncated_value(&agent, &env, 1.0, 1);
        let mut dist: Vec<Vec<f64>> = g.nodes().iter().map(|_| vec![0.0; g.len()]).collect();
        for (i, d) in dist.iter_mut().enumerate() {
            d[i] = 1.0;
        }
        let mut sums = vec![0.0; g.len()];
        for _ in 0..n {
            for (i, d) in dist.iter_mut().enumerate() {
                sums[i] += d.iter().enumerate().map(|(j, p)| p * one[g.node(j).agent_state][g.node(j).env_state]).sum::<f64>();
                let mut next = vec![0.0; d.len()];
                for (j, &p) in d.iter().enumerate() {
                    for e in g.edges(j) {
                        next[e.target] += p * e.prob;
                    }
                }
                *d = next;
            }
        }
        for i in 0..g.len() {
            let cesaro = sums[i] / n as f64;
            assert!((vt.value(i) - cesaro).abs() <= 5e-3, "seed {seed} node {i}: {} vs {cesaro}", vt.value(i));
        }
    }
}

#[test]
fn histories_factor_through_product_nodes() {
    for seed in 0..30 {
        let (iface, agent, env) = random_pair(seed, 3, 2);
        let g = build_product(&iface, &agent, &env).unwrap();
        let depth = 8.min(if g.num_edges() > 2 * g.len() { 5 } else { 8 });
        for (h, id) in enumerate_histories(&g, depth, 1_000_000).unwrap() {
            let node = g.node(id);
            assert_eq!(agent.run_update(&h).unwrap(), node.agent_state);
            assert_eq!(env.run_update(h.steps()), Some(node.env_state));
        }
    }
}

#[test]
fn distortion_agrees_with_history_enumeration() {
    let mut compared = 0;
    for seed in 0..60 {
        let (iface, agent, env) = random_pair(seed, 2, 2);
        let g = build_product(&iface, &agent, &env).unwrap();
        let spec = PerformanceSpec::Discounted { gamma: 0.5 };
        let vt = exact_value(&g, spec);
        let ls = layer_sequence(&g, None).unwrap();
        for t in 0..=ls.horizon() {
            let engine = distortion_at(&g, &vt, &reachable_from_time(&ls, t)).unwrap();
            let depth = 8;
            let oracle = distortion_oracle(&iface, &agent, &env, spec, depth, t, 5_000_000).unwrap();
            assert!(oracle <= engine + 1e-9, "seed {seed} t {t}");
            if witness_depth(&g, &vt, &ls, t) <= depth {
                assert!((oracle - engine).abs() <= 1e-9, "seed {seed} t {t}: {engine} vs {oracle}");
                compared += 1;
            }
        }
    }
    assert!(compared > 50);
}

#[test]
fn minimal_sizes_agree_with_exhaustive_search() {
    let mut compared = 0;
    for seed in 0..40 {
        let (iface, agent, env) = random_pair(seed, 3, 2);
        let g = build_product(&iface, &agent, &env).unwrap();
        for q in 0..g.len() {
            let m = future_machine(&g, q, 1e-12);
            let cover = min_closed_cover(&m, Default::default());
            assert!(cover.exact);
            assert!(cover.witness.reproduces(&m));
            assert!(cover.lower <= cover.upper && cover.upper <= heuristic_size(&m));
            if let Ok(o) = size_oracle(&m, 3, 5_000_000) {
                assert_eq!(cover.upper.min(4), o, "seed {seed} node {q}");
                compared += 1;
            }
        }
    }
    assert!(compared > 40);
}

#[test]
fn memoryless_and_first_order_agents_behave_alike() {
    use rand::Rng;
    for seed in 0..20 {
        let mut r = rng(seed);
        let (iface, _, env) = common::random_mdp_pair(seed);
        let na = iface.num_actions();
        let policy: Vec<Dist> = (0..iface.num_observations()).map(|_| agents::random_dist(na, &mut r)).collect();
        let start = r.gen_range(0..iface.num_observations());
        let m = agents::memoryless_agent(&iface, policy.clone(), start).unwrap();
        let k = agents::korder_agent(&iface, 1, |w| policy[w[0]].clone(), start).unwrap();
        let gm = build_product(&iface, &m, &env).unwrap();
        let gk = build_product(&iface, &k, &env).unwrap();
        assert_eq!(gm.len(), gk.len());
        for id in 0..gm.len() {
            assert_eq!(gm.output(id), gk.output(id));
            assert_eq!(gm.node(id).env_state, gk.node(id).env_state);
        }
    }
}
