use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{validate_agent, validate_env, BoundedAgent, Dist, FiniteEnvironment, Interface};

/// A reachable `(agent state, environment state)` pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProductNode {
    pub agent_state: usize,
    pub env_state: usize,
}

/// A realizable one-step extension out of a product node.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub action: usize,
    pub observation: usize,
    /// `π(a|s) · e(o|x,a)`, strictly positive.
    pub prob: f64,
    pub reward: f64,
    pub target: usize,
}

/// The agent × environment product restricted to nodes reachable from the
/// start pair along positive-probability edges.
///
/// Nodes are numbered in breadth-first discovery order with edges explored
/// in `(action, observation)` declaration order, so numbering is a pure
/// function of the inputs. Node 0 is the start.
#[derive(Clone, Debug)]
pub struct ProductGraph {
    nodes: Vec<ProductNode>,
    index: HashMap<ProductNode, usize>,
    edges: Vec<Vec<Edge>>,
    num_actions: usize,
    num_observations: usize,
    agent_states: usize,
    outputs: Vec<Dist>,
    agent_names: Vec<String>,
    env_names: Vec<String>,
    action_names: Vec<String>,
    observation_names: Vec<String>,
}

/// Builds the reachable product of a validated agent and environment.
pub fn build_product(iface: &Interface, agent: &BoundedAgent, env: &FiniteEnvironment) -> Result<ProductGraph> {
    if agent.num_actions() != env.num_actions() || agent.num_observations() != env.num_observations() {
        return Err(Error::input(format!(
            "interface mismatch: agent is over {}x{} symbols, environment over {}x{}",
            agent.num_actions(),
            agent.num_observations(),
            env.num_actions(),
            env.num_observations()
        )));
    }
    let mut report = validate_agent(agent, iface);
    report.extend(validate_env(env, iface));
    report.into_result()?;

    let start = ProductNode { agent_state: agent.start(), env_state: env.start() };
    let mut nodes = vec![start];
    let mut index = HashMap::from([(start, 0)]);
    let mut edges: Vec<Vec<Edge>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(id) = queue.pop_front() {
        let ProductNode { agent_state: s, env_state: x } = nodes[id];
        let mut out = Vec::new();
        for a in agent.policy(s).support() {
            let pa = agent.policy(s).prob(a);
            let emission = env.emission(x, a);
            for o in emission.support() {
                let next = ProductNode {
                    agent_state: agent.next_state(s, a, o).expect("validated"),
                    env_state: env.next_state(x, a, o).expect("validated"),
                };
                let target = *index.entry(next).or_insert_with(|| {
                    nodes.push(next);
                    queue.push_back(nodes.len() - 1);
                    nodes.len() - 1
                });
                out.push(Edge { action: a, observation: o, prob: pa * emission.prob(o), reward: env.reward(x, a, o), target });
            }
        }
        if edges.len() <= id {
            edges.resize_with(id + 1, Vec::new);
        }
        edges[id] = out;
    }
    edges.resize_with(nodes.len(), Vec::new);

    Ok(ProductGraph {
        nodes,
        index,
        edges,
        num_actions: iface.num_actions(),
        num_observations: iface.num_observations(),
        agent_states: agent.num_states(),
        outputs: (0..agent.num_states()).map(|s| agent.policy(s).clone()).collect(),
        agent_names: agent.state_names().to_vec(),
        env_names: env.state_names().to_vec(),
        action_names: iface.actions().to_vec(),
        observation_names: iface.observations().to_vec(),
    })
}

impl ProductGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn start(&self) -> usize {
        0
    }

    pub fn node(&self, id: usize) -> ProductNode {
        self.nodes[id]
    }

    pub fn nodes(&self) -> &[ProductNode] {
        &self.nodes
    }

    pub fn node_id(&self, node: ProductNode) -> Option<usize> {
        self.index.get(&node).copied()
    }

    pub fn edges(&self, id: usize) -> &[Edge] {
        &self.edges[id]
    }

    pub fn num_edges(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    pub fn num_observations(&self) -> usize {
        self.num_observations
    }

    /// Number of states of the agent the graph was built from, `|λ|`.
    pub fn agent_size(&self) -> usize {
        self.agent_states
    }

    /// The agent's action distribution at a node.
    pub fn output(&self, id: usize) -> &Dist {
        &self.outputs[self.nodes[id].agent_state]
    }

    /// The agent's action distribution in agent state `s`.
    pub fn output_for_state(&self, s: usize) -> &Dist {
        &self.outputs[s]
    }

    pub fn agent_state_name(&self, s: usize) -> &str {
        &self.agent_names[s]
    }

    pub fn env_state_name(&self, x: usize) -> &str {
        &self.env_names[x]
    }

    /// Successor of `id` on input `(a, o)`, if that branch is realizable.
    pub fn successor(&self, id: usize, action: usize, observation: usize) -> Option<usize> {
        self.edges[id]
            .iter()
            .find(|e| e.action == action && e.observation == observation)
            .map(|e| e.target)
    }

    /// Expected reward of the next transition.
    pub fn expected_reward(&self, id: usize) -> f64 {
        self.edges[id].iter().map(|e| e.prob * e.reward).sum()
    }

    /// Plain-text adjacency listing: a header block naming every node, then
    /// one edge per line as `from action observation probability to`.
    pub fn to_adjacency_text(&self) -> String {
        let mut out = String::new();
        for (id, n) in self.nodes.iter().enumerate() {
            let _ = writeln!(
                out,
                "# node {id} {} {}",
                self.agent_names[n.agent_state], self.env_names[n.env_state]
            );
        }
        for (id, es) in self.edges.iter().enumerate() {
            for e in es {
                let _ = writeln!(
                    out,
                    "{id} {} {} {} {}",
                    self.action_names[e.action], self.observation_names[e.observation], e.prob, e.target
                );
            }
        }
        out
    }
}
