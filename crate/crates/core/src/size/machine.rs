use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::model::{BoundedAgent, Dist, OutputClasses};
use crate::product::ProductGraph;

/// A Moore machine with partial transitions; undefined transitions are
/// don't-cares. State 0 is the root and every state is reachable from it.
#[derive(Clone, Debug, PartialEq)]
pub struct IncompleteMooreMachine {
    transitions: Vec<Vec<Option<usize>>>,
    outputs: Vec<usize>,
    labels: Vec<usize>,
    output_dists: Vec<Dist>,
    origin: Vec<usize>,
}

impl IncompleteMooreMachine {
    /// A machine over `transitions[state][input]` with output class ids.
    /// States unreachable from state 0 are dropped.
    pub fn new(transitions: Vec<Vec<Option<usize>>>, outputs: Vec<usize>) -> Self {
        let n = outputs.len();
        let m = IncompleteMooreMachine {
            transitions,
            outputs,
            labels: (0..n).collect(),
            output_dists: Vec::new(),
            origin: (0..n).collect(),
        };
        m.restricted_to_reachable()
    }

    fn restricted_to_reachable(self) -> Self {
        let n = self.outputs.len();
        let mut map = vec![usize::MAX; n];
        let mut order = vec![0];
        map[0] = 0;
        let mut i = 0;
        while i < order.len() {
            let s = order[i];
            for t in self.transitions[s].iter().flatten() {
                if map[*t] == usize::MAX {
                    map[*t] = order.len();
                    order.push(*t);
                }
            }
            i += 1;
        }
        if order.len() == n && order.iter().enumerate().all(|(i, &s)| i == s) {
            return self;
        }
        IncompleteMooreMachine {
            transitions: order
                .iter()
                .map(|&s| self.transitions[s].iter().map(|t| t.map(|t| map[t])).collect())
                .collect(),
            outputs: order.iter().map(|&s| self.outputs[s]).collect(),
            labels: order.iter().map(|&s| self.labels[s]).collect(),
            output_dists: self.output_dists,
            origin: order.iter().map(|&s| self.origin[s]).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.outputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outputs.is_empty()
    }

    pub fn num_inputs(&self) -> usize {
        self.transitions.first().map_or(0, Vec::len)
    }

    pub fn output(&self, s: usize) -> usize {
        self.outputs[s]
    }

    pub fn next(&self, s: usize, input: usize) -> Option<usize> {
        self.transitions[s][input]
    }

    /// Agent state behind each machine state, or the state itself for
    /// machines not derived from a product graph.
    pub fn label(&self, s: usize) -> usize {
        self.labels[s]
    }

    /// Product-graph node behind each state (identity for synthetic machines).
    pub fn origin(&self, s: usize) -> usize {
        self.origin[s]
    }

    /// Action distribution of an output class, when known.
    pub fn output_dist(&self, class: usize) -> Option<&Dist> {
        self.output_dists.get(class)
    }

    pub fn num_output_classes(&self) -> usize {
        self.outputs.iter().copied().max().map_or(0, |m| m + 1)
    }

    pub fn is_completely_specified(&self) -> bool {
        self.transitions.iter().all(|row| row.iter().all(Option::is_some))
    }
}

/// Output class of every agent state, by first match within `tol`.
pub fn agent_output_classes(g: &ProductGraph, agent_states: impl Iterator<Item = usize>, tol: f64) -> (Vec<usize>, Vec<Dist>) {
    let mut classes = OutputClasses::new(tol);
    let mut dists = Vec::new();
    let ids = agent_states
        .map(|s| {
            let d = g.output_for_state(s);
            let id = classes.intern(d);
            if id == dists.len() {
                dists.push(d.clone());
            }
            id
        })
        .collect();
    (ids, dists)
}

/// The realizable future of node `q`: the sub-graph reachable from `q`,
/// with the agent's action distribution as output and `(a, o)` inputs
/// defined exactly on realizable branches.
pub fn future_machine(g: &ProductGraph, q: usize, tol: f64) -> IncompleteMooreMachine {
    let (classes, dists) = agent_output_classes(g, 0..g.agent_size(), tol);
    future_machine_with(g, q, &classes, &dists)
}

pub(crate) fn future_machine_with(g: &ProductGraph, q: usize, classes: &[usize], dists: &[Dist]) -> IncompleteMooreMachine {
    let no = g.num_observations();
    let inputs = g.num_actions() * no;
    let mut local = vec![usize::MAX; g.len()];
    let mut order = vec![q];
    local[q] = 0;
    let mut queue = VecDeque::from([q]);
    while let Some(p) = queue.pop_front() {
        for e in g.edges(p) {
            if local[e.target] == usize::MAX {
                local[e.target] = order.len();
                order.push(e.target);
                queue.push_back(e.target);
            }
        }
    }
    let transitions = order
        .iter()
        .map(|&p| {
            let mut row = vec![None; inputs];
            for e in g.edges(p) {
                row[e.action * no + e.observation] = Some(local[e.target]);
            }
            row
        })
        .collect();
    let labels: Vec<usize> = order.iter().map(|&p| g.node(p).agent_state).collect();
    IncompleteMooreMachine {
        transitions,
        outputs: labels.iter().map(|&s| classes[s]).collect(),
        labels,
        output_dists: dists.to_vec(),
        origin: order,
    }
}

/// A completely specified Moore machine reproducing a reference machine.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessMachine {
    pub start: usize,
    pub outputs: Vec<usize>,
    pub transitions: Vec<Vec<usize>>,
}

impl WitnessMachine {
    pub fn len(&self) -> usize {
        self.outputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outputs.is_empty()
    }

    /// Runs `self` in lockstep with `m` over every defined input path and
    /// checks that outputs agree everywhere.
    pub fn reproduces(&self, m: &IncompleteMooreMachine) -> bool {
        let n = self.len();
        let mut seen = vec![false; m.len() * n];
        let mut stack = vec![(0usize, self.start)];
        seen[self.start] = true;
        while let Some((s, w)) = stack.pop() {
            if m.output(s) != self.outputs[w] {
                return false;
            }
            for (input, t) in m.transitions[s].iter().enumerate() {
                if let Some(t) = *t {
                    let w2 = self.transitions[w][input];
                    if !seen[t * n + w2] {
                        seen[t * n + w2] = true;
                        stack.push((t, w2));
                    }
                }
            }
        }
        true
    }

    /// The witness as an agent over `num_actions × num_observations` inputs.
    /// Inputs are indexed `a * num_observations + o`.
    pub fn to_agent(&self, num_actions: usize, num_observations: usize, dists: &[Dist]) -> BoundedAgent {
        let mut update = Vec::with_capacity(self.len() * num_actions * num_observations);
        for row in &self.transitions {
            update.extend(row.iter().map(|&t| Some(t)));
        }
        BoundedAgent::new(
            (0..self.len()).map(|i| format!("w{i}")).collect(),
            self.start,
            num_actions,
            num_observations,
            self.outputs.iter().map(|&c| dists[c].clone()).collect(),
            update,
        )
    }
}
