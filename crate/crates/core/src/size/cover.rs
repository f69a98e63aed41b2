use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::size::compat::compatible_pairs;
use crate::size::heuristic::refinement_partition;
use crate::size::{IncompleteMooreMachine, WitnessMachine};

/// Budgets for exact minimization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CoverBudget {
    /// Machines with more states are bounded, not solved.
    pub max_states: usize,
    /// Search nodes explored before giving up on exactness.
    pub search_nodes: usize,
}

impl Default for CoverBudget {
    fn default() -> Self {
        CoverBudget { max_states: 64, search_nodes: 200_000 }
    }
}

/// Result of closed-cover minimization.
///
/// When `exact`, `lower == upper` is the minimal number of states of any
/// machine reproducing the reference on all defined paths. Otherwise the
/// minimum lies in `[lower, upper]`. The witness always has `upper` states.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinCover {
    pub lower: usize,
    pub upper: usize,
    pub exact: bool,
    pub witness: WitnessMachine,
}

/// Minimum closed cover by compatibles.
///
/// Classes start from `{root}`. Each unmet obligation (a class whose
/// successor set on some input lies in no class) is discharged either by
/// merging that set into an existing class it is compatible with, or by
/// opening a new class. Every minimal machine corresponds to some sequence
/// of these choices, so exhausting the search is exact. Bounds: the best
/// cover so far (seeded by partition refinement and by grouping states by
/// label) and the largest clique of pairwise incompatible states.
pub fn min_closed_cover(m: &IncompleteMooreMachine, budget: CoverBudget) -> MinCover {
    let seed = seed_partition(m);
    let seed_size = block_count(&seed);
    if m.len() > budget.max_states.min(64) {
        let lower = m.num_distinct_outputs().max(1);
        return MinCover {
            lower,
            upper: seed_size,
            exact: lower == seed_size,
            witness: witness_from_partition(m, &seed),
        };
    }
    let compat = compatible_pairs(m);
    let masks: Vec<u64> = (0..m.len()).map(|p| compat.mask(p)).collect();
    let lower = incompatible_clique(&masks, m.len(), budget.search_nodes).max(1);
    let seed_classes = partition_classes(&seed);
    if lower == seed_size {
        return MinCover { lower, upper: lower, exact: true, witness: witness_from(m, &seed_classes) };
    }
    let mut search = Search {
        m,
        masks,
        best: seed_classes,
        lower,
        nodes: 0,
        budget: budget.search_nodes,
        exhausted: false,
        visited: HashSet::new(),
    };
    search.run(&mut vec![1u64]);
    let upper = search.best.len();
    let exact = !search.exhausted || upper == lower;
    let lower = if exact { upper } else { lower };
    MinCover { lower, upper, exact, witness: witness_from(m, &search.best) }
}

impl IncompleteMooreMachine {
    fn num_distinct_outputs(&self) -> usize {
        let mut outs: Vec<usize> = (0..self.len()).map(|s| self.output(s)).collect();
        outs.sort_unstable();
        outs.dedup();
        outs.len()
    }
}

struct Search<'a> {
    m: &'a IncompleteMooreMachine,
    masks: Vec<u64>,
    best: Vec<u64>,
    lower: usize,
    nodes: usize,
    budget: usize,
    exhausted: bool,
    visited: HashSet<Vec<u64>>,
}

impl Search<'_> {
    fn run(&mut self, classes: &mut Vec<u64>) {
        if self.exhausted || self.best.len() == self.lower || classes.len() >= self.best.len() {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        let mut key = classes.clone();
        key.sort_unstable();
        if !self.visited.insert(key) {
            return;
        }
        let Some(needed) = first_unmet(self.m, classes) else {
            self.best = classes.clone();
            return;
        };
        for c in 0..classes.len() {
            let merged = classes[c] | needed;
            if is_compatible_set(&self.masks, merged) {
                let old = classes[c];
                classes[c] = merged;
                self.run(classes);
                classes[c] = old;
            }
        }
        if classes.len() + 1 < self.best.len() {
            classes.push(needed);
            self.run(classes);
            classes.pop();
        }
    }
}

fn is_compatible_set(masks: &[u64], set: u64) -> bool {
    bits(set).all(|p| set & !masks[p] == 0)
}

fn bits(mut set: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (set != 0).then(|| {
            let i = set.trailing_zeros() as usize;
            set &= set - 1;
            i
        })
    })
}

fn successor_set(m: &IncompleteMooreMachine, class: u64, input: usize) -> u64 {
    bits(class).filter_map(|s| m.next(s, input)).fold(0, |acc, t| acc | (1 << t))
}

/// The first successor set, in class and input order, not contained in any class.
fn first_unmet(m: &IncompleteMooreMachine, classes: &[u64]) -> Option<u64> {
    for &c in classes {
        for input in 0..m.num_inputs() {
            let s = successor_set(m, c, input);
            if s != 0 && !classes.iter().any(|&k| s & !k == 0) {
                return Some(s);
            }
        }
    }
    None
}

/// Size of a clique of pairwise incompatible states. Exact within the node
/// budget, otherwise the best clique found (still a valid lower bound).
fn incompatible_clique(masks: &[u64], n: usize, budget: usize) -> usize {
    let all: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let incompat: Vec<u64> = masks.iter().map(|&c| all & !c).collect();
    let mut best = 0;
    let mut nodes = 0;
    fn grow(incompat: &[u64], size: usize, cand: u64, best: &mut usize, nodes: &mut usize, budget: usize) {
        *nodes += 1;
        if size > *best {
            *best = size;
        }
        if *nodes > budget || size + cand.count_ones() as usize <= *best {
            return;
        }
        let mut rest = cand;
        while rest != 0 {
            if size + rest.count_ones() as usize <= *best {
                return;
            }
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            grow(incompat, size + 1, rest & incompat[v], best, nodes, budget);
        }
    }
    grow(&incompat, 0, all, &mut best, &mut nodes, budget);
    best
}

/// Initial cover: the smaller of the refinement quotient and the grouping
/// by label (agent state) when that grouping is closed.
fn seed_partition(m: &IncompleteMooreMachine) -> Vec<usize> {
    let quotient = refinement_partition(m);
    let mut by_label: Vec<usize> = (0..m.len()).map(|s| m.label(s)).collect();
    let mut uniq = by_label.clone();
    uniq.sort_unstable();
    uniq.dedup();
    for l in by_label.iter_mut() {
        *l = uniq.binary_search(l).unwrap();
    }
    if uniq.len() < block_count(&quotient) && is_closed_partition(m, &by_label) {
        by_label
    } else {
        quotient
    }
}

fn block_count(block: &[usize]) -> usize {
    block.iter().max().map_or(0, |b| b + 1)
}

/// Output-consistent blocks whose defined successors on each input land in
/// a single block. Such a partition is a closed cover by compatibles.
fn is_closed_partition(m: &IncompleteMooreMachine, block: &[usize]) -> bool {
    let count = block_count(block);
    let mut out = vec![None; count];
    let mut succ = vec![None; count * m.num_inputs()];
    for s in 0..m.len() {
        let b = block[s];
        if *out[b].get_or_insert(m.output(s)) != m.output(s) {
            return false;
        }
        for input in 0..m.num_inputs() {
            if let Some(t) = m.next(s, input) {
                if *succ[b * m.num_inputs() + input].get_or_insert(block[t]) != block[t] {
                    return false;
                }
            }
        }
    }
    true
}

/// Bitmask classes of a partition with the root's block first.
fn partition_classes(block: &[usize]) -> Vec<u64> {
    let mut classes = vec![0u64; block_count(block)];
    for (s, &b) in block.iter().enumerate() {
        classes[b] |= 1 << s;
    }
    classes.swap(0, block[0]);
    classes
}

/// Completes a closed cover to a witness: the successor of class `c` on a
/// defined input is the lowest-index class containing its successor set;
/// undefined inputs go to class 0.
fn witness_from(m: &IncompleteMooreMachine, classes: &[u64]) -> WitnessMachine {
    let transitions = classes
        .iter()
        .map(|&c| {
            (0..m.num_inputs())
                .map(|input| {
                    let s = successor_set(m, c, input);
                    if s == 0 {
                        0
                    } else {
                        classes.iter().position(|&k| s & !k == 0).expect("closed cover")
                    }
                })
                .collect()
        })
        .collect();
    let outputs = classes.iter().map(|&c| m.output(c.trailing_zeros() as usize)).collect();
    WitnessMachine { start: 0, outputs, transitions }
}

fn witness_from_partition(m: &IncompleteMooreMachine, block: &[usize]) -> WitnessMachine {
    let count = block.iter().max().map_or(0, |b| b + 1);
    let mut outputs = vec![0; count];
    let mut transitions = vec![vec![0; m.num_inputs()]; count];
    for s in 0..m.len() {
        outputs[block[s]] = m.output(s);
        for (input, slot) in transitions[block[s]].iter_mut().enumerate() {
            if let Some(t) = m.next(s, input) {
                *slot = block[t];
            }
        }
    }
    WitnessMachine { start: block[0], outputs, transitions }
}
