use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::product::ProductGraph;

/// Reachability layers `L_k` (nodes reachable by realizable paths of length
/// exactly `k`) with the eventual period of the layer sequence.
///
/// Only `L_0 .. L_{p+d-1}` are stored; later layers repeat with period `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerSequence {
    layers: Vec<Vec<usize>>,
    preperiod: usize,
    period: usize,
    num_nodes: usize,
}

impl LayerSequence {
    pub fn preperiod(&self) -> usize {
        self.preperiod
    }

    pub fn period(&self) -> usize {
        self.period
    }

    /// Sorted node ids of `L_k` for any `k`.
    pub fn layer(&self, k: usize) -> &[usize] {
        let i = if k < self.layers.len() { k } else { self.preperiod + (k - self.preperiod) % self.period };
        &self.layers[i]
    }

    /// The time horizon `p + d` up to which sequences are tabulated.
    pub fn horizon(&self) -> usize {
        self.preperiod + self.period
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }
}

/// Default safety cap on the number of layers explored.
pub fn default_layer_cap(num_nodes: usize) -> usize {
    4 * num_nodes * num_nodes
}

/// Computes layers until the first repeated layer set.
///
/// `max_steps` defaults to [`default_layer_cap`]; exceeding it is a
/// resource error.
pub fn layer_sequence(g: &ProductGraph, max_steps: Option<usize>) -> Result<LayerSequence> {
    if g.is_empty() {
        return Err(Error::input("empty product graph"));
    }
    let cap = max_steps.unwrap_or_else(|| default_layer_cap(g.len()).max(1));
    let mut layers: Vec<Vec<usize>> = Vec::new();
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut current = vec![g.start()];
    let mut mark = vec![false; g.len()];
    loop {
        if let Some(&first) = seen.get(&current) {
            return Ok(LayerSequence {
                preperiod: first,
                period: layers.len() - first,
                layers,
                num_nodes: g.len(),
            });
        }
        if layers.len() >= cap {
            return Err(Error::Resource(format!("layer sequence did not recur within {cap} steps")));
        }
        let mut next = Vec::new();
        for &q in &current {
            for e in g.edges(q) {
                if !mark[e.target] {
                    mark[e.target] = true;
                    next.push(e.target);
                }
            }
        }
        for &q in &next {
            mark[q] = false;
        }
        next.sort_unstable();
        seen.insert(current.clone(), layers.len());
        layers.push(std::mem::replace(&mut current, next));
    }
}

/// `R_t`: nodes reachable by realizable paths of length at least `t`, as a
/// sorted list.
pub fn reachable_from_time(ls: &LayerSequence, t: usize) -> Vec<usize> {
    let mut mark = vec![false; ls.num_nodes];
    for k in t..ls.horizon() {
        for &q in ls.layer(k) {
            mark[q] = true;
        }
    }
    // Cycle layers recur forever, so they are in every R_t.
    for k in ls.preperiod..ls.horizon() {
        for &q in ls.layer(k) {
            mark[q] = true;
        }
    }
    mark.iter().enumerate().filter(|(_, &m)| m).map(|(q, _)| q).collect()
}
