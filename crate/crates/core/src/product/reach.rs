use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::model::History;
use crate::product::ProductGraph;

/// Shortest realizable path length of at least one step from `from` to every
/// node; `None` where unreachable. A node on a cycle gets its shortest cycle
/// length.
pub fn positive_distances(g: &ProductGraph, from: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.len()];
    let mut queue = VecDeque::new();
    for e in g.edges(from) {
        if dist[e.target].is_none() {
            dist[e.target] = Some(1);
            queue.push_back(e.target);
        }
    }
    while let Some(q) = queue.pop_front() {
        let d = dist[q].unwrap();
        for e in g.edges(q) {
            if dist[e.target].is_none() {
                dist[e.target] = Some(d + 1);
                queue.push_back(e.target);
            }
        }
    }
    dist
}

/// Node pairs `(q, q')` with `q ∈ reach`, `q'` reachable from `q` in one or
/// more steps, and both sharing the same agent state. Sorted; self-revisits
/// on cycles are kept.
pub fn revisit_pairs(g: &ProductGraph, reach: &[usize]) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for &q in reach {
        let s = g.node(q).agent_state;
        for (q2, d) in positive_distances(g, q).into_iter().enumerate() {
            if d.is_some() && g.node(q2).agent_state == s {
                pairs.push((q, q2));
            }
        }
    }
    pairs.sort_unstable();
    pairs
}

/// Every realizable history of length at most `depth` with its end node,
/// ordered by length and then by `(action, observation)` branch order.
///
/// Fails once more than `budget` histories would be produced.
pub fn enumerate_histories(g: &ProductGraph, depth: usize, budget: usize) -> Result<Vec<(History, usize)>> {
    let mut out = vec![(History::empty(), g.start())];
    let mut frontier = 0;
    for _ in 0..depth {
        let end = out.len();
        for i in frontier..end {
            let (h, q) = out[i].clone();
            for e in g.edges(q) {
                if out.len() >= budget {
                    return Err(Error::Resource(format!("history enumeration exceeded {budget} histories")));
                }
                out.push((h.extended(e.action, e.observation), e.target));
            }
        }
        frontier = end;
    }
    Ok(out)
}
