use std::collections::HashMap;

use crate::size::IncompleteMooreMachine;

/// Coarsest partition in which blocks agree on output and, input by input,
/// on the block of the successor, with "undefined" as its own value.
///
/// Returns the block of every state; blocks are numbered by first state.
pub fn refinement_partition(m: &IncompleteMooreMachine) -> Vec<usize> {
    let n = m.len();
    let mut block = renumber(&(0..n).map(|s| m.output(s)).collect::<Vec<_>>());
    let mut count = block.iter().max().map_or(0, |b| b + 1);
    loop {
        let signatures: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|s| {
                let sig = (0..m.num_inputs())
                    .map(|i| m.next(s, i).map_or(usize::MAX, |t| block[t]))
                    .collect();
                (block[s], sig)
            })
            .collect();
        let next = renumber(&signatures);
        let next_count = next.iter().max().map_or(0, |b| b + 1);
        block = next;
        if next_count == count {
            return block;
        }
        count = next_count;
    }
}

fn renumber<K: std::hash::Hash + Eq + Clone>(keys: &[K]) -> Vec<usize> {
    let mut ids: HashMap<K, usize> = HashMap::new();
    keys.iter()
        .map(|k| {
            let next = ids.len();
            *ids.entry(k.clone()).or_insert(next)
        })
        .collect()
}

/// Upper bound on the minimal machine size from partition refinement.
/// Exact on completely specified machines.
pub fn heuristic_size(m: &IncompleteMooreMachine) -> usize {
    refinement_partition(m).iter().max().map_or(0, |b| b + 1)
}
