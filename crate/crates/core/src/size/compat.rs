use crate::size::IncompleteMooreMachine;

/// The compatibility relation of an incompletely specified machine: the
/// greatest relation in which related states have equal outputs and, on
/// every input defined at both, related successors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Compatibility {
    n: usize,
    rel: Vec<bool>,
}

impl Compatibility {
    pub fn compatible(&self, p: usize, q: usize) -> bool {
        self.rel[p * self.n + q]
    }

    /// Unordered compatible pairs `p < q`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for p in 0..self.n {
            for q in p + 1..self.n {
                if self.compatible(p, q) {
                    out.push((p, q));
                }
            }
        }
        out
    }

    /// Row `p` as a bitmask; only meaningful for machines of at most 64 states.
    pub(crate) fn mask(&self, p: usize) -> u64 {
        (0..self.n).filter(|&q| self.compatible(p, q)).fold(0, |m, q| m | (1 << q))
    }
}

/// Greatest-fixpoint refinement starting from the output partition.
pub fn compatible_pairs(m: &IncompleteMooreMachine) -> Compatibility {
    let n = m.len();
    let mut rel = vec![false; n * n];
    for p in 0..n {
        for q in 0..n {
            rel[p * n + q] = m.output(p) == m.output(q);
        }
    }
    let inputs = m.num_inputs();
    let mut changed = true;
    while changed {
        changed = false;
        for p in 0..n {
            for q in p + 1..n {
                if !rel[p * n + q] {
                    continue;
                }
                let clash = (0..inputs).any(|i| match (m.next(p, i), m.next(q, i)) {
                    (Some(a), Some(b)) => !rel[a * n + b],
                    _ => false,
                });
                if clash {
                    rel[p * n + q] = false;
                    rel[q * n + p] = false;
                    changed = true;
                }
            }
        }
    }
    Compatibility { n, rel }
}
