use crate::error::{Error, Result};
use crate::size::IncompleteMooreMachine;

/// Exhaustive minimal size for tiny machines.
///
/// For `n = 1 ..= n_max`, enumerates every `n`-state Moore machine whose
/// outputs come from `m`'s output set and whose transitions cover every
/// input used by `m`, and accepts the first one that agrees with `m` on all
/// defined paths (lockstep traversal from the roots). Returns `n_max + 1`
/// when none is found. `budget` caps the number of candidate machines.
pub fn size_oracle(m: &IncompleteMooreMachine, n_max: usize, budget: u64) -> Result<usize> {
    let inputs: Vec<usize> = (0..m.num_inputs())
        .filter(|&i| (0..m.len()).any(|s| m.next(s, i).is_some()))
        .collect();
    let mut outputs: Vec<usize> = (0..m.len()).map(|s| m.output(s)).collect();
    outputs.sort_unstable();
    outputs.dedup();

    let mut spent: u64 = 0;
    for n in 1..=n_max {
        let cells = n * inputs.len();
        let candidates = (outputs.len() as u64)
            .checked_pow((n - 1) as u32)
            .and_then(|o| (n as u64).checked_pow(cells as u32).and_then(|t| t.checked_mul(o)))
            .ok_or_else(|| Error::Resource("size oracle candidate count overflows".into()))?;
        spent = spent.saturating_add(candidates);
        if spent > budget {
            return Err(Error::Resource(format!("size oracle needs more than {budget} candidates")));
        }
        // State 0 is the start and must carry the root's output.
        let mut out_digits = vec![0usize; n - 1];
        loop {
            let mut out = vec![m.output(0)];
            out.extend(out_digits.iter().map(|&d| outputs[d]));
            let mut trans = vec![0usize; cells];
            loop {
                if agrees(m, &inputs, n, &out, &trans) {
                    return Ok(n);
                }
                if !increment(&mut trans, n) {
                    break;
                }
            }
            if !increment(&mut out_digits, outputs.len()) {
                break;
            }
        }
    }
    Ok(n_max + 1)
}

fn increment(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

fn agrees(m: &IncompleteMooreMachine, inputs: &[usize], n: usize, out: &[usize], trans: &[usize]) -> bool {
    let mut seen = vec![false; m.len() * n];
    let mut stack = vec![(0usize, 0usize)];
    seen[0] = true;
    while let Some((s, w)) = stack.pop() {
        if m.output(s) != out[w] {
            return false;
        }
        for (k, &i) in inputs.iter().enumerate() {
            if let Some(t) = m.next(s, i) {
                let w2 = trans[w * inputs.len() + k];
                if !seen[t * n + w2] {
                    seen[t * n + w2] = true;
                    stack.push((t, w2));
                }
            }
        }
    }
    true
}
