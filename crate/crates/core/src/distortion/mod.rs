//! Distortion: the largest performance gap across revisits of one agent
//! state, `δ_t`, and the performance-convergence time `t_ε`.
//!
//! Performance factors through product nodes, so the supremum over history
//! pairs is a maximum over pairs of nodes `(q, q')` where `q ∈ R_t`, `q'` is
//! reachable from `q` in at least one step, and both carry the same agent
//! state. [`distortion_oracle`] recomputes the same quantity from explicit
//! histories without the product-graph reduction.

mod oracle;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::product::{positive_distances, reachable_from_time, revisit_pairs, LayerSequence, ProductGraph};
use crate::value::ValueTable;

pub use oracle::distortion_oracle;

/// Tolerance for treating a distortion as zero.
pub const ZERO_TOL: f64 = 1e-9;

/// `δ_0 .. δ_{p+d}` with the limit and the index from which the sequence is
/// constant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistortionSequence {
    pub values: Vec<f64>,
    pub limit: f64,
    pub stabilization_time: usize,
}

impl DistortionSequence {
    pub fn limit(&self) -> f64 {
        self.limit
    }

    pub fn at(&self, t: usize) -> f64 {
        self.values.get(t).copied().unwrap_or(self.limit)
    }

    /// CSV with columns `t,delta_t`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,delta_t\n");
        for (t, d) in self.values.iter().enumerate() {
            out.push_str(&format!("{t},{d}\n"));
        }
        out
    }
}

/// `δ_t` for the node set `reach = R_t`.
pub fn distortion_at(g: &ProductGraph, vt: &ValueTable, reach: &[usize]) -> Result<f64> {
    let pairs = revisit_pairs(g, reach);
    if pairs.is_empty() {
        return Err(Error::Invariant("no same-state revisit pair; every finite product must have one".into()));
    }
    Ok(max_gap(vt, &pairs))
}

fn max_gap(vt: &ValueTable, pairs: &[(usize, usize)]) -> f64 {
    pairs
        .iter()
        .map(|&(q, q2)| (vt.value(q) - vt.value(q2)).abs())
        .fold(0.0, f64::max)
}

/// Tabulates `δ_t` for `t = 0 ..= p + d`.
pub fn distortion_sequence(g: &ProductGraph, vt: &ValueTable, ls: &LayerSequence) -> Result<DistortionSequence> {
    let all = revisit_pairs(g, &reachable_from_time(ls, 0));
    let mut values = Vec::with_capacity(ls.horizon() + 1);
    for t in 0..=ls.horizon() {
        let reach = reachable_from_time(ls, t);
        let mut member = vec![false; g.len()];
        for &q in &reach {
            member[q] = true;
        }
        let pairs: Vec<(usize, usize)> = all.iter().copied().filter(|&(q, _)| member[q]).collect();
        if pairs.is_empty() {
            return Err(Error::Invariant(format!("no same-state revisit pair from time {t}")));
        }
        let d = max_gap(vt, &pairs);
        if let Some(&prev) = values.last() {
            if d > prev {
                return Err(Error::Invariant(format!("distortion increased at t = {t}: {prev} -> {d}")));
            }
        }
        values.push(d);
    }
    let limit = *values.last().expect("non-empty");
    let stabilization_time = values.iter().rposition(|&d| d != limit).map_or(0, |i| i + 1);
    Ok(DistortionSequence { values, limit, stabilization_time })
}

/// `t_ε`: the first `t` with `|δ_t − δ_∞| ≤ ε`.
pub fn convergence_time_eps(seq: &DistortionSequence, eps: f64) -> usize {
    seq.values
        .iter()
        .position(|d| (d - seq.limit).abs() <= eps)
        .unwrap_or(seq.values.len())
}

/// History length that suffices for explicit enumeration to witness `δ_t`:
/// the shortest `|hh'|` over maximizing node pairs. Zero when `δ_t = 0`.
pub fn witness_depth(g: &ProductGraph, vt: &ValueTable, ls: &LayerSequence, t: usize) -> usize {
    let pairs = revisit_pairs(g, &reachable_from_time(ls, t));
    let best = max_gap(vt, &pairs);
    if best == 0.0 {
        return 0;
    }
    let mut depth = usize::MAX;
    for (q, q2) in pairs {
        if (vt.value(q) - vt.value(q2)).abs() != best {
            continue;
        }
        let start = t.max(ls.preperiod()) + ls.period();
        let Some(k) = (t..start.max(t + 1)).find(|&k| ls.layer(k).binary_search(&q).is_ok()) else {
            continue;
        };
        if let Some(d) = positive_distances(g, q)[q2] {
            depth = depth.min(k + d);
        }
    }
    depth
}
