use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::DEFAULT_DIST_TOL;
use crate::product::{reachable_from_time, LayerSequence, ProductGraph};
use crate::size::machine::{agent_output_classes, future_machine_with};
use crate::size::{min_closed_cover, CoverBudget};

/// Options for [`size_sequence`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SizeOptions {
    /// Tolerance for treating two action distributions as the same output.
    pub tol: f64,
    pub budget: CoverBudget,
    /// Worker threads for per-node minimization. Results do not depend on it.
    pub workers: usize,
}

impl Default for SizeOptions {
    fn default() -> Self {
        SizeOptions { tol: DEFAULT_DIST_TOL, budget: CoverBudget::default(), workers: 1 }
    }
}

/// Minimal size of the future machine of one product node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeSize {
    pub lower: usize,
    pub upper: usize,
    pub exact: bool,
}

/// `c_0 .. c_{p+d}` with the limit `c_∞`.
///
/// `c_t` is the maximum of the per-node minima over `R_t`: every history of
/// length at least `t` may pick its own witness. When some node could not
/// be solved exactly, `values` holds upper bounds, `lower` the matching
/// lower bounds, and `exact` is false.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SizeSequence {
    pub values: Vec<usize>,
    pub lower: Vec<usize>,
    pub limit: usize,
    pub exact: bool,
    pub per_node: Vec<NodeSize>,
}

/// Per-node minimal sizes for every node of `g`, in node order.
pub fn node_sizes(g: &ProductGraph, opts: &SizeOptions) -> Result<Vec<NodeSize>> {
    let (classes, dists) = agent_output_classes(g, 0..g.agent_size(), opts.tol);
    let solve = |q: usize| {
        let m = future_machine_with(g, q, &classes, &dists);
        let c = min_closed_cover(&m, opts.budget);
        NodeSize { lower: c.lower, upper: c.upper, exact: c.exact }
    };
    if opts.workers <= 1 {
        return Ok((0..g.len()).map(solve).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers)
        .build()
        .map_err(|e| Error::Resource(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| (0..g.len()).into_par_iter().map(solve).collect()))
}

/// Tabulates `c_t` for `t = 0 ..= p + d`.
pub fn size_sequence(g: &ProductGraph, ls: &LayerSequence, opts: &SizeOptions) -> Result<SizeSequence> {
    let per_node = node_sizes(g, opts)?;
    let mut values = Vec::with_capacity(ls.horizon() + 1);
    let mut lower = Vec::with_capacity(ls.horizon() + 1);
    for t in 0..=ls.horizon() {
        let reach = reachable_from_time(ls, t);
        let c = reach.iter().map(|&q| per_node[q].upper).max().unwrap_or(1);
        let l = reach.iter().map(|&q| per_node[q].lower).max().unwrap_or(1);
        if c < 1 || c > g.agent_size() {
            return Err(Error::Invariant(format!("c_{t} = {c} outside [1, {}]", g.agent_size())));
        }
        if values.last().is_some_and(|&prev| c > prev) {
            return Err(Error::Invariant(format!("minimal size increased at t = {t}")));
        }
        values.push(c);
        lower.push(l);
    }
    let exact = per_node.iter().all(|n| n.exact);
    Ok(SizeSequence { limit: *values.last().expect("non-empty"), values, lower, exact, per_node })
}

/// `t_β`: the first `t` with `|c_t − c_∞| ≤ β`. Requires an exact sequence;
/// for a bounds-only sequence the error names the range `t_β` may lie in.
pub fn convergence_time_beta(seq: &SizeSequence, beta: f64) -> Result<usize> {
    if !seq.exact {
        return Err(Error::Unsupported(format!(
            "t_beta undetermined: sizes are bounds only, t_beta lies in [0, {}]",
            seq.values.len() - 1
        )));
    }
    Ok(seq
        .values
        .iter()
        .position(|&c| (c as f64 - seq.limit as f64).abs() <= beta)
        .unwrap_or(seq.values.len()))
}
