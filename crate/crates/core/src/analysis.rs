//! End-to-end analysis of a resolved scenario, and the cross-check harness
//! that compares the engine against brute-force oracles.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::distortion::{convergence_time_eps, distortion_oracle, distortion_sequence, witness_depth};
use crate::error::{Error, Result};
use crate::model::PerformanceSpec;
use crate::product::{build_product, layer_sequence, LayerSequence, ProductGraph};
use crate::scenario::Resolved;
use crate::size::{convergence_time_beta, future_machine, min_closed_cover, size_oracle, size_sequence, SizeOptions};
use crate::value::{exact_value, mc_estimate_value, ValueTable};

/// Everything `analyze` computes for one scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub scenario: String,
    pub digest: String,
    pub tool_version: String,
    pub performance: PerformanceSpec,
    pub layers: LayerInfo,
    pub v_min: f64,
    pub v_max: f64,
    pub sizes: Option<SizeReport>,
    pub distortion: Option<DistortionReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerInfo {
    pub preperiod: usize,
    pub period: usize,
    pub nodes: usize,
    pub edges: usize,
    pub agent_states: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SizeReport {
    /// `c_t` for `t = 0 ..= preperiod + period`; upper bounds unless `exact`.
    pub values: Vec<usize>,
    pub lower: Vec<usize>,
    pub limit: usize,
    pub beta: f64,
    /// `None` when the sizes are bounds only.
    pub t_beta: Option<usize>,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistortionReport {
    pub values: Vec<f64>,
    pub limit: f64,
    pub epsilon: f64,
    pub t_eps: usize,
    pub stabilization_time: usize,
}

struct Prepared {
    g: ProductGraph,
    ls: LayerSequence,
    vt: ValueTable,
}

fn prepare(r: &Resolved) -> Result<Prepared> {
    let g = build_product(&r.interface, &r.agent, &r.environment)?;
    let ls = layer_sequence(&g, r.scenario.analysis.layer_cap)?;
    let vt = exact_value(&g, r.performance);
    Ok(Prepared { g, ls, vt })
}

fn size_options(r: &Resolved, workers: usize) -> SizeOptions {
    let a = &r.scenario.analysis;
    SizeOptions { tol: a.tolerance, budget: a.budget, workers: workers.max(1) }
}

/// Runs the analysis requested by the scenario. The report does not depend
/// on `workers`.
pub fn cmd_analyze(r: &Resolved, workers: usize) -> Result<AnalysisReport> {
    let p = prepare(r)?;
    let opts = &r.scenario.analysis;
    let sizes = if opts.sizes {
        let seq = size_sequence(&p.g, &p.ls, &size_options(r, workers))?;
        let t_beta = convergence_time_beta(&seq, opts.beta).ok();
        Some(SizeReport {
            values: seq.values,
            lower: seq.lower,
            limit: seq.limit,
            beta: opts.beta,
            t_beta,
            exact: seq.exact,
        })
    } else {
        None
    };
    let distortion = if opts.distortion {
        let seq = distortion_sequence(&p.g, &p.vt, &p.ls)?;
        Some(DistortionReport {
            t_eps: convergence_time_eps(&seq, opts.epsilon),
            epsilon: opts.epsilon,
            limit: seq.limit,
            stabilization_time: seq.stabilization_time,
            values: seq.values,
        })
    } else {
        None
    };
    Ok(AnalysisReport {
        scenario: r.scenario.name.clone(),
        digest: r.digest.clone(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        performance: r.performance,
        layers: LayerInfo {
            preperiod: p.ls.preperiod(),
            period: p.ls.period(),
            nodes: p.g.len(),
            edges: p.g.num_edges(),
            agent_states: p.g.agent_size(),
        },
        v_min: p.vt.v_min,
        v_max: p.vt.v_max,
        sizes,
        distortion,
    })
}

/// Agreement tolerance for distortion and value comparisons.
pub const CROSSCHECK_TOL: f64 = 1e-9;
/// Largest `n` the exhaustive size oracle tries.
pub const SIZE_ORACLE_MAX: usize = 3;
/// Candidate machines the size oracle may enumerate per node.
pub const SIZE_ORACLE_BUDGET: u64 = 2_000_000;
/// Histories the distortion oracle may visit per `t`.
pub const DISTORTION_ORACLE_BUDGET: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "reason")]
pub enum CheckStatus {
    Match,
    Mismatch,
    /// The oracle's depth was too small to be exact; it stayed below the
    /// engine's value.
    LowerBoundOnly,
    Skipped(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub check: String,
    pub engine: Option<f64>,
    pub oracle: Option<f64>,
    #[serde(flatten)]
    pub status: CheckStatus,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CrosscheckReport {
    pub entries: Vec<CheckEntry>,
}

impl CrosscheckReport {
    pub fn mismatches(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| e.status == CheckStatus::Mismatch)
    }

    pub fn has_mismatch(&self) -> bool {
        self.mismatches().next().is_some()
    }
}

impl fmt::Display for CrosscheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |x| format!("{x}"));
        for e in &self.entries {
            let status = match &e.status {
                CheckStatus::Match => "match".to_string(),
                CheckStatus::Mismatch => "MISMATCH".to_string(),
                CheckStatus::LowerBoundOnly => "lower bound only".to_string(),
                CheckStatus::Skipped(why) => format!("skipped ({why})"),
            };
            writeln!(f, "{:<16} engine={:<24} oracle={:<24} {status}", e.check, num(e.engine), num(e.oracle))?;
        }
        Ok(())
    }
}

fn skipped(e: Error) -> Result<CheckStatus> {
    match e {
        Error::Resource(msg) | Error::Unsupported(msg) => Ok(CheckStatus::Skipped(msg)),
        other => Err(other),
    }
}

/// Compares engine results with the brute-force oracles: `δ_t` against
/// explicit history enumeration up to `depth`, per-node minimal sizes against
/// exhaustive machine search, and (if configured) the start value against a
/// Monte-Carlo estimate. Oracle budget overruns are reported as skipped.
pub fn cmd_crosscheck(r: &Resolved, depth: usize, workers: usize) -> Result<CrosscheckReport> {
    let p = prepare(r)?;
    let opts = &r.scenario.analysis;
    let mut report = CrosscheckReport::default();

    let delta = distortion_sequence(&p.g, &p.vt, &p.ls)?;
    for (t, &engine) in delta.values.iter().enumerate() {
        let oracle = distortion_oracle(
            &r.interface,
            &r.agent,
            &r.environment,
            r.performance,
            depth,
            t,
            DISTORTION_ORACLE_BUDGET,
        );
        let (oracle, status) = match oracle {
            Ok(o) => {
                let exact = depth > 0 && witness_depth(&p.g, &p.vt, &p.ls, t) <= depth;
                let status = if o > engine + CROSSCHECK_TOL {
                    CheckStatus::Mismatch
                } else if !exact {
                    CheckStatus::LowerBoundOnly
                } else if (o - engine).abs() <= CROSSCHECK_TOL {
                    CheckStatus::Match
                } else {
                    CheckStatus::Mismatch
                };
                (Some(o), status)
            }
            Err(e) => (None, skipped(e)?),
        };
        report.entries.push(CheckEntry { check: format!("delta_{t}"), engine: Some(engine), oracle, status });
    }

    let sopts = size_options(r, workers);
    for q in 0..p.g.len() {
        let m = future_machine(&p.g, q, opts.tolerance);
        let cover = min_closed_cover(&m, sopts.budget);
        let engine = cover.exact.then_some(cover.upper);
        let (oracle, status) = match size_oracle(&m, SIZE_ORACLE_MAX, SIZE_ORACLE_BUDGET) {
            Ok(o) => {
                let status = match engine {
                    None => CheckStatus::Skipped("engine gave bounds only".into()),
                    Some(e) if e.min(SIZE_ORACLE_MAX + 1) == o => CheckStatus::Match,
                    Some(_) => CheckStatus::Mismatch,
                };
                (Some(o as f64), status)
            }
            Err(e) => (None, skipped(e)?),
        };
        report.entries.push(CheckEntry {
            check: format!("size_q{q}"),
            engine: Some(cover.upper as f64),
            oracle,
            status,
        });
    }

    if let Some(mc) = opts.monte_carlo {
        let exact = p.vt.value(p.g.start());
        let entry = match mc_estimate_value(
            &r.agent,
            &r.environment,
            p.g.node(p.g.start()),
            r.performance,
            mc.rollouts,
            mc.horizon,
            mc.seed,
        ) {
            Ok(est) => {
                let slack = 3.0 * est.half_width + CROSSCHECK_TOL + truncation_bias(&p.vt, mc.horizon);
                let status = if (est.estimate - exact).abs() <= slack {
                    CheckStatus::Match
                } else {
                    CheckStatus::Mismatch
                };
                CheckEntry { check: "mc_value".into(), engine: Some(exact), oracle: Some(est.estimate), status }
            }
            Err(e) => CheckEntry { check: "mc_value".into(), engine: Some(exact), oracle: None, status: skipped(e)? },
        };
        report.entries.push(entry);
    }
    Ok(report)
}

/// Largest possible contribution of the rewards after `horizon` steps.
pub fn truncation_bias(vt: &ValueTable, horizon: usize) -> f64 {
    match vt.spec.discount() {
        Some(g) if g > 0.0 => {
            let r = vt.v_min.abs().max(vt.v_max.abs()) * (1.0 - g);
            g.powi(horizon.min(i32::MAX as usize) as i32) * r / (1.0 - g)
        }
        _ => 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(status: CheckStatus) -> CheckEntry {
        CheckEntry { check: "delta_0".into(), engine: Some(1.0), oracle: Some(0.5), status }
    }

    #[test]
    fn only_mismatches_count() {
        let mut report = CrosscheckReport {
            entries: vec![entry(CheckStatus::Match), entry(CheckStatus::LowerBoundOnly), entry(CheckStatus::Skipped("budget".into()))],
        };
        assert!(!report.has_mismatch());
        report.entries.push(entry(CheckStatus::Mismatch));
        assert_eq!(report.mismatches().count(), 1);
        assert!(report.to_string().contains("MISMATCH"));
    }

    #[test]
    fn truncation_bias_bounds_the_tail() {
        use crate::prelude::*;
        let iface = Interface::new(["a", "b"], ["o"]).unwrap();
        let agent = agents::constant_agent(&iface, Dist::uniform(2));
        let g = build_product(&iface, &agent, &envs::bandit_env(&iface, &[0.0, 1.0]).unwrap()).unwrap();
        assert_eq!(truncation_bias(&exact_value(&g, PerformanceSpec::Myopic), 1), 0.0);
        let vt = exact_value(&g, PerformanceSpec::Discounted { gamma: 0.5 });
        assert!((truncation_bias(&vt, 1) - 1.0).abs() < 1e-12);
        assert!((truncation_bias(&vt, 3) - 0.25).abs() < 1e-12);
    }
}
