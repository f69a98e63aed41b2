use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Dist, History, Interface, ValidationReport, Violation};

/// A finite agent: start state, stochastic policy per state, and a
/// deterministic update `u(s, a, o)`.
///
/// Tables are stored densely; the update for `(s, a, o)` lives at
/// `s * |A| * |O| + a * |O| + o`. Construction does not validate, so a
/// malformed table loaded from disk can still be reported on in full by
/// [`validate_agent`]. Analysis entry points validate before use.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundedAgent {
    state_names: Vec<String>,
    start: usize,
    num_actions: usize,
    num_observations: usize,
    policy: Vec<Dist>,
    update: Vec<Option<usize>>,
}

impl BoundedAgent {
    pub fn new(
        state_names: Vec<String>,
        start: usize,
        num_actions: usize,
        num_observations: usize,
        policy: Vec<Dist>,
        update: Vec<Option<usize>>,
    ) -> Self {
        BoundedAgent { state_names, start, num_actions, num_observations, policy, update }
    }

    /// Builds an agent from a total update closure.
    pub fn from_fn(
        state_names: Vec<String>,
        start: usize,
        iface: &Interface,
        policy: Vec<Dist>,
        mut update: impl FnMut(usize, usize, usize) -> usize,
    ) -> Self {
        let (na, no) = (iface.num_actions(), iface.num_observations());
        let mut table = Vec::with_capacity(state_names.len() * na * no);
        for s in 0..state_names.len() {
            for a in 0..na {
                for o in 0..no {
                    table.push(Some(update(s, a, o)));
                }
            }
        }
        BoundedAgent::new(state_names, start, na, no, policy, table)
    }

    /// Number of agent states, `|λ|`.
    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    pub fn num_observations(&self) -> usize {
        self.num_observations
    }

    pub fn state_name(&self, s: usize) -> &str {
        &self.state_names[s]
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn policy(&self, s: usize) -> &Dist {
        &self.policy[s]
    }

    pub fn next_state(&self, s: usize, a: usize, o: usize) -> Option<usize> {
        let i = (s * self.num_actions + a) * self.num_observations + o;
        self.update.get(i).copied().flatten()
    }

    /// Folds the update over `h` from the start state.
    pub fn run_update(&self, h: &History) -> Result<usize> {
        let mut s = self.start;
        for (i, &(a, o)) in h.steps().iter().enumerate() {
            if a >= self.num_actions || o >= self.num_observations {
                return Err(Error::input(format!("history step {i} uses unknown symbol ({a}, {o})")));
            }
            s = self
                .next_state(s, a, o)
                .ok_or_else(|| Error::input(format!("no update entry for ({s}, {a}, {o})")))?;
        }
        Ok(s)
    }
}

/// Lists every well-formedness violation of `agent` against `iface`.
pub fn validate_agent(agent: &BoundedAgent, iface: &Interface) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = agent.num_states();
    let (na, no) = (iface.num_actions(), iface.num_observations());
    if n == 0 {
        report.push(Violation::NoStates);
        return report;
    }
    if agent.num_actions != na {
        report.push(Violation::DimensionMismatch { what: "agent actions".into(), expected: na, found: agent.num_actions });
    }
    if agent.num_observations != no {
        report.push(Violation::DimensionMismatch {
            what: "agent observations".into(),
            expected: no,
            found: agent.num_observations,
        });
    }
    if !report.is_ok() {
        return report;
    }
    if agent.start >= n {
        report.push(Violation::StartOutOfRange { start: agent.start, states: n });
    }
    if agent.policy.len() != n {
        report.push(Violation::DimensionMismatch { what: "policy rows".into(), expected: n, found: agent.policy.len() });
    }
    for (s, d) in agent.policy.iter().enumerate() {
        if d.len() != na {
            report.push(Violation::DimensionMismatch {
                what: format!("policy of state {s}"),
                expected: na,
                found: d.len(),
            });
        } else if let Some(detail) = d.defect() {
            report.push(Violation::NotNormalized { what: format!("policy of state {s}"), detail });
        }
    }
    if agent.update.len() != n * na * no {
        report.push(Violation::DimensionMismatch {
            what: "update entries".into(),
            expected: n * na * no,
            found: agent.update.len(),
        });
    }
    for s in 0..n {
        for a in 0..na {
            for o in 0..no {
                match agent.update.get((s * na + a) * no + o).copied().flatten() {
                    None => report.push(Violation::MissingUpdate { state: s, action: a, observation: o }),
                    Some(t) if t >= n => {
                        report.push(Violation::DanglingState { state: s, action: a, observation: o, target: t })
                    }
                    Some(_) => {}
                }
            }
        }
    }
    report
}

/// A pair of update entries that share a successor but differ in observation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LastObsWitness {
    pub first: (usize, usize, usize),
    pub second: (usize, usize, usize),
    pub successor: usize,
}

/// Checks `u(s,a,o) = u(s',a',o') ⇒ o = o'`: the successor state determines
/// the last observation. Returns the first counterexample in table order.
pub fn check_last_obs_condition(agent: &BoundedAgent) -> (bool, Option<LastObsWitness>) {
    let mut seen: Vec<Option<(usize, usize, usize)>> = vec![None; agent.num_states()];
    for s in 0..agent.num_states() {
        for a in 0..agent.num_actions {
            for o in 0..agent.num_observations {
                let Some(t) = agent.next_state(s, a, o) else { continue };
                match seen[t] {
                    None => seen[t] = Some((s, a, o)),
                    Some(first) if first.2 != o => {
                        return (false, Some(LastObsWitness { first, second: (s, a, o), successor: t }));
                    }
                    Some(_) => {}
                }
            }
        }
    }
    (true, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iface() -> Interface {
        Interface::new(["a1", "a2"], ["o1", "o2"]).unwrap()
    }

    fn constant(iface: &Interface) -> BoundedAgent {
        BoundedAgent::from_fn(vec!["s0".into()], 0, iface, vec![Dist::point(2, 0)], |_, _, _| 0)
    }

    #[test]
    fn constant_agent_is_well_formed() {
        let iface = iface();
        assert!(validate_agent(&constant(&iface), &iface).is_ok());
    }

    #[test]
    fn unnormalized_policy_is_reported() {
        let iface = iface();
        let agent = BoundedAgent::from_fn(vec!["s0".into()], 0, &iface, vec![Dist::unchecked(vec![0.9, 0.0])], |_, _, _| 0);
        let report = validate_agent(&agent, &iface);
        assert!(matches!(report.violations.as_slice(), [Violation::NotNormalized { .. }]));
    }

    #[test]
    fn missing_and_dangling_entries_are_reported() {
        let iface = iface();
        let mut update = vec![Some(0); 4];
        update[1] = None;
        update[2] = Some(7);
        let agent = BoundedAgent::new(vec!["s0".into()], 3, 2, 2, vec![Dist::point(2, 0)], update);
        let report = validate_agent(&agent, &iface);
        assert_eq!(report.violations.len(), 3);
        assert!(report.violations.contains(&Violation::StartOutOfRange { start: 3, states: 1 }));
        assert!(report.violations.contains(&Violation::MissingUpdate { state: 0, action: 0, observation: 1 }));
        assert!(report
            .violations
            .contains(&Violation::DanglingState { state: 0, action: 1, observation: 0, target: 7 }));
    }

    #[test]
    fn run_update_base_cases() {
        let iface = iface();
        let agent = constant(&iface);
        assert_eq!(agent.run_update(&History::empty()).unwrap(), 0);
        let h = History::from_symbols(&iface, &[("a1", "o2"), ("a2", "o1")]).unwrap();
        assert_eq!(agent.run_update(&h).unwrap(), 0);
        assert!(agent.run_update(&History::from_indices(vec![(5, 0)])).is_err());
    }

    #[test]
    fn last_obs_condition() {
        let iface = iface();
        let (ok, w) = check_last_obs_condition(&constant(&iface));
        assert!(!ok);
        let w = w.unwrap();
        assert_eq!(w.successor, 0);
        assert_ne!(w.first.2, w.second.2);

        let memoryless = BoundedAgent::from_fn(
            vec!["o1".into(), "o2".into()],
            0,
            &iface,
            vec![Dist::point(2, 0), Dist::point(2, 1)],
            |_, _, o| o,
        );
        assert_eq!(check_last_obs_condition(&memoryless), (true, None));
    }
}
