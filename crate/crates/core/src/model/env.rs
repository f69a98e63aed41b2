use crate::model::{Dist, Interface, ValidationReport, Violation};

/// A finite environment whose hidden state evolves deterministically given
/// the emitted observation.
///
/// `emission[x * |A| + a]` is a distribution over observations; the update
/// and reward for `(x, a, o)` live at `(x * |A| + a) * |O| + o`. The reward
/// is paid on the transition out of `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteEnvironment {
    state_names: Vec<String>,
    start: usize,
    num_actions: usize,
    num_observations: usize,
    emission: Vec<Dist>,
    update: Vec<Option<usize>>,
    reward: Vec<f64>,
}

impl FiniteEnvironment {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        state_names: Vec<String>,
        start: usize,
        num_actions: usize,
        num_observations: usize,
        emission: Vec<Dist>,
        update: Vec<Option<usize>>,
        reward: Vec<f64>,
    ) -> Self {
        FiniteEnvironment { state_names, start, num_actions, num_observations, emission, update, reward }
    }

    /// Builds an environment from closures over `(x, a)` and `(x, a, o)`.
    pub fn from_fn(
        state_names: Vec<String>,
        start: usize,
        iface: &Interface,
        mut emission: impl FnMut(usize, usize) -> Dist,
        mut update: impl FnMut(usize, usize, usize) -> usize,
        mut reward: impl FnMut(usize, usize, usize) -> f64,
    ) -> Self {
        let (na, no) = (iface.num_actions(), iface.num_observations());
        let n = state_names.len();
        let mut em = Vec::with_capacity(n * na);
        let mut up = Vec::with_capacity(n * na * no);
        let mut rw = Vec::with_capacity(n * na * no);
        for x in 0..n {
            for a in 0..na {
                em.push(emission(x, a));
                for o in 0..no {
                    up.push(Some(update(x, a, o)));
                    rw.push(reward(x, a, o));
                }
            }
        }
        FiniteEnvironment::new(state_names, start, na, no, em, up, rw)
    }

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

    pub fn state_name(&self, x: usize) -> &str {
        &self.state_names[x]
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn emission(&self, x: usize, a: usize) -> &Dist {
        &self.emission[x * self.num_actions + a]
    }

    fn entry(&self, x: usize, a: usize, o: usize) -> usize {
        (x * self.num_actions + a) * self.num_observations + o
    }

    pub fn next_state(&self, x: usize, a: usize, o: usize) -> Option<usize> {
        self.update.get(self.entry(x, a, o)).copied().flatten()
    }

    pub fn reward(&self, x: usize, a: usize, o: usize) -> f64 {
        self.reward[self.entry(x, a, o)]
    }

    /// `(r_min, r_max)` over every table entry.
    pub fn reward_bounds(&self) -> (f64, f64) {
        self.reward
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &r| (lo.min(r), hi.max(r)))
    }

    /// Folds the environment update over a history from the start state.
    pub fn run_update(&self, steps: &[(usize, usize)]) -> Option<usize> {
        steps.iter().try_fold(self.start, |x, &(a, o)| self.next_state(x, a, o))
    }
}

/// Lists every well-formedness violation of `env` against `iface`.
pub fn validate_env(env: &FiniteEnvironment, iface: &Interface) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = env.num_states();
    let (na, no) = (iface.num_actions(), iface.num_observations());
    if n == 0 {
        report.push(Violation::NoStates);
        return report;
    }
    if env.num_actions != na {
        report.push(Violation::DimensionMismatch { what: "environment actions".into(), expected: na, found: env.num_actions });
    }
    if env.num_observations != no {
        report.push(Violation::DimensionMismatch {
            what: "environment observations".into(),
            expected: no,
            found: env.num_observations,
        });
    }
    if !report.is_ok() {
        return report;
    }
    if env.start >= n {
        report.push(Violation::StartOutOfRange { start: env.start, states: n });
    }
    if env.emission.len() != n * na {
        report.push(Violation::DimensionMismatch {
            what: "emission rows".into(),
            expected: n * na,
            found: env.emission.len(),
        });
    }
    for (i, d) in env.emission.iter().enumerate() {
        let what = format!("emission of (state {}, action {})", i / na, i % na);
        if d.len() != no {
            report.push(Violation::DimensionMismatch { what, expected: no, found: d.len() });
        }
    }
    for (what, len) in [("update entries", env.update.len()), ("reward entries", env.reward.len())] {
        if len != n * na * no {
            report.push(Violation::DimensionMismatch { what: what.into(), expected: n * na * no, found: len });
        }
    }
    if !report.is_ok() {
        return report;
    }
    for x in 0..n {
        for a in 0..na {
            if let Some(detail) = env.emission(x, a).defect() {
                report.push(Violation::NotNormalized { what: format!("emission of (state {x}, action {a})"), detail });
            }
            for o in 0..no {
                match env.next_state(x, a, o) {
                    None => report.push(Violation::MissingUpdate { state: x, action: a, observation: o }),
                    Some(t) if t >= n => {
                        report.push(Violation::DanglingState { state: x, action: a, observation: o, target: t })
                    }
                    Some(_) => {}
                }
                if !env.reward(x, a, o).is_finite() {
                    report.push(Violation::NonFiniteReward { state: x, action: a, observation: o });
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_bad_emission_and_reward() {
        let iface = Interface::new(["a"], ["o1", "o2"]).unwrap();
        let env = FiniteEnvironment::from_fn(
            vec!["x".into()],
            0,
            &iface,
            |_, _| Dist::unchecked(vec![0.5, 0.4]),
            |_, _, _| 0,
            |_, _, o| if o == 0 { f64::NAN } else { 1.0 },
        );
        let report = validate_env(&env, &iface);
        assert_eq!(report.violations.len(), 2);
        assert_eq!(env.run_update(&[(0, 1), (0, 0)]), Some(0));
    }
}
