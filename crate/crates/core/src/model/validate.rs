use std::fmt;

use serde::{Deserialize, Serialize};

/// One well-formedness problem found in an agent or environment table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// Table dimensions disagree with the interface.
    DimensionMismatch { what: String, expected: usize, found: usize },
    /// The start state index is outside the state set.
    StartOutOfRange { start: usize, states: usize },
    /// A required `(state, action, observation)` update entry is absent.
    MissingUpdate { state: usize, action: usize, observation: usize },
    /// An update entry points outside the state set.
    DanglingState { state: usize, action: usize, observation: usize, target: usize },
    /// A policy or emission distribution is not a probability vector.
    NotNormalized { what: String, detail: String },
    /// A reward entry is NaN or infinite.
    NonFiniteReward { state: usize, action: usize, observation: usize },
    /// The state set is empty.
    NoStates,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DimensionMismatch { what, expected, found } => {
                write!(f, "{what}: expected {expected}, found {found}")
            }
            Violation::StartOutOfRange { start, states } => {
                write!(f, "start state {start} out of range (0..{states})")
            }
            Violation::MissingUpdate { state, action, observation } => {
                write!(f, "missing update entry for (state {state}, action {action}, observation {observation})")
            }
            Violation::DanglingState { state, action, observation, target } => write!(
                f,
                "update (state {state}, action {action}, observation {observation}) points to unknown state {target}"
            ),
            Violation::NotNormalized { what, detail } => write!(f, "{what}: {detail}"),
            Violation::NonFiniteReward { state, action, observation } => {
                write!(f, "non-finite reward at (state {state}, action {action}, observation {observation})")
            }
            Violation::NoStates => write!(f, "state set is empty"),
        }
    }
}

/// Every violation found by a validator. Empty means well-formed.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub(crate) fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }

    pub fn into_result(self) -> crate::Result<()> {
        if self.is_ok() {
            Ok(())
        } else {
            Err(crate::Error::Validation(self))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "  - {v}")?;
        }
        Ok(())
    }
}
