use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The action and observation alphabets shared by an agent and its environment.
///
/// Symbols are stored in declaration order, and that order is used for every
/// tie-break in the crate (greedy action choice, edge order, export order).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interface {
    actions: Vec<String>,
    observations: Vec<String>,
}

impl Interface {
    pub fn new<A, O>(actions: A, observations: O) -> Result<Self>
    where
        A: IntoIterator,
        A::Item: Into<String>,
        O: IntoIterator,
        O::Item: Into<String>,
    {
        let actions: Vec<String> = actions.into_iter().map(Into::into).collect();
        let observations: Vec<String> = observations.into_iter().map(Into::into).collect();
        check_symbols("action", &actions)?;
        check_symbols("observation", &observations)?;
        Ok(Interface { actions, observations })
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn observations(&self) -> &[String] {
        &self.observations
    }

    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    pub fn num_observations(&self) -> usize {
        self.observations.len()
    }

    /// Number of `(action, observation)` input symbols seen by an agent update.
    pub fn num_inputs(&self) -> usize {
        self.actions.len() * self.observations.len()
    }

    pub fn action_index(&self, name: &str) -> Result<usize> {
        self.actions
            .iter()
            .position(|a| a == name)
            .ok_or_else(|| Error::input(format!("unknown action `{name}`")))
    }

    pub fn observation_index(&self, name: &str) -> Result<usize> {
        self.observations
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| Error::input(format!("unknown observation `{name}`")))
    }
}

fn check_symbols(kind: &str, symbols: &[String]) -> Result<()> {
    if symbols.is_empty() {
        return Err(Error::input(format!("{kind} set must be non-empty")));
    }
    for (i, s) in symbols.iter().enumerate() {
        if symbols[..i].contains(s) {
            return Err(Error::input(format!("duplicate {kind} symbol `{s}`")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_duplicate_symbols() {
        assert!(Interface::new(Vec::<String>::new(), ["o"]).is_err());
        assert!(Interface::new(["a", "a"], ["o"]).is_err());
        let iface = Interface::new(["a", "b"], ["o"]).unwrap();
        assert_eq!(iface.action_index("b").unwrap(), 1);
        assert!(iface.observation_index("x").is_err());
        assert_eq!(iface.num_inputs(), 2);
    }
}
