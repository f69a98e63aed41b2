use crate::error::Result;
use crate::model::Interface;

/// A finite sequence of `(action, observation)` index pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct History {
    steps: Vec<(usize, usize)>,
}

impl History {
    pub fn empty() -> Self {
        History::default()
    }

    pub fn from_indices(steps: Vec<(usize, usize)>) -> Self {
        History { steps }
    }

    /// Resolves symbol names against `iface`. Unknown symbols are input errors.
    pub fn from_symbols(iface: &Interface, steps: &[(&str, &str)]) -> Result<Self> {
        steps
            .iter()
            .map(|(a, o)| Ok((iface.action_index(a)?, iface.observation_index(o)?)))
            .collect::<Result<Vec<_>>>()
            .map(|steps| History { steps })
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> &[(usize, usize)] {
        &self.steps
    }

    pub fn push(&mut self, action: usize, observation: usize) {
        self.steps.push((action, observation));
    }

    pub fn extended(&self, action: usize, observation: usize) -> Self {
        let mut h = self.clone();
        h.push(action, observation);
        h
    }
}
