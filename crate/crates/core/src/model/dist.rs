use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sum tolerance accepted for a probability vector.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Default tolerance for deciding that two distributions are the same output.
pub const DEFAULT_DIST_TOL: f64 = 1e-12;

/// A finite distribution over symbol indices, stored densely.
///
/// The support is structural: index `i` is in the support iff `probs[i] > 0`.
/// There is no thresholding of tiny masses.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Dist {
    probs: Vec<f64>,
}

impl Dist {
    /// Checked constructor: entries finite and non-negative, summing to one.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        let d = Dist { probs };
        match d.defect() {
            None => Ok(d),
            Some(msg) => Err(Error::input(msg)),
        }
    }

    /// Wraps a probability vector without checking it. Validation reports
    /// catch malformed tables built this way.
    pub fn unchecked(probs: Vec<f64>) -> Self {
        Dist { probs }
    }

    pub fn point(len: usize, index: usize) -> Self {
        let mut probs = vec![0.0; len];
        probs[index] = 1.0;
        Dist { probs }
    }

    pub fn uniform(len: usize) -> Self {
        Dist { probs: vec![1.0 / len as f64; len] }
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn prob(&self, index: usize) -> f64 {
        self.probs.get(index).copied().unwrap_or(0.0)
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(i, _)| i)
    }

    pub fn sum(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Describes the first well-formedness problem, if any.
    pub fn defect(&self) -> Option<String> {
        if self.probs.is_empty() {
            return Some("empty distribution".into());
        }
        if let Some(p) = self.probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Some(format!("invalid probability {p}"));
        }
        let s = self.sum();
        if (s - 1.0).abs() > NORMALIZATION_TOL {
            return Some(format!("probabilities sum to {s}"));
        }
        None
    }

    pub fn is_normalized(&self) -> bool {
        self.defect().is_none()
    }

    pub fn canonical(&self, tol: f64) -> CanonicalDist {
        canonical_dist(self, tol)
    }
}

/// A distribution in canonical form together with the tolerance it is
/// compared under.
#[derive(Clone, Debug)]
pub struct CanonicalDist {
    probs: Vec<f64>,
    tol: f64,
}

impl CanonicalDist {
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Componentwise comparison at the larger of the two tolerances.
    ///
    /// Reflexive and symmetric; transitive only when both tolerances are 0.
    pub fn same_as(&self, other: &CanonicalDist) -> bool {
        let tol = self.tol.max(other.tol);
        let n = self.probs.len().max(other.probs.len());
        (0..n).all(|i| {
            let a = self.probs.get(i).copied().unwrap_or(0.0);
            let b = other.probs.get(i).copied().unwrap_or(0.0);
            (a - b).abs() <= tol
        })
    }
}

/// Canonical form: non-positive masses become `+0.0`, trailing zeros are
/// trimmed so vectors over the same alphabet of different lengths agree.
pub fn canonical_dist(d: &Dist, tol: f64) -> CanonicalDist {
    let mut probs: Vec<f64> = d
        .probs
        .iter()
        .map(|&p| if p > 0.0 { p } else { 0.0 })
        .collect();
    while probs.last() == Some(&0.0) {
        probs.pop();
    }
    CanonicalDist { probs, tol: tol.max(0.0) }
}

/// Assigns class ids to distributions by first match within tolerance, in
/// insertion order. With `tol = 0` this is exact equality.
#[derive(Clone, Debug, Default)]
pub struct OutputClasses {
    reps: Vec<CanonicalDist>,
    tol: f64,
}

impl OutputClasses {
    pub fn new(tol: f64) -> Self {
        OutputClasses { reps: Vec::new(), tol }
    }

    pub fn intern(&mut self, d: &Dist) -> usize {
        let c = canonical_dist(d, self.tol);
        if let Some(i) = self.reps.iter().position(|r| r.same_as(&c)) {
            return i;
        }
        self.reps.push(c);
        self.reps.len() - 1
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn representative(&self, class: usize) -> &CanonicalDist {
        &self.reps[class]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn order_independent_equality() {
        // {a1: .5, a2: .5} declared either way is the same dense vector.
        let a = Dist::new(vec![0.5, 0.5]).unwrap();
        let b = Dist::new(vec![0.5, 0.5]).unwrap();
        assert!(a.canonical(DEFAULT_DIST_TOL).same_as(&b.canonical(DEFAULT_DIST_TOL)));
    }

    #[test]
    fn equal_within_tolerance() {
        let a = Dist::new(vec![1.0, 0.0]).unwrap();
        let b = Dist::unchecked(vec![1.0 - 1e-15, 0.0]);
        assert!(a.canonical(1e-12).same_as(&b.canonical(1e-12)));
        assert!(!a.canonical(0.0).same_as(&b.canonical(0.0)));
    }

    #[test]
    fn distinct_distributions_differ() {
        let a = Dist::new(vec![0.6, 0.4]).unwrap();
        let b = Dist::new(vec![0.4, 0.6]).unwrap();
        assert!(!a.canonical(1e-12).same_as(&b.canonical(1e-12)));
    }

    #[test]
    fn defects_are_reported() {
        assert!(Dist::new(vec![0.9]).is_err());
        assert!(Dist::new(vec![1.5, -0.5]).is_err());
        assert!(Dist::new(vec![]).is_err());
        assert!(Dist::new(vec![f64::NAN, 1.0]).is_err());
        let d = Dist::new(vec![0.0, 1.0, 0.0]).unwrap();
        assert_eq!(d.support().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn interning_is_first_match() {
        let mut oc = OutputClasses::new(1e-12);
        assert_eq!(oc.intern(&Dist::point(2, 0)), 0);
        assert_eq!(oc.intern(&Dist::point(2, 1)), 1);
        assert_eq!(oc.intern(&Dist::unchecked(vec![1.0 - 1e-14, 1e-14])), 0);
        assert_eq!(oc.len(), 2);
    }

    fn dist_strategy() -> impl Strategy<Value = Dist> {
        prop::collection::vec(0u32..4, 3).prop_filter_map("zero mass", |w| {
            let s: u32 = w.iter().sum();
            (s > 0).then(|| Dist::unchecked(w.iter().map(|&x| x as f64 / s as f64).collect()))
        })
    }

    proptest! {
        #[test]
        fn exact_equality_is_an_equivalence(a in dist_strategy(), b in dist_strategy(), c in dist_strategy()) {
            let (ca, cb, cc) = (a.canonical(0.0), b.canonical(0.0), c.canonical(0.0));
            prop_assert!(ca.same_as(&ca));
            prop_assert_eq!(ca.same_as(&cb), cb.same_as(&ca));
            if ca.same_as(&cb) && cb.same_as(&cc) {
                prop_assert!(ca.same_as(&cc));
            }
        }

        #[test]
        fn tolerant_equality_is_reflexive_and_symmetric(a in dist_strategy(), b in dist_strategy(), tol in 0.0f64..0.5) {
            let (ca, cb) = (a.canonical(tol), b.canonical(tol));
            prop_assert!(ca.same_as(&ca));
            prop_assert_eq!(ca.same_as(&cb), cb.same_as(&ca));
        }
    }
}
