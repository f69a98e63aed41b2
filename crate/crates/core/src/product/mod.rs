//! The reachable agent × environment product and its layer structure.
//!
//! Both the agent update and the environment update are deterministic, so a
//! realizable history is summarized exactly by the node it ends in. History
//! quantifiers become finite quantifiers over nodes: "some history of length
//! at least `t` ends here" is membership in `R_t`, and "some realizable
//! suffix leads from here to there" is graph reachability.

mod graph;
mod layers;
mod reach;

pub use graph::{build_product, Edge, ProductGraph, ProductNode};
pub use layers::{default_layer_cap, layer_sequence, reachable_from_time, LayerSequence};
pub use reach::{enumerate_histories, positive_distances, revisit_pairs};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{BoundedAgent, Dist, FiniteEnvironment, Interface};

    fn one_obs() -> Interface {
        Interface::new(["a1", "a2"], ["o"]).unwrap()
    }

    fn bandit(iface: &Interface) -> FiniteEnvironment {
        FiniteEnvironment::from_fn(vec!["x".into()], 0, iface, |_, _| Dist::point(1, 0), |_, _, _| 0, |_, a, _| a as f64)
    }

    fn uniform_agent(iface: &Interface) -> BoundedAgent {
        BoundedAgent::from_fn(vec!["s".into()], 0, iface, vec![Dist::uniform(2)], |_, _, _| 0)
    }

    /// Agent that alternates between two states, one action each.
    fn alternating(iface: &Interface) -> BoundedAgent {
        BoundedAgent::from_fn(
            vec!["even".into(), "odd".into()],
            0,
            iface,
            vec![Dist::point(2, 0), Dist::point(2, 1)],
            |s, _, _| 1 - s,
        )
    }

    #[test]
    fn degenerate_product() {
        let iface = one_obs();
        let g = build_product(&iface, &uniform_agent(&iface), &bandit(&iface)).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.num_edges(), 2);
        let total: f64 = g.edges(0).iter().map(|e| e.prob).sum();
        assert!((total - 1.0).abs() < 1e-9);
        assert_eq!(g.expected_reward(0), 0.5);
        let text = g.to_adjacency_text();
        assert_eq!(text.lines().count(), 3);
        assert!(text.contains("0 a2 o 0.5 0"));
    }

    #[test]
    fn interface_mismatch_is_input_error() {
        let iface = one_obs();
        let other = Interface::new(["a1", "a2"], ["o1", "o2"]).unwrap();
        let env = FiniteEnvironment::from_fn(vec!["x".into()], 0, &other, |_, _| Dist::point(2, 0), |_, _, _| 0, |_, _, _| 0.0);
        let err = build_product(&iface, &uniform_agent(&iface), &env).unwrap_err();
        assert!(matches!(err, crate::Error::Input(_)));
    }

    #[test]
    fn self_loop_layers() {
        let iface = one_obs();
        let g = build_product(&iface, &uniform_agent(&iface), &bandit(&iface)).unwrap();
        let ls = layer_sequence(&g, None).unwrap();
        assert_eq!((ls.preperiod(), ls.period()), (0, 1));
        assert_eq!(reachable_from_time(&ls, 0), vec![0]);
        assert_eq!(revisit_pairs(&g, &[0]), vec![(0, 0)]);
    }

    #[test]
    fn alternation_has_period_two() {
        let iface = one_obs();
        let g = build_product(&iface, &alternating(&iface), &bandit(&iface)).unwrap();
        let ls = layer_sequence(&g, None).unwrap();
        assert_eq!((ls.preperiod(), ls.period()), (0, 2));
        assert_eq!(ls.layer(5), &[1]);
        assert_eq!(reachable_from_time(&ls, 7), vec![0, 1]);
    }

    #[test]
    fn layer_cap_is_a_resource_error() {
        let iface = one_obs();
        let g = build_product(&iface, &alternating(&iface), &bandit(&iface)).unwrap();
        assert!(matches!(layer_sequence(&g, Some(1)), Err(crate::Error::Resource(_))));
    }

    #[test]
    fn history_enumeration_counts_branches() {
        let iface = one_obs();
        let g = build_product(&iface, &uniform_agent(&iface), &bandit(&iface)).unwrap();
        let hs = enumerate_histories(&g, 0, 100).unwrap();
        assert_eq!(hs.len(), 1);
        assert!(hs[0].0.is_empty());
        let hs = enumerate_histories(&g, 2, 100).unwrap();
        assert_eq!(hs.iter().filter(|(h, _)| h.len() == 2).count(), 4);
        assert!(enumerate_histories(&g, 10, 50).is_err());
    }
}
