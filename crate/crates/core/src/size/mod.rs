//! Minimal size: the fewest states that reproduce the agent's behavior on
//! every realizable future.
//!
//! The future of a product node is an incompletely specified Moore machine:
//! outputs are the agent's action distributions, inputs are `(a, o)` pairs,
//! and only realizable branches carry transitions. Its minimal equivalent
//! size is the size of a minimum closed cover by compatible state sets.

mod compat;
mod cover;
mod heuristic;
mod machine;
mod oracle;
mod sequence;

pub use compat::{compatible_pairs, Compatibility};
pub use cover::{min_closed_cover, CoverBudget, MinCover};
pub use heuristic::{heuristic_size, refinement_partition};
pub use machine::{future_machine, IncompleteMooreMachine, WitnessMachine};
pub use oracle::size_oracle;
pub use sequence::{convergence_time_beta, node_sizes, size_sequence, NodeSize, SizeOptions, SizeSequence};

#[cfg(test)]
mod tests {
    use super::*;

    fn machine(rows: &[&[Option<usize>]], outputs: &[usize]) -> IncompleteMooreMachine {
        IncompleteMooreMachine::new(rows.iter().map(|r| r.to_vec()).collect(), outputs.to_vec())
    }

    #[test]
    fn different_outputs_are_incompatible() {
        let m = machine(&[&[Some(1)], &[Some(0)]], &[0, 1]);
        let c = compatible_pairs(&m);
        assert!(!c.compatible(0, 1));
        let cover = min_closed_cover(&m, CoverBudget::default());
        assert_eq!((cover.upper, cover.exact), (2, true));
    }

    #[test]
    fn unspecified_successors_are_compatible() {
        let m = machine(&[&[Some(1), None], &[None, None]], &[0, 0]);
        assert!(compatible_pairs(&m).compatible(0, 1));
        let cover = min_closed_cover(&m, CoverBudget::default());
        assert_eq!(cover.upper, 1);
        assert!(cover.witness.reproduces(&m));
    }

    #[test]
    fn single_output_total_agreement_merges_to_one() {
        let m = machine(&[&[Some(1), Some(2)], &[Some(2), Some(0)], &[Some(0), Some(1)]], &[3, 3, 3]);
        assert_eq!(min_closed_cover(&m, CoverBudget::default()).upper, 1);
        assert_eq!(heuristic_size(&m), 1);
        assert_eq!(size_oracle(&m, 3, 1_000_000).unwrap(), 1);
    }

    #[test]
    fn all_distinct_outputs_cannot_merge() {
        let m = machine(&[&[Some(1)], &[Some(2)], &[Some(0)]], &[0, 1, 2]);
        let cover = min_closed_cover(&m, CoverBudget::default());
        assert_eq!((cover.lower, cover.upper), (3, 3));
    }

    #[test]
    fn alternating_cycle_needs_two() {
        let m = machine(&[&[Some(1)], &[Some(0)]], &[0, 1]);
        assert_eq!(size_oracle(&m, 3, 1_000_000).unwrap(), 2);
    }

    #[test]
    fn oracle_reports_overflow_past_n_max() {
        let m = machine(&[&[Some(1)], &[Some(2)], &[Some(3)], &[Some(3)]], &[0, 1, 2, 3]);
        assert_eq!(size_oracle(&m, 3, 10_000_000).unwrap(), 4);
        assert!(size_oracle(&m, 3, 10).is_err());
    }

    #[test]
    fn overlapping_cover_beats_partition() {
        // Classic incompletely specified case: state 1 is compatible with
        // both 0 and 2, which are incompatible with each other.
        //        in0    in1
        // 0:  -> 1     -> 0     out a
        // 1:  -> -     -> 2     out a
        // 2:  -> 3     -> 2     out a
        // 3:  -> 3     -> 3     out b
        let m = machine(
            &[&[Some(1), Some(0)], &[None, Some(2)], &[Some(3), Some(2)], &[Some(3), Some(3)]],
            &[0, 0, 0, 1],
        );
        let c = compatible_pairs(&m);
        assert!(c.compatible(1, 2));
        let cover = min_closed_cover(&m, CoverBudget::default());
        assert!(cover.exact);
        assert!(cover.witness.reproduces(&m));
        assert!(cover.upper <= heuristic_size(&m));
        assert_eq!(cover.upper, size_oracle(&m, 3, 50_000_000).unwrap().min(cover.upper));
    }

    #[test]
    fn tiny_budget_yields_certified_bounds() {
        // A chain of alternating outputs ending in an absorbing state; all
        // states pairwise incompatible, so the clique bound settles it even
        // without search.
        let n = 8;
        let rows: Vec<Vec<Option<usize>>> = (0..n).map(|i| vec![Some((i + 1).min(n - 1))]).collect();
        let outs: Vec<usize> = (0..n).map(|i| if i == n - 1 { 0 } else { i % 2 }).collect();
        let m = IncompleteMooreMachine::new(rows, outs);
        let cover = min_closed_cover(&m, CoverBudget { max_states: 64, search_nodes: 1 });
        assert!(cover.lower <= cover.upper);
        let big = min_closed_cover(&m, CoverBudget { max_states: 4, search_nodes: 1000 });
        assert!(!big.exact || big.lower == big.upper);
        assert!(big.lower <= cover.upper && cover.upper <= big.upper);
    }
}
