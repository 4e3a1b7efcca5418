//! Instance generators: the ladder families, the greedy-hard instance, and
//! the 3SAT gadget reduction.

mod greedy_hard;
mod ladder;
mod reduction;
mod sat;

pub use greedy_hard::{gen_greedy_hard, GreedyHard};
pub use ladder::{gen_ladder, gen_multiladder};
pub use reduction::{
    assignment_to_spanner, reduce_sat, spanner_to_assignment, threshold, EdgeRole, ReductionOutput,
};
pub use sat::{Clause, ForcedAssignment, Preprocessed, SatInstance, Side};
