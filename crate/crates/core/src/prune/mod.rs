//! Iterative pruning of a spanner: trade heavy hanging edges for a light
//! replacement walk, round after round.

mod driver;
mod hanging;
mod scaling;
mod tables;

pub use driver::{
    iterate_prune, iterate_prune_from, iterate_prune_from_with, iterate_prune_with,
    iteration_budget, prune, prune_round, prune_with, IterateOutput, IterationLog, PruneState,
    RoundLog,
};
pub use hanging::{compute_b, is_hanging, pruning_kappa, BMember, BTable, HangingWitness};
pub use scaling::{
    prune_with_scaling, prune_with_scaling_with, scaled_stretch_bound, ContractedRun, ScalingOutput,
};
pub use tables::{dp_fill, dp_fill_with, select_best_triple, Back, BestTriple, DpEntry, DpTables};

/// Cells allowed per `(s, t)` slice of the tables.
pub const DEFAULT_CELL_CAP: u64 = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PruneOptions {
    /// Upper bound on `n · W`, the table length per vertex pair.
    pub cell_cap: u64,
}

impl Default for PruneOptions {
    fn default() -> Self {
        Self {
            cell_cap: DEFAULT_CELL_CAP,
        }
    }
}
