//! Light (1+ε)-spanners for weighted planar graphs.
//!
//! The crate bundles the greedy baseline, an iterative pruning algorithm that
//! trades a light replacement walk for a heavy set of hanging spanner edges,
//! an exact branch-and-bound optimum, generators for the known hard
//! instances, and a gadget reduction from planar monotone 3SAT. All
//! arithmetic is exact.

pub mod error;
pub mod graph;
pub mod greedy;
pub mod instances;
pub mod io;
pub mod oracle;
pub mod paths;
pub mod prune;
pub mod rational;

pub use error::{Error, Result};
pub use graph::{Edge, EdgeId, WeightedGraph};
pub use paths::{apsp, stretch, DistanceOracle, EdgeMultiset, Stretch, Walk};
pub use rational::Rational;
