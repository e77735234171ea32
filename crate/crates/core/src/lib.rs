//! Weighted Petri net analysis centred on the question whether the reachable
//! markings of a system coincide with the solutions of its state equation.

pub mod algebra;
pub mod behavior;
pub mod fixtures;
pub mod format;
pub mod net;
pub mod prr;
pub mod structure;
pub mod verdict;

/// Token counts, arc weights and T-vector components.
pub type Tokens = u64;
/// Exact rational scalar of the linear solvers.
pub type Rational = num_rational::BigRational;

pub use net::{Marking, Net, NetBuilder, NetError, Node, System, TVector};
pub use verdict::{Budget, ExplorationBudget, FeasibilityBudget, Verdict};
