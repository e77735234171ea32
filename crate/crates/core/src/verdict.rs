//! Three-valued results and resource budgets.

use std::time::Duration;

use serde::Serialize;

/// Outcome of an analysis. `Yes` and `No` carry their witnesses; `Unknown`
/// says which budget ran out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Verdict<Y, N = ()> {
    Yes(Y),
    No(N),
    Unknown(String),
}

impl<Y, N> Verdict<Y, N> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Verdict::No(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown(_))
    }

    pub fn yes(&self) -> Option<&Y> {
        match self {
            Verdict::Yes(y) => Some(y),
            _ => None,
        }
    }

    pub fn no(&self) -> Option<&N> {
        match self {
            Verdict::No(n) => Some(n),
            _ => None,
        }
    }

    pub fn unknown_reason(&self) -> Option<&str> {
        match self {
            Verdict::Unknown(r) => Some(r),
            _ => None,
        }
    }

    /// Yes as `Some(true)`, No as `Some(false)`.
    pub fn decided(&self) -> Option<bool> {
        match self {
            Verdict::Yes(_) => Some(true),
            Verdict::No(_) => Some(false),
            Verdict::Unknown(_) => None,
        }
    }

    pub fn map_yes<Z>(self, f: impl FnOnce(Y) -> Z) -> Verdict<Z, N> {
        match self {
            Verdict::Yes(y) => Verdict::Yes(f(y)),
            Verdict::No(n) => Verdict::No(n),
            Verdict::Unknown(r) => Verdict::Unknown(r),
        }
    }

    pub fn map_no<Z>(self, f: impl FnOnce(N) -> Z) -> Verdict<Y, Z> {
        match self {
            Verdict::Yes(y) => Verdict::Yes(y),
            Verdict::No(n) => Verdict::No(f(n)),
            Verdict::Unknown(r) => Verdict::Unknown(r),
        }
    }

    /// Drops both witnesses.
    pub fn erase(&self) -> Verdict<()> {
        match self {
            Verdict::Yes(_) => Verdict::Yes(()),
            Verdict::No(_) => Verdict::No(()),
            Verdict::Unknown(r) => Verdict::Unknown(r.clone()),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Yes(_) => "yes",
            Verdict::No(_) => "no",
            Verdict::Unknown(_) => "unknown",
        }
    }
}

/// Limits for the integer feasibility engine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityBudget {
    /// Artificial bound for variables the relaxation leaves unbounded.
    pub max_component: i64,
    /// Branch-and-bound nodes per program.
    pub step_cap: usize,
    pub wall_clock: Option<Duration>,
}

impl Default for FeasibilityBudget {
    fn default() -> Self {
        FeasibilityBudget { max_component: 64, step_cap: 20_000, wall_clock: None }
    }
}

/// Limits for state-space exploration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplorationBudget {
    pub max_states: usize,
    /// Markings with a place above this count are not stored.
    pub max_token_bound: Option<u64>,
    /// Maximal BFS depth.
    pub max_sequence_len: Option<usize>,
}

impl Default for ExplorationBudget {
    fn default() -> Self {
        ExplorationBudget { max_states: 100_000, max_token_bound: None, max_sequence_len: None }
    }
}

/// Everything an analysis may consume.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budget {
    pub feasibility: FeasibilityBudget,
    pub exploration: ExplorationBudget,
    /// Largest place count for exhaustive subset enumeration.
    pub subset_cap: usize,
    /// Most elementary circuits enumerated.
    pub circuit_cap: usize,
    /// Intermediate row cap of the semiflow generator.
    pub semiflow_cap: usize,
    /// Most candidate markings tried when enumerating PR.
    pub pr_cap: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            feasibility: FeasibilityBudget::default(),
            exploration: ExplorationBudget::default(),
            subset_cap: 22,
            circuit_cap: 100_000,
            semiflow_cap: 100_000,
            pr_cap: 200_000,
        }
    }
}

impl Budget {
    pub fn with_max_states(mut self, n: usize) -> Self {
        self.exploration.max_states = n;
        self
    }

    pub fn with_y_bound(mut self, b: i64) -> Self {
        self.feasibility.max_component = b;
        self
    }

    pub fn with_token_bound(mut self, k: u64) -> Self {
        self.exploration.max_token_bound = Some(k);
        self
    }
}
