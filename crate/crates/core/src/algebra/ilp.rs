//! Integer feasibility and minimization by branch-and-bound over exact
//! rational relaxations.
//!
//! A `No` is only returned with a proof: contradictory bounds, an infeasible
//! relaxation, a lattice obstruction, or an exhausted search box whose every
//! side was established by the relaxation itself.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use super::lattice::solve_integer;
use super::lp::{LinearProgram, LpOutcome, Relation};
use super::scalar::ExactScalar;
use crate::verdict::{FeasibilityBudget, Verdict};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<i64>,
    pub rel: Relation,
    pub rhs: i64,
}

impl Constraint {
    pub fn new(coeffs: Vec<i64>, rel: Relation, rhs: i64) -> Self {
        Constraint { coeffs, rel, rhs }
    }

    pub fn holds(&self, x: &[i64]) -> bool {
        let lhs: i128 = self.coeffs.iter().zip(x).map(|(&a, &v)| a as i128 * v as i128).sum();
        let rhs = self.rhs as i128;
        match self.rel {
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
        }
    }
}

/// Integer variables with optional bounds, linear constraints and an
/// optional objective to minimize.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerProgram {
    pub num_vars: usize,
    pub lower: Vec<Option<i64>>,
    pub upper: Vec<Option<i64>>,
    pub constraints: Vec<Constraint>,
    pub objective: Option<Vec<i64>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IlpError {
    #[error("constraint {index} has {found} coefficients, expected {expected}")]
    Malformed { index: usize, expected: usize, found: usize },
    #[error("bound vectors have the wrong length")]
    BadBounds,
}

/// Why a program has no integer solution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Infeasibility {
    ContradictoryBounds,
    RelaxationInfeasible,
    LatticeObstruction,
    /// Every node of a box fixed by the relaxation was refuted.
    Exhausted { nodes: usize },
}

impl IntegerProgram {
    pub fn nonnegative(num_vars: usize) -> Self {
        IntegerProgram {
            num_vars,
            lower: vec![Some(0); num_vars],
            upper: vec![None; num_vars],
            constraints: Vec::new(),
            objective: None,
        }
    }

    pub fn free(num_vars: usize) -> Self {
        IntegerProgram {
            num_vars,
            lower: vec![None; num_vars],
            upper: vec![None; num_vars],
            constraints: Vec::new(),
            objective: None,
        }
    }

    pub fn add(&mut self, coeffs: Vec<i64>, rel: Relation, rhs: i64) {
        self.constraints.push(Constraint::new(coeffs, rel, rhs));
    }

    pub fn satisfied_by(&self, x: &[i64]) -> bool {
        x.len() == self.num_vars
            && (0..self.num_vars).all(|j| {
                self.lower[j].is_none_or(|l| x[j] >= l) && self.upper[j].is_none_or(|u| x[j] <= u)
            })
            && self.constraints.iter().all(|c| c.holds(x))
    }

    fn validate(&self) -> Result<(), IlpError> {
        if self.lower.len() != self.num_vars || self.upper.len() != self.num_vars {
            return Err(IlpError::BadBounds);
        }
        if let Some(c) = &self.objective {
            if c.len() != self.num_vars {
                return Err(IlpError::BadBounds);
            }
        }
        for (index, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != self.num_vars {
                return Err(IlpError::Malformed { index, expected: self.num_vars, found: c.coeffs.len() });
            }
        }
        Ok(())
    }

    fn relaxation(&self, lower: &[Option<i64>], upper: &[Option<i64>]) -> LinearProgram<Rational> {
        let q = |v: i64| Rational::from_i64(v);
        LinearProgram {
            num_vars: self.num_vars,
            rows: self
                .constraints
                .iter()
                .map(|c| (c.coeffs.iter().map(|&v| q(v)).collect(), c.rel, q(c.rhs)))
                .collect(),
            lower: lower.iter().map(|b| b.map(q)).collect(),
            upper: upper.iter().map(|b| b.map(q)).collect(),
        }
    }

    fn objective_q(&self) -> Vec<Rational> {
        match &self.objective {
            Some(c) => c.iter().map(|&v| Rational::from_i64(v)).collect(),
            None => vec![Rational::zero(); self.num_vars],
        }
    }
}

fn to_ints(x: &[Rational]) -> Option<Vec<i64>> {
    x.iter().map(|v| if v.is_integral() { v.to_integer().to_i64() } else { None }).collect()
}

/// Decides whether `prog` has an integer solution. With an objective, the
/// returned witness is optimal unless the node cap interrupted the search.
pub fn integer_feasibility(
    prog: &IntegerProgram,
    budget: &FeasibilityBudget,
) -> Result<Verdict<Vec<i64>, Infeasibility>, IlpError> {
    prog.validate()?;
    let n = prog.num_vars;
    for j in 0..n {
        if let (Some(l), Some(u)) = (prog.lower[j], prog.upper[j]) {
            if l > u {
                return Ok(Verdict::No(Infeasibility::ContradictoryBounds));
            }
        }
    }
    let cost = prog.objective_q();
    let root = prog.relaxation(&prog.lower, &prog.upper);
    let root_outcome = root.minimize(&cost);
    if root_outcome == LpOutcome::Infeasible {
        return Ok(Verdict::No(Infeasibility::RelaxationInfeasible));
    }
    // Lattice obstruction on the equality rows.
    let eq: Vec<&Constraint> = prog.constraints.iter().filter(|c| c.rel == Relation::Eq).collect();
    if !eq.is_empty() {
        let a: Vec<Vec<i64>> = eq.iter().map(|c| c.coeffs.clone()).collect();
        let b: Vec<i64> = eq.iter().map(|c| c.rhs).collect();
        if solve_integer(&a, &b, n).is_none() {
            return Ok(Verdict::No(Infeasibility::LatticeObstruction));
        }
    }
    // Box: declared bounds, else bounds read off the relaxation, else artificial.
    let cap = budget.max_component.max(0);
    let mut certified = true;
    let mut lower = prog.lower.clone();
    let mut upper = prog.upper.clone();
    for j in 0..n {
        let mut unit = vec![Rational::zero(); n];
        unit[j] = Rational::from_i64(1);
        if upper[j].is_none() {
            upper[j] = match root.maximize(&unit) {
                LpOutcome::Optimal { value, .. } => Some(value.floor_i64().unwrap_or(i64::MAX / 4)),
                LpOutcome::Infeasible => return Ok(Verdict::No(Infeasibility::RelaxationInfeasible)),
                LpOutcome::Unbounded => {
                    certified = false;
                    Some(cap.max(lower[j].unwrap_or(0)))
                }
            };
        }
        if lower[j].is_none() {
            lower[j] = match root.minimize(&unit) {
                LpOutcome::Optimal { value, .. } => Some(value.ceil_i64().unwrap_or(i64::MIN / 4)),
                LpOutcome::Infeasible => return Ok(Verdict::No(Infeasibility::RelaxationInfeasible)),
                LpOutcome::Unbounded => {
                    certified = false;
                    Some((-cap).min(upper[j].unwrap_or(0)))
                }
            };
        }
    }
    let start = Instant::now();
    type Bounds = Vec<Option<i64>>;
    let mut stack: Vec<(Bounds, Bounds)> = vec![(lower, upper)];
    let mut nodes = 0usize;
    let mut best: Option<(Vec<i64>, BigInt)> = None;
    let mut interrupted = None;
    while let Some((lo, hi)) = stack.pop() {
        if nodes >= budget.step_cap {
            interrupted = Some(format!("branch-and-bound node cap {} reached", budget.step_cap));
            break;
        }
        if let Some(limit) = budget.wall_clock {
            if start.elapsed() > limit {
                interrupted = Some(format!("wall-clock cap {limit:?} reached"));
                break;
            }
        }
        nodes += 1;
        if (0..n).any(|j| matches!((lo[j], hi[j]), (Some(l), Some(u)) if l > u)) {
            continue;
        }
        let lp = prog.relaxation(&lo, &hi);
        let (x, value) = match lp.minimize(&cost) {
            LpOutcome::Optimal { x, value } => (x, value),
            LpOutcome::Infeasible => continue,
            // Every variable is boxed, so this cannot happen; treat defensively.
            LpOutcome::Unbounded => {
                interrupted = Some("unbounded relaxation inside a finite box".into());
                break;
            }
        };
        if let Some((_, incumbent)) = &best {
            if value.ceil().to_integer() >= *incumbent {
                continue;
            }
        }
        match x.iter().position(|v| !v.is_integral()) {
            None => {
                let Some(ints) = to_ints(&x) else {
                    interrupted = Some("solution component exceeds 64-bit range".into());
                    break;
                };
                debug_assert!(prog.satisfied_by(&ints));
                if prog.objective.is_none() {
                    return Ok(Verdict::Yes(ints));
                }
                best = Some((ints, value.to_integer()));
            }
            Some(j) => {
                let (Some(fl), Some(ce)) = (x[j].floor_i64(), x[j].ceil_i64()) else {
                    interrupted = Some("branching value exceeds 64-bit range".into());
                    break;
                };
                let mut up_lo = lo.clone();
                up_lo[j] = Some(ce);
                let mut down_hi = hi.clone();
                down_hi[j] = Some(fl);
                stack.push((up_lo, hi));
                stack.push((lo, down_hi));
            }
        }
    }
    if let Some((x, _)) = best {
        return Ok(Verdict::Yes(x));
    }
    if let Some(reason) = interrupted {
        return Ok(Verdict::Unknown(reason));
    }
    if certified {
        Ok(Verdict::No(Infeasibility::Exhausted { nodes }))
    } else {
        Ok(Verdict::Unknown(format!("no solution with unbounded components capped at {cap}; bound exhausted")))
    }
}

/// Like [`integer_feasibility`], but when the search box is not certified,
/// uses the fact that the program is invariant under subtracting any of
/// `flows` (non-negative integer directions covering its recession cone).
/// Some solution then has, for every flow `g`, a coordinate `j` in the
/// support of `g` with `x_j < g_j`. Each such choice yields a bounded
/// program, so exhausting all choices proves infeasibility.
///
/// The caller guarantees the invariance; `flows` must be complete.
pub fn integer_feasibility_modulo(
    prog: &IntegerProgram,
    flows: &[Vec<u64>],
    budget: &FeasibilityBudget,
) -> Result<Verdict<Vec<i64>, Infeasibility>, IlpError> {
    let first = integer_feasibility(prog, budget)?;
    if !first.is_unknown() || flows.is_empty() {
        return Ok(first);
    }
    let mut leaves = 0usize;
    let mut total_nodes = 0usize;
    let mut pending_unknown: Option<String> = None;
    let mut best: Option<(Vec<i64>, i128)> = None;
    let mut stack: Vec<(usize, Vec<Option<i64>>)> = vec![(0, prog.upper.clone())];
    while let Some((k, upper)) = stack.pop() {
        if leaves >= budget.step_cap {
            return Ok(Verdict::Unknown(format!("semiflow case split cap {} reached", budget.step_cap)));
        }
        // Skip flows an earlier choice already blocks.
        let mut k = k;
        while k < flows.len()
            && flows[k].iter().enumerate().any(|(j, &g)| g > 0 && upper[j].is_some_and(|u| u < g as i64))
        {
            k += 1;
        }
        let mut sub = prog.clone();
        sub.upper = upper.clone();
        if k == flows.len() {
            leaves += 1;
            match integer_feasibility(&sub, budget)? {
                Verdict::Yes(x) => {
                    let Some(c) = &prog.objective else { return Ok(Verdict::Yes(x)) };
                    let v: i128 = c.iter().zip(&x).map(|(&a, &b)| a as i128 * b as i128).sum();
                    if best.as_ref().is_none_or(|(_, bv)| v < *bv) {
                        best = Some((x, v));
                    }
                }
                Verdict::No(Infeasibility::Exhausted { nodes }) => total_nodes += nodes,
                Verdict::No(_) => {}
                Verdict::Unknown(r) => pending_unknown = Some(r),
            }
            continue;
        }
        if !sub.relaxation(&sub.lower, &sub.upper).minimize(&sub.objective_q()).is_feasible() {
            continue;
        }
        let g = &flows[k];
        for j in (0..g.len()).rev() {
            if g[j] == 0 {
                continue;
            }
            let mut u = upper.clone();
            let cap = g[j] as i64 - 1;
            u[j] = Some(u[j].map_or(cap, |old| old.min(cap)));
            stack.push((k + 1, u));
        }
    }
    if let Some((x, _)) = best {
        return Ok(Verdict::Yes(x));
    }
    match pending_unknown {
        Some(r) => Ok(Verdict::Unknown(r)),
        None => Ok(Verdict::No(Infeasibility::Exhausted { nodes: total_nodes })),
    }
}
