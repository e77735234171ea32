//! Incidence algebra, invariants and the state equation.

pub mod ilp;
pub mod lattice;
pub mod lp;
pub mod scalar;
pub mod semiflow;

use num_traits::Zero;
use serde::Serialize;

pub use ilp::{integer_feasibility, integer_feasibility_modulo, Constraint, IlpError, Infeasibility, IntegerProgram};
pub use lp::{LinearProgram, LpOutcome, Relation};
pub use scalar::{scale_to_integers, ExactScalar};
pub use semiflow::{minimal_p_semiflows, minimal_t_semiflows, Semiflow, SemiflowKind, SemiflowSet};

use crate::net::{Marking, Net, NetError, PVector, System, TVector};
use crate::verdict::{Budget, Verdict};
use crate::{Rational, Tokens};

/// Dense incidence matrix, rows = places, columns = transitions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IncidenceMatrix {
    pub rows: Vec<Vec<i64>>,
    pub num_transitions: usize,
}

impl IncidenceMatrix {
    pub fn of(net: &Net) -> Self {
        let rows = (0..net.num_places())
            .map(|p| (0..net.num_transitions()).map(|t| net.incidence_entry(p, t)).collect())
            .collect();
        IncidenceMatrix { rows, num_transitions: net.num_transitions() }
    }

    pub fn entry(&self, p: usize, t: usize) -> i64 {
        self.rows[p][t]
    }

    pub fn column(&self, t: usize) -> Vec<i64> {
        self.rows.iter().map(|r| r[t]).collect()
    }

    /// I·Y
    pub fn apply(&self, y: &[i64]) -> Vec<i64> {
        self.rows.iter().map(|r| r.iter().zip(y).map(|(a, b)| a * b).sum()).collect()
    }

    /// Xᵀ·I
    pub fn apply_left(&self, x: &[i64]) -> Vec<i64> {
        (0..self.num_transitions).map(|t| self.rows.iter().zip(x).map(|(r, v)| r[t] * v).sum()).collect()
    }

    pub fn neg(&self) -> Self {
        IncidenceMatrix {
            rows: self.rows.iter().map(|r| r.iter().map(|v| -v).collect()).collect(),
            num_transitions: self.num_transitions,
        }
    }
}

pub fn incidence(net: &Net) -> IncidenceMatrix {
    IncidenceMatrix::of(net)
}

fn as_i64(v: &[Tokens]) -> Vec<i64> {
    v.iter().map(|&x| x as i64).collect()
}

/// M0 + I·Y, or `None` if some component is negative.
pub fn state_equation_image(sys: &System, y: &[Tokens]) -> Option<Marking> {
    let d = IncidenceMatrix::of(&sys.net).apply(&as_i64(y));
    sys.m0.iter().zip(d).map(|(&m, v)| u64::try_from(m as i64 + v).ok()).collect()
}

/// Positive integer X with Xᵀ·I = 0 of least total weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConservationWitness {
    pub weights: PVector,
    pub one_conservative: bool,
}

fn positive_kernel(rows: &[Vec<i64>], n: usize) -> Option<Vec<Tokens>> {
    let mut lp = LinearProgram::<Rational>::nonnegative(n);
    lp.lower = vec![Some(Rational::from_i64(1)); n];
    for r in rows {
        lp.add_row(r.iter().map(|&v| Rational::from_i64(v)).collect(), Relation::Eq, Rational::zero());
    }
    match lp.minimize(&vec![Rational::from_i64(1); n]) {
        LpOutcome::Optimal { x, .. } => scale_to_integers(&x),
        _ => None,
    }
}

pub fn conservativeness(net: &Net) -> Verdict<ConservationWitness> {
    let inc = IncidenceMatrix::of(net);
    let np = net.num_places();
    let cols: Vec<Vec<i64>> = (0..net.num_transitions()).map(|t| inc.column(t)).collect();
    match positive_kernel(&cols, np) {
        Some(x) => {
            debug_assert!(inc.apply_left(&as_i64(&x)).iter().all(|v| *v == 0));
            let one = inc.apply_left(&vec![1; np]).iter().all(|v| *v == 0);
            Verdict::Yes(ConservationWitness { weights: x, one_conservative: one })
        }
        None => Verdict::No(()),
    }
}

pub fn consistency(net: &Net) -> Verdict<TVector> {
    let inc = IncidenceMatrix::of(net);
    match positive_kernel(&inc.rows, net.num_transitions()) {
        Some(y) => Verdict::Yes(y),
        None => Verdict::No(()),
    }
}

/// No(Y) exhibits Y ≩ 0 with I·Y ≩ 0, so that no marking bounds the net.
pub fn structurally_bounded(net: &Net) -> Verdict<(), TVector> {
    let inc = IncidenceMatrix::of(net);
    let nt = net.num_transitions();
    let mut lp = LinearProgram::<Rational>::nonnegative(nt);
    for r in &inc.rows {
        lp.add_row(r.iter().map(|&v| Rational::from_i64(v)).collect(), Relation::Ge, Rational::zero());
    }
    let total: Vec<Rational> = (0..nt).map(|t| Rational::from_i64(inc.column(t).iter().sum())).collect();
    lp.add_row(total, Relation::Ge, Rational::from_i64(1));
    match lp.minimize(&vec![Rational::from_i64(1); nt]) {
        LpOutcome::Optimal { x, .. } => match scale_to_integers(&x) {
            Some(y) => Verdict::No(y),
            None => Verdict::Unknown("witness does not fit in 64 bits".into()),
        },
        _ => Verdict::Yes(()),
    }
}

/// Why a marking is outside PR(S).
pub type StateEquationRefutation = Infeasibility;

/// Integer program over Y ≥ 0 for `I·Y = M − M0`, minimizing Σ Y.
pub fn state_equation_program(sys: &System, m: &[Tokens]) -> Result<IntegerProgram, NetError> {
    sys.net.check_marking(m)?;
    let inc = IncidenceMatrix::of(&sys.net);
    let nt = sys.net.num_transitions();
    let mut prog = IntegerProgram::nonnegative(nt);
    for (p, row) in inc.rows.iter().enumerate() {
        prog.add(row.clone(), Relation::Eq, m[p] as i64 - sys.m0[p] as i64);
    }
    prog.objective = Some(vec![1; nt]);
    Ok(prog)
}

fn to_tvector(x: Vec<i64>) -> TVector {
    x.into_iter().map(|v| v as Tokens).collect()
}

/// Decides M ∈ PR(S). A `Yes` carries a T-vector of least total count.
pub fn solve_state_equation(
    sys: &System,
    m: &[Tokens],
    budget: &Budget,
) -> Result<Verdict<TVector, StateEquationRefutation>, NetError> {
    let prog = state_equation_program(sys, m)?;
    let flows = minimal_t_semiflows(&sys.net, budget);
    let verdict = if flows.complete {
        integer_feasibility_modulo(&prog, &flows.vectors(), &budget.feasibility)
    } else {
        integer_feasibility(&prog, &budget.feasibility)
    };
    let verdict = verdict.expect("state equation program is well formed");
    Ok(verdict.map_yes(to_tvector))
}
