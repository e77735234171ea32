//! Behavioural analyses: reachability graphs, liveness, boundedness,
//! reversibility, T-sequences, directedness and class-specific deciders.

pub mod circuits;
pub mod directed;
pub mod keller;
pub mod liveness;
pub mod props;
pub mod rg;
pub mod wmg;

use thiserror::Error;

pub use circuits::{elementary_circuits, live_circuit_ilp, live_wmg, CircuitDeadlock, CircuitList, DeadCircuit};
pub use directed::{directedness, initial_directedness, strongly_live, DirectednessViolation, StrongLivenessViolation};
pub use keller::keller_check;
pub use liveness::{live, live_cf, live_h1s, live_pcmg_acyclic, CfRefutation, CfWitness, DeadTransition, SiphonDeadlock};
pub use props::{
    bounded, find_t_sequence, lrb_report, reversible, reversible_by_tsequence, BoundedWitness, LrbReport, Pump,
    SystemLrb, TSequenceRefutation, TSequenceScope, Unreturnable,
};
pub use rg::{build_rg, Components, ReachabilityGraph};
pub use wmg::{property_e_check, realize_tvector_wmg, wmg_deadlock_vector, DeadSolution, DeadlockReport};

use crate::net::NetError;
use crate::structure::PcmgError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BehaviorError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Pcmg(#[from] PcmgError),
}

pub(crate) fn require(cond: bool, what: &str) -> Result<(), BehaviorError> {
    if cond {
        Ok(())
    } else {
        Err(BehaviorError::Precondition(what.to_string()))
    }
}
