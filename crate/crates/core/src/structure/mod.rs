//! Syntactic subclasses, siphons and traps, augmented marked graphs and
//! place-composed marked graphs.

pub mod amg;
pub mod pcmg;
pub mod siphon;

use std::collections::BTreeSet;

use serde::Serialize;

pub use amg::{check_amg, check_amg_with_marking, AmgViolation, AmgWitness, ResourcePairing};
pub use pcmg::{
    build_pcmg, graph_acyclic, siphon_structure_check, well_structured, PcmgEdge, PcmgError, PcmgProvenance,
    PcmgSpec, SiphonStructureReport, WellStructuredReport,
};
pub use siphon::{
    is_deadlocked_siphon, is_siphon, is_trap, max_siphon_in, max_trap_in, minimal_siphons, minimal_traps,
    SetKind, SiphonList, SiphonOrTrap,
};

use crate::net::Net;

/// Syntactic class membership of a net.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    pub ordinary: bool,
    pub homogeneous: bool,
    pub choice_free: bool,
    pub wmg_le: bool,
    pub wmg: bool,
    pub marked_graph: bool,
    pub free_choice: bool,
    pub asymmetric_choice: bool,
    pub state_machine: bool,
    pub hfc: bool,
    /// Places with at least two output transitions.
    pub shared_places: Vec<String>,
    pub k: usize,
    /// Deleting the shared places leaves a WMG≤.
    pub ks_wmg_le: bool,
    /// Homogeneous with at most one shared place.
    pub h1s: bool,
    pub h1s_wmg_le: bool,
    /// No place without input transitions.
    pub no_source_places: bool,
}

fn outset(net: &Net, p: usize) -> BTreeSet<usize> {
    net.consumers(p).iter().map(|&(t, _)| t).collect()
}

pub fn classify(net: &Net) -> ClassReport {
    let np = net.num_places();
    let nt = net.num_transitions();
    let ordinary = (0..nt).all(|t| net.inputs(t).iter().chain(net.outputs(t)).all(|&(_, w)| w == 1));
    let homogeneous = (0..np).all(|p| {
        let ws: BTreeSet<u64> = net.consumers(p).iter().map(|&(_, w)| w).collect();
        ws.len() <= 1
    });
    let choice_free = (0..np).all(|p| net.consumers(p).len() <= 1);
    let wmg_le = choice_free && (0..np).all(|p| net.producers(p).len() <= 1);
    let wmg = (0..np).all(|p| net.consumers(p).len() == 1 && net.producers(p).len() == 1);
    let marked_graph = wmg && ordinary;
    let syncs: Vec<Vec<usize>> =
        (0..nt).filter(|&t| net.inputs(t).len() >= 2).map(|t| net.inputs(t).iter().map(|&(p, _)| p).collect()).collect();
    let pairwise = |rel: &dyn Fn(&BTreeSet<usize>, &BTreeSet<usize>) -> bool| {
        syncs.iter().all(|ps| {
            ps.iter().all(|&a| ps.iter().all(|&b| a >= b || rel(&outset(net, a), &outset(net, b))))
        })
    };
    let free_choice = pairwise(&|x, y| x == y);
    let asymmetric_choice = pairwise(&|x, y| x.is_subset(y) || y.is_subset(x));
    let state_machine = ordinary && (0..nt).all(|t| net.inputs(t).len() == 1 && net.outputs(t).len() == 1);
    let shared: Vec<usize> = (0..np).filter(|&p| net.consumers(p).len() >= 2).collect();
    let k = shared.len();
    let ks_wmg_le = (0..np).filter(|p| !shared.contains(p)).all(|p| net.producers(p).len() <= 1);
    ClassReport {
        ordinary,
        homogeneous,
        choice_free,
        wmg_le,
        wmg,
        marked_graph,
        free_choice,
        asymmetric_choice,
        state_machine,
        hfc: homogeneous && free_choice,
        shared_places: net.place_names(&shared),
        k,
        ks_wmg_le,
        h1s: homogeneous && k <= 1,
        h1s_wmg_le: homogeneous && k <= 1 && ks_wmg_le,
        no_source_places: (0..np).all(|p| !net.producers(p).is_empty()),
    }
}
