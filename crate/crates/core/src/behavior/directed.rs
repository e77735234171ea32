//! Directedness and strong liveness over the potential reachability graph.
//!
//! PR(S) is closed under firing, so when it is finite its markings and
//! firings form a graph whose forward closures are the sets R((N,M)). Two
//! markings share a reachable marking iff they reach a common bottom
//! component.

use serde::Serialize;

use super::rg::Components;
use crate::net::{Marking, System};
use crate::prr::{potentially_reachable, PrGraph};
use crate::verdict::{Budget, Verdict};

/// Two potentially reachable markings without a common successor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DirectednessViolation {
    pub first: Marking,
    pub second: Marking,
}

/// A potentially reachable marking from which a transition is dead.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrongLivenessViolation {
    pub marking: Marking,
    pub transition: usize,
}

fn complete_graph(sys: &System, budget: &Budget) -> Result<(PrGraph, Components), String> {
    let pr = potentially_reachable(sys, budget);
    if !pr.complete {
        return Err(pr.reason.unwrap_or_else(|| "potentially reachable set not enumerated".into()));
    }
    let g = PrGraph::of(sys, &pr);
    let comps = Components::of(&g.arcs, &vec![true; g.states.len()]);
    Ok((g, comps))
}

/// Any two potentially reachable markings have a common reachable marking.
pub fn directedness(sys: &System, budget: &Budget) -> Verdict<(), DirectednessViolation> {
    let (g, comps) = match complete_graph(sys, budget) {
        Ok(x) => x,
        Err(r) => return Verdict::Unknown(r),
    };
    let bottoms: Vec<usize> = (0..comps.count()).filter(|&c| comps.bottom[c]).collect();
    if bottoms.len() <= 1 {
        return Verdict::Yes(());
    }
    let first = g.states[comps.members[bottoms[0]][0]].clone();
    let second = g.states[comps.members[bottoms[1]][0]].clone();
    Verdict::No(DirectednessViolation { first, second })
}

/// Every potentially reachable marking has a common reachable marking with
/// the initial one.
pub fn initial_directedness(sys: &System, budget: &Budget) -> Verdict<(), DirectednessViolation> {
    let (g, comps) = match complete_graph(sys, budget) {
        Ok(x) => x,
        Err(r) => return Verdict::Unknown(r),
    };
    let (_, reach) = comps.reachable_bottoms(&g.arcs);
    let root = &reach[g.root];
    for (i, r) in reach.iter().enumerate() {
        if r.iter().zip(root).all(|(a, b)| a & b == 0) {
            return Verdict::No(DirectednessViolation { first: sys.m0.clone(), second: g.states[i].clone() });
        }
    }
    Verdict::Yes(())
}

/// (N, M) is live for every potentially reachable M: every bottom component
/// of the potential reachability graph fires every transition.
pub fn strongly_live(sys: &System, budget: &Budget) -> Verdict<(), StrongLivenessViolation> {
    let (g, comps) = match complete_graph(sys, budget) {
        Ok(x) => x,
        Err(r) => return Verdict::Unknown(r),
    };
    for c in (0..comps.count()).filter(|&c| comps.bottom[c]) {
        if let Some(t) = (0..sys.net.num_transitions()).find(|&t| !comps.has_label(c, t)) {
            return Verdict::No(StrongLivenessViolation { marking: g.states[comps.members[c][0]].clone(), transition: t });
        }
    }
    Verdict::Yes(())
}
