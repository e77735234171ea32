//! Reachability facts of augmented marked graphs checked on the graph.

use serde::Serialize;

use crate::algebra::solve_state_equation;
use crate::behavior::{build_rg, live, BehaviorError};
use crate::net::{Marking, Node, System};
use crate::structure::amg::unmarked_pairings;
use crate::structure::{check_amg, check_amg_with_marking, AmgViolation};
use crate::verdict::{Budget, Verdict};
use crate::Tokens;

/// A resource with the places of its paths and their constant total.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResourceInvariant {
    pub resource: usize,
    pub path_places: Vec<usize>,
    pub value: Tokens,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantBreak {
    pub resource: usize,
    pub marking: Marking,
    pub value: Tokens,
    pub expected: Tokens,
}

fn place_nodes(paths: &[Vec<Node>]) -> Vec<usize> {
    let mut v: Vec<usize> = paths
        .iter()
        .flatten()
        .filter_map(|n| match n {
            Node::Place(p) => Some(*p),
            Node::Transition(_) => None,
        })
        .collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// For each resource r, M(r) plus the tokens on the places of its paths is
/// the same at every reachable marking.
pub fn amg_resource_invariant_check(
    sys: &System,
    budget: &Budget,
) -> Result<Verdict<Vec<ResourceInvariant>, InvariantBreak>, BehaviorError> {
    let w = match check_amg(sys) {
        Verdict::Yes(w) => w,
        _ => return Err(BehaviorError::Precondition("system is not an AMG".into())),
    };
    let invariants: Vec<ResourceInvariant> = w
        .pairings
        .iter()
        .map(|pr| {
            let path_places = place_nodes(&pr.paths);
            let value = sys.m0[pr.resource] + path_places.iter().map(|&p| sys.m0[p]).sum::<Tokens>();
            ResourceInvariant { resource: pr.resource, path_places, value }
        })
        .collect();
    let rg = build_rg(sys, &budget.exploration);
    for m in &rg.states {
        for inv in &invariants {
            let value = m[inv.resource] + inv.path_places.iter().map(|&p| m[p]).sum::<Tokens>();
            if value != inv.value {
                return Ok(Verdict::No(InvariantBreak {
                    resource: inv.resource,
                    marking: m.clone(),
                    value,
                    expected: inv.value,
                }));
            }
        }
    }
    if !rg.complete {
        return Ok(Verdict::Unknown(rg.reason.unwrap_or_default()));
    }
    Ok(Verdict::Yes(invariants))
}

/// Conclusions checked for a marking satisfying the state equation and
/// leaving every resource path empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomeStateReport {
    pub live: bool,
    pub reachable: bool,
    /// Reachable from every reachable marking.
    pub home_state: bool,
    pub resources_marked: bool,
}

/// Under H1–H3, a marking M* of PR(S) emptying the resource paths is a home
/// state; when S is live it is reachable and marks every resource.
pub fn amg_home_state_check(
    sys: &System,
    m_star: &[Tokens],
    budget: &Budget,
) -> Result<Verdict<HomeStateReport, HomeStateReport>, BehaviorError> {
    let net = &sys.net;
    net.check_marking(m_star)?;
    match check_amg_with_marking(net, &sys.m0) {
        Verdict::Yes(_) | Verdict::No(AmgViolation::H4 { .. }) => {}
        Verdict::No(v) => return Err(BehaviorError::Precondition(format!("H1-H3 fail: {v:?}"))),
        Verdict::Unknown(r) => return Err(BehaviorError::Precondition(r)),
    }
    match solve_state_equation(sys, m_star, budget)? {
        Verdict::Yes(_) => {}
        Verdict::No(_) => return Err(BehaviorError::Precondition("M* is not potentially reachable".into())),
        Verdict::Unknown(r) => return Ok(Verdict::Unknown(r)),
    }
    let resources: Vec<usize> =
        (0..net.num_places()).filter(|&p| !(net.producers(p).len() == 1 && net.consumers(p).len() == 1)).collect();
    if unmarked_pairings(net, &resources, m_star).is_none() {
        return Err(BehaviorError::Precondition("M* marks a place on every admissible resource path".into()));
    }
    let rg = build_rg(sys, &budget.exploration);
    if !rg.complete {
        return Ok(Verdict::Unknown(rg.reason.unwrap_or_default()));
    }
    let is_live = live(sys, budget).is_yes();
    let target = rg.index_of(m_star);
    let home_state = match target {
        Some(t) => (0..rg.len()).all(|s| rg.path_between(s, t).is_some()),
        None => false,
    };
    let report = HomeStateReport {
        live: is_live,
        reachable: target.is_some(),
        home_state,
        resources_marked: resources.iter().all(|&r| m_star[r] > 0),
    };
    let holds = report.reachable && report.home_state && (!report.live || report.resources_marked);
    Ok(if holds { Verdict::Yes(report) } else { Verdict::No(report) })
}
