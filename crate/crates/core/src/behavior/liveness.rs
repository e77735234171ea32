//! Liveness: the generic graph test and the class-specific deciders.

use num_traits::Zero;
use serde::Serialize;

use super::rg::{build_rg, ReachabilityGraph};
use super::{require, BehaviorError};
use crate::algebra::{incidence, scale_to_integers, LinearProgram, LpOutcome, Relation};
use crate::net::{FiringSequence, Marking, Net, System};
use crate::structure::{
    build_pcmg, classify, is_deadlocked_siphon, max_siphon_in, max_trap_in, minimal_siphons, well_structured,
    PcmgSpec,
};
use crate::verdict::{Budget, Verdict};
use crate::{Rational, Tokens};

/// A transition never enabled again from a reachable marking.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeadTransition {
    pub transition: usize,
    pub marking: Marking,
    /// Leads from the initial marking to `marking`.
    pub sequence: FiringSequence,
}

fn dead_transition(rg: &ReachabilityGraph, nt: usize) -> Option<DeadTransition> {
    let comps = rg.components();
    for c in 0..comps.count() {
        if !comps.closed[c] {
            continue;
        }
        if let Some(t) = (0..nt).find(|&t| !comps.has_label(c, t)) {
            let s = comps.members[c][0];
            return Some(DeadTransition { transition: t, marking: rg.states[s].clone(), sequence: rg.path_to(s) });
        }
    }
    None
}

/// Every transition stays fireable: each closed bottom component of the
/// reachability graph carries every label. A dead transition inside a fully
/// explored bottom component refutes liveness even on a partial graph.
pub fn live(sys: &System, budget: &Budget) -> Verdict<(), DeadTransition> {
    let rg = build_rg(sys, &budget.exploration);
    live_on(&sys.net, &rg)
}

pub(crate) fn live_on(net: &Net, rg: &ReachabilityGraph) -> Verdict<(), DeadTransition> {
    if let Some(d) = dead_transition(rg, net.num_transitions()) {
        return Verdict::No(d);
    }
    if rg.complete {
        Verdict::Yes(())
    } else {
        Verdict::Unknown(rg.reason.clone().unwrap_or_default())
    }
}

/// A reachable marking together with a sequence feasible from it whose
/// Parikh vector Y satisfies Y ≥ 1 and I·Y ≥ 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CfWitness {
    pub marking: Marking,
    pub prefix: FiringSequence,
    pub sequence: FiringSequence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum CfRefutation {
    /// No rational Y ≥ 1 with I·Y ≥ 0.
    NoRepetitiveVector,
    Dead(DeadTransition),
}

/// Fires, as long as possible, the first enabled transition with remaining
/// demand. Complete for persistent nets: if some sequence realizes `demand`
/// from `m`, this one does.
pub(crate) fn greedy_realize(net: &Net, m: &[Tokens], demand: &[Tokens]) -> Option<(FiringSequence, Marking)> {
    let mut cur = m.to_vec();
    let mut left = demand.to_vec();
    let mut seq = Vec::new();
    loop {
        if left.iter().all(|&d| d == 0) {
            return Some((seq, cur));
        }
        let t = (0..net.num_transitions()).find(|&t| left[t] > 0 && net.enabled(&cur, t))?;
        net.fire_unchecked(&mut cur, t).ok()?;
        left[t] -= 1;
        seq.push(t);
    }
}

fn repetitive_vector(net: &Net) -> Option<Vec<Tokens>> {
    let inc = incidence(net);
    let nt = net.num_transitions();
    let mut lp = LinearProgram::<Rational>::nonnegative(nt);
    lp.lower = vec![Some(Rational::from_integer(1.into())); nt];
    for row in &inc.rows {
        lp.add_row(row.iter().map(|&v| Rational::from_integer(v.into())).collect(), Relation::Ge, Rational::zero());
    }
    match lp.minimize(&vec![Rational::from_integer(1.into()); nt]) {
        LpOutcome::Optimal { x, .. } => scale_to_integers(&x),
        _ => None,
    }
}

/// Closed walk from the first state of a closed bottom component that fires
/// every transition, given that the component carries every label.
pub(crate) fn covering_walk(rg: &ReachabilityGraph, comp: &[usize], nt: usize) -> Option<FiringSequence> {
    let start = comp[0];
    let mut cur = start;
    let mut walk = Vec::new();
    for t in 0..nt {
        let (src, dst) = comp.iter().find_map(|&s| rg.arcs[s].iter().find(|a| a.0 == t).map(|a| (s, a.1)))?;
        walk.extend(rg.path_between(cur, src)?);
        walk.push(t);
        cur = dst;
    }
    walk.extend(rg.path_between(cur, start)?);
    Some(walk)
}

/// Choice-free liveness through a repetitive sequence from a reachable
/// marking, falling back on the graph test.
pub fn live_cf(sys: &System, budget: &Budget) -> Result<Verdict<CfWitness, CfRefutation>, BehaviorError> {
    require(classify(&sys.net).choice_free, "net is not choice-free")?;
    let net = &sys.net;
    let nt = net.num_transitions();
    let Some(y) = repetitive_vector(net) else {
        return Ok(Verdict::No(CfRefutation::NoRepetitiveVector));
    };
    let rg = build_rg(sys, &budget.exploration);
    for k in 1..=4u64 {
        let demand: Vec<Tokens> = y.iter().map(|&v| v * k).collect();
        for (s, m) in rg.states.iter().enumerate().take(2_000) {
            if let Some((sequence, _)) = greedy_realize(net, m, &demand) {
                return Ok(Verdict::Yes(CfWitness { marking: m.clone(), prefix: rg.path_to(s), sequence }));
            }
        }
    }
    match live_on(net, &rg) {
        Verdict::No(d) => Ok(Verdict::No(CfRefutation::Dead(d))),
        Verdict::Unknown(r) => Ok(Verdict::Unknown(r)),
        Verdict::Yes(()) => {
            let comps = rg.components();
            let c = comps.of[0];
            let target = (0..comps.count()).find(|&c| comps.closed[c]).unwrap_or(c);
            let s = comps.members[target][0];
            match covering_walk(&rg, &comps.members[target], nt) {
                Some(sequence) => {
                    Ok(Verdict::Yes(CfWitness { marking: rg.states[s].clone(), prefix: rg.path_to(s), sequence }))
                }
                None => Ok(Verdict::Unknown("no covering walk found".into())),
            }
        }
    }
}

/// A minimal siphon deadlocked at a reachable marking.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SiphonDeadlock {
    pub siphon: Vec<usize>,
    pub marking: Marking,
    pub sequence: FiringSequence,
}

/// Homogeneous nets with at most one shared place: live iff no minimal
/// siphon is deadlocked at a reachable marking. Siphons made only of isolated
/// places are skipped, since they constrain no transition.
pub fn live_h1s(sys: &System, budget: &Budget) -> Result<Verdict<(), SiphonDeadlock>, BehaviorError> {
    let class = classify(&sys.net);
    require(class.h1s, "net is not homogeneous with at most one shared place")?;
    let net = &sys.net;
    let siphons = minimal_siphons(net, budget);
    let relevant: Vec<Vec<usize>> =
        siphons.place_sets().into_iter().filter(|d| !net.consumers_of(d).is_empty()).collect();
    let rg = build_rg(sys, &budget.exploration);
    for (s, m) in rg.states.iter().enumerate() {
        if let Some(d) = relevant.iter().find(|d| is_deadlocked_siphon(net, m, d)) {
            return Ok(Verdict::No(SiphonDeadlock { siphon: d.clone(), marking: m.clone(), sequence: rg.path_to(s) }));
        }
    }
    if !siphons.complete {
        return Ok(Verdict::Unknown(siphons.reason.unwrap_or_default()));
    }
    if !rg.complete {
        return Ok(Verdict::Unknown(rg.reason.unwrap_or_default()));
    }
    Ok(Verdict::Yes(()))
}

/// Well-structured composed marked graphs over an acyclic graph: live iff
/// the unmarked places contain no non-empty siphon and no non-empty trap.
/// No carries the largest such set.
pub fn live_pcmg_acyclic(sys: &System, spec: &PcmgSpec) -> Result<Verdict<(), Vec<usize>>, BehaviorError> {
    let ws = well_structured(spec)?;
    require(ws.well_structured, "composition is not well-structured")?;
    require(ws.acyclic_graph, "composition graph has a cycle")?;
    let (built, _) = build_pcmg(spec)?;
    require(built.net == sys.net, "system net differs from the composed net")?;
    require(sys.net.num_transitions() > 0, "net has no transition")?;
    let q: Vec<usize> = (0..sys.net.num_places()).filter(|&p| sys.m0[p] == 0).collect();
    let d = max_siphon_in(&sys.net, &q);
    if !d.is_empty() {
        return Ok(Verdict::No(d));
    }
    let t = max_trap_in(&sys.net, &q);
    if !t.is_empty() {
        return Ok(Verdict::No(t));
    }
    Ok(Verdict::Yes(()))
}
