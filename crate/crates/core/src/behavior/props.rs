//! Boundedness, reversibility, properties L/R/B and T-sequences.

use std::collections::HashSet;

use serde::Serialize;

use super::liveness::live_on;
use super::rg::{build_rg, ReachabilityGraph};
use super::{require, BehaviorError};
use crate::algebra::{consistency, minimal_t_semiflows, structurally_bounded};
use crate::net::{FiringSequence, Marking, Net, System, TVector};
use crate::structure::{build_pcmg, classify, well_structured, PcmgSpec};
use crate::verdict::{Budget, Verdict};
use crate::Tokens;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundedWitness {
    /// Largest token count over the reachable markings, when all are known.
    pub bound: Option<Tokens>,
    pub structurally_bounded: bool,
}

/// A repeatable strictly increasing loop: `from` ≤ `to`, `from` ≠ `to`, and
/// `cycle` leads from one to the other.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pump {
    pub prefix: FiringSequence,
    pub cycle: FiringSequence,
    pub from: Marking,
    pub to: Marking,
}

fn find_pump(rg: &ReachabilityGraph) -> Option<Pump> {
    for v in 0..rg.len() {
        let mut a = rg.parent[v].map(|(u, _)| u);
        while let Some(u) = a {
            let (lo, hi) = (&rg.states[u], &rg.states[v]);
            if lo != hi && lo.iter().zip(hi).all(|(x, y)| x <= y) {
                let path = rg.path_to(v);
                let prefix = rg.path_to(u);
                let cycle = path[prefix.len()..].to_vec();
                return Some(Pump { prefix, cycle, from: lo.clone(), to: hi.clone() });
            }
            a = rg.parent[u].map(|(w, _)| w);
        }
    }
    None
}

/// Yes from a complete graph or structural boundedness; No from a pump
/// along the exploration tree.
pub fn bounded(sys: &System, budget: &Budget) -> Verdict<BoundedWitness, Pump> {
    let sb = structurally_bounded(&sys.net).is_yes();
    let rg = build_rg(sys, &budget.exploration);
    if rg.complete {
        return Verdict::Yes(BoundedWitness { bound: Some(rg.max_tokens()), structurally_bounded: sb });
    }
    if sb {
        return Verdict::Yes(BoundedWitness { bound: None, structurally_bounded: true });
    }
    match find_pump(&rg) {
        Some(p) => Verdict::No(p),
        None => Verdict::Unknown(rg.reason.unwrap_or_default()),
    }
}

/// A reachable marking from which the initial one cannot be reached.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Unreturnable {
    pub marking: Marking,
    pub sequence: FiringSequence,
}

pub(crate) fn reversible_on(rg: &ReachabilityGraph) -> Verdict<(), Unreturnable> {
    let comps = rg.components();
    let root = comps.of[0];
    if let Some(c) = (0..comps.count()).find(|&c| c != root && comps.closed[c]) {
        let s = comps.members[c][0];
        return Verdict::No(Unreturnable { marking: rg.states[s].clone(), sequence: rg.path_to(s) });
    }
    if rg.complete {
        Verdict::Yes(())
    } else {
        Verdict::Unknown(rg.reason.clone().unwrap_or_default())
    }
}

/// The initial marking is reachable from every reachable marking.
pub fn reversible(sys: &System, budget: &Budget) -> Verdict<(), Unreturnable> {
    reversible_on(&build_rg(sys, &budget.exploration))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SystemLrb {
    pub live: Verdict<()>,
    pub reversible: Verdict<()>,
    pub bounded: Verdict<()>,
    pub bound: Option<Tokens>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LrbReport {
    pub forward: SystemLrb,
    pub reverse: SystemLrb,
    pub property_l: Verdict<()>,
    pub property_r: Verdict<()>,
    pub property_b: Verdict<()>,
}

fn both(a: &Verdict<()>, b: &Verdict<()>) -> Verdict<()> {
    match (a, b) {
        (Verdict::No(()), _) | (_, Verdict::No(())) => Verdict::No(()),
        (Verdict::Yes(()), Verdict::Yes(())) => Verdict::Yes(()),
        (Verdict::Unknown(r), _) | (_, Verdict::Unknown(r)) => Verdict::Unknown(r.clone()),
    }
}

fn lrb(sys: &System, budget: &Budget) -> SystemLrb {
    let rg = build_rg(sys, &budget.exploration);
    let b = bounded(sys, budget);
    SystemLrb {
        live: live_on(&sys.net, &rg).erase(),
        reversible: reversible_on(&rg).erase(),
        bound: b.yes().and_then(|w| w.bound),
        bounded: b.erase(),
    }
}

/// Liveness, reversibility and boundedness of the system and of its reverse.
pub fn lrb_report(sys: &System, budget: &Budget) -> LrbReport {
    let forward = lrb(sys, budget);
    let reverse = lrb(&sys.reverse(), budget);
    LrbReport {
        property_l: both(&forward.live, &reverse.live),
        property_r: both(&forward.reversible, &reverse.reversible),
        property_b: both(&forward.bounded, &reverse.bounded),
        forward,
        reverse,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum TSequenceRefutation {
    /// No T-semiflow covers every transition.
    Inconsistent,
    /// The complete reachability graph has no cycle through the initial
    /// marking firing every transition.
    NoCoveringCycle,
}

fn candidates(net: &Net, budget: &Budget) -> Option<Vec<TVector>> {
    let flows = minimal_t_semiflows(net, budget);
    let nt = net.num_transitions();
    let full: Vec<TVector> = flows.vectors().into_iter().filter(|v| v.iter().all(|&x| x > 0)).collect();
    if !full.is_empty() {
        return Some(full);
    }
    if flows.complete {
        let sum: TVector = (0..nt).map(|t| flows.flows.iter().map(|f| f.vector[t]).sum()).collect();
        return if sum.iter().all(|&x| x > 0) { Some(vec![sum]) } else { None };
    }
    consistency(net).yes().map(|y| vec![y.clone()])
}

struct Search<'a> {
    net: &'a Net,
    failed: HashSet<(Marking, TVector)>,
    budget: usize,
}

impl Search<'_> {
    fn dfs(&mut self, m: &mut Marking, left: &mut TVector, seq: &mut FiringSequence) -> bool {
        if left.iter().all(|&x| x == 0) {
            return true;
        }
        if self.failed.len() >= self.budget || self.failed.contains(&(m.clone(), left.clone())) {
            return false;
        }
        for t in 0..self.net.num_transitions() {
            if left[t] == 0 || !self.net.enabled(m, t) {
                continue;
            }
            let before = m.clone();
            if self.net.fire_unchecked(m, t).is_err() {
                continue;
            }
            left[t] -= 1;
            seq.push(t);
            if self.dfs(m, left, seq) {
                return true;
            }
            seq.pop();
            left[t] += 1;
            *m = before;
        }
        self.failed.insert((m.clone(), left.clone()));
        false
    }
}

/// Feasible sequence whose Parikh vector is a T-semiflow with full support.
/// Small multiples of full-support minimal semiflows are tried first by
/// depth-first search in transition order.
pub fn find_t_sequence(sys: &System, budget: &Budget) -> Verdict<FiringSequence, TSequenceRefutation> {
    let net = &sys.net;
    let Some(cands) = candidates(net, budget) else {
        return Verdict::No(TSequenceRefutation::Inconsistent);
    };
    let mut search = Search { net, failed: HashSet::new(), budget: budget.exploration.max_states };
    for k in 1..=4u64 {
        for y in &cands {
            let mut left: TVector = y.iter().map(|&v| v * k).collect();
            let mut m = sys.m0.clone();
            let mut seq = Vec::new();
            if search.dfs(&mut m, &mut left, &mut seq) {
                return Verdict::Yes(seq);
            }
        }
    }
    let rg = build_rg(sys, &budget.exploration);
    let comps = rg.components();
    let root = comps.of[0];
    if (0..net.num_transitions()).all(|t| comps.has_label(root, t)) {
        if let Some(walk) = super::liveness::covering_walk(&rg, &comps.members[root], net.num_transitions()) {
            return Verdict::Yes(walk);
        }
    }
    if rg.complete {
        return Verdict::No(TSequenceRefutation::NoCoveringCycle);
    }
    Verdict::Unknown(rg.reason.unwrap_or_default())
}

/// Which result reduces reversibility to the existence of a T-sequence.
#[derive(Debug, Clone, Copy)]
pub enum TSequenceScope<'a> {
    /// Live, homogeneous, at most one shared place.
    LiveH1s,
    /// Live, well-structured composed marked graph.
    WellStructuredPcmg(&'a PcmgSpec),
}

/// Reversibility through a T-sequence. The structural part of the scope is
/// checked here; liveness is the caller's responsibility.
pub fn reversible_by_tsequence(
    sys: &System,
    scope: TSequenceScope<'_>,
    budget: &Budget,
) -> Result<Verdict<FiringSequence, TSequenceRefutation>, BehaviorError> {
    match scope {
        TSequenceScope::LiveH1s => {
            require(classify(&sys.net).h1s, "net is not homogeneous with at most one shared place")?;
        }
        TSequenceScope::WellStructuredPcmg(spec) => {
            require(well_structured(spec)?.well_structured, "composition is not well-structured")?;
            require(build_pcmg(spec)?.0.net == sys.net, "system net differs from the composed net")?;
        }
    }
    Ok(find_t_sequence(sys, budget))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::NetBuilder;

    fn fig1(m0: Vec<Tokens>) -> System {
        let net = NetBuilder::new("fig1")
            .places(["p1", "p2", "p3", "p4"])
            .transition("t1", &[("p1", 1)], &[("p3", 2)])
            .transition("t2", &[("p3", 4), ("p4", 3)], &[("p1", 2), ("p2", 1)])
            .transition("t3", &[("p2", 1)], &[("p4", 3)])
            .build()
            .unwrap();
        System::new(net, m0).unwrap()
    }

    #[test]
    fn fig1_properties() {
        let b = Budget::default();
        let s = fig1(vec![0, 0, 4, 3]);
        assert_eq!(bounded(&s, &b), Verdict::Yes(BoundedWitness { bound: Some(4), structurally_bounded: true }));
        assert!(reversible(&s, &b).is_yes());
        let seq = find_t_sequence(&s, &b).yes().cloned().unwrap();
        assert_eq!(s.net.fire_sequence(&s.m0, &seq).unwrap(), s.m0);
        let r = lrb_report(&s, &b);
        assert!(r.forward.live.is_yes() && r.forward.reversible.is_yes());
    }

    #[test]
    fn source_transition_pumps() {
        let net = NetBuilder::new("src").place("p").transition("t", &[], &[("p", 1)]).build().unwrap();
        let s = System::new(net, vec![0]).unwrap();
        let b = Budget::default().with_max_states(50);
        let pump = bounded(&s, &b).no().cloned().unwrap();
        assert_eq!(pump.cycle, vec![0]);
    }

    #[test]
    fn not_reversible_after_consumption() {
        let net = NetBuilder::new("one").places(["a", "b"]).transition("t", &[("a", 1)], &[("b", 1)]).build().unwrap();
        let s = System::new(net, vec![1, 0]).unwrap();
        let b = Budget::default();
        assert_eq!(reversible(&s, &b).no().map(|u| u.marking.clone()), Some(vec![0, 1]));
        assert_eq!(find_t_sequence(&s, &b), Verdict::No(TSequenceRefutation::Inconsistent));
    }

    #[test]
    fn scope_gate() {
        let s = fig1(vec![0, 0, 4, 3]);
        assert!(reversible_by_tsequence(&s, TSequenceScope::LiveH1s, &Budget::default()).unwrap().is_yes());
    }
}
