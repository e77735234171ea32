//! Elementary circuits and liveness of weighted circuits and WMG≤.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::Serialize;

use super::{require, BehaviorError};
use crate::algebra::{
    incidence, integer_feasibility, integer_feasibility_modulo, minimal_t_semiflows, IntegerProgram, Relation,
};
use crate::net::{p_subsystem, Node, SignedMarking, System, TVector};
use crate::structure::classify;
use crate::verdict::{Budget, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CircuitList {
    /// Each circuit starts at its smallest node and does not repeat it.
    pub circuits: Vec<Vec<usize>>,
    pub complete: bool,
}

struct Johnson<'a> {
    succ: &'a [Vec<usize>],
    allowed: Vec<bool>,
    blocked: Vec<bool>,
    bset: Vec<BTreeSet<usize>>,
    stack: Vec<usize>,
    out: Vec<Vec<usize>>,
    cap: usize,
}

impl Johnson<'_> {
    fn unblock(&mut self, u: usize) {
        let mut work = vec![u];
        while let Some(v) = work.pop() {
            if self.blocked[v] {
                self.blocked[v] = false;
                work.extend(std::mem::take(&mut self.bset[v]));
            }
        }
    }

    fn circuit(&mut self, v: usize, s: usize) -> bool {
        let mut found = false;
        self.stack.push(v);
        self.blocked[v] = true;
        for &w in self.succ[v].iter() {
            if self.out.len() >= self.cap {
                break;
            }
            if !self.allowed[w] {
                continue;
            }
            if w == s {
                self.out.push(self.stack.clone());
                found = true;
            } else if !self.blocked[w] && self.circuit(w, s) {
                found = true;
            }
        }
        if found {
            self.unblock(v);
        } else {
            for &w in self.succ[v].iter() {
                if self.allowed[w] {
                    self.bset[w].insert(v);
                }
            }
        }
        self.stack.pop();
        found
    }
}

/// Strongly connected component of `s` within the nodes `>= s`.
fn component_from(succ: &[Vec<usize>], s: usize) -> Vec<bool> {
    let n = succ.len();
    let walk = |adj: &dyn Fn(usize) -> Vec<usize>| {
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for u in adj(v) {
                if u >= s && !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen
    };
    let mut pred = vec![Vec::new(); n];
    for (v, out) in succ.iter().enumerate() {
        for &u in out {
            pred[u].push(v);
        }
    }
    let fwd = walk(&|v| succ[v].clone());
    let bwd = walk(&|v| pred[v].clone());
    fwd.iter().zip(bwd).map(|(a, b)| *a && b).collect()
}

/// Johnson's enumeration of the elementary circuits of a directed graph,
/// stopping after `cap` circuits.
pub fn elementary_circuits(succ: &[Vec<usize>], cap: usize) -> CircuitList {
    let n = succ.len();
    let mut j =
        Johnson { succ, allowed: vec![false; n], blocked: vec![false; n], bset: vec![BTreeSet::new(); n], stack: Vec::new(), out: Vec::new(), cap };
    for s in 0..n {
        if j.out.len() >= cap {
            break;
        }
        j.allowed = component_from(succ, s);
        for v in s..n {
            j.blocked[v] = false;
            j.bset[v].clear();
        }
        j.circuit(s, s);
    }
    let complete = j.out.len() < cap;
    CircuitList { circuits: j.out, complete }
}

/// Solution of the dead-marking system of a circuit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CircuitDeadlock {
    /// M0 + I·Y, possibly with negative components.
    pub m_d: SignedMarking,
    pub y: TVector,
}

fn is_circuit(sys: &System) -> bool {
    let net = &sys.net;
    net.num_places() > 0
        && net.num_places() == net.num_transitions()
        && (0..net.num_places()).all(|p| net.producers(p).len() == 1 && net.consumers(p).len() == 1)
        && (0..net.num_transitions()).all(|t| net.inputs(t).len() == 1 && net.outputs(t).len() == 1)
        && net.is_strongly_connected()
}

/// Weighted circuit liveness: live iff no Y ≥ 0 makes M0 + I·Y (allowed
/// negative) a deadlock. When the weight ratio around the circuit is below
/// one, maximal firing reaches a deadlock and supplies the witness.
pub fn live_circuit_ilp(sys: &System, budget: &Budget) -> Result<Verdict<(), CircuitDeadlock>, BehaviorError> {
    require(is_circuit(sys), "net is not a circuit")?;
    let net = &sys.net;
    let nt = net.num_transitions();
    let num: BigInt = (0..net.num_places()).map(|p| BigInt::from(net.producers(p)[0].1)).product();
    let den: BigInt = (0..net.num_places()).map(|p| BigInt::from(net.consumers(p)[0].1)).product();
    let inc = incidence(net);
    let to_signed = |y: &[i64]| -> SignedMarking {
        sys.m0.iter().zip(inc.apply(y)).map(|(&m, d)| m as i64 + d).collect()
    };
    if num < den {
        let mut m = sys.m0.clone();
        let mut y = vec![0u64; nt];
        for _ in 0..budget.feasibility.step_cap {
            match net.enabled_transitions(&m).first() {
                None => {
                    let yi: Vec<i64> = y.iter().map(|&v| v as i64).collect();
                    return Ok(Verdict::No(CircuitDeadlock { m_d: to_signed(&yi), y }));
                }
                Some(&t) => {
                    net.fire_unchecked(&mut m, t)?;
                    y[t] += 1;
                }
            }
        }
    }
    let mut prog = IntegerProgram::nonnegative(nt);
    for t in 0..nt {
        let (p, w) = net.inputs(t)[0];
        prog.add(inc.rows[p].clone(), Relation::Le, w as i64 - 1 - sys.m0[p] as i64);
    }
    prog.objective = Some(vec![1; nt]);
    let outcome = if num == den {
        let flows = minimal_t_semiflows(net, budget);
        integer_feasibility_modulo(&prog, &flows.vectors(), &budget.feasibility)
    } else {
        integer_feasibility(&prog, &budget.feasibility)
    }
    .expect("circuit program is well formed");
    Ok(match outcome {
        Verdict::Yes(y) => Verdict::No(CircuitDeadlock { m_d: to_signed(&y), y: y.iter().map(|&v| v as u64).collect() }),
        Verdict::No(_) => Verdict::Yes(()),
        Verdict::Unknown(r) => Verdict::Unknown(r),
    })
}

/// A non-live elementary circuit P-subsystem.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeadCircuit {
    pub places: Vec<usize>,
    pub transitions: Vec<usize>,
    pub witness: CircuitDeadlock,
}

/// WMG≤ without source places: live iff each elementary circuit
/// P-subsystem is live.
pub fn live_wmg(sys: &System, budget: &Budget) -> Result<Verdict<(), DeadCircuit>, BehaviorError> {
    let class = classify(&sys.net);
    require(class.wmg_le, "net is not a WMG≤")?;
    require(class.no_source_places, "net has a source place")?;
    let np = sys.net.num_places();
    let circuits = elementary_circuits(&sys.net.graph_successors(), budget.circuit_cap);
    let mut pending = None;
    for c in &circuits.circuits {
        let places: Vec<usize> = c.iter().copied().filter(|&v| v < np).collect();
        let (sub, map) = p_subsystem(sys, &places)?;
        match live_circuit_ilp(&sub, budget)? {
            Verdict::Yes(()) => {}
            Verdict::No(w) => {
                return Ok(Verdict::No(DeadCircuit { places: map.places, transitions: map.transitions, witness: w }))
            }
            Verdict::Unknown(r) => pending = Some(r),
        }
    }
    if let Some(r) = pending {
        return Ok(Verdict::Unknown(r));
    }
    if !circuits.complete {
        return Ok(Verdict::Unknown(format!("circuit cap {} reached", budget.circuit_cap)));
    }
    Ok(Verdict::Yes(()))
}

/// Circuits of a net as node lists.
pub fn net_circuits(sys: &System, cap: usize) -> (Vec<Vec<Node>>, bool) {
    let np = sys.net.num_places();
    let list = elementary_circuits(&sys.net.graph_successors(), cap);
    let nodes = list
        .circuits
        .iter()
        .map(|c| c.iter().map(|&v| if v < np { Node::Place(v) } else { Node::Transition(v - np) }).collect())
        .collect();
    (nodes, list.complete)
}
