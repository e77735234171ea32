//! Deadlocks and T-vector realization in WMG≤, and property E.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use super::liveness::greedy_realize;
use super::{require, BehaviorError};
use crate::algebra::{
    incidence, integer_feasibility, integer_feasibility_modulo, minimal_t_semiflows, state_equation_image,
    IntegerProgram, Relation,
};
use crate::net::{parikh, FiringSequence, Marking, System, TVector};
use crate::structure::classify;
use crate::verdict::{Budget, Verdict};
use crate::Tokens;

/// The deadlock of a non-live WMG≤ with its least T-vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeadlockReport {
    pub m_d: Marking,
    pub y_d: TVector,
    pub sigma_d: FiringSequence,
}

/// Fires the first enabled transition until none is enabled. Persistence
/// makes the endpoint and its Parikh vector independent of the order.
pub fn wmg_deadlock_vector(sys: &System, budget: &Budget) -> Result<Verdict<DeadlockReport>, BehaviorError> {
    let class = classify(&sys.net);
    require(class.wmg_le, "net is not a WMG≤")?;
    require(class.no_source_places, "net has a source place")?;
    require(sys.net.is_connected(), "net is not connected")?;
    let net = &sys.net;
    let mut m = sys.m0.clone();
    let mut sigma = Vec::new();
    for _ in 0..budget.feasibility.step_cap {
        match (0..net.num_transitions()).find(|&t| net.enabled(&m, t)) {
            None => {
                let y_d = parikh(net.num_transitions(), &sigma);
                return Ok(Verdict::Yes(DeadlockReport { m_d: m, y_d, sigma_d: sigma }));
            }
            Some(t) => {
                net.fire_unchecked(&mut m, t)?;
                sigma.push(t);
            }
        }
    }
    Ok(Verdict::Unknown(format!("no deadlock within {} firings", budget.feasibility.step_cap)))
}

/// Builds a sequence with Parikh vector `y` from the initial marking, given a
/// feasible `hint` whose Parikh vector dominates `y`.
pub fn realize_tvector_wmg(sys: &System, y: &[Tokens], hint: &[usize]) -> Result<FiringSequence, BehaviorError> {
    let net = &sys.net;
    require(classify(net).wmg_le, "net is not a WMG≤")?;
    require(y.len() == net.num_transitions(), "T-vector length differs from the transition count")?;
    require(state_equation_image(sys, y).is_some(), "M0 + I·Y has a negative component")?;
    net.fire_sequence(&sys.m0, hint)?;
    let p = parikh(net.num_transitions(), hint);
    require(p.iter().zip(y).all(|(a, b)| a >= b), "Parikh vector of the hint does not dominate Y")?;
    match greedy_realize(net, &sys.m0, y) {
        Some((seq, _)) => Ok(seq),
        None => Err(BehaviorError::Precondition("greedy realization stuck".into())),
    }
}

/// A solution of the state equation enabling no transition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeadSolution {
    pub marking: Marking,
    pub y: TVector,
}

/// Property E: every potentially reachable marking enables a transition.
/// Each way of choosing one blocking input place per transition gives an
/// integer program; No carries the solution of least total count.
pub fn property_e_check(sys: &System, budget: &Budget) -> Verdict<(), DeadSolution> {
    let net = &sys.net;
    let nt = net.num_transitions();
    if (0..nt).any(|t| net.inputs(t).is_empty()) {
        return Verdict::Yes(());
    }
    let inc = incidence(net);
    let flows = minimal_t_semiflows(net, budget);
    let choices: Vec<&[(usize, Tokens)]> = (0..nt).map(|t| net.inputs(t)).collect();
    let mut idx = vec![0usize; nt];
    let mut seen: HashSet<Vec<(usize, Tokens)>> = HashSet::new();
    let mut best: Option<(Tokens, TVector)> = None;
    let mut unknown = None;
    let mut leaves = 0usize;
    loop {
        let mut bounds: BTreeMap<usize, Tokens> = BTreeMap::new();
        for t in 0..nt {
            let (p, w) = choices[t][idx[t]];
            let e = bounds.entry(p).or_insert(w - 1);
            *e = (*e).min(w - 1);
        }
        let key: Vec<(usize, Tokens)> = bounds.into_iter().collect();
        if seen.insert(key.clone()) {
            leaves += 1;
            if leaves > budget.pr_cap {
                return Verdict::Unknown(format!("choice cap {} reached", budget.pr_cap));
            }
            let mut prog = IntegerProgram::nonnegative(nt);
            for (p, row) in inc.rows.iter().enumerate() {
                prog.add(row.clone(), Relation::Ge, -(sys.m0[p] as i64));
            }
            for &(p, b) in &key {
                prog.add(inc.rows[p].clone(), Relation::Le, b as i64 - sys.m0[p] as i64);
            }
            prog.objective = Some(vec![1; nt]);
            let v = if flows.complete {
                integer_feasibility_modulo(&prog, &flows.vectors(), &budget.feasibility)
            } else {
                integer_feasibility(&prog, &budget.feasibility)
            }
            .expect("dead-marking program is well formed");
            match v {
                Verdict::Yes(x) => {
                    let y: TVector = x.iter().map(|&v| v as Tokens).collect();
                    let total = y.iter().sum();
                    if best.as_ref().is_none_or(|(bt, by)| (total, &y) < (*bt, by)) {
                        best = Some((total, y));
                    }
                }
                Verdict::No(_) => {}
                Verdict::Unknown(r) => unknown = Some(r),
            }
        }
        // Odometer over the choices.
        let mut k = 0;
        while k < nt {
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == nt {
            break;
        }
    }
    if let Some((_, y)) = best {
        let marking = state_equation_image(sys, &y).expect("solution is non-negative");
        return Verdict::No(DeadSolution { marking, y });
    }
    match unknown {
        Some(r) => Verdict::Unknown(r),
        None => Verdict::Yes(()),
    }
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

    fn circuit(w2: u64, m0: Vec<u64>) -> System {
        let net = NetBuilder::new("c")
            .places(["p1", "p2"])
            .transition("t1", &[("p1", 1)], &[("p2", 1)])
            .transition("t2", &[("p2", w2)], &[("p1", 1)])
            .build()
            .unwrap();
        System::new(net, m0).unwrap()
    }

    #[test]
    fn deadlock_vectors() {
        let b = Budget::default();
        let r = wmg_deadlock_vector(&circuit(1, vec![0, 0]), &b).unwrap().yes().cloned().unwrap();
        assert_eq!((r.m_d, r.y_d, r.sigma_d), (vec![0, 0], vec![0, 0], vec![]));
        let r = wmg_deadlock_vector(&circuit(2, vec![1, 0]), &b).unwrap().yes().cloned().unwrap();
        assert_eq!((r.m_d, r.y_d), (vec![0, 1], vec![1, 0]));
        assert!(wmg_deadlock_vector(&circuit(1, vec![1, 0]), &b).unwrap().is_unknown());
    }

    #[test]
    fn realization() {
        let s = fig1(vec![0, 0, 4, 3]);
        let hint = s.net.sequence(&["t2", "t1", "t3"]).unwrap();
        let seq = realize_tvector_wmg(&s, &[1, 1, 0], &hint).unwrap();
        assert_eq!(s.net.format_sequence(&seq), "t2 t1");
        assert_eq!(s.net.fire_sequence(&s.m0, &seq).unwrap(), vec![1, 1, 2, 0]);
        assert!(realize_tvector_wmg(&s, &[0, 0, 0], &[]).unwrap().is_empty());
        assert!(realize_tvector_wmg(&s, &[2, 2, 0], &hint).is_err());
    }

    #[test]
    fn property_e() {
        let b = Budget::default();
        assert!(property_e_check(&circuit(1, vec![1, 0]), &b).is_yes());
        let v = property_e_check(&circuit(1, vec![0, 0]), &b);
        assert_eq!(v, Verdict::No(DeadSolution { marking: vec![0, 0], y: vec![0, 0] }));
        assert!(property_e_check(&fig1(vec![0, 0, 4, 3]), &b).is_yes());
    }
}
