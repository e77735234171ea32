//! Potentially reachable markings, the PR-R equality and reachability.

mod amg;
mod ladder;

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{
    incidence, integer_feasibility, integer_feasibility_modulo, minimal_p_semiflows, minimal_t_semiflows,
    scale_to_integers, state_equation_program, ExactScalar, LinearProgram, LpOutcome,
    Relation,
};
use crate::net::{Marking, Net, PVector, System, TVector};
use crate::verdict::{Budget, Verdict};
use crate::{Rational, Tokens};

pub use amg::{amg_home_state_check, amg_resource_invariant_check, HomeStateReport, InvariantBreak, ResourceInvariant};
pub use ladder::{
    certificate_ladder, certificate_ladder_with, is_reachable, prr_decide, prr_decide_with, Precondition,
    PrrCertificate, PrrRule, PrrVerdict, PrrWitness, RuleAttempt, Unreachability,
};

/// Potentially reachable markings with one witnessing T-vector each.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrSet {
    /// Each marking maps to a T-vector of least total count among those
    /// examined.
    pub markings: BTreeMap<Marking, TVector>,
    /// Every potentially reachable marking is listed.
    pub complete: bool,
    /// Componentwise bound on the T-vectors, when one was imposed.
    pub bound_used: Option<Tokens>,
    pub reason: Option<String>,
}

impl PrSet {
    pub fn len(&self) -> usize {
        self.markings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.markings.is_empty()
    }

    pub fn contains(&self, m: &[Tokens]) -> bool {
        self.markings.contains_key(m)
    }
}

/// Positive X with Xᵀ·I ≤ 0, of least total weight. It exists iff PR(S)
/// is finite for every initial marking.
pub fn bounding_weights(net: &Net) -> Option<PVector> {
    let inc = incidence(net);
    let np = net.num_places();
    let mut lp = LinearProgram::<Rational>::nonnegative(np);
    lp.lower = vec![Some(Rational::from_i64(1)); np];
    for t in 0..net.num_transitions() {
        lp.add_row(inc.column(t).into_iter().map(Rational::from_i64).collect(), Relation::Le, Rational::zero());
    }
    match lp.minimize(&vec![Rational::from_i64(1); np]) {
        LpOutcome::Optimal { x, .. } => scale_to_integers(&x),
        _ => None,
    }
}

fn add_scaled(v: &mut [i64], col: &[i64], k: i64) {
    for (a, c) in v.iter_mut().zip(col) {
        *a += k * c;
    }
}

/// Markings M0 + I·Y ≥ 0 over the box Y ≤ `bound`, each with its
/// least-count Y.
fn box_markings(sys: &System, bound: Tokens, cap: usize) -> Result<BTreeMap<Marking, TVector>, String> {
    let net = &sys.net;
    let inc = incidence(net);
    let mut images: BTreeMap<Vec<i64>, TVector> = BTreeMap::new();
    images.insert(vec![0; net.num_places()], vec![0; net.num_transitions()]);
    for t in 0..net.num_transitions() {
        let col = inc.column(t);
        let mut next: BTreeMap<Vec<i64>, TVector> = BTreeMap::new();
        for (v, y) in &images {
            for k in 0..=bound {
                let mut w = v.clone();
                add_scaled(&mut w, &col, k as i64);
                let mut z = y.clone();
                z[t] = k;
                if next.get(&w).is_none_or(|old| z.iter().sum::<Tokens>() < old.iter().sum()) {
                    next.insert(w, z);
                }
            }
            if next.len() > cap {
                return Err(format!("more than {cap} partial images"));
            }
        }
        images = next;
    }
    Ok(images
        .into_iter()
        .filter_map(|(v, y)| {
            let m: Option<Marking> =
                sys.m0.iter().zip(&v).map(|(&a, &d)| Tokens::try_from(a as i64 + d).ok()).collect();
            m.map(|m| (m, y))
        })
        .collect())
}

/// All M0 + I·Y ≥ 0 with every component of Y at most `bound`. The set is
/// complete when PR(S) is finite and every member has a witness in the box.
pub fn enumerate_pr(sys: &System, bound: Tokens, budget: &Budget) -> PrSet {
    let markings = match box_markings(sys, bound, budget.pr_cap) {
        Ok(m) => m,
        Err(r) => return PrSet { markings: BTreeMap::new(), complete: false, bound_used: Some(bound), reason: Some(r) },
    };
    let mut set = PrSet { markings, complete: false, bound_used: Some(bound), reason: None };
    let full = potentially_reachable(sys, budget);
    if full.complete {
        set.complete = full.markings.keys().all(|m| set.markings.contains_key(m));
        if !set.complete {
            set.reason = Some(format!("some potentially reachable markings need a component above {bound}"));
        }
    } else {
        set.reason = full.reason;
    }
    set
}

/// Candidate markings M with X·M ≤ X·M0 satisfying every P-semiflow
/// equality, in lexicographic order.
fn candidates(sys: &System, x: &[Tokens], cap: usize, budget: &Budget) -> Result<Vec<Marking>, String> {
    let np = sys.net.num_places();
    let total: Tokens = x.iter().zip(&sys.m0).map(|(a, b)| a * b).sum();
    let flows = minimal_p_semiflows(&sys.net, budget);
    let invariants: Vec<(Vec<Tokens>, Tokens)> = flows
        .flows
        .iter()
        .map(|f| {
            let c = f.vector.iter().zip(&sys.m0).map(|(a, b)| a * b).sum();
            (f.vector.clone(), c)
        })
        .collect();
    let mut out = Vec::new();
    let mut m = vec![0; np];
    fn rec(
        p: usize,
        left: Tokens,
        x: &[Tokens],
        inv: &[(Vec<Tokens>, Tokens)],
        m: &mut Marking,
        out: &mut Vec<Marking>,
        cap: usize,
    ) -> bool {
        // Partial semiflow sums may not exceed their constants.
        for (f, c) in inv {
            let s: Tokens = f[..p].iter().zip(&m[..p]).map(|(a, b)| a * b).sum();
            if s > *c || (p == m.len() && s != *c) {
                return true;
            }
        }
        if p == m.len() {
            out.push(m.clone());
            return out.len() <= cap;
        }
        for v in 0..=left / x[p] {
            m[p] = v;
            if !rec(p + 1, left - v * x[p], x, inv, m, out, cap) {
                return false;
            }
        }
        m[p] = 0;
        true
    }
    if rec(0, total, x, &invariants, &mut m, &mut out, cap) {
        Ok(out)
    } else {
        Err(format!("more than {cap} candidate markings"))
    }
}

/// Box whose images skip the integer program.
const SEED_BOUND: Tokens = 2;

/// Box used to sample an infinite PR(S).
const INFINITE_SAMPLE_BOUND: Tokens = 3;

/// PR(S) itself when it is finite: candidates bounded by the weights of
/// [`bounding_weights`] are each decided by the state equation.
pub fn potentially_reachable(sys: &System, budget: &Budget) -> PrSet {
    let Some(x) = bounding_weights(&sys.net) else {
        let markings = box_markings(sys, INFINITE_SAMPLE_BOUND, budget.pr_cap).unwrap_or_default();
        let reason = Some("the net is not structurally bounded, so PR(S) is infinite".into());
        return PrSet { markings, complete: false, bound_used: Some(INFINITE_SAMPLE_BOUND), reason };
    };
    let cands = match candidates(sys, &x, budget.pr_cap, budget) {
        Ok(c) => c,
        Err(r) => return PrSet { markings: BTreeMap::new(), complete: false, bound_used: None, reason: Some(r) },
    };
    let flows = minimal_t_semiflows(&sys.net, budget);
    let seeds = box_markings(sys, SEED_BOUND, budget.pr_cap).unwrap_or_default();
    let mut markings = BTreeMap::new();
    let mut reason = None;
    for m in cands {
        if let Some(y) = seeds.get(&m) {
            markings.insert(m, y.clone());
            continue;
        }
        let prog = state_equation_program(sys, &m).expect("candidate has the right length");
        let v = if flows.complete {
            integer_feasibility_modulo(&prog, &flows.vectors(), &budget.feasibility)
        } else {
            integer_feasibility(&prog, &budget.feasibility)
        };
        match v.expect("state equation program is well formed") {
            Verdict::Yes(y) => {
                markings.insert(m, y.into_iter().map(|v| v as Tokens).collect());
            }
            Verdict::No(_) => {}
            Verdict::Unknown(r) => reason = Some(r),
        }
    }
    PrSet { markings, complete: reason.is_none(), bound_used: None, reason }
}

/// Firing graph on a set of markings closed under firing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrGraph {
    pub states: Vec<Marking>,
    pub arcs: Vec<Vec<(usize, usize)>>,
    pub root: usize,
}

impl PrGraph {
    /// Arcs leaving the set are dropped; none exist when `pr` is complete.
    /// The root is the initial marking.
    pub fn of(sys: &System, pr: &PrSet) -> PrGraph {
        let net = &sys.net;
        let states: Vec<Marking> = pr.markings.keys().cloned().collect();
        let index: BTreeMap<&Marking, usize> = states.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let arcs = states
            .iter()
            .map(|m| {
                net.enabled_transitions(m)
                    .into_iter()
                    .filter_map(|t| {
                        let next = net.fire(m, t).ok()?;
                        index.get(&next).map(|&j| (t, j))
                    })
                    .collect()
            })
            .collect();
        let root = index.get(&sys.m0).copied().unwrap_or(0);
        PrGraph { states, arcs, root }
    }
}
