//! Sufficient conditions for R(S) = PR(S), the exhaustive decision and the
//! reachability front door.

use serde::Serialize;

use super::potentially_reachable;
use crate::algebra::{conservativeness, solve_state_equation, Infeasibility};
use crate::behavior::liveness::greedy_realize;
use crate::behavior::{build_rg, initial_directedness, live, live_pcmg_acyclic, live_wmg, reversible, ReachabilityGraph};
use crate::net::{p_subnet, FiringSequence, Marking, NetError, System, TVector};
use crate::structure::{build_pcmg, check_amg, classify, graph_acyclic, minimal_siphons, well_structured, PcmgSpec};
use crate::verdict::{Budget, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PrrRule {
    LiveWMG,
    PcmgAcyclic,
    LiveH1sR,
    LiveHfcR,
    AmgConsSiphons,
    RPlusInitDir,
    ExhaustiveEqual,
}

/// One established hypothesis of a rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Precondition {
    pub name: String,
    pub verdict: Verdict<()>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrrCertificate {
    pub rule: PrrRule,
    /// Every entry is Yes.
    pub preconditions: Vec<Precondition>,
}

/// Why a rule did not apply: the first hypothesis that was not Yes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleAttempt {
    pub rule: PrrRule,
    pub failed: Option<Precondition>,
}

/// A potentially reachable marking absent from a complete reachability
/// graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrrWitness {
    pub marking: Marking,
    pub y: TVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum PrrVerdict {
    Equal(PrrCertificate),
    NotEqual(PrrWitness),
    Unknown(String),
}

impl PrrVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            PrrVerdict::Equal(_) => "equal",
            PrrVerdict::NotEqual(_) => "not-equal",
            PrrVerdict::Unknown(_) => "unknown",
        }
    }
}

/// Behavioural facts shared by several rules, computed on first use.
struct Facts<'a> {
    sys: &'a System,
    budget: &'a Budget,
    live: Option<Verdict<()>>,
    property_r: Option<Verdict<()>>,
}

impl Facts<'_> {
    fn live(&mut self) -> Verdict<()> {
        let (sys, budget) = (self.sys, self.budget);
        self.live.get_or_insert_with(|| live(sys, budget).erase()).clone()
    }

    fn property_r(&mut self) -> Verdict<()> {
        let (sys, budget) = (self.sys, self.budget);
        self.property_r
            .get_or_insert_with(|| {
                let fwd = reversible(sys, budget).erase();
                if !fwd.is_yes() {
                    return fwd;
                }
                reversible(&sys.reverse(), budget).erase()
            })
            .clone()
    }
}

fn pre(name: &str, verdict: Verdict<()>) -> Precondition {
    Precondition { name: name.into(), verdict }
}

fn flag(b: bool) -> Verdict<()> {
    if b {
        Verdict::Yes(())
    } else {
        Verdict::No(())
    }
}

/// Evaluates hypotheses in order, stopping at the first that fails.
fn establish(rule: PrrRule, checks: Vec<Box<dyn FnOnce() -> Precondition + '_>>) -> Result<PrrCertificate, RuleAttempt> {
    let mut preconditions = Vec::new();
    for check in checks {
        let p = check();
        if !p.verdict.is_yes() {
            return Err(RuleAttempt { rule, failed: Some(p) });
        }
        preconditions.push(p);
    }
    Ok(PrrCertificate { rule, preconditions })
}

fn siphons_conservative(sys: &System, budget: &Budget) -> Verdict<()> {
    let list = minimal_siphons(&sys.net, budget);
    for d in list.place_sets() {
        let (sub, _) = p_subnet(&sys.net, &d).expect("siphon places exist");
        if !conservativeness(&sub).is_yes() {
            return Verdict::No(());
        }
    }
    if list.complete {
        Verdict::Yes(())
    } else {
        Verdict::Unknown(list.reason.unwrap_or_default())
    }
}

fn pcmg_matches(sys: &System, spec: &PcmgSpec) -> Verdict<()> {
    match (well_structured(spec), build_pcmg(spec)) {
        (Ok(ws), Ok((built, _))) => flag(ws.well_structured && graph_acyclic(spec) && built.net == sys.net),
        _ => Verdict::No(()),
    }
}

/// The ladder with an optional composition description, which the acyclic
/// composed-marked-graph rule needs.
pub fn certificate_ladder_with(
    sys: &System,
    spec: Option<&PcmgSpec>,
    budget: &Budget,
) -> Verdict<PrrCertificate, Vec<RuleAttempt>> {
    let class = classify(&sys.net);
    let facts = std::cell::RefCell::new(Facts { sys, budget, live: None, property_r: None });
    let live_pre = || pre("live", facts.borrow_mut().live());
    let r_pre = || pre("property R", facts.borrow_mut().property_r());
    let mut attempts = Vec::new();

    let wmg_live = || {
        let v = if class.no_source_places {
            live_wmg(sys, budget).map(|v| v.erase()).unwrap_or(Verdict::No(()))
        } else {
            facts.borrow_mut().live()
        };
        pre("live", v)
    };
    type Check<'a> = Box<dyn FnOnce() -> Precondition + 'a>;
    let rules: Vec<(PrrRule, Vec<Check>)> = vec![
        (PrrRule::LiveWMG, vec![Box::new(|| pre("WMG≤", flag(class.wmg_le))), Box::new(wmg_live)]),
        (
            PrrRule::PcmgAcyclic,
            vec![
                Box::new(|| match spec {
                    Some(s) => pre("well-structured composition over an acyclic graph", pcmg_matches(sys, s)),
                    None => pre("composition supplied", Verdict::No(())),
                }),
                Box::new(|| {
                    let v = live_pcmg_acyclic(sys, spec.expect("checked above"))
                        .map(|v| v.erase())
                        .unwrap_or(Verdict::No(()));
                    pre("live", v)
                }),
            ],
        ),
        (
            PrrRule::LiveH1sR,
            vec![Box::new(|| pre("H1S-WMG≤", flag(class.h1s_wmg_le))), Box::new(live_pre), Box::new(r_pre)],
        ),
        (PrrRule::LiveHfcR, vec![Box::new(|| pre("HFC", flag(class.hfc))), Box::new(live_pre), Box::new(r_pre)]),
        (
            PrrRule::AmgConsSiphons,
            vec![
                Box::new(|| pre("AMG", check_amg(sys).erase())),
                Box::new(live_pre),
                Box::new(r_pre),
                Box::new(|| pre("minimal siphons induce conservative P-subnets", siphons_conservative(sys, budget))),
            ],
        ),
        (
            PrrRule::RPlusInitDir,
            vec![Box::new(r_pre), Box::new(|| pre("initially directed", initial_directedness(sys, budget).erase()))],
        ),
    ];
    for (rule, checks) in rules {
        match establish(rule, checks) {
            Ok(cert) => return Verdict::Yes(cert),
            Err(a) => attempts.push(a),
        }
    }
    Verdict::No(attempts)
}

/// Tries each sufficient condition in turn and returns the first that is
/// established.
pub fn certificate_ladder(sys: &System, budget: &Budget) -> Verdict<PrrCertificate, Vec<RuleAttempt>> {
    certificate_ladder_with(sys, None, budget)
}

/// Least-count absent marking, ties broken lexicographically.
fn absent<'a>(rg: &ReachabilityGraph, pr: impl Iterator<Item = (&'a Marking, &'a TVector)>) -> Option<PrrWitness> {
    pr.filter(|(m, _)| !rg.contains(m))
        .min_by_key(|(m, y)| (y.iter().sum::<u64>(), (*m).clone()))
        .map(|(m, y)| PrrWitness { marking: m.clone(), y: y.clone() })
}

pub fn prr_decide_with(sys: &System, spec: Option<&PcmgSpec>, budget: &Budget) -> PrrVerdict {
    if let Verdict::Yes(cert) = certificate_ladder_with(sys, spec, budget) {
        return PrrVerdict::Equal(cert);
    }
    let rg = build_rg(sys, &budget.exploration);
    let pr = potentially_reachable(sys, budget);
    if rg.complete {
        if let Some(w) = absent(&rg, pr.markings.iter()) {
            return PrrVerdict::NotEqual(w);
        }
        if pr.complete {
            let cert = PrrCertificate {
                rule: PrrRule::ExhaustiveEqual,
                preconditions: vec![
                    pre("reachability graph complete", Verdict::Yes(())),
                    pre("potentially reachable set complete", Verdict::Yes(())),
                ],
            };
            return PrrVerdict::Equal(cert);
        }
        return PrrVerdict::Unknown(format!(
            "every examined potentially reachable marking is reachable; {}",
            pr.reason.unwrap_or_default()
        ));
    }
    PrrVerdict::Unknown(format!("reachability graph incomplete: {}", rg.reason.unwrap_or_default()))
}

/// R(S) = PR(S), through a certificate, an exhaustive comparison, or an
/// unreachable solution of the state equation.
pub fn prr_decide(sys: &System, budget: &Budget) -> PrrVerdict {
    prr_decide_with(sys, None, budget)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Unreachability {
    /// The state equation has no solution.
    StateEquation(Infeasibility),
    /// The complete reachability graph does not contain the marking.
    Exhaustive,
}

/// Decides M ∈ R(S). A Yes carries a firing sequence from M0 to M.
pub fn is_reachable(
    sys: &System,
    m: &[u64],
    budget: &Budget,
) -> Result<Verdict<FiringSequence, Unreachability>, NetError> {
    let se = solve_state_equation(sys, m, budget)?;
    if let Verdict::No(r) = se {
        return Ok(Verdict::No(Unreachability::StateEquation(r)));
    }
    if m == sys.m0.as_slice() {
        return Ok(Verdict::Yes(Vec::new()));
    }
    let certified = certificate_ladder(sys, budget).is_yes();
    if let (true, Verdict::Yes(y)) = (certified, &se) {
        if let Some((seq, end)) = greedy_realize(&sys.net, &sys.m0, y) {
            if end == m {
                return Ok(Verdict::Yes(seq));
            }
        }
    }
    let rg = build_rg(sys, &budget.exploration);
    if let Some(i) = rg.index_of(m) {
        return Ok(Verdict::Yes(rg.path_to(i)));
    }
    if rg.complete {
        return Ok(Verdict::No(Unreachability::Exhaustive));
    }
    let why = if certified { "reachable by certificate, but no sequence found" } else { "not found" };
    Ok(Verdict::Unknown(format!("{why} within the exploration budget: {}", rg.reason.unwrap_or_default())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::NetBuilder;

    fn fig1() -> System {
        let net = NetBuilder::new("fig1")
            .places(["p1", "p2", "p3", "p4"])
            .transition("t1", &[("p1", 1)], &[("p3", 2)])
            .transition("t2", &[("p3", 4), ("p4", 3)], &[("p1", 2), ("p2", 1)])
            .transition("t3", &[("p2", 1)], &[("p4", 3)])
            .build()
            .unwrap();
        System::new(net, vec![0, 0, 4, 3]).unwrap()
    }

    fn dead_wmg() -> System {
        let net = NetBuilder::new("deadwmg")
            .places(["p0", "p1"])
            .transition("t", &[("p0", 1)], &[("p0", 1), ("p1", 1)])
            .build()
            .unwrap();
        System::new(net, vec![0, 0]).unwrap()
    }

    #[test]
    fn fig1_certified() {
        let b = Budget::default();
        let s = fig1();
        match prr_decide(&s, &b) {
            PrrVerdict::Equal(c) => assert_eq!(c.rule, PrrRule::LiveWMG),
            v => panic!("{v:?}"),
        }
        let seq = is_reachable(&s, &[1, 0, 2, 3], &b).unwrap().yes().cloned().unwrap();
        assert_eq!(s.net.fire_sequence(&s.m0, &seq).unwrap(), vec![1, 0, 2, 3]);
        assert_eq!(is_reachable(&s, &s.m0, &b).unwrap(), Verdict::Yes(vec![]));
        assert!(matches!(is_reachable(&s, &[0, 0, 0, 0], &b).unwrap(), Verdict::No(Unreachability::StateEquation(_))));
    }

    #[test]
    fn dead_wmg_not_equal() {
        let b = Budget::default();
        let v = prr_decide(&dead_wmg(), &b);
        assert_eq!(v, PrrVerdict::NotEqual(PrrWitness { marking: vec![0, 1], y: vec![1] }));
        assert!(certificate_ladder(&dead_wmg(), &b).is_no());
    }
}
