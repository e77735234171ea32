//! Every claim attached to a shipped fixture is recomputed here.

use std::collections::BTreeMap;

use prr_core::algebra::{conservativeness, consistency, solve_state_equation, state_equation_image, structurally_bounded};
use prr_core::behavior::{
    bounded, build_rg, directedness, find_t_sequence, initial_directedness, live, lrb_report, reversible,
};
use prr_core::fixtures::{fixtures, Fixture};
use prr_core::prr::{is_reachable, prr_decide_with, PrrVerdict};
use prr_core::structure::{build_pcmg, check_amg, classify, minimal_siphons, well_structured};
use prr_core::{Budget, Net, System, Verdict};

type Arcs = BTreeMap<String, (BTreeMap<String, u64>, BTreeMap<String, u64>)>;

/// Transitions by id with their arcs by place id, and the marking by place id.
fn by_ids(sys: &System) -> (Arcs, BTreeMap<String, u64>) {
    let n = &sys.net;
    let side = |arcs: &[(usize, u64)]| arcs.iter().map(|&(p, w)| (n.place_id(p).to_string(), w)).collect();
    let arcs = (0..n.num_transitions())
        .map(|t| (n.transition_id(t).to_string(), (side(n.inputs(t)), side(n.outputs(t)))))
        .collect();
    let m = (0..n.num_places()).map(|p| (n.place_id(p).to_string(), sys.m0[p])).collect();
    (arcs, m)
}

fn names(net: &Net, set: &[usize]) -> Vec<String> {
    let mut v = net.place_names(set);
    v.sort();
    v
}

fn sorted(sets: &[&[&str]]) -> Vec<Vec<String>> {
    let mut out: Vec<Vec<String>> = sets
        .iter()
        .map(|s| {
            let mut v: Vec<String> = s.iter().map(|x| x.to_string()).collect();
            v.sort();
            v
        })
        .collect();
    out.sort();
    out
}

fn check(f: &Fixture, budget: &Budget, fail: &mut Vec<String>) {
    let e = &f.expected;
    let s = f.system();
    let n = &s.net;
    let mut claim = |what: &str, ok: bool| {
        if !ok {
            fail.push(format!("{}: {what}", f.key));
        }
    };
    let eq = |want: Option<bool>, got: Option<bool>| want.is_none() || want == got;

    let classes = classify(n);
    for &(flag, want) in e.classes {
        claim(&format!("{flag:?}"), flag.of(&classes) == want);
    }
    if let Some(want) = e.shared_places {
        claim("shared places", classes.shared_places == want);
    }
    claim("amg", eq(e.amg, check_amg(&s).decided()));
    if let Some(spec) = f.pcmg() {
        let (built, _) = build_pcmg(&spec).unwrap();
        claim("composition matches net", by_ids(&built) == by_ids(&s));
        let ws = well_structured(&spec).unwrap();
        claim("well structured", eq(e.well_structured, Some(ws.well_structured)));
        claim("acyclic graph", eq(e.acyclic_graph, Some(ws.acyclic_graph)));
    } else {
        claim("composition claims need a composition", e.well_structured.is_none() && e.acyclic_graph.is_none());
    }
    let rg = build_rg(&s, &budget.exploration);
    if let Some(k) = e.rg_states {
        claim("rg states", rg.complete && rg.len() == k);
    }
    claim("live", eq(e.live, live(&s, budget).decided()));
    claim("reversible", eq(e.reversible, reversible(&s, budget).decided()));
    let b = bounded(&s, budget);
    claim("bounded", eq(e.bounded, b.decided()));
    if let Some(k) = e.bound {
        claim("bound", b.yes().and_then(|w| w.bound) == Some(k));
    }
    if let Some(want) = e.safe {
        claim("safe", rg.complete && (rg.max_tokens() <= 1) == want);
    }
    claim("structurally bounded", eq(e.structurally_bounded, structurally_bounded(n).decided()));
    if let Some(want) = e.conservative1 {
        let one = conservativeness(n).yes().map(|w| w.one_conservative).unwrap_or(false);
        claim("1-conservative", one == want);
    }
    claim("consistent", eq(e.consistent, consistency(n).decided()));
    if e.reverse_live.is_some() || e.reverse_reversible.is_some() || e.reverse_bounded.is_some() || e.property_r.is_some()
    {
        let r = lrb_report(&s, budget);
        claim("reverse live", eq(e.reverse_live, r.reverse.live.decided()));
        claim("reverse reversible", eq(e.reverse_reversible, r.reverse.reversible.decided()));
        claim("reverse bounded", eq(e.reverse_bounded, r.reverse.bounded.decided()));
        claim("property R", eq(e.property_r, r.property_r.decided()));
    }
    claim("directed", eq(e.directed, directedness(&s, budget).decided()));
    claim("initially directed", eq(e.initially_directed, initial_directedness(&s, budget).decided()));
    if let Some(want) = e.prr {
        let spec = f.pcmg();
        let got = match prr_decide_with(&s, spec.as_ref(), budget) {
            PrrVerdict::Equal(_) => Some(true),
            PrrVerdict::NotEqual(_) => Some(false),
            PrrVerdict::Unknown(_) => None,
        };
        claim("prr", got == Some(want));
    }
    for u in e.unreachable {
        let from = n.fire_sequence(&s.m0, &n.sequence(u.after).unwrap()).unwrap();
        let sys = s.with_marking(from).unwrap();
        let target = match (u.marking, u.y) {
            (Some(m), _) => m.to_vec(),
            (None, Some(y)) => state_equation_image(&sys, y).unwrap(),
            (None, None) => unreachable!("an unreachable claim names its marking or T-vector"),
        };
        if let Some(y) = u.y {
            claim("unreachable: T-vector image", state_equation_image(&sys, y).as_deref() == Some(&target[..]));
        }
        claim("unreachable: in PR", solve_state_equation(&sys, &target, budget).unwrap().is_yes());
        claim("unreachable: not reached", is_reachable(&sys, &target, budget).unwrap().is_no());
    }
    for (m, seq) in e.reachable {
        let sigma = n.sequence(seq).unwrap();
        claim("reachable by sequence", n.fire_sequence(&s.m0, &sigma).ok().as_deref() == Some(*m));
        claim("reachable", is_reachable(&s, m, budget).unwrap().is_yes());
    }
    if let Some(seq) = e.t_sequence {
        let sigma = n.sequence(seq).unwrap();
        let all = (0..n.num_transitions()).all(|t| sigma.contains(&t));
        claim("T-sequence", all && n.fire_sequence(&s.m0, &sigma).ok().as_ref() == Some(&s.m0));
    }
    claim("has T-sequence", eq(e.has_t_sequence, find_t_sequence(&s, budget).decided()));
    let siphons = minimal_siphons(n, budget);
    let found: Vec<Vec<String>> = {
        let mut v: Vec<Vec<String>> = siphons.place_sets().iter().map(|d| names(n, d)).collect();
        v.sort();
        v
    };
    if let Some(want) = e.minimal_siphons {
        claim("minimal siphons", siphons.complete && found == sorted(want));
    }
    for d in sorted(e.siphons_include) {
        claim("minimal siphon present", found.contains(&d));
    }
}

#[test]
fn every_claim_rederived() {
    let budget = Budget::default();
    let mut fail = Vec::new();
    for f in fixtures() {
        check(f, &budget, &mut fail);
    }
    assert!(fail.is_empty(), "failed claims:\n{}", fail.join("\n"));
}

#[test]
fn fixture_graphs_are_small() {
    let budget = Budget::default();
    for f in fixtures() {
        let rg = build_rg(&f.system(), &budget.exploration);
        assert!(!rg.complete || rg.len() < 10_000, "{}", f.key);
        if let Verdict::No(_) = conservativeness(&f.system().net) {
            continue;
        }
        assert!(structurally_bounded(&f.system().net).is_yes(), "{}", f.key);
    }
}

#[test]
fn class_liveness_agrees_with_generic_on_fixtures() {
    use prr_core::behavior::{live_cf, live_circuit_ilp, live_h1s, live_pcmg_acyclic, live_wmg};
    let budget = Budget::default();
    let mut applied = 0;
    for f in fixtures() {
        let s = f.system();
        let generic = live(&s, &budget).decided();
        if generic.is_none() {
            continue;
        }
        let mut runs = vec![
            ("cf", live_cf(&s, &budget).map(|v| v.decided())),
            ("circuit", live_circuit_ilp(&s, &budget).map(|v| v.decided())),
            ("wmg", live_wmg(&s, &budget).map(|v| v.decided())),
            ("h1s", live_h1s(&s, &budget).map(|v| v.decided())),
        ];
        if let Some(spec) = f.pcmg() {
            let (built, _) = build_pcmg(&spec).unwrap();
            runs.push(("pcmg", live_pcmg_acyclic(&built, &spec).map(|v| v.decided())));
        }
        for (name, run) in runs {
            if let Ok(Some(v)) = run {
                applied += 1;
                assert_eq!(Some(v), generic, "{name} on {}", f.key);
            }
        }
    }
    assert!(applied >= 10, "only {applied} class verdicts");
}
