use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use prr_core::algebra::{conservativeness, structurally_bounded};
use prr_core::behavior::{
    bounded, build_rg, find_t_sequence, live, live_cf, live_circuit_ilp, live_h1s, live_pcmg_acyclic, live_wmg,
    lrb_report, reversible, SystemLrb,
};
use prr_core::fixtures::{file as fixture_file, fixture, fixtures};
use prr_core::format::{parse_pcmg, parse_system, serialize_system, FormatError};
use prr_core::net::fmt_vec;
use prr_core::prr::{is_reachable, prr_decide_with, PrrVerdict};
use prr_core::structure::{build_pcmg, classify, minimal_siphons, minimal_traps, well_structured, PcmgSpec};
use prr_core::{Budget, Marking, System, Tokens, Verdict};
use serde_json::{json, Value};

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(name = "prr", version, about = "Petri net analysis: liveness, reversibility, boundedness and PR-R equality")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse the input and report its size.
    Validate(Input),
    /// Syntactic subclass membership.
    Classify(Input),
    /// Minimal siphons and traps.
    Siphons(Input),
    /// Reachability graph.
    Rg(Input),
    /// Liveness.
    Live(Input),
    /// Boundedness.
    Bounded(Input),
    /// Reversibility.
    Reversible(Input),
    /// Feasible sequence containing every transition and returning to M0.
    Tsequence(Input),
    /// Liveness, reversibility and boundedness of the system and its reverse.
    Lrb(Input),
    /// Equality of the potentially reachable and reachable sets.
    Prr(Input),
    /// Reachability of the marking given by --marking.
    Reach(Input),
    /// Print the reverse system.
    Reverse(Input),
    /// List the shipped fixtures, or print one.
    Fixtures(FixturesArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Auto,
    Rg,
    Cf,
    Circuit,
    Wmg,
    Pcmg,
    H1s,
}

#[derive(Args)]
struct Input {
    /// A `.pnet` file, a `.pcmg` composition, or `fixture:<key>`.
    file: String,
    #[arg(long, value_enum, default_value = "auto")]
    method: Method,
    #[arg(long)]
    max_states: Option<usize>,
    /// Bound on T-vector components in the integer programs.
    #[arg(long)]
    y_bound: Option<i64>,
    /// Markings with a place above this count are not explored.
    #[arg(long)]
    token_bound: Option<u64>,
    /// Sparse marking `p=v,...`: the target of `reach`, the initial marking otherwise.
    #[arg(long)]
    marking: Option<String>,
    #[arg(long)]
    json: bool,
    /// Exit with status 1 when the analysis is inconclusive.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct FixturesArgs {
    key: Option<String>,
    #[arg(long)]
    json: bool,
}

/// A usage or input error, reported with exit status 2.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

struct Report {
    text: String,
    verdict: &'static str,
    detail: Value,
}

impl Report {
    fn new(verdict: &'static str, text: impl Into<String>, detail: Value) -> Report {
        Report { text: text.into(), verdict, detail }
    }
}

struct Loaded {
    sys: System,
    spec: Option<PcmgSpec>,
}

fn load(file: &str) -> Result<Loaded> {
    if let Some(key) = file.strip_prefix("fixture:") {
        let f = fixture(key).map_err(|e| usage(e.to_string()))?;
        return Ok(Loaded { sys: f.system(), spec: f.pcmg() });
    }
    let path = Path::new(file);
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read `{file}`: {e}")))?;
    if path.extension().is_some_and(|e| e == "pcmg") {
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let spec = parse_pcmg(&text, |name| {
            let p: PathBuf = dir.join(name);
            fs::read_to_string(&p)
                .or_else(|e| fixture_file(name).map(str::to_string).ok_or(e))
                .map_err(|e| FormatError::Io { path: p.display().to_string(), message: e.to_string() })
        })
        .map_err(|e| usage(format!("{file}: {e}")))?;
        let (sys, _) = build_pcmg(&spec).map_err(|e| usage(format!("{file}: {e}")))?;
        return Ok(Loaded { sys, spec: Some(spec) });
    }
    let sys = parse_system(&text).map_err(|e| usage(format!("{file}: {e}")))?;
    Ok(Loaded { sys, spec: None })
}

fn parse_marking(sys: &System, text: &str) -> Result<Marking> {
    let mut pairs = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (p, v) = item.split_once('=').ok_or_else(|| usage(format!("marking entry `{item}` is not `place=count`")))?;
        let v: Tokens = v.trim().parse().map_err(|_| usage(format!("token count `{v}` is not a natural number")))?;
        pairs.push((p.trim(), v));
    }
    sys.net.marking(&pairs).map_err(|e| usage(e.to_string()))
}

fn budget(a: &Input) -> Budget {
    let mut b = Budget::default();
    if let Some(n) = a.max_states {
        b.exploration.max_states = n;
    }
    if let Some(k) = a.token_bound {
        b.exploration.max_token_bound = Some(k);
    }
    if let Some(y) = a.y_bound {
        b.feasibility.max_component = y;
    }
    b
}

struct Ctx<'a> {
    sys: &'a System,
    spec: Option<&'a PcmgSpec>,
    budget: Budget,
    method: Method,
}

impl Ctx<'_> {
    fn seq(&self, s: &[usize]) -> String {
        self.sys.net.format_sequence(s)
    }

    fn places(&self, ps: &[usize]) -> Vec<String> {
        self.sys.net.place_names(ps)
    }

    fn set(&self, ps: &[usize]) -> String {
        format!("{{{}}}", self.places(ps).join(","))
    }
}

fn cmd_validate(c: &Ctx) -> Report {
    let n = &c.sys.net;
    let mut text = format!(
        "VALID net {}: {} places, {} transitions, M0={}",
        n.name(),
        n.num_places(),
        n.num_transitions(),
        fmt_vec(&c.sys.m0)
    );
    if let Some(spec) = c.spec {
        text.push_str(&format!(", composed of {} components", spec.edges.len()));
    }
    let detail = json!({
        "name": n.name(),
        "places": n.place_ids(),
        "transitions": n.transition_ids(),
        "m0": c.sys.m0,
        "components": c.spec.map(|s| s.edges.len()),
    });
    Report::new("yes", text, detail)
}

fn cmd_classify(c: &Ctx) -> Report {
    let r = classify(&c.sys.net);
    let flags = [
        ("ordinary", r.ordinary),
        ("homogeneous", r.homogeneous),
        ("choice-free", r.choice_free),
        ("WMG<=", r.wmg_le),
        ("WMG", r.wmg),
        ("marked graph", r.marked_graph),
        ("free choice", r.free_choice),
        ("asymmetric choice", r.asymmetric_choice),
        ("state machine", r.state_machine),
        ("HFC", r.hfc),
        ("H1S", r.h1s),
        ("H1S-WMG<=", r.h1s_wmg_le),
        ("no source places", r.no_source_places),
    ];
    let mut text: Vec<String> = flags.iter().map(|(k, v)| format!("{k}: {}", if *v { "yes" } else { "no" })).collect();
    text.push(format!("shared places: {}", if r.shared_places.is_empty() { "none".into() } else { r.shared_places.join(" ") }));
    Report::new("yes", text.join("\n"), serde_json::to_value(&r).unwrap())
}

fn cmd_siphons(c: &Ctx) -> Report {
    let n = &c.sys.net;
    let s = minimal_siphons(n, &c.budget);
    let t = minimal_traps(n, &c.budget);
    let names = |l: &prr_core::structure::SiphonList| l.place_sets().iter().map(|d| c.places(d)).collect::<Vec<_>>();
    let line = |what: &str, l: &prr_core::structure::SiphonList| {
        let sets: Vec<String> = l.place_sets().iter().map(|d| c.set(d)).collect();
        let tail = if l.complete { "" } else { " (incomplete)" };
        format!("minimal {what}: {}{tail}", if sets.is_empty() { "none".into() } else { sets.join(" ") })
    };
    let text = format!("{}\n{}", line("siphons", &s), line("traps", &t));
    let complete = s.complete && t.complete;
    let detail = json!({
        "siphons": names(&s),
        "traps": names(&t),
        "complete": complete,
    });
    Report::new(if complete { "yes" } else { "unknown" }, text, detail)
}

fn cmd_rg(c: &Ctx) -> Report {
    let rg = build_rg(c.sys, &c.budget.exploration);
    let mut text = vec![format!(
        "RG: {} states, {} arcs, {}",
        rg.len(),
        rg.num_arcs(),
        if rg.complete { "complete".to_string() } else { format!("incomplete ({})", rg.reason.clone().unwrap_or_default()) }
    )];
    for (i, m) in rg.states.iter().enumerate() {
        let succ: Vec<String> =
            rg.arcs[i].iter().map(|&(t, j)| format!("{}->s{j}", c.sys.net.transition_id(t))).collect();
        text.push(format!("s{i} {} {}", fmt_vec(m), succ.join(" ")).trim_end().to_string());
    }
    let arcs: Vec<Vec<Value>> = rg
        .arcs
        .iter()
        .map(|out| out.iter().map(|&(t, j)| json!({"transition": c.sys.net.transition_id(t), "to": j})).collect())
        .collect();
    let detail = json!({
        "complete": rg.complete,
        "reason": rg.reason,
        "states": rg.states,
        "arcs": arcs,
        "deadlocks": rg.deadlocks(),
    });
    Report::new(if rg.complete { "yes" } else { "unknown" }, text.join("\n"), detail)
}

fn resolve_method(c: &Ctx) -> Method {
    if c.method != Method::Auto {
        return c.method;
    }
    let class = classify(&c.sys.net);
    let acyclic_well_structured =
        c.spec.and_then(|s| well_structured(s).ok()).is_some_and(|w| w.well_structured && w.acyclic_graph);
    if acyclic_well_structured {
        Method::Pcmg
    } else if class.wmg_le && class.no_source_places {
        Method::Wmg
    } else if class.h1s {
        Method::H1s
    } else if class.choice_free {
        Method::Cf
    } else {
        Method::Rg
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Auto => "auto",
        Method::Rg => "rg",
        Method::Cf => "cf",
        Method::Circuit => "circuit",
        Method::Wmg => "wmg",
        Method::Pcmg => "pcmg",
        Method::H1s => "h1s",
    }
}

fn unknown(reason: &str, extra: Value) -> (&'static str, String, Value) {
    ("unknown", format!("UNKNOWN: {reason}"), json!({"reason": reason, "extra": extra}))
}

/// The composed system carrying the marking of `sys`, matched by place id.
fn composed_system(sys: &System, spec: &PcmgSpec) -> Result<System> {
    let (built, _) = build_pcmg(spec).map_err(|e| usage(e.to_string()))?;
    let ids = |n: &prr_core::Net| {
        let mut v = n.place_ids().to_vec();
        v.extend(n.transition_ids().iter().cloned());
        v.sort();
        v
    };
    if ids(&built.net) != ids(&sys.net) {
        return Err(usage("the composition does not match the system"));
    }
    let m = (0..built.net.num_places()).map(|p| sys.m0[sys.net.place(built.net.place_id(p)).unwrap()]).collect();
    built.with_marking(m).map_err(|e| usage(e.to_string()))
}

fn cmd_live(c: &Ctx) -> Result<Report> {
    let method = resolve_method(c);
    let s = c.sys;
    let fail = |e: prr_core::behavior::BehaviorError| usage(format!("method {}: {e}", method_name(method)));
    let (verdict, text, detail) = match method {
        Method::Auto | Method::Rg => match live(s, &c.budget) {
            Verdict::Yes(()) => ("yes", "LIVE".to_string(), json!({})),
            Verdict::No(d) => (
                "no",
                format!(
                    "NOT LIVE, {} is dead at {} reached via {}",
                    s.net.transition_id(d.transition),
                    fmt_vec(&d.marking),
                    c.seq(&d.sequence)
                ),
                json!({"transition": s.net.transition_id(d.transition), "marking": d.marking, "sequence": c.seq(&d.sequence)}),
            ),
            Verdict::Unknown(r) => unknown(&r, json!(null)),
        },
        Method::Circuit => match live_circuit_ilp(s, &c.budget).map_err(fail)? {
            Verdict::Yes(()) => ("yes", "LIVE".into(), json!({})),
            Verdict::No(w) => (
                "no",
                format!("NOT LIVE, ILP witness Y={} M={}", fmt_vec(&w.y), fmt_vec(&w.m_d)),
                json!({"y": w.y, "marking": w.m_d}),
            ),
            Verdict::Unknown(r) => unknown(&r, json!(null)),
        },
        Method::Wmg => match live_wmg(s, &c.budget).map_err(fail)? {
            Verdict::Yes(()) => ("yes", "LIVE".into(), json!({})),
            Verdict::No(d) => (
                "no",
                format!(
                    "NOT LIVE, circuit {} has ILP witness Y={} M={}",
                    c.set(&d.places),
                    fmt_vec(&d.witness.y),
                    fmt_vec(&d.witness.m_d)
                ),
                json!({"circuit": c.places(&d.places), "y": d.witness.y, "marking": d.witness.m_d}),
            ),
            Verdict::Unknown(r) => unknown(&r, json!(null)),
        },
        Method::H1s => match live_h1s(s, &c.budget).map_err(fail)? {
            Verdict::Yes(()) => ("yes", "LIVE".into(), json!({})),
            Verdict::No(d) => (
                "no",
                format!("NOT LIVE, siphon {} empties at {} via {}", c.set(&d.siphon), fmt_vec(&d.marking), c.seq(&d.sequence)),
                json!({"siphon": c.places(&d.siphon), "marking": d.marking, "sequence": c.seq(&d.sequence)}),
            ),
            Verdict::Unknown(r) => unknown(&r, json!(null)),
        },
        Method::Cf => match live_cf(s, &c.budget).map_err(fail)? {
            Verdict::Yes(w) => (
                "yes",
                format!("LIVE, {} then {} fires every transition", c.seq(&w.prefix), c.seq(&w.sequence)),
                json!({"prefix": c.seq(&w.prefix), "sequence": c.seq(&w.sequence), "marking": w.marking}),
            ),
            Verdict::No(prr_core::behavior::CfRefutation::NoRepetitiveVector) => {
                ("no", "NOT LIVE, no repetitive vector".into(), json!({"repetitive_vector": false}))
            }
            Verdict::No(prr_core::behavior::CfRefutation::Dead(d)) => (
                "no",
                format!("NOT LIVE, {} is dead at {}", s.net.transition_id(d.transition), fmt_vec(&d.marking)),
                json!({"transition": s.net.transition_id(d.transition), "marking": d.marking, "sequence": c.seq(&d.sequence)}),
            ),
            Verdict::Unknown(r) => unknown(&r, json!(null)),
        },
        Method::Pcmg => {
            let spec = c.spec.ok_or_else(|| usage("method pcmg needs a .pcmg composition as input"))?;
            let composed = composed_system(s, spec)?;
            match live_pcmg_acyclic(&composed, spec).map_err(fail)? {
                Verdict::Yes(()) => ("yes", "LIVE".into(), json!({})),
                Verdict::No(d) => {
                    let mut names = composed.net.place_names(&d);
                    names.sort();
                    ("no", format!("NOT LIVE, siphon {{{}}} is unmarked at M0", names.join(",")), json!({"siphon": names}))
                }
                Verdict::Unknown(r) => unknown(&r, json!(null)),
            }
        }
    };
    let mut detail = detail;
    detail["method"] = json!(method_name(method));
    Ok(Report::new(verdict, text, detail))
}

fn cmd_bounded(c: &Ctx) -> Report {
    let s = c.sys;
    let sb = structurally_bounded(&s.net).is_yes();
    let cons = conservativeness(&s.net);
    match bounded(s, &c.budget) {
        Verdict::Yes(w) => {
            let k = w.bound.map(|k| format!(" ({k}-bounded)")).unwrap_or_default();
            let mut extra = Vec::new();
            if sb {
                extra.push("structurally bounded".to_string());
            }
            if let Verdict::Yes(cw) = &cons {
                extra.push(format!("conservative with weights {}", fmt_vec(&cw.weights)));
            }
            let tail = if extra.is_empty() { String::new() } else { format!(", {}", extra.join(", ")) };
            Report::new(
                "yes",
                format!("BOUNDED{k}{tail}"),
                json!({"bound": w.bound, "structurally_bounded": sb, "conservative": cons.is_yes()}),
            )
        }
        Verdict::No(p) => Report::new(
            "no",
            format!(
                "UNBOUNDED, {} repeats from {} to {} after {}",
                c.seq(&p.cycle),
                fmt_vec(&p.from),
                fmt_vec(&p.to),
                c.seq(&p.prefix)
            ),
            json!({"prefix": c.seq(&p.prefix), "cycle": c.seq(&p.cycle), "from": p.from, "to": p.to}),
        ),
        Verdict::Unknown(r) => {
            let (v, t, d) = unknown(&r, json!(null));
            Report::new(v, t, d)
        }
    }
}

fn cmd_reversible(c: &Ctx) -> Report {
    match reversible(c.sys, &c.budget) {
        Verdict::Yes(()) => Report::new("yes", "REVERSIBLE", json!({})),
        Verdict::No(u) => Report::new(
            "no",
            format!("NOT REVERSIBLE, M0 is not reachable from {} (via {})", fmt_vec(&u.marking), c.seq(&u.sequence)),
            json!({"marking": u.marking, "sequence": c.seq(&u.sequence)}),
        ),
        Verdict::Unknown(r) => {
            let (v, t, d) = unknown(&r, json!(null));
            Report::new(v, t, d)
        }
    }
}

fn cmd_tsequence(c: &Ctx) -> Report {
    match find_t_sequence(c.sys, &c.budget) {
        Verdict::Yes(s) => Report::new("yes", format!("T-SEQUENCE {}", c.seq(&s)), json!({"sequence": c.seq(&s)})),
        Verdict::No(r) => {
            let why = match r {
                prr_core::behavior::TSequenceRefutation::Inconsistent => "the net is not consistent",
                prr_core::behavior::TSequenceRefutation::NoCoveringCycle => {
                    "no cycle through M0 fires every transition"
                }
            };
            Report::new("no", format!("NO T-SEQUENCE, {why}"), json!({"reason": why}))
        }
        Verdict::Unknown(r) => {
            let (v, t, d) = unknown(&r, json!(null));
            Report::new(v, t, d)
        }
    }
}

fn cmd_lrb(c: &Ctx) -> Report {
    let r = lrb_report(c.sys, &c.budget);
    let row = |name: &str, s: &SystemLrb| {
        let bound = s.bound.map(|k| format!(" ({k})")).unwrap_or_default();
        format!("{name}: live {}, reversible {}, bounded {}{bound}", s.live.label(), s.reversible.label(), s.bounded.label())
    };
    let obj = |s: &SystemLrb| {
        json!({"live": s.live.label(), "reversible": s.reversible.label(), "bounded": s.bounded.label(), "bound": s.bound})
    };
    let text = format!(
        "{}\n{}\nproperty L {}, property R {}, property B {}",
        row("S", &r.forward),
        row("-S", &r.reverse),
        r.property_l.label(),
        r.property_r.label(),
        r.property_b.label()
    );
    let all = [&r.forward.live, &r.forward.reversible, &r.forward.bounded, &r.reverse.live, &r.reverse.reversible, &r.reverse.bounded];
    let verdict = if all.iter().any(|v| v.is_unknown()) { "unknown" } else { "yes" };
    let detail = json!({
        "forward": obj(&r.forward),
        "reverse": obj(&r.reverse),
        "property_l": r.property_l.label(),
        "property_r": r.property_r.label(),
        "property_b": r.property_b.label(),
    });
    Report::new(verdict, text, detail)
}

fn cmd_prr(c: &Ctx) -> Report {
    match prr_decide_with(c.sys, c.spec, &c.budget) {
        PrrVerdict::Equal(cert) => {
            let pre: Vec<&str> = cert.preconditions.iter().map(|p| p.name.as_str()).collect();
            Report::new(
                "yes",
                format!("EQUAL, certificate {:?} ({})", cert.rule, pre.join(", ")),
                json!({"rule": format!("{:?}", cert.rule), "preconditions": pre}),
            )
        }
        PrrVerdict::NotEqual(w) => Report::new(
            "no",
            format!("NOT EQUAL, witness {}, Y={}", fmt_vec(&w.marking), fmt_vec(&w.y)),
            json!({"witness": w.marking, "y": w.y}),
        ),
        PrrVerdict::Unknown(r) => {
            let (v, t, d) = unknown(&r, json!(null));
            Report::new(v, t, d)
        }
    }
}

fn cmd_reach(c: &Ctx, target: &Marking) -> Result<Report> {
    let v = is_reachable(c.sys, target, &c.budget).map_err(|e| usage(e.to_string()))?;
    Ok(match v {
        Verdict::Yes(s) => {
            Report::new("yes", format!("REACHABLE via {}", c.seq(&s)), json!({"target": target, "sequence": c.seq(&s)}))
        }
        Verdict::No(prr_core::prr::Unreachability::StateEquation(_)) => Report::new(
            "no",
            "UNREACHABLE, the state equation has no solution",
            json!({"target": target, "reason": "state-equation"}),
        ),
        Verdict::No(prr_core::prr::Unreachability::Exhaustive) => Report::new(
            "no",
            "UNREACHABLE, absent from the complete reachability graph",
            json!({"target": target, "reason": "exhaustive"}),
        ),
        Verdict::Unknown(r) => {
            let (v, t, d) = unknown(&r, json!({"target": target}));
            Report::new(v, t, d)
        }
    })
}

fn cmd_reverse(c: &Ctx) -> Report {
    let rev = c.sys.reverse();
    let text = serialize_system(&rev);
    Report::new("yes", text.trim_end().to_string(), json!({"net": text}))
}

fn cmd_fixtures(a: &FixturesArgs) -> Result<Report> {
    match &a.key {
        None => {
            let text: Vec<String> = fixtures().iter().map(|f| format!("{:<24} {}", f.key, f.note)).collect();
            let list: Vec<Value> = fixtures()
                .iter()
                .map(|f| json!({"key": f.key, "note": f.note, "composition": f.composition.is_some()}))
                .collect();
            Ok(Report::new("yes", text.join("\n"), json!({"fixtures": list})))
        }
        Some(key) => {
            let f = fixture(key).map_err(|e| usage(e.to_string()))?;
            Ok(Report::new("yes", f.text.trim_end().to_string(), json!({"key": f.key, "note": f.note, "net": f.text})))
        }
    }
}

fn emit(command: &str, net: Option<&str>, r: &Report, as_json: bool) {
    if as_json {
        let doc = json!({
            "schema": SCHEMA,
            "command": command,
            "net": net,
            "verdict": r.verdict,
            "summary": r.text.lines().next().unwrap_or(""),
            "detail": r.detail,
        });
        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    } else {
        println!("{}", r.text);
    }
}

fn run(cli: Cli) -> Result<bool> {
    let (name, a) = match &cli.command {
        Command::Fixtures(f) => {
            let r = cmd_fixtures(f)?;
            emit("fixtures", None, &r, f.json);
            return Ok(true);
        }
        Command::Validate(a) => ("validate", a),
        Command::Classify(a) => ("classify", a),
        Command::Siphons(a) => ("siphons", a),
        Command::Rg(a) => ("rg", a),
        Command::Live(a) => ("live", a),
        Command::Bounded(a) => ("bounded", a),
        Command::Reversible(a) => ("reversible", a),
        Command::Tsequence(a) => ("tsequence", a),
        Command::Lrb(a) => ("lrb", a),
        Command::Prr(a) => ("prr", a),
        Command::Reach(a) => ("reach", a),
        Command::Reverse(a) => ("reverse", a),
    };
    if a.method != Method::Auto && name != "live" {
        bail!(usage("--method applies to the live command only"));
    }
    let loaded = load(&a.file)?;
    let mut sys = loaded.sys;
    let mut target = None;
    if let Some(text) = &a.marking {
        let m = parse_marking(&sys, text)?;
        if name == "reach" {
            target = Some(m);
        } else {
            sys = sys.with_marking(m).map_err(|e| usage(e.to_string()))?;
        }
    }
    let c = Ctx { sys: &sys, spec: loaded.spec.as_ref(), budget: budget(a), method: a.method };
    let report = match name {
        "validate" => cmd_validate(&c),
        "classify" => cmd_classify(&c),
        "siphons" => cmd_siphons(&c),
        "rg" => cmd_rg(&c),
        "live" => cmd_live(&c)?,
        "bounded" => cmd_bounded(&c),
        "reversible" => cmd_reversible(&c),
        "tsequence" => cmd_tsequence(&c),
        "lrb" => cmd_lrb(&c),
        "prr" => cmd_prr(&c),
        "reach" => {
            let t = target.ok_or_else(|| usage("reach needs the target marking in --marking"))?;
            cmd_reach(&c, &t)?
        }
        "reverse" => cmd_reverse(&c),
        _ => unreachable!("every command is dispatched"),
    };
    emit(name, Some(sys.net.name()), &report, a.json);
    Ok(!(a.strict && report.verdict == "unknown"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli).context("prr") {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let usage_error = e.chain().any(|c| c.is::<UsageError>());
            eprintln!("error: {}", e.root_cause());
            if usage_error {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys() -> System {
        parse_system("net n\npl p 0\npl q 2\ntr t : p -> q\n").unwrap()
    }

    #[test]
    fn sparse_marking_defaults_to_zero() {
        assert_eq!(parse_marking(&sys(), "q=3").unwrap(), vec![0, 3]);
        assert_eq!(parse_marking(&sys(), " p = 1 , q=0 ").unwrap(), vec![1, 0]);
    }

    #[test]
    fn bad_markings_are_usage_errors() {
        for text in ["r=1", "p", "p=-1", "p=x"] {
            let e = parse_marking(&sys(), text).unwrap_err();
            assert!(e.is::<UsageError>(), "{text}");
        }
    }

    #[test]
    fn auto_method_follows_class() {
        let s = sys();
        let c = Ctx { sys: &s, spec: None, budget: Budget::default(), method: Method::Auto };
        assert!(resolve_method(&c) == Method::H1s || resolve_method(&c) == Method::Cf);
        let c = Ctx { method: Method::Rg, ..c };
        assert!(resolve_method(&c) == Method::Rg);
    }

    #[test]
    fn usage_errors_are_found_in_the_chain() {
        let e: anyhow::Error = usage("x");
        assert!(e.chain().any(|c| c.is::<UsageError>()));
        let e = anyhow::anyhow!("plain");
        assert!(!e.chain().any(|c| c.is::<UsageError>()));
    }
}
