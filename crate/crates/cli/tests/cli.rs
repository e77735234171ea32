use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn prr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prr")).args(args).output().unwrap()
}

fn fixture(name: &str) -> String {
    fixtures_dir().join(name).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn prr_reports_the_dead_wmg_witness() {
    let o = prr(&["prr", &fixture("deadwmg.pnet")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "NOT EQUAL, witness (0,1), Y=(1)");
}

#[test]
fn reach_prints_the_firing_sequence() {
    let o = prr(&["reach", "--marking", "p1=1,p2=0,p3=2,p4=3", &fixture("fig1.pnet")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "REACHABLE via t2 t1 t3");
}

#[test]
fn circuit_method_reports_an_ilp_witness() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(&dir, "dead.pnet", "net dead\npl p 0\npl q 0\ntr a : p -> q\ntr b : q -> p\n");
    let o = prr(&["live", "--method", "circuit", &f]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("NOT LIVE, ILP witness"), "{}", stdout(&o));
    let f = write(&dir, "live.pnet", "net live\npl p 1\npl q 0\ntr a : p -> q\ntr b : q -> p\n");
    assert_eq!(stdout(&prr(&["live", "--method", "circuit", &f])).trim(), "LIVE");
}

#[test]
fn json_output_is_schema_versioned_and_deterministic() {
    let a = prr(&["prr", "--json", &fixture("2ewmg.pnet")]);
    let b = prr(&["prr", "--json", &fixture("2ewmg.pnet")]);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "prr");
    assert_eq!(v["verdict"], "no");
    assert_eq!(v["detail"]["witness"], serde_json::json!([1, 1, 1, 1]));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(prr(&["bogus"]).status.code(), Some(2));
    assert_eq!(prr(&["live", "--method", "nope", &fixture("fig1.pnet")]).status.code(), Some(2));
    assert_eq!(prr(&["live", "/no/such/file.pnet"]).status.code(), Some(2));
    assert_eq!(prr(&["reach", &fixture("fig1.pnet")]).status.code(), Some(2));
    assert_eq!(prr(&["live", "--marking", "zz=1", &fixture("fig1.pnet")]).status.code(), Some(2));
    assert_eq!(prr(&["live", "--method", "wmg", &fixture("ce2choice.pnet")]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let f = write(&dir, "bad.pnet", "net bad\npl p 0\ntr t : p*0 -> p\n");
    let o = prr(&["validate", &f]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("zero"));
}

#[test]
fn strict_turns_unknown_into_exit_one() {
    let args = ["live", "--method", "rg", "--max-states", "3", &fixture("fig1.pnet")];
    let o = prr(&args);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("UNKNOWN"));
    let mut strict = args.to_vec();
    strict.push("--strict");
    assert_eq!(prr(&strict).status.code(), Some(1));
}

#[test]
fn marking_override_replaces_the_initial_marking() {
    let o = prr(&["live", "--method", "rg", "--marking", "p3=4", &fixture("fig1.pnet")]);
    assert!(stdout(&o).starts_with("NOT LIVE"), "{}", stdout(&o));
}

#[test]
fn compositions_load_with_their_components() {
    let o = prr(&["live", "--method", "pcmg", &fixture("acyclic_pcmg.pcmg")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "LIVE");
    let o = prr(&["live", "--method", "pcmg", &fixture("nonrev_triangle.pcmg")]);
    assert_eq!(o.status.code(), Some(2));
    let o = prr(&["validate", &fixture("nonrev_triangle.pcmg")]);
    assert!(stdout(&o).contains("composed of 3 components"), "{}", stdout(&o));
}

#[test]
fn every_subcommand_runs_on_fig1() {
    let f = fixture("fig1.pnet");
    for cmd in ["validate", "classify", "siphons", "rg", "live", "bounded", "reversible", "tsequence", "lrb", "prr", "reverse"] {
        let o = prr(&[cmd, &f]);
        assert_eq!(o.status.code(), Some(0), "{cmd}");
        let j = prr(&[cmd, "--json", &f]);
        let v: Value = serde_json::from_slice(&j.stdout).unwrap();
        assert_eq!(v["command"], cmd);
    }
    assert_eq!(stdout(&prr(&["bounded", &f])).lines().next().unwrap().split(',').next(), Some("BOUNDED (4-bounded)"));
    assert_eq!(stdout(&prr(&["reversible", &f])).trim(), "REVERSIBLE");
}

#[test]
fn reverse_output_parses_and_reverses_back() {
    let dir = tempfile::tempdir().unwrap();
    let once = stdout(&prr(&["reverse", &fixture("fig1.pnet")]));
    let f = write(&dir, "rev.pnet", &once);
    let twice = stdout(&prr(&["reverse", &f]));
    assert_eq!(twice.trim(), fs::read_to_string(fixture("fig1.pnet")).unwrap().trim());
}

#[test]
fn fixtures_are_listed_and_printed() {
    let list = stdout(&prr(&["fixtures"]));
    assert!(list.lines().any(|l| l.starts_with("deadwmg ")));
    let text = stdout(&prr(&["fixtures", "fig1"]));
    assert_eq!(text.trim(), fs::read_to_string(fixture("fig1.pnet")).unwrap().trim());
    assert_eq!(prr(&["fixtures", "nope"]).status.code(), Some(2));
    let o = prr(&["tsequence", "fixture:nonrev2p_a"]);
    assert_eq!(stdout(&o).trim(), "T-SEQUENCE t0 t3 t2 t1");
}
