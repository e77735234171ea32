//! Example systems shipped with the crate, each with the claims it is known
//! to satisfy. Every claim is re-derived by the test suite.

use thiserror::Error;

use crate::format::{parse_pcmg, parse_system, FormatError};
use crate::net::System;
use crate::structure::{ClassReport, PcmgSpec};
use crate::Tokens;

const FILES: &[(&str, &str)] = &[
    ("2ewmg.pnet", include_str!("../fixtures/2ewmg.pnet")),
    ("acyclic_pcmg.e.pnet", include_str!("../fixtures/acyclic_pcmg.e.pnet")),
    ("acyclic_pcmg.e0.pnet", include_str!("../fixtures/acyclic_pcmg.e0.pnet")),
    ("acyclic_pcmg.e1.pnet", include_str!("../fixtures/acyclic_pcmg.e1.pnet")),
    ("acyclic_pcmg.e2.pnet", include_str!("../fixtures/acyclic_pcmg.e2.pnet")),
    ("acyclic_pcmg.e3.pnet", include_str!("../fixtures/acyclic_pcmg.e3.pnet")),
    ("acyclic_pcmg.pcmg", include_str!("../fixtures/acyclic_pcmg.pcmg")),
    ("acyclic_pcmg.pnet", include_str!("../fixtures/acyclic_pcmg.pnet")),
    ("amgvspcmg_mid.e1.pnet", include_str!("../fixtures/amgvspcmg_mid.e1.pnet")),
    ("amgvspcmg_mid.e2.pnet", include_str!("../fixtures/amgvspcmg_mid.e2.pnet")),
    ("amgvspcmg_mid.e3.pnet", include_str!("../fixtures/amgvspcmg_mid.e3.pnet")),
    ("amgvspcmg_mid.pcmg", include_str!("../fixtures/amgvspcmg_mid.pcmg")),
    ("amgvspcmg_mid.pnet", include_str!("../fixtures/amgvspcmg_mid.pnet")),
    ("amgvspcmg_right.pnet", include_str!("../fixtures/amgvspcmg_right.pnet")),
    ("campos_merged.pnet", include_str!("../fixtures/campos_merged.pnet")),
    ("campos_mg.pnet", include_str!("../fixtures/campos_mg.pnet")),
    ("ce2choice.pnet", include_str!("../fixtures/ce2choice.pnet")),
    ("cepramg_left.pnet", include_str!("../fixtures/cepramg_left.pnet")),
    ("cepramg_mid.pnet", include_str!("../fixtures/cepramg_mid.pnet")),
    ("comparison_h1s.pnet", include_str!("../fixtures/comparison_h1s.pnet")),
    ("comparison_hfc.pnet", include_str!("../fixtures/comparison_hfc.pnet")),
    ("deadwmg.pnet", include_str!("../fixtures/deadwmg.pnet")),
    ("examg_left.pnet", include_str!("../fixtures/examg_left.pnet")),
    ("examg_right.pnet", include_str!("../fixtures/examg_right.pnet")),
    ("exsub1_left.pnet", include_str!("../fixtures/exsub1_left.pnet")),
    ("exsub1_right.pnet", include_str!("../fixtures/exsub1_right.pnet")),
    ("exsub2_hac.pnet", include_str!("../fixtures/exsub2_hac.pnet")),
    ("exsub2_hfc.pnet", include_str!("../fixtures/exsub2_hfc.pnet")),
    ("exsub2_nonac.pnet", include_str!("../fixtures/exsub2_nonac.pnet")),
    ("exsub2_sm.pnet", include_str!("../fixtures/exsub2_sm.pnet")),
    ("fig1.pnet", include_str!("../fixtures/fig1.pnet")),
    ("fig_pcmg_left.e1.pnet", include_str!("../fixtures/fig_pcmg_left.e1.pnet")),
    ("fig_pcmg_left.pcmg", include_str!("../fixtures/fig_pcmg_left.pcmg")),
    ("fig_pcmg_left.pnet", include_str!("../fixtures/fig_pcmg_left.pnet")),
    ("fig_pcmg_right.e1.pnet", include_str!("../fixtures/fig_pcmg_right.e1.pnet")),
    ("fig_pcmg_right.pcmg", include_str!("../fixtures/fig_pcmg_right.pcmg")),
    ("fig_pcmg_right.pnet", include_str!("../fixtures/fig_pcmg_right.pnet")),
    ("initdirnotdir.pnet", include_str!("../fixtures/initdirnotdir.pnet")),
    ("nonrev2p_a.pnet", include_str!("../fixtures/nonrev2p_a.pnet")),
    ("nonrev2p_mg.pnet", include_str!("../fixtures/nonrev2p_mg.pnet")),
    ("nonrev_triangle.e1.pnet", include_str!("../fixtures/nonrev_triangle.e1.pnet")),
    ("nonrev_triangle.e2.pnet", include_str!("../fixtures/nonrev_triangle.e2.pnet")),
    ("nonrev_triangle.e3.pnet", include_str!("../fixtures/nonrev_triangle.e3.pnet")),
    ("nonrev_triangle.pcmg", include_str!("../fixtures/nonrev_triangle.pcmg")),
    ("nonrev_triangle.pnet", include_str!("../fixtures/nonrev_triangle.pnet")),
    ("nonstruclive_triangle.e1.pnet", include_str!("../fixtures/nonstruclive_triangle.e1.pnet")),
    ("nonstruclive_triangle.e2.pnet", include_str!("../fixtures/nonstruclive_triangle.e2.pnet")),
    ("nonstruclive_triangle.e3.pnet", include_str!("../fixtures/nonstruclive_triangle.e3.pnet")),
    ("nonstruclive_triangle.pcmg", include_str!("../fixtures/nonstruclive_triangle.pcmg")),
    ("nonstruclive_triangle.pnet", include_str!("../fixtures/nonstruclive_triangle.pnet")),
    ("onechoicewmg.pnet", include_str!("../fixtures/onechoicewmg.pnet")),
    ("onechoicewmg_right.pnet", include_str!("../fixtures/onechoicewmg_right.pnet")),
    ("ssystem_nonrev.pnet", include_str!("../fixtures/ssystem_nonrev.pnet")),
];

/// Contents of a shipped file by name.
pub fn file(name: &str) -> Option<&'static str> {
    FILES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassFlag {
    Ordinary,
    Homogeneous,
    ChoiceFree,
    WmgLe,
    MarkedGraph,
    FreeChoice,
    AsymmetricChoice,
    StateMachine,
    Hfc,
    H1sWmgLe,
}

impl ClassFlag {
    pub fn of(self, r: &ClassReport) -> bool {
        match self {
            ClassFlag::Ordinary => r.ordinary,
            ClassFlag::Homogeneous => r.homogeneous,
            ClassFlag::ChoiceFree => r.choice_free,
            ClassFlag::WmgLe => r.wmg_le,
            ClassFlag::MarkedGraph => r.marked_graph,
            ClassFlag::FreeChoice => r.free_choice,
            ClassFlag::AsymmetricChoice => r.asymmetric_choice,
            ClassFlag::StateMachine => r.state_machine,
            ClassFlag::Hfc => r.hfc,
            ClassFlag::H1sWmgLe => r.h1s_wmg_le,
        }
    }
}

/// A potentially reachable marking that is not reachable. `after` is fired
/// from the initial marking first; the marking is reached from there by the
/// T-vector `y` when given.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Unreachable {
    pub after: &'static [&'static str],
    pub marking: Option<&'static [Tokens]>,
    pub y: Option<&'static [Tokens]>,
}

/// Claims attached to a fixture. `None` and empty lists claim nothing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Expected {
    pub classes: &'static [(ClassFlag, bool)],
    pub shared_places: Option<&'static [&'static str]>,
    pub amg: Option<bool>,
    pub well_structured: Option<bool>,
    pub acyclic_graph: Option<bool>,
    pub rg_states: Option<usize>,
    pub live: Option<bool>,
    pub reversible: Option<bool>,
    pub bounded: Option<bool>,
    /// Largest token count on a place over the reachable markings.
    pub bound: Option<Tokens>,
    /// Every reachable marking has at most one token per place.
    pub safe: Option<bool>,
    pub structurally_bounded: Option<bool>,
    /// A P-semiflow with all weights 1.
    pub conservative1: Option<bool>,
    pub consistent: Option<bool>,
    pub reverse_live: Option<bool>,
    pub reverse_reversible: Option<bool>,
    pub reverse_bounded: Option<bool>,
    pub property_r: Option<bool>,
    pub directed: Option<bool>,
    pub initially_directed: Option<bool>,
    /// Whether PR(S) = R(S).
    pub prr: Option<bool>,
    pub unreachable: &'static [Unreachable],
    /// A marking with a sequence reaching it from the initial marking.
    pub reachable: &'static [(&'static [Tokens], &'static [&'static str])],
    /// A feasible sequence returning to the initial marking and firing every
    /// transition.
    pub t_sequence: Option<&'static [&'static str]>,
    pub has_t_sequence: Option<bool>,
    /// The complete list of minimal siphons.
    pub minimal_siphons: Option<&'static [&'static [&'static str]]>,
    /// Minimal siphons that must be among those found.
    pub siphons_include: &'static [&'static [&'static str]],
}

impl Expected {
    pub const NONE: Expected = Expected {
        classes: &[],
        shared_places: None,
        amg: None,
        well_structured: None,
        acyclic_graph: None,
        rg_states: None,
        live: None,
        reversible: None,
        bounded: None,
        bound: None,
        safe: None,
        structurally_bounded: None,
        conservative1: None,
        consistent: None,
        reverse_live: None,
        reverse_reversible: None,
        reverse_bounded: None,
        property_r: None,
        directed: None,
        initially_directed: None,
        prr: None,
        unreachable: &[],
        reachable: &[],
        t_sequence: None,
        has_t_sequence: None,
        minimal_siphons: None,
        siphons_include: &[],
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fixture {
    pub key: &'static str,
    pub note: &'static str,
    pub text: &'static str,
    /// Composition file when the system is built from a graph.
    pub composition: Option<&'static str>,
    pub expected: Expected,
}

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("unknown fixture `{0}`")]
    UnknownKey(String),
    #[error(transparent)]
    Format(#[from] FormatError),
}

impl Fixture {
    pub fn system(&self) -> System {
        parse_system(self.text).expect("shipped fixtures parse")
    }

    pub fn pcmg(&self) -> Option<PcmgSpec> {
        self.composition.map(|text| {
            parse_pcmg(text, |name| {
                file(name)
                    .map(str::to_string)
                    .ok_or(FormatError::Io { path: name.into(), message: "no such fixture file".into() })
            })
            .expect("shipped compositions parse")
        })
    }

    pub fn file_name(&self) -> String {
        format!("{}.pnet", self.key)
    }
}

use ClassFlag::*;

const E: Expected = Expected::NONE;

macro_rules! fixture {
    ($key:literal, $note:literal, $exp:expr) => {
        Fixture {
            key: $key,
            note: $note,
            text: include_str!(concat!("../fixtures/", $key, ".pnet")),
            composition: None,
            expected: $exp,
        }
    };
    ($key:literal, pcmg, $note:literal, $exp:expr) => {
        Fixture {
            key: $key,
            note: $note,
            text: include_str!(concat!("../fixtures/", $key, ".pnet")),
            composition: Some(include_str!(concat!("../fixtures/", $key, ".pcmg"))),
            expected: $exp,
        }
    };
}

const CORPUS: &[Fixture] = &[
    fixture!(
        "fig1",
        "Choice-free system without shared places; six reachable markings.",
        Expected {
            shared_places: Some(&[]),
            rg_states: Some(6),
            live: Some(true),
            reversible: Some(true),
            bounded: Some(true),
            bound: Some(4),
            reachable: &[(&[1, 0, 2, 3], &["t2", "t1", "t3"])],
            ..E
        }
    ),
    fixture!(
        "deadwmg",
        "Deadlocked unit-weighted marked graph; (0,k) solves the state equation for every k.",
        Expected {
            classes: &[(Ordinary, true), (WmgLe, true)],
            live: Some(false),
            prr: Some(false),
            unreachable: &[
                Unreachable { after: &[], marking: Some(&[0, 1]), y: Some(&[1]) },
                Unreachable { after: &[], marking: Some(&[0, 2]), y: Some(&[2]) },
            ],
            ..E
        }
    ),
    fixture!(
        "initdirnotdir",
        "One token, two exclusive consumers; initially directed, not directed.",
        Expected { directed: Some(false), initially_directed: Some(true), ..E }
    ),
    fixture!(
        "cepramg_left",
        "Live, reversible, bounded AMG with one shared place whose reverse deadlocks.",
        Expected {
            amg: Some(true),
            shared_places: Some(&["p5"]),
            live: Some(true),
            reversible: Some(true),
            bounded: Some(true),
            reverse_live: Some(false),
            reverse_reversible: Some(false),
            reverse_bounded: Some(true),
            property_r: Some(false),
            prr: Some(false),
            unreachable: &[Unreachable {
                after: &[],
                marking: Some(&[0, 0, 2, 0, 0, 1, 0]),
                y: Some(&[2, 0, 2, 2, 2]),
            }],
            ..E
        }
    ),
    fixture!(
        "cepramg_mid",
        "AMG whose reverse is also live, reversible and bounded; (1,1,0,0) is an unreachable deadlock.",
        Expected {
            amg: Some(true),
            live: Some(true),
            reversible: Some(true),
            bounded: Some(true),
            reverse_live: Some(true),
            reverse_reversible: Some(true),
            reverse_bounded: Some(true),
            property_r: Some(true),
            prr: Some(false),
            siphons_include: &[&["p3", "p4"]],
            unreachable: &[Unreachable { after: &[], marking: Some(&[1, 1, 0, 0]), y: Some(&[1, 1, 0, 0]) }],
            ..E
        }
    ),
    fixture!(
        "ce2choice",
        "Live, reversible, bounded AMG with two shared places and a siphon emptied only by the state equation.",
        Expected {
            amg: Some(true),
            shared_places: Some(&["p4", "p9"]),
            live: Some(true),
            reversible: Some(true),
            bounded: Some(true),
            reverse_live: Some(true),
            reverse_reversible: Some(true),
            reverse_bounded: Some(true),
            property_r: Some(true),
            prr: Some(false),
            siphons_include: &[&["p9", "p10"]],
            unreachable: &[Unreachable { after: &[], marking: None, y: Some(&[2, 1, 2, 0, 1]) }],
            ..E
        }
    ),
    fixture!(
        "2ewmg",
        "Non-homogeneous system with four shared places; (1,1,1,1) solves the state equation but is unreachable.",
        Expected {
            classes: &[(Homogeneous, false)],
            shared_places: Some(&["p0", "p1", "p2", "p3"]),
            live: Some(true),
            reversible: Some(true),
            reverse_live: Some(true),
            reverse_reversible: Some(true),
            property_r: Some(true),
            prr: Some(false),
            minimal_siphons: Some(&[&["p0", "p1"], &["p2", "p3"]]),
            unreachable: &[Unreachable { after: &[], marking: Some(&[1, 1, 1, 1]), y: None }],
            ..E
        }
    ),
    fixture!(
        "nonrev2p_mg",
        "Unit-weighted marked graph; merging p1 with p1' and p2 with p2' yields nonrev2p_a.",
        Expected { classes: &[(MarkedGraph, true), (Ordinary, true)], ..E }
    ),
    fixture!(
        "nonrev2p_a",
        "Two shared places; a T-sequence exists but the system is not reversible.",
        Expected {
            classes: &[(Ordinary, true)],
            shared_places: Some(&["p1", "p2"]),
            rg_states: Some(8),
            live: Some(true),
            structurally_bounded: Some(true),
            reversible: Some(false),
            t_sequence: Some(&["t0", "t3", "t2", "t1"]),
            has_t_sequence: Some(true),
            ..E
        }
    ),
    fixture!(
        "campos_mg",
        "Unmarked marked graph; merging the primed place pairs yields campos_merged.",
        Expected { classes: &[(MarkedGraph, true)], ..E }
    ),
    fixture!(
        "campos_merged",
        "Conservative and consistent; live with a T-sequence yet not reversible.",
        Expected {
            rg_states: Some(8),
            conservative1: Some(true),
            consistent: Some(true),
            live: Some(true),
            reversible: Some(false),
            t_sequence: Some(&["t3", "t2", "t1", "t0"]),
            has_t_sequence: Some(true),
            ..E
        }
    ),
    fixture!(
        "nonrev_triangle",
        pcmg,
        "Composed from a triangle graph; live, not reversible, no T-sequence.",
        Expected {
            well_structured: Some(true),
            acyclic_graph: Some(false),
            amg: Some(false),
            live: Some(true),
            reversible: Some(false),
            has_t_sequence: Some(false),
            ..E
        }
    ),
    fixture!(
        "nonstruclive_triangle",
        pcmg,
        "Composed from a triangle graph; the siphon {p0,p2,p4} does not induce a state machine.",
        Expected { well_structured: Some(true), acyclic_graph: Some(false), siphons_include: &[&["p0", "p2", "p4"]], ..E }
    ),
    fixture!(
        "ssystem_nonrev",
        "Weighted homogeneous state machine shaped like a path of two components; live, and M0 is unreachable after t2.",
        Expected {
            classes: &[(Homogeneous, true)],
            live: Some(true),
            reversible: Some(false),
            unreachable: &[Unreachable { after: &["t2"], marking: Some(&[1, 0, 1]), y: None }],
            ..E
        }
    ),
    fixture!(
        "fig_pcmg_left",
        pcmg,
        "Two-place circuit composed from a single edge.",
        Expected { classes: &[(MarkedGraph, true)], well_structured: Some(true), acyclic_graph: Some(true), live: Some(true), ..E }
    ),
    fixture!(
        "fig_pcmg_right",
        pcmg,
        "Single synchronising transition; the component is not a well-formed marked graph.",
        Expected { well_structured: Some(false), ..E }
    ),
    fixture!(
        "amgvspcmg_mid",
        pcmg,
        "Composed from a triangle graph; its marked-graph part connects no transitions, so it is no AMG.",
        Expected { well_structured: Some(true), acyclic_graph: Some(false), amg: Some(false), ..E }
    ),
    fixture!(
        "amgvspcmg_right",
        "AMG whose transition t0 touches three shared places.",
        Expected { amg: Some(true), ..E }
    ),
    fixture!(
        "examg_left",
        "AMG with resource p5 and unmarked paths t1 p3 t3 and t2 p6 t4.",
        Expected { amg: Some(true), safe: Some(false), ..E }
    ),
    fixture!("examg_right", "Marking p3 breaks the AMG conditions.", Expected { amg: Some(false), safe: Some(false), ..E }),
    fixture!(
        "onechoicewmg",
        "Homogeneous system with the single shared place p; deleting p yields onechoicewmg_right.",
        Expected { classes: &[(H1sWmgLe, true)], shared_places: Some(&["p"]), ..E }
    ),
    fixture!("onechoicewmg_right", "Weighted marked graph with sinks allowed.", Expected { classes: &[(WmgLe, true)], ..E }),
    fixture!(
        "exsub1_left",
        "Ordinary net with the single shared place p2.",
        Expected {
            classes: &[(Ordinary, true), (Homogeneous, true), (ChoiceFree, false)],
            shared_places: Some(&["p2"]),
            ..E
        }
    ),
    fixture!(
        "exsub1_right",
        "Homogeneous, not ordinary, single shared place p2.",
        Expected {
            classes: &[(Ordinary, false), (Homogeneous, true), (ChoiceFree, false)],
            shared_places: Some(&["p2"]),
            ..E
        }
    ),
    fixture!("exsub2_hfc", "Homogeneous free choice.", Expected { classes: &[(Hfc, true), (ChoiceFree, false)], ..E }),
    fixture!(
        "exsub2_hac",
        "Homogeneous asymmetric choice.",
        Expected { classes: &[(Homogeneous, true), (AsymmetricChoice, true), (ChoiceFree, false)], ..E }
    ),
    fixture!(
        "exsub2_nonac",
        "Homogeneous without asymmetric choice at t1.",
        Expected { classes: &[(Homogeneous, true), (AsymmetricChoice, false), (ChoiceFree, false)], ..E }
    ),
    fixture!("exsub2_sm", "One place, two loops.", Expected { classes: &[(StateMachine, true), (ChoiceFree, false)], ..E }),
    fixture!("comparison_h1s", "Homogeneous with one shared place.", Expected { classes: &[(H1sWmgLe, true)], ..E }),
    fixture!("comparison_hfc", "One place with two weighted consumers.", Expected { classes: &[(Hfc, true)], ..E }),
    fixture!(
        "acyclic_pcmg",
        pcmg,
        "Composed from a tree on six vertices.",
        Expected { well_structured: Some(true), acyclic_graph: Some(true), ..E }
    ),
];

pub fn fixtures() -> &'static [Fixture] {
    CORPUS
}

pub fn fixture(key: &str) -> Result<&'static Fixture, FixtureError> {
    CORPUS.iter().find(|f| f.key == key).ok_or_else(|| FixtureError::UnknownKey(key.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::{parse, serialize};

    #[test]
    fn corpus_parses_and_round_trips() {
        for f in fixtures() {
            let doc = parse(f.text).unwrap();
            assert_eq!(serialize(&doc), f.text, "{}", f.key);
            assert_eq!(doc.name, f.key);
            f.system();
            f.pcmg();
        }
    }

    #[test]
    fn unknown_key() {
        assert!(matches!(fixture("nope"), Err(FixtureError::UnknownKey(_))));
        assert_eq!(fixture("fig1").unwrap().expected.bound, Some(4));
    }
}
