//! Place-composed marked graphs: an undirected graph whose edges are refined
//! into marked-graph components and whose vertices become merged places.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use super::siphon::{minimal_siphons, minimal_traps, SiphonOrTrap};
use crate::net::{merge_places, p_subnet, MergeGroup, Net, NetError, System};
use crate::verdict::{Budget, Verdict};
use crate::Tokens;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcmgEdge {
    pub id: String,
    pub a: String,
    pub b: String,
    pub component: System,
    /// Component place standing for vertex `a`.
    pub place_a: String,
    /// Component place standing for vertex `b`.
    pub place_b: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcmgSpec {
    pub vertices: Vec<String>,
    pub edges: Vec<PcmgEdge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PcmgError {
    #[error("graph has no edge")]
    NoEdges,
    #[error("duplicate vertex or edge id {0}")]
    Duplicate(String),
    #[error("edge {edge} names unknown vertex {vertex}")]
    UnknownVertex { edge: String, vertex: String },
    #[error("edge {0} is a self-loop")]
    SelfLoop(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("component of edge {edge} has {places} places, at least 2 needed")]
    TooFewPlaces { edge: String, places: usize },
    #[error("component of edge {0} is not a unit-weighted marked graph with relaxed place constraints")]
    NotMgLe(String),
    #[error("component of edge {0} is not connected")]
    ComponentDisconnected(String),
    #[error("edge {edge}: place {place} is not in its component")]
    GammaOutside { edge: String, place: String },
    #[error("edge {0}: both endpoints map to the same place")]
    GammaNotDistinct(String),
    #[error("spec is not well-structured")]
    NotWellStructured,
    #[error(transparent)]
    Net(#[from] NetError),
}

/// Where each part of the composed net comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PcmgProvenance {
    /// Vertex id to the merged place realizing it.
    pub vertex_place: BTreeMap<String, usize>,
    /// Per edge, component place index to composed place index.
    pub places: Vec<Vec<usize>>,
    /// Per edge, component transition index to composed transition index.
    pub transitions: Vec<Vec<usize>>,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut c = x;
    while parent[c] != r {
        let n = parent[c];
        parent[c] = r;
        c = n;
    }
    r
}

impl PcmgSpec {
    fn vertex_index(&self) -> BTreeMap<&str, usize> {
        self.vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect()
    }

    /// Checks every structural requirement of the definition.
    pub fn validate(&self) -> Result<(), PcmgError> {
        if self.edges.is_empty() {
            return Err(PcmgError::NoEdges);
        }
        let mut ids = HashSet::new();
        for id in self.vertices.iter().chain(self.edges.iter().map(|e| &e.id)) {
            if !ids.insert(id.as_str()) {
                return Err(PcmgError::Duplicate(id.clone()));
            }
        }
        let vi = self.vertex_index();
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        for e in &self.edges {
            let lookup = |v: &String| {
                vi.get(v.as_str()).copied().ok_or(PcmgError::UnknownVertex { edge: e.id.clone(), vertex: v.clone() })
            };
            let (a, b) = (lookup(&e.a)?, lookup(&e.b)?);
            if a == b {
                return Err(PcmgError::SelfLoop(e.id.clone()));
            }
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
            let net = &e.component.net;
            if net.num_places() < 2 {
                return Err(PcmgError::TooFewPlaces { edge: e.id.clone(), places: net.num_places() });
            }
            let unit = (0..net.num_transitions())
                .all(|t| net.inputs(t).iter().chain(net.outputs(t)).all(|&(_, w)| w == 1));
            let le = (0..net.num_places()).all(|p| net.producers(p).len() <= 1 && net.consumers(p).len() <= 1);
            if !unit || !le {
                return Err(PcmgError::NotMgLe(e.id.clone()));
            }
            if !net.is_connected() {
                return Err(PcmgError::ComponentDisconnected(e.id.clone()));
            }
            let pa = net.place(&e.place_a).map_err(|_| PcmgError::GammaOutside { edge: e.id.clone(), place: e.place_a.clone() })?;
            let pb = net.place(&e.place_b).map_err(|_| PcmgError::GammaOutside { edge: e.id.clone(), place: e.place_b.clone() })?;
            if pa == pb {
                return Err(PcmgError::GammaNotDistinct(e.id.clone()));
            }
        }
        let root = find(&mut parent, 0);
        if (0..self.vertices.len()).any(|v| find(&mut parent, v) != root) {
            return Err(PcmgError::Disconnected);
        }
        Ok(())
    }
}

/// Disjoint union of the components in edge order, then one merged place per
/// vertex, named by the vertex and carrying the sum of the members' tokens.
/// Component ids are kept when unique across components, otherwise prefixed
/// with `<edge>.`.
pub fn build_pcmg(spec: &PcmgSpec) -> Result<(System, PcmgProvenance), PcmgError> {
    spec.validate()?;
    let mut count: BTreeMap<&str, usize> = BTreeMap::new();
    for e in &spec.edges {
        for id in e.component.net.place_ids().iter().chain(e.component.net.transition_ids()) {
            *count.entry(id.as_str()).or_insert(0) += 1;
        }
    }
    for v in &spec.vertices {
        *count.entry(v.as_str()).or_insert(0) += 1;
    }
    let name_of = |e: &PcmgEdge, id: &str| if count[id] > 1 { format!("{}.{}", e.id, id) } else { id.to_string() };
    let mut places = Vec::new();
    let mut transitions = Vec::new();
    let mut pre = Vec::new();
    let mut post = Vec::new();
    let mut m0: Vec<Tokens> = Vec::new();
    let mut prov_p = Vec::new();
    let mut prov_t = Vec::new();
    let vi = spec.vertex_index();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); spec.vertices.len()];
    for e in &spec.edges {
        let net = &e.component.net;
        let base = places.len();
        let pa = net.place(&e.place_a)?;
        let pb = net.place(&e.place_b)?;
        for p in 0..net.num_places() {
            // Endpoint places get a placeholder name; merging renames them.
            let name = if p == pa || p == pb { format!("\u{0}{}#{}", e.id, p) } else { name_of(e, net.place_id(p)) };
            places.push(name);
            m0.push(e.component.m0[p]);
        }
        members[vi[e.a.as_str()]].push(base + pa);
        members[vi[e.b.as_str()]].push(base + pb);
        prov_p.push((0..net.num_places()).map(|p| base + p).collect::<Vec<_>>());
        let tbase = transitions.len();
        for t in 0..net.num_transitions() {
            transitions.push(name_of(e, net.transition_id(t)));
            pre.push(net.inputs(t).iter().map(|&(p, w)| (base + p, w)).collect());
            post.push(net.outputs(t).iter().map(|&(p, w)| (base + p, w)).collect());
        }
        prov_t.push((0..net.num_transitions()).map(|t| tbase + t).collect::<Vec<_>>());
    }
    let union = Net::from_arcs("union", places, transitions, pre, post)?;
    let groups: Vec<MergeGroup> =
        spec.vertices.iter().zip(&members).map(|(v, ms)| MergeGroup::named(v.clone(), ms.clone())).collect();
    let (merged, map) = merge_places(&union, &groups)?;
    let name = spec.edges.iter().map(|e| e.id.as_str()).collect::<Vec<_>>().join("+");
    let merged = merged.with_name(format!("pcmg[{name}]"));
    let mut m = vec![0; merged.num_places()];
    for (old, &new) in map.iter().enumerate() {
        m[new] += m0[old];
    }
    let vertex_place = spec.vertices.iter().zip(&members).map(|(v, ms)| (v.clone(), map[ms[0]])).collect();
    let places = prov_p.into_iter().map(|ps| ps.into_iter().map(|p| map[p]).collect()).collect();
    let sys = System::new(merged, m)?;
    Ok((sys, PcmgProvenance { vertex_place, places, transitions: prov_t }))
}

/// Per-component result of the well-structuredness test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    pub edge: String,
    pub marked_graph: bool,
    pub strongly_connected: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WellStructuredReport {
    pub components: Vec<ComponentReport>,
    pub well_structured: bool,
    pub acyclic_graph: bool,
}

/// Each component must be a strongly connected unit-weighted marked graph.
pub fn well_structured(spec: &PcmgSpec) -> Result<WellStructuredReport, PcmgError> {
    spec.validate()?;
    let components: Vec<ComponentReport> = spec
        .edges
        .iter()
        .map(|e| {
            let net = &e.component.net;
            let mg = (0..net.num_places()).all(|p| net.producers(p).len() == 1 && net.consumers(p).len() == 1);
            ComponentReport { edge: e.id.clone(), marked_graph: mg, strongly_connected: net.is_strongly_connected() }
        })
        .collect();
    let well = components.iter().all(|c| c.marked_graph && c.strongly_connected);
    Ok(WellStructuredReport { components, well_structured: well, acyclic_graph: graph_acyclic(spec) })
}

/// The undirected graph is a forest. Parallel edges form a cycle.
pub fn graph_acyclic(spec: &PcmgSpec) -> bool {
    let vi = spec.vertex_index();
    let mut parent: Vec<usize> = (0..spec.vertices.len()).collect();
    for e in &spec.edges {
        let (Some(&a), Some(&b)) = (vi.get(e.a.as_str()), vi.get(e.b.as_str())) else { return false };
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return false;
        }
        parent[ra] = rb;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InducedStructure {
    pub set: SiphonOrTrap,
    pub state_machine: bool,
    pub strongly_connected: bool,
}

impl InducedStructure {
    pub fn holds(&self) -> bool {
        self.state_machine && self.strongly_connected
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SiphonStructureReport {
    /// Well-structured with an acyclic graph.
    pub hypotheses_hold: bool,
    pub sets: Vec<InducedStructure>,
    pub complete: bool,
}

impl SiphonStructureReport {
    /// Yes with every set when all induce strongly connected state machines,
    /// otherwise No with the first offending set.
    pub fn verdict(&self) -> Verdict<Vec<InducedStructure>, InducedStructure> {
        if let Some(bad) = self.sets.iter().find(|s| !s.holds()) {
            return Verdict::No(bad.clone());
        }
        if !self.complete {
            return Verdict::Unknown("minimal siphon enumeration exceeded the subset cap".into());
        }
        Verdict::Yes(self.sets.clone())
    }
}

fn induced(net: &Net, set: SiphonOrTrap) -> Result<InducedStructure, PcmgError> {
    let (sub, _) = p_subnet(net, &set.places)?;
    let state_machine = (0..sub.num_transitions()).all(|t| {
        let (i, o) = (sub.inputs(t), sub.outputs(t));
        i.len() == 1 && o.len() == 1 && i[0].1 == 1 && o[0].1 == 1
    });
    Ok(InducedStructure { set, state_machine, strongly_connected: sub.is_strongly_connected() })
}

/// Tests whether every minimal siphon and trap of the composed net induces a
/// strongly connected state-machine P-subnet. Requires well-structuredness;
/// a cyclic graph is reported through `hypotheses_hold` rather than refused.
pub fn siphon_structure_check(spec: &PcmgSpec, budget: &Budget) -> Result<SiphonStructureReport, PcmgError> {
    let ws = well_structured(spec)?;
    if !ws.well_structured {
        return Err(PcmgError::NotWellStructured);
    }
    let (sys, _) = build_pcmg(spec)?;
    let siphons = minimal_siphons(&sys.net, budget);
    let traps = minimal_traps(&sys.net, budget);
    let mut sets = Vec::new();
    for s in siphons.sets.into_iter().chain(traps.sets) {
        sets.push(induced(&sys.net, s)?);
    }
    Ok(SiphonStructureReport {
        hypotheses_hold: ws.acyclic_graph,
        sets,
        complete: siphons.complete && traps.complete,
    })
}
