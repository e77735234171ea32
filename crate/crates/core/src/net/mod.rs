//! Weighted place/transition nets, markings and the firing rule.

mod derive;
mod sequence;

pub use derive::{merge_places, p_subnet, p_subsystem, t_subnet, t_subsystem, MergeGroup, SubnetMap};
pub use sequence::{parikh, residue, residue_tvector, reverse_sequence};

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::Tokens;

/// Tokens per place, indexed by declaration order.
pub type Marking = Vec<Tokens>;
/// Marking whose components may be negative.
pub type SignedMarking = Vec<i64>;
/// Occurrence counts per transition.
pub type TVector = Vec<Tokens>;
/// Weights per place.
pub type PVector = Vec<Tokens>;
/// Integer vector over transitions.
pub type SignedTVector = Vec<i64>;
/// Transition indices in firing order.
pub type FiringSequence = Vec<usize>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NetError {
    #[error("duplicate identifier `{0}`")]
    DuplicateId(String),
    #[error("unknown place `{0}`")]
    UnknownPlace(String),
    #[error("unknown transition `{0}`")]
    UnknownTransition(String),
    #[error("node index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("arc {from} -> {to} has weight zero")]
    ZeroWeight { from: String, to: String },
    #[error("transition `{transition}` is not enabled: place `{place}` holds too few tokens")]
    NotEnabled { transition: String, place: String },
    #[error("step {step}: transition `{transition}` is not enabled")]
    NotEnabledAtStep { step: usize, transition: String },
    #[error("vector has length {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("place `{0}` appears in more than one merge group")]
    OverlappingMerge(String),
    #[error("merge group is empty")]
    EmptyMergeGroup,
    #[error("token count overflow")]
    Overflow,
}

/// A node of the bipartite net graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub enum Node {
    Place(usize),
    Transition(usize),
}

/// Immutable weighted net. Arc lists are kept sorted by node index.
#[derive(Clone)]
pub struct Net {
    name: String,
    places: Vec<String>,
    transitions: Vec<String>,
    place_index: HashMap<String, usize>,
    transition_index: HashMap<String, usize>,
    pre: Vec<Vec<(usize, Tokens)>>,
    post: Vec<Vec<(usize, Tokens)>>,
    place_pre: Vec<Vec<(usize, Tokens)>>,
    place_post: Vec<Vec<(usize, Tokens)>>,
}

impl fmt::Debug for Net {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Net")
            .field("name", &self.name)
            .field("places", &self.places)
            .field("transitions", &self.transitions)
            .field("pre", &self.pre)
            .field("post", &self.post)
            .finish()
    }
}

/// Literal equality: same identifiers in the same order and the same weights.
/// The name is descriptive only and does not take part.
impl PartialEq for Net {
    fn eq(&self, other: &Self) -> bool {
        self.places == other.places
            && self.transitions == other.transitions
            && self.pre == other.pre
            && self.post == other.post
    }
}
impl Eq for Net {}

/// Incremental construction by identifier.
#[derive(Debug, Clone, Default)]
pub struct NetBuilder {
    name: String,
    places: Vec<String>,
    transitions: Vec<(String, NamedArcs, NamedArcs)>,
}

type NamedArcs = Vec<(String, Tokens)>;

impl NetBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        NetBuilder { name: name.into(), ..Default::default() }
    }

    pub fn place(mut self, id: impl Into<String>) -> Self {
        self.places.push(id.into());
        self
    }

    pub fn places<I, S>(mut self, ids: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.places.extend(ids.into_iter().map(Into::into));
        self
    }

    pub fn transition(mut self, id: impl Into<String>, inputs: &[(&str, Tokens)], outputs: &[(&str, Tokens)]) -> Self {
        let conv = |arcs: &[(&str, Tokens)]| arcs.iter().map(|(p, w)| (p.to_string(), *w)).collect();
        self.transitions.push((id.into(), conv(inputs), conv(outputs)));
        self
    }

    pub fn build(self) -> Result<Net, NetError> {
        let mut index = HashMap::new();
        for (i, p) in self.places.iter().enumerate() {
            if index.insert(p.clone(), i).is_some() {
                return Err(NetError::DuplicateId(p.clone()));
            }
        }
        let resolve = |arcs: &[(String, Tokens)]| -> Result<Vec<(usize, Tokens)>, NetError> {
            arcs.iter()
                .map(|(p, w)| index.get(p).map(|&i| (i, *w)).ok_or_else(|| NetError::UnknownPlace(p.clone())))
                .collect()
        };
        let mut names = Vec::new();
        let mut pre = Vec::new();
        let mut post = Vec::new();
        for (id, ins, outs) in &self.transitions {
            names.push(id.clone());
            pre.push(resolve(ins)?);
            post.push(resolve(outs)?);
        }
        Net::from_arcs(self.name, self.places, names, pre, post)
    }
}

impl Net {
    /// Builds a net from index-based arc lists. Repeated arcs between the same
    /// pair of nodes are summed.
    pub fn from_arcs(
        name: impl Into<String>,
        places: Vec<String>,
        transitions: Vec<String>,
        pre: Vec<Vec<(usize, Tokens)>>,
        post: Vec<Vec<(usize, Tokens)>>,
    ) -> Result<Net, NetError> {
        let mut place_index = HashMap::new();
        for (i, p) in places.iter().enumerate() {
            if place_index.insert(p.clone(), i).is_some() {
                return Err(NetError::DuplicateId(p.clone()));
            }
        }
        let mut transition_index = HashMap::new();
        for (i, t) in transitions.iter().enumerate() {
            if place_index.contains_key(t) || transition_index.insert(t.clone(), i).is_some() {
                return Err(NetError::DuplicateId(t.clone()));
            }
        }
        if pre.len() != transitions.len() || post.len() != transitions.len() {
            return Err(NetError::DimensionMismatch { expected: transitions.len(), found: pre.len().min(post.len()) });
        }
        let normalize = |arcs: &[(usize, Tokens)], t: usize, input: bool| -> Result<Vec<(usize, Tokens)>, NetError> {
            let mut m: BTreeMap<usize, Tokens> = BTreeMap::new();
            for &(p, w) in arcs {
                if p >= places.len() {
                    return Err(NetError::IndexOutOfRange(p));
                }
                if w == 0 {
                    let (from, to) = if input {
                        (places[p].clone(), transitions[t].clone())
                    } else {
                        (transitions[t].clone(), places[p].clone())
                    };
                    return Err(NetError::ZeroWeight { from, to });
                }
                let e = m.entry(p).or_insert(0);
                *e = e.checked_add(w).ok_or(NetError::Overflow)?;
            }
            Ok(m.into_iter().collect())
        };
        let mut npre = Vec::with_capacity(pre.len());
        let mut npost = Vec::with_capacity(post.len());
        for t in 0..transitions.len() {
            npre.push(normalize(&pre[t], t, true)?);
            npost.push(normalize(&post[t], t, false)?);
        }
        let mut place_pre = vec![Vec::new(); places.len()];
        let mut place_post = vec![Vec::new(); places.len()];
        for t in 0..transitions.len() {
            for &(p, w) in &npre[t] {
                place_post[p].push((t, w));
            }
            for &(p, w) in &npost[t] {
                place_pre[p].push((t, w));
            }
        }
        Ok(Net {
            name: name.into(),
            places,
            transitions,
            place_index,
            transition_index,
            pre: npre,
            post: npost,
            place_pre,
            place_post,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Net {
        self.name = name.into();
        self
    }

    pub fn num_places(&self) -> usize {
        self.places.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.len()
    }

    pub fn place_ids(&self) -> &[String] {
        &self.places
    }

    pub fn transition_ids(&self) -> &[String] {
        &self.transitions
    }

    pub fn place_id(&self, p: usize) -> &str {
        &self.places[p]
    }

    pub fn transition_id(&self, t: usize) -> &str {
        &self.transitions[t]
    }

    pub fn place(&self, id: &str) -> Result<usize, NetError> {
        self.place_index.get(id).copied().ok_or_else(|| NetError::UnknownPlace(id.to_string()))
    }

    pub fn transition(&self, id: &str) -> Result<usize, NetError> {
        self.transition_index.get(id).copied().ok_or_else(|| NetError::UnknownTransition(id.to_string()))
    }

    /// Resolves a node identifier, places first.
    pub fn node(&self, id: &str) -> Option<Node> {
        self.place_index
            .get(id)
            .map(|&p| Node::Place(p))
            .or_else(|| self.transition_index.get(id).map(|&t| Node::Transition(t)))
    }

    pub fn node_id(&self, n: Node) -> &str {
        match n {
            Node::Place(p) => &self.places[p],
            Node::Transition(t) => &self.transitions[t],
        }
    }

    /// Input places of `t` with weights W(p,t).
    pub fn inputs(&self, t: usize) -> &[(usize, Tokens)] {
        &self.pre[t]
    }

    /// Output places of `t` with weights W(t,p).
    pub fn outputs(&self, t: usize) -> &[(usize, Tokens)] {
        &self.post[t]
    }

    /// Transitions feeding `p`, with weights W(t,p).
    pub fn producers(&self, p: usize) -> &[(usize, Tokens)] {
        &self.place_pre[p]
    }

    /// Transitions consuming from `p`, with weights W(p,t).
    pub fn consumers(&self, p: usize) -> &[(usize, Tokens)] {
        &self.place_post[p]
    }

    pub fn weight_pt(&self, p: usize, t: usize) -> Tokens {
        lookup(&self.pre[t], p)
    }

    pub fn weight_tp(&self, t: usize, p: usize) -> Tokens {
        lookup(&self.post[t], p)
    }

    pub fn incidence_entry(&self, p: usize, t: usize) -> i64 {
        self.weight_tp(t, p) as i64 - self.weight_pt(p, t) as i64
    }

    fn check_node(&self, n: Node) -> Result<(), NetError> {
        match n {
            Node::Place(p) if p >= self.places.len() => Err(NetError::IndexOutOfRange(p)),
            Node::Transition(t) if t >= self.transitions.len() => Err(NetError::IndexOutOfRange(t)),
            _ => Ok(()),
        }
    }

    pub fn preset(&self, n: Node) -> Result<BTreeSet<Node>, NetError> {
        self.check_node(n)?;
        Ok(match n {
            Node::Place(p) => self.place_pre[p].iter().map(|&(t, _)| Node::Transition(t)).collect(),
            Node::Transition(t) => self.pre[t].iter().map(|&(p, _)| Node::Place(p)).collect(),
        })
    }

    pub fn postset(&self, n: Node) -> Result<BTreeSet<Node>, NetError> {
        self.check_node(n)?;
        Ok(match n {
            Node::Place(p) => self.place_post[p].iter().map(|&(t, _)| Node::Transition(t)).collect(),
            Node::Transition(t) => self.post[t].iter().map(|&(p, _)| Node::Place(p)).collect(),
        })
    }

    /// •D for a set of places: transitions with an output in `places`.
    pub fn producers_of(&self, places: &[usize]) -> BTreeSet<usize> {
        places.iter().flat_map(|&p| self.place_pre[p].iter().map(|&(t, _)| t)).collect()
    }

    /// D• for a set of places.
    pub fn consumers_of(&self, places: &[usize]) -> BTreeSet<usize> {
        places.iter().flat_map(|&p| self.place_post[p].iter().map(|&(t, _)| t)).collect()
    }

    pub fn check_marking(&self, m: &[Tokens]) -> Result<(), NetError> {
        if m.len() != self.places.len() {
            return Err(NetError::DimensionMismatch { expected: self.places.len(), found: m.len() });
        }
        Ok(())
    }

    fn check_transition(&self, t: usize) -> Result<(), NetError> {
        if t >= self.transitions.len() {
            return Err(NetError::IndexOutOfRange(t));
        }
        Ok(())
    }

    /// First input place of `t` that blocks it at `m`.
    pub fn blocking_place(&self, m: &[Tokens], t: usize) -> Option<usize> {
        self.pre[t].iter().find(|&&(p, w)| m[p] < w).map(|&(p, _)| p)
    }

    pub fn enabled(&self, m: &[Tokens], t: usize) -> bool {
        self.blocking_place(m, t).is_none()
    }

    pub fn enabled_transitions(&self, m: &[Tokens]) -> Vec<usize> {
        (0..self.transitions.len()).filter(|&t| self.enabled(m, t)).collect()
    }

    pub fn is_deadlock(&self, m: &[Tokens]) -> bool {
        (0..self.transitions.len()).all(|t| !self.enabled(m, t))
    }

    /// Fires `t` in place. The caller guarantees enabledness.
    pub(crate) fn fire_unchecked(&self, m: &mut [Tokens], t: usize) -> Result<(), NetError> {
        for &(p, w) in &self.pre[t] {
            m[p] -= w;
        }
        for &(p, w) in &self.post[t] {
            m[p] = m[p].checked_add(w).ok_or(NetError::Overflow)?;
        }
        Ok(())
    }

    pub fn fire(&self, m: &[Tokens], t: usize) -> Result<Marking, NetError> {
        self.check_marking(m)?;
        self.check_transition(t)?;
        if let Some(p) = self.blocking_place(m, t) {
            return Err(NetError::NotEnabled {
                transition: self.transitions[t].clone(),
                place: self.places[p].clone(),
            });
        }
        let mut next = m.to_vec();
        self.fire_unchecked(&mut next, t)?;
        Ok(next)
    }

    pub fn fire_sequence(&self, m: &[Tokens], sigma: &[usize]) -> Result<Marking, NetError> {
        self.check_marking(m)?;
        let mut cur = m.to_vec();
        for (step, &t) in sigma.iter().enumerate() {
            self.check_transition(t)?;
            if !self.enabled(&cur, t) {
                return Err(NetError::NotEnabledAtStep { step, transition: self.transitions[t].clone() });
            }
            self.fire_unchecked(&mut cur, t)?;
        }
        Ok(cur)
    }

    pub fn is_feasible(&self, m: &[Tokens], sigma: &[usize]) -> bool {
        self.fire_sequence(m, sigma).is_ok()
    }

    /// The net with every arc reversed and the same weights.
    pub fn reverse(&self) -> Net {
        let mut r = self.clone();
        std::mem::swap(&mut r.pre, &mut r.post);
        std::mem::swap(&mut r.place_pre, &mut r.place_post);
        r
    }

    /// Transition indices for a list of identifiers.
    pub fn sequence(&self, ids: &[&str]) -> Result<FiringSequence, NetError> {
        ids.iter().map(|id| self.transition(id)).collect()
    }

    /// Parses a whitespace-separated list of transition identifiers.
    pub fn parse_sequence(&self, text: &str) -> Result<FiringSequence, NetError> {
        text.split_whitespace().map(|id| self.transition(id)).collect()
    }

    pub fn format_sequence(&self, sigma: &[usize]) -> String {
        if sigma.is_empty() {
            return "ε".to_string();
        }
        sigma.iter().map(|&t| self.transitions[t].as_str()).collect::<Vec<_>>().join(" ")
    }

    /// Dense marking from sparse `(place, tokens)` pairs; the rest is zero.
    pub fn marking(&self, pairs: &[(&str, Tokens)]) -> Result<Marking, NetError> {
        let mut m = vec![0; self.places.len()];
        for (p, v) in pairs {
            m[self.place(p)?] = *v;
        }
        Ok(m)
    }

    /// Place indices for a list of identifiers.
    pub fn place_set(&self, ids: &[&str]) -> Result<Vec<usize>, NetError> {
        let mut v: Vec<usize> = ids.iter().map(|id| self.place(id)).collect::<Result<_, _>>()?;
        v.sort_unstable();
        v.dedup();
        Ok(v)
    }

    pub fn place_names(&self, ps: &[usize]) -> Vec<String> {
        ps.iter().map(|&p| self.places[p].clone()).collect()
    }

    /// Weakly connected as an undirected graph (isolated nodes count).
    pub fn is_connected(&self) -> bool {
        let n = self.places.len() + self.transitions.len();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let np = self.places.len();
        while let Some(v) = stack.pop() {
            let nbrs: Vec<usize> = if v < np {
                self.place_pre[v].iter().chain(&self.place_post[v]).map(|&(t, _)| np + t).collect()
            } else {
                let t = v - np;
                self.pre[t].iter().chain(&self.post[t]).map(|&(p, _)| p).collect()
            };
            for u in nbrs {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

impl Net {
    /// Successor lists of the bipartite graph: places are nodes `0..|P|`,
    /// transitions follow.
    pub fn graph_successors(&self) -> Vec<Vec<usize>> {
        let np = self.places.len();
        let mut succ = vec![Vec::new(); np + self.transitions.len()];
        for t in 0..self.transitions.len() {
            for &(p, _) in &self.pre[t] {
                succ[p].push(np + t);
            }
            for &(p, _) in &self.post[t] {
                succ[np + t].push(p);
            }
        }
        succ
    }

    /// Every node reaches every other along arcs. The empty net qualifies.
    pub fn is_strongly_connected(&self) -> bool {
        let succ = self.graph_successors();
        let n = succ.len();
        if n == 0 {
            return true;
        }
        let mut pred = vec![Vec::new(); n];
        for (v, out) in succ.iter().enumerate() {
            for &u in out {
                pred[u].push(v);
            }
        }
        let reach_all = |adj: &Vec<Vec<usize>>| {
            let mut seen = vec![false; n];
            let mut stack = vec![0];
            seen[0] = true;
            while let Some(v) = stack.pop() {
                for &u in &adj[v] {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            seen.into_iter().all(|s| s)
        };
        reach_all(&succ) && reach_all(&pred)
    }
}

fn lookup(arcs: &[(usize, Tokens)], p: usize) -> Tokens {
    arcs.binary_search_by_key(&p, |&(q, _)| q).map(|i| arcs[i].1).unwrap_or(0)
}

/// Formats a vector as `(a,b,c)`.
pub fn fmt_vec<T: fmt::Display>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// A net together with its initial marking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct System {
    pub net: Net,
    pub m0: Marking,
}

impl System {
    pub fn new(net: Net, m0: Marking) -> Result<System, NetError> {
        net.check_marking(&m0)?;
        Ok(System { net, m0 })
    }

    /// Same net, another initial marking.
    pub fn with_marking(&self, m0: Marking) -> Result<System, NetError> {
        System::new(self.net.clone(), m0)
    }

    /// −S: the reversed net with the same initial marking.
    pub fn reverse(&self) -> System {
        System { net: self.net.reverse(), m0: self.m0.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

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

    #[test]
    fn presets_and_postsets() {
        let s = fig1();
        let t2 = Node::Transition(s.net.transition("t2").unwrap());
        let pre: Vec<&str> = s.net.preset(t2).unwrap().into_iter().map(|n| s.net.node_id(n)).collect();
        let post: Vec<&str> = s.net.postset(t2).unwrap().into_iter().map(|n| s.net.node_id(n)).collect();
        assert_eq!(pre, ["p3", "p4"]);
        assert_eq!(post, ["p1", "p2"]);
        assert!(s.net.preset(Node::Place(9)).is_err());
    }

    #[test]
    fn isolated_place_has_empty_sets() {
        let net = NetBuilder::new("iso").places(["p", "q"]).transition("t", &[("q", 1)], &[]).build().unwrap();
        assert!(net.preset(Node::Place(0)).unwrap().is_empty());
        assert!(net.postset(Node::Place(0)).unwrap().is_empty());
    }

    #[test]
    fn enabling_and_firing() {
        let s = fig1();
        assert!(s.net.enabled(&s.m0, 1));
        assert!(!s.net.enabled(&s.m0, 0));
        let m = s.net.fire(&s.m0, 1).unwrap();
        assert_eq!(m, vec![2, 1, 0, 0]);
        assert_eq!(s.net.fire(&m, 0).unwrap(), vec![1, 1, 2, 0]);
        assert_eq!(
            s.net.fire(&s.m0, 0),
            Err(NetError::NotEnabled { transition: "t1".into(), place: "p1".into() })
        );
    }

    #[test]
    fn empty_preset_always_enabled() {
        let net = NetBuilder::new("src").place("p").transition("t", &[], &[("p", 1)]).build().unwrap();
        assert!(net.enabled(&[0], 0));
        assert!(!net.is_deadlock(&[0]));
    }

    #[test]
    fn self_loop_leaves_marking() {
        let net = NetBuilder::new("loop").place("p").transition("t", &[("p", 1)], &[("p", 1)]).build().unwrap();
        assert_eq!(net.fire(&[1], 0).unwrap(), vec![1]);
        assert_eq!(net.incidence_entry(0, 0), 0);
    }

    #[test]
    fn sequences() {
        let s = fig1();
        let sigma = s.net.parse_sequence("t2 t1 t3").unwrap();
        assert_eq!(s.net.fire_sequence(&s.m0, &sigma).unwrap(), vec![1, 0, 2, 3]);
        assert_eq!(s.net.fire_sequence(&s.m0, &[]).unwrap(), s.m0);
        assert_eq!(
            s.net.fire_sequence(&s.m0, &[0]),
            Err(NetError::NotEnabledAtStep { step: 0, transition: "t1".into() })
        );
    }

    #[test]
    fn builder_rejects_bad_input() {
        let dup = NetBuilder::new("d").places(["p", "p"]).build();
        assert_eq!(dup.unwrap_err(), NetError::DuplicateId("p".into()));
        let clash = NetBuilder::new("c").place("x").transition("x", &[], &[]).build();
        assert_eq!(clash.unwrap_err(), NetError::DuplicateId("x".into()));
        let zero = NetBuilder::new("z").place("p").transition("t", &[("p", 0)], &[]).build();
        assert!(matches!(zero, Err(NetError::ZeroWeight { .. })));
        let unknown = NetBuilder::new("u").transition("t", &[("q", 1)], &[]).build();
        assert_eq!(unknown.unwrap_err(), NetError::UnknownPlace("q".into()));
    }

    #[test]
    fn reverse_is_an_involution() {
        let s = fig1();
        let r = s.net.reverse();
        assert_eq!(r.reverse(), s.net);
        for p in 0..4 {
            for t in 0..3 {
                assert_eq!(r.incidence_entry(p, t), -s.net.incidence_entry(p, t));
            }
        }
    }

    #[test]
    fn repeated_arcs_are_summed() {
        let net = NetBuilder::new("m").place("p").transition("t", &[("p", 1), ("p", 2)], &[]).build().unwrap();
        assert_eq!(net.weight_pt(0, 0), 3);
    }
}
