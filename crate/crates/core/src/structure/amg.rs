//! Augmented marked graph recognition.
//!
//! The resource set is forced: a place outside R must have exactly one input
//! and one output (G is a marked graph), while a resource has at least two
//! outputs. So R is exactly the set of places that are not one-in one-out.

use std::collections::VecDeque;

use serde::Serialize;

use crate::net::{Net, Node, System};
use crate::verdict::Verdict;
use crate::Tokens;

/// Pairing D^r of one resource, with a path in G for each pair a ≠ b.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResourcePairing {
    pub resource: usize,
    /// (a, b) with a ∈ r• and b ∈ •r.
    pub pairs: Vec<(usize, usize)>,
    /// Node sequence from a to b through places of G unmarked by the
    /// marking; empty when a = b.
    pub paths: Vec<Vec<Node>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AmgWitness {
    pub resources: Vec<usize>,
    /// Places of the underlying marked graph G.
    pub g_places: Vec<usize>,
    pub pairings: Vec<ResourcePairing>,
}

impl AmgWitness {
    /// Places lying on some stored path.
    pub fn path_places(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .pairings
            .iter()
            .flat_map(|r| r.paths.iter().flatten())
            .filter_map(|n| match n {
                Node::Place(p) => Some(*p),
                Node::Transition(_) => None,
            })
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum AmgViolation {
    NotOrdinary,
    /// The place is neither one-in one-out nor a balanced resource.
    H1 { place: usize },
    /// No bijection r• → •r along paths of G.
    H2 { resource: usize },
    /// An elementary circuit of G with no token.
    H3 { circuit: Vec<Node> },
    /// The resource is unmarked, or no bijection along unmarked paths.
    H4 { resource: usize, resource_marked: bool },
}

struct Ctx<'a> {
    net: &'a Net,
    in_g: Vec<bool>,
    m: &'a [Tokens],
}

impl Ctx<'_> {
    /// Shortest path a → b in G, optionally through unmarked places only.
    fn path(&self, a: usize, b: usize, unmarked: bool) -> Option<Vec<Node>> {
        let nt = self.net.num_transitions();
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; nt];
        let mut seen = vec![false; nt];
        seen[a] = true;
        let mut queue = VecDeque::from([a]);
        while let Some(t) = queue.pop_front() {
            for &(p, _) in self.net.outputs(t) {
                if !self.in_g[p] || (unmarked && self.m[p] > 0) {
                    continue;
                }
                for &(u, _) in self.net.consumers(p) {
                    if !seen[u] {
                        seen[u] = true;
                        prev[u] = Some((t, p));
                        queue.push_back(u);
                    }
                }
            }
        }
        if !seen[b] {
            return None;
        }
        let mut nodes = vec![Node::Transition(b)];
        let mut cur = b;
        while let Some((t, p)) = prev[cur] {
            nodes.push(Node::Place(p));
            nodes.push(Node::Transition(t));
            cur = t;
        }
        nodes.reverse();
        Some(nodes)
    }

    /// Perfect matching of r• onto •r by augmenting paths.
    fn pairing(&self, r: usize, unmarked: bool) -> Option<ResourcePairing> {
        let outs: Vec<usize> = self.net.consumers(r).iter().map(|&(t, _)| t).collect();
        let ins: Vec<usize> = self.net.producers(r).iter().map(|&(t, _)| t).collect();
        let admissible: Vec<Vec<Option<Vec<Node>>>> = outs
            .iter()
            .map(|&a| {
                ins.iter().map(|&b| if a == b { Some(Vec::new()) } else { self.path(a, b, unmarked) }).collect()
            })
            .collect();
        let mut owner: Vec<Option<usize>> = vec![None; ins.len()];
        fn augment(i: usize, adm: &[Vec<Option<Vec<Node>>>], owner: &mut [Option<usize>], used: &mut [bool]) -> bool {
            for j in 0..owner.len() {
                if adm[i][j].is_none() || used[j] {
                    continue;
                }
                used[j] = true;
                if owner[j].is_none() || augment(owner[j].unwrap(), adm, owner, used) {
                    owner[j] = Some(i);
                    return true;
                }
            }
            false
        }
        for i in 0..outs.len() {
            let mut used = vec![false; ins.len()];
            if !augment(i, &admissible, &mut owner, &mut used) {
                return None;
            }
        }
        let mut matched: Vec<(usize, usize)> = owner.iter().enumerate().map(|(j, i)| (i.unwrap(), j)).collect();
        matched.sort_unstable();
        Some(ResourcePairing {
            resource: r,
            pairs: matched.iter().map(|&(i, j)| (outs[i], ins[j])).collect(),
            paths: matched.iter().map(|&(i, j)| admissible[i][j].clone().unwrap()).collect(),
        })
    }

    /// A circuit of G through unmarked places only.
    fn unmarked_circuit(&self) -> Option<Vec<Node>> {
        let nt = self.net.num_transitions();
        let succ = |t: usize| -> Vec<(usize, usize)> {
            self.net
                .outputs(t)
                .iter()
                .filter(|&&(p, _)| self.in_g[p] && self.m[p] == 0)
                .flat_map(|&(p, _)| self.net.consumers(p).iter().map(move |&(u, _)| (p, u)))
                .collect()
        };
        // 0 unvisited, 1 on stack, 2 done
        let mut color = vec![0u8; nt];
        for root in 0..nt {
            if color[root] != 0 {
                continue;
            }
            type Frame = (usize, Vec<(usize, usize)>, usize);
            let mut stack: Vec<Frame> = vec![(root, succ(root), 0)];
            let mut via: Vec<usize> = Vec::new();
            color[root] = 1;
            while let Some(top) = stack.last_mut() {
                if top.2 == top.1.len() {
                    color[top.0] = 2;
                    stack.pop();
                    via.pop();
                    continue;
                }
                let (p, u) = top.1[top.2];
                top.2 += 1;
                match color[u] {
                    0 => {
                        color[u] = 1;
                        via.push(p);
                        let s = succ(u);
                        stack.push((u, s, 0));
                    }
                    1 => {
                        let start = stack.iter().position(|f| f.0 == u).unwrap();
                        let mut nodes = Vec::new();
                        for (k, frame) in stack.iter().enumerate().skip(start) {
                            nodes.push(Node::Transition(frame.0));
                            nodes.push(Node::Place(if k + 1 < stack.len() { via[k] } else { p }));
                        }
                        nodes.push(Node::Transition(u));
                        return Some(nodes);
                    }
                    _ => {}
                }
            }
        }
        None
    }
}

/// Checks H1–H4 for `net` under marking `m`.
pub fn check_amg_with_marking(net: &Net, m: &[Tokens]) -> Verdict<AmgWitness, AmgViolation> {
    let ordinary = (0..net.num_transitions()).all(|t| net.inputs(t).iter().chain(net.outputs(t)).all(|&(_, w)| w == 1));
    if !ordinary {
        return Verdict::No(AmgViolation::NotOrdinary);
    }
    let mut resources = Vec::new();
    let mut g_places = Vec::new();
    for p in 0..net.num_places() {
        let (i, o) = (net.producers(p).len(), net.consumers(p).len());
        if i == 1 && o == 1 {
            g_places.push(p);
        } else if o >= 2 {
            resources.push(p);
        } else {
            return Verdict::No(AmgViolation::H1 { place: p });
        }
    }
    let mut in_g = vec![false; net.num_places()];
    for &p in &g_places {
        in_g[p] = true;
    }
    let ctx = Ctx { net, in_g, m };
    for &r in &resources {
        if net.producers(r).len() != net.consumers(r).len() {
            return Verdict::No(AmgViolation::H2 { resource: r });
        }
        if ctx.pairing(r, false).is_none() {
            return Verdict::No(AmgViolation::H2 { resource: r });
        }
    }
    if let Some(circuit) = ctx.unmarked_circuit() {
        return Verdict::No(AmgViolation::H3 { circuit });
    }
    let mut pairings = Vec::new();
    for &r in &resources {
        if m[r] == 0 {
            return Verdict::No(AmgViolation::H4 { resource: r, resource_marked: false });
        }
        match ctx.pairing(r, true) {
            Some(pr) => pairings.push(pr),
            None => return Verdict::No(AmgViolation::H4 { resource: r, resource_marked: true }),
        }
    }
    Verdict::Yes(AmgWitness { resources, g_places, pairings })
}

/// One pairing per resource whose paths avoid every place marked by `m`.
pub(crate) fn unmarked_pairings(net: &Net, resources: &[usize], m: &[Tokens]) -> Option<Vec<ResourcePairing>> {
    let in_g = (0..net.num_places()).map(|p| net.producers(p).len() == 1 && net.consumers(p).len() == 1).collect();
    let ctx = Ctx { net, in_g, m };
    resources.iter().map(|&r| ctx.pairing(r, true)).collect()
}

pub fn check_amg(sys: &System) -> Verdict<AmgWitness, AmgViolation> {
    check_amg_with_marking(&sys.net, &sys.m0)
}
