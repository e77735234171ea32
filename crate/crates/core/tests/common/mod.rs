//! Random system generators and brute-force oracles shared by the suites.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use prr_core::net::{parikh, System};
use prr_core::structure::{PcmgEdge, PcmgSpec};
use prr_core::{Marking, Net, Tokens};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

type Arcs = Vec<Vec<(usize, Tokens)>>;

pub fn system(name: &str, pre: Arcs, post: Arcs, m0: Marking) -> System {
    let places = (0..m0.len()).map(|p| format!("p{p}")).collect();
    let transitions = (0..pre.len()).map(|t| format!("t{t}")).collect();
    System::new(Net::from_arcs(name, places, transitions, pre, post).unwrap(), m0).unwrap()
}

/// Weighted elementary circuit p0 t0 p1 t1 … back to p0.
pub fn circuit(r: &mut StdRng) -> System {
    let n = r.random_range(1..=4);
    let mut pre = vec![Vec::new(); n];
    let mut post = vec![Vec::new(); n];
    for t in 0..n {
        pre[t].push((t, r.random_range(1..=3)));
        post[t].push(((t + 1) % n, r.random_range(1..=3)));
    }
    let m0 = (0..n).map(|_| r.random_range(0..=4)).collect();
    system("circuit", pre, post, m0)
}

/// Strongly connected consistent WMG: a ring of transitions plus chords,
/// weights balanced against a random repetitive vector.
pub fn wmg(r: &mut StdRng) -> System {
    let nt = r.random_range(1..=4);
    let x: Vec<Tokens> = (0..nt).map(|_| r.random_range(1..=2)).collect();
    let mut links: Vec<(usize, usize)> = (0..nt).map(|t| (t, (t + 1) % nt)).collect();
    for _ in 0..r.random_range(0..=2) {
        links.push((r.random_range(0..nt), r.random_range(0..nt)));
    }
    let mut pre = vec![Vec::new(); nt];
    let mut post = vec![Vec::new(); nt];
    for (p, &(a, b)) in links.iter().enumerate() {
        let k = r.random_range(1..=2);
        post[a].push((p, k * x[b]));
        pre[b].push((p, k * x[a]));
    }
    let m0 = (0..links.len()).map(|_| r.random_range(0..=3)).collect();
    system("wmg", pre, post, m0)
}

/// A WMG with one extra shared place read with a common weight by at least
/// two transitions.
pub fn h1s(r: &mut StdRng) -> System {
    let base = wmg(r);
    let net = &base.net;
    let (nt, np) = (net.num_transitions(), net.num_places());
    let mut pre: Arcs = (0..nt).map(|t| net.inputs(t).to_vec()).collect();
    let mut post: Arcs = (0..nt).map(|t| net.outputs(t).to_vec()).collect();
    let w = r.random_range(1..=2);
    let mut outs: BTreeSet<usize> = BTreeSet::new();
    while outs.len() < 2.min(nt) {
        outs.insert(r.random_range(0..nt));
    }
    for t in 0..nt {
        if r.random_bool(0.3) {
            outs.insert(t);
        }
    }
    for &t in &outs {
        pre[t].push((np, w));
    }
    for _ in 0..r.random_range(1..=2) {
        post[r.random_range(0..nt)].push((np, r.random_range(1..=2)));
    }
    let mut m0 = base.m0.clone();
    m0.push(r.random_range(0..=3));
    system("h1s", pre, post, m0)
}

/// Choice-free system: every place has at most one consumer.
pub fn choice_free(r: &mut StdRng) -> System {
    let np = r.random_range(1..=5);
    let nt = r.random_range(1..=4);
    let mut pre = vec![Vec::new(); nt];
    let mut post = vec![Vec::new(); nt];
    for p in 0..np {
        if r.random_bool(0.8) {
            pre[r.random_range(0..nt)].push((p, r.random_range(1..=2)));
        }
        for out in post.iter_mut() {
            if r.random_bool(0.35) {
                out.push((p, r.random_range(1..=2)));
            }
        }
    }
    let m0 = (0..np).map(|_| r.random_range(0..=3)).collect();
    system("cf", pre, post, m0)
}

/// Arbitrary net over at most `max_places` places.
pub fn any_net(r: &mut StdRng, max_places: usize) -> Net {
    let np = r.random_range(1..=max_places);
    let nt = r.random_range(1..=8);
    let mut pre = vec![Vec::new(); nt];
    let mut post = vec![Vec::new(); nt];
    for t in 0..nt {
        for p in 0..np {
            if r.random_bool(0.2) {
                pre[t].push((p, 1));
            }
            if r.random_bool(0.2) {
                post[t].push((p, 1));
            }
        }
    }
    system("any", pre, post, vec![0; np]).net
}

/// Well-structured composition over a random tree; each component is a
/// unit-weighted circuit with an optional chord.
pub fn pcmg(r: &mut StdRng, max_vertices: usize) -> PcmgSpec {
    let nv = r.random_range(2..=max_vertices);
    let vertices: Vec<String> = (0..nv).map(|v| format!("v{v}")).collect();
    let mut edges = Vec::new();
    for v in 1..nv {
        let u = r.random_range(0..v);
        let id = format!("e{v}");
        let k = r.random_range(2..=3);
        let mut links: Vec<(usize, usize)> = (0..k).map(|t| (t, (t + 1) % k)).collect();
        if r.random_bool(0.4) {
            links.push((r.random_range(0..k), r.random_range(0..k)));
        }
        let places: Vec<String> = (0..links.len()).map(|p| format!("{id}q{p}")).collect();
        let transitions: Vec<String> = (0..k).map(|t| format!("{id}t{t}")).collect();
        let mut pre = vec![Vec::new(); k];
        let mut post = vec![Vec::new(); k];
        for (p, &(a, b)) in links.iter().enumerate() {
            post[a].push((p, 1));
            pre[b].push((p, 1));
        }
        let m0: Marking = (0..links.len()).map(|_| r.random_range(0..=1)).collect();
        let pa = r.random_range(0..links.len());
        let pb = (pa + 1 + r.random_range(0..links.len() - 1)) % links.len();
        let net = Net::from_arcs(id.clone(), places.clone(), transitions, pre, post).unwrap();
        edges.push(PcmgEdge {
            id,
            a: vertices[u].clone(),
            b: vertices[v].clone(),
            component: System::new(net, m0).unwrap(),
            place_a: places[pa].clone(),
            place_b: places[pb].clone(),
        });
    }
    PcmgSpec { vertices, edges }
}

/// Reachability graph by breadth-first search, `None` beyond `cap` states.
pub struct Graph {
    pub states: Vec<Marking>,
    pub succ: Vec<Vec<(usize, usize)>>,
}

pub fn graph(sys: &System, cap: usize) -> Option<Graph> {
    let net = &sys.net;
    let mut index: BTreeMap<Marking, usize> = BTreeMap::new();
    let mut states = vec![sys.m0.clone()];
    let mut succ = vec![Vec::new()];
    index.insert(sys.m0.clone(), 0);
    let mut queue = VecDeque::from([0]);
    while let Some(s) = queue.pop_front() {
        for t in 0..net.num_transitions() {
            let m = &states[s];
            if !(net.inputs(t).iter().all(|&(p, w)| m[p] >= w)) {
                continue;
            }
            let mut next = m.clone();
            for &(p, w) in net.inputs(t) {
                next[p] -= w;
            }
            for &(p, w) in net.outputs(t) {
                next[p] += w;
            }
            let j = match index.get(&next) {
                Some(&j) => j,
                None => {
                    if states.len() == cap {
                        return None;
                    }
                    index.insert(next.clone(), states.len());
                    states.push(next);
                    succ.push(Vec::new());
                    queue.push_back(states.len() - 1);
                    states.len() - 1
                }
            };
            succ[s].push((t, j));
        }
    }
    Some(Graph { states, succ })
}

impl Graph {
    /// States from which some state of `targets` is reachable.
    fn co_reach(&self, targets: &[usize]) -> Vec<bool> {
        let mut pred = vec![Vec::new(); self.states.len()];
        for (s, out) in self.succ.iter().enumerate() {
            for &(_, j) in out {
                pred[j].push(s);
            }
        }
        let mut seen = vec![false; self.states.len()];
        let mut queue: VecDeque<usize> = targets.iter().copied().collect();
        for &t in targets {
            seen[t] = true;
        }
        while let Some(s) = queue.pop_front() {
            for &p in &pred[s] {
                if !seen[p] {
                    seen[p] = true;
                    queue.push_back(p);
                }
            }
        }
        seen
    }

    pub fn live(&self, net: &Net) -> bool {
        (0..net.num_transitions()).all(|t| {
            let enabling: Vec<usize> = (0..self.states.len()).filter(|&s| self.succ[s].iter().any(|a| a.0 == t)).collect();
            self.co_reach(&enabling).iter().all(|&b| b)
        })
    }

    pub fn reversible(&self) -> bool {
        self.co_reach(&[0]).iter().all(|&b| b)
    }

    pub fn markings(&self) -> BTreeSet<Marking> {
        self.states.iter().cloned().collect()
    }
}

/// Transitions producing into the set all consume from it.
pub fn oracle_siphon(net: &Net, d: &[usize]) -> bool {
    (0..net.num_transitions()).all(|t| {
        let feeds = net.outputs(t).iter().any(|(p, _)| d.contains(p));
        !feeds || net.inputs(t).iter().any(|(p, _)| d.contains(p))
    })
}

/// Left residue by occurrence counting.
pub fn oracle_residue(tau: &[usize], sigma: &[usize]) -> Vec<usize> {
    let mut left = sigma.to_vec();
    let mut out = Vec::new();
    for &t in tau {
        match left.iter().position(|&s| s == t) {
            Some(i) => {
                left.remove(i);
            }
            None => out.push(t),
        }
    }
    out
}

/// A random feasible sequence of at most `len` firings.
pub fn random_walk(r: &mut StdRng, sys: &System, len: usize) -> Vec<usize> {
    let mut m = sys.m0.clone();
    let mut seq = Vec::new();
    for _ in 0..len {
        let en = sys.net.enabled_transitions(&m);
        if en.is_empty() {
            break;
        }
        let t = en[r.random_range(0..en.len())];
        m = sys.net.fire(&m, t).unwrap();
        seq.push(t);
    }
    seq
}

pub fn parikh_of(sys: &System, seq: &[usize]) -> Vec<Tokens> {
    parikh(sys.net.num_transitions(), seq)
}
