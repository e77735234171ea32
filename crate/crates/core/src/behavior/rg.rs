//! Explicit reachability graphs and their strongly connected components.

use std::collections::{HashMap, VecDeque};

use petgraph::algo::kosaraju_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;

use crate::net::{FiringSequence, Marking, Net, System};
use crate::verdict::ExplorationBudget;

/// Markings reached by breadth-first search from the root, in discovery
/// order. Arcs are recorded only for expanded states.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReachabilityGraph {
    pub states: Vec<Marking>,
    /// Per state, `(transition, target)` in transition order.
    pub arcs: Vec<Vec<(usize, usize)>>,
    pub expanded: Vec<bool>,
    /// BFS tree: the state and transition a state was first reached from.
    pub parent: Vec<Option<(usize, usize)>>,
    pub complete: bool,
    pub reason: Option<String>,
    #[serde(skip)]
    index: HashMap<Marking, usize>,
}

impl ReachabilityGraph {
    pub fn root(&self) -> &Marking {
        &self.states[0]
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, m: &[u64]) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn contains(&self, m: &[u64]) -> bool {
        self.index.contains_key(m)
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.iter().map(Vec::len).sum()
    }

    /// Sequence along the BFS tree from the root to state `i`.
    pub fn path_to(&self, i: usize) -> FiringSequence {
        let mut seq = Vec::new();
        let mut cur = i;
        while let Some((from, t)) = self.parent[cur] {
            seq.push(t);
            cur = from;
        }
        seq.reverse();
        seq
    }

    /// Shortest sequence from state `from` to state `to` inside the graph.
    pub fn path_between(&self, from: usize, to: usize) -> Option<FiringSequence> {
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; self.len()];
        let mut seen = vec![false; self.len()];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            if v == to {
                let mut seq = Vec::new();
                let mut cur = to;
                while let Some((u, t)) = prev[cur] {
                    seq.push(t);
                    cur = u;
                }
                seq.reverse();
                return Some(seq);
            }
            for &(t, u) in &self.arcs[v] {
                if !seen[u] {
                    seen[u] = true;
                    prev[u] = Some((v, t));
                    queue.push_back(u);
                }
            }
        }
        None
    }

    /// Explored states enabling no transition.
    pub fn deadlocks(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.expanded[i] && self.arcs[i].is_empty()).collect()
    }

    pub fn max_tokens(&self) -> u64 {
        self.states.iter().flat_map(|m| m.iter().copied()).max().unwrap_or(0)
    }

    pub fn components(&self) -> Components {
        Components::of(&self.arcs, &self.expanded)
    }

    /// Every state reaches every other.
    pub fn strongly_connected(&self) -> bool {
        self.components().count() == 1
    }
}

/// Strongly connected components with closure information.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    pub of: Vec<usize>,
    /// Members of each component, ascending.
    pub members: Vec<Vec<usize>>,
    /// No arc leaves the component.
    pub bottom: Vec<bool>,
    /// Bottom and every member expanded: the component is exactly the
    /// forward closure of each of its states.
    pub closed: Vec<bool>,
    /// Transitions labelling arcs inside the component.
    pub labels: Vec<Vec<bool>>,
}

impl Components {
    pub fn of(arcs: &[Vec<(usize, usize)>], expanded: &[bool]) -> Components {
        let mut g = DiGraph::<(), ()>::with_capacity(arcs.len(), 0);
        let nodes: Vec<_> = (0..arcs.len()).map(|_| g.add_node(())).collect();
        for (v, out) in arcs.iter().enumerate() {
            for &(_, u) in out {
                g.add_edge(nodes[v], nodes[u], ());
            }
        }
        let mut sccs: Vec<Vec<usize>> =
            kosaraju_scc(&g).into_iter().map(|c| c.into_iter().map(|n| n.index()).collect()).collect();
        for c in &mut sccs {
            c.sort_unstable();
        }
        // Order components by their smallest state for determinism.
        sccs.sort_by_key(|c| c[0]);
        let mut of = vec![0; arcs.len()];
        for (i, c) in sccs.iter().enumerate() {
            for &v in c {
                of[v] = i;
            }
        }
        let nt = arcs.iter().flatten().map(|&(t, _)| t + 1).max().unwrap_or(0);
        let mut bottom = vec![true; sccs.len()];
        let mut labels = vec![vec![false; nt]; sccs.len()];
        for (v, out) in arcs.iter().enumerate() {
            for &(t, u) in out {
                if of[u] != of[v] {
                    bottom[of[v]] = false;
                } else {
                    labels[of[v]][t] = true;
                }
            }
        }
        let closed = sccs.iter().enumerate().map(|(i, c)| bottom[i] && c.iter().all(|&v| expanded[v])).collect();
        Components { of, members: sccs, bottom, closed, labels }
    }

    pub fn count(&self) -> usize {
        self.members.len()
    }

    pub fn has_label(&self, c: usize, t: usize) -> bool {
        self.labels[c].get(t).copied().unwrap_or(false)
    }

    /// For each state, the bottom components it can reach, as bitsets over
    /// the bottom component list returned alongside.
    pub fn reachable_bottoms(&self, arcs: &[Vec<(usize, usize)>]) -> (Vec<usize>, Vec<Vec<u64>>) {
        let bottoms: Vec<usize> = (0..self.count()).filter(|&c| self.bottom[c]).collect();
        let words = bottoms.len().div_ceil(64).max(1);
        let mut per_comp = vec![vec![0u64; words]; self.count()];
        for (k, &c) in bottoms.iter().enumerate() {
            per_comp[c][k / 64] |= 1 << (k % 64);
        }
        // Component numbering is not topological after the re-sort, so iterate
        // to the fixpoint over the condensation.
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); self.count()];
        for (v, out) in arcs.iter().enumerate() {
            for &(_, u) in out {
                if self.of[u] != self.of[v] {
                    succ[self.of[v]].push(self.of[u]);
                }
            }
        }
        for s in &mut succ {
            s.sort_unstable();
            s.dedup();
        }
        let order = topo_order(&succ);
        for &c in order.iter().rev() {
            for &d in &succ[c].clone() {
                let add = per_comp[d].clone();
                for (w, a) in per_comp[c].iter_mut().zip(add) {
                    *w |= a;
                }
            }
        }
        let per_state = self.of.iter().map(|&c| per_comp[c].clone()).collect();
        (bottoms, per_state)
    }
}

fn topo_order(succ: &[Vec<usize>]) -> Vec<usize> {
    let n = succ.len();
    let mut indeg = vec![0usize; n];
    for s in succ {
        for &d in s {
            indeg[d] += 1;
        }
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&c| indeg[c] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(c) = queue.pop_front() {
        order.push(c);
        for &d in &succ[c] {
            indeg[d] -= 1;
            if indeg[d] == 0 {
                queue.push_back(d);
            }
        }
    }
    order
}

/// Breadth-first exploration in transition declaration order.
pub fn build_rg(sys: &System, budget: &ExplorationBudget) -> ReachabilityGraph {
    explore(&sys.net, &sys.m0, budget)
}

pub(crate) fn explore(net: &Net, m0: &[u64], budget: &ExplorationBudget) -> ReachabilityGraph {
    let mut rg = ReachabilityGraph {
        states: vec![m0.to_vec()],
        arcs: vec![Vec::new()],
        expanded: vec![false],
        parent: vec![None],
        complete: true,
        reason: None,
        index: HashMap::from([(m0.to_vec(), 0)]),
    };
    let mut depth = vec![0usize];
    let mut reason: Option<String> = None;
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        if budget.max_sequence_len.is_some_and(|d| depth[v] >= d) {
            reason.get_or_insert_with(|| format!("sequence length cap {} reached", depth[v]));
            continue;
        }
        let m = rg.states[v].clone();
        let mut out = Vec::new();
        let mut truncated = false;
        for t in 0..net.num_transitions() {
            if !net.enabled(&m, t) {
                continue;
            }
            let mut next = m.clone();
            if net.fire_unchecked(&mut next, t).is_err() {
                reason.get_or_insert_with(|| "token count overflow".into());
                truncated = true;
                continue;
            }
            if let Some(&u) = rg.index.get(&next) {
                out.push((t, u));
                continue;
            }
            if let Some(k) = budget.max_token_bound {
                if next.iter().any(|&x| x > k) {
                    reason.get_or_insert_with(|| format!("marking exceeds token bound {k}"));
                    truncated = true;
                    continue;
                }
            }
            if rg.states.len() >= budget.max_states {
                reason.get_or_insert_with(|| format!("state cap {} reached", budget.max_states));
                truncated = true;
                continue;
            }
            let u = rg.states.len();
            rg.index.insert(next.clone(), u);
            rg.states.push(next);
            rg.arcs.push(Vec::new());
            rg.expanded.push(false);
            rg.parent.push(Some((v, t)));
            depth.push(depth[v] + 1);
            queue.push_back(u);
            out.push((t, u));
        }
        rg.arcs[v] = out;
        rg.expanded[v] = !truncated;
    }
    rg.complete = reason.is_none();
    rg.reason = reason;
    rg
}
