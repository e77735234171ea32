//! Siphons and traps.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::net::{Net, NetError};
use crate::verdict::Budget;
use crate::Tokens;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SetKind {
    Siphon,
    Trap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SiphonOrTrap {
    pub kind: SetKind,
    /// Sorted place indices.
    pub places: Vec<usize>,
    pub minimal: bool,
}

/// Result of a minimal siphon or trap enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SiphonList {
    pub sets: Vec<SiphonOrTrap>,
    pub complete: bool,
    pub reason: Option<String>,
}

impl SiphonList {
    pub fn place_sets(&self) -> Vec<Vec<usize>> {
        self.sets.iter().map(|s| s.places.clone()).collect()
    }
}

fn check_places(net: &Net, d: &[usize]) -> Result<(), NetError> {
    match d.iter().find(|&&p| p >= net.num_places()) {
        Some(&p) => Err(NetError::IndexOutOfRange(p)),
        None => Ok(()),
    }
}

/// •D ⊆ D•. The empty set qualifies.
pub fn is_siphon(net: &Net, d: &[usize]) -> Result<bool, NetError> {
    check_places(net, d)?;
    Ok(net.producers_of(d).is_subset(&net.consumers_of(d)))
}

/// Q• ⊆ •Q. The empty set qualifies.
pub fn is_trap(net: &Net, q: &[usize]) -> Result<bool, NetError> {
    check_places(net, q)?;
    Ok(net.consumers_of(q).is_subset(&net.producers_of(q)))
}

fn shrink(net: &Net, q: &[usize], kind: SetKind) -> Vec<usize> {
    let mut inside: BTreeSet<usize> = q.iter().copied().filter(|&p| p < net.num_places()).collect();
    loop {
        let members: Vec<usize> = inside.iter().copied().collect();
        let cone = match kind {
            SetKind::Siphon => net.consumers_of(&members),
            SetKind::Trap => net.producers_of(&members),
        };
        let bad = members.iter().copied().find(|&p| {
            let adj = match kind {
                SetKind::Siphon => net.producers(p),
                SetKind::Trap => net.consumers(p),
            };
            adj.iter().any(|(t, _)| !cone.contains(t))
        });
        match bad {
            Some(p) => {
                inside.remove(&p);
            }
            None => return members,
        }
    }
}

/// Largest siphon contained in `q`.
pub fn max_siphon_in(net: &Net, q: &[usize]) -> Vec<usize> {
    shrink(net, q, SetKind::Siphon)
}

/// Largest trap contained in `q`.
pub fn max_trap_in(net: &Net, q: &[usize]) -> Vec<usize> {
    shrink(net, q, SetKind::Trap)
}

/// Every output transition of every place of `d` lacks tokens in that place.
pub fn is_deadlocked_siphon(net: &Net, m: &[Tokens], d: &[usize]) -> bool {
    d.iter().all(|&p| net.consumers(p).iter().all(|&(_, w)| m[p] < w))
}

fn enumerate_minimal(net: &Net, budget: &Budget, kind: SetKind) -> SiphonList {
    let n = net.num_places();
    if n > budget.subset_cap || n >= 64 {
        return SiphonList {
            sets: Vec::new(),
            complete: false,
            reason: Some(format!("{n} places exceed the subset cap {}", budget.subset_cap)),
        };
    }
    let test = |mask: u64| {
        let d: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        match kind {
            SetKind::Siphon => is_siphon(net, &d).unwrap_or(false),
            SetKind::Trap => is_trap(net, &d).unwrap_or(false),
        }
    };
    let mut found: Vec<u64> = Vec::new();
    for size in 1..=n {
        // Gosper's hack walks the masks of this popcount in increasing order.
        let mut mask: u64 = (1u64 << size) - 1;
        let limit: u64 = 1u64 << n;
        while mask < limit {
            if !found.iter().any(|&f| f & !mask == 0) && test(mask) {
                found.push(mask);
            }
            let c = mask & mask.wrapping_neg();
            let r = mask + c;
            mask = (((r ^ mask) >> 2) / c) | r;
        }
    }
    let mut sets: Vec<SiphonOrTrap> = found
        .into_iter()
        .map(|m| SiphonOrTrap { kind, places: (0..n).filter(|i| m >> i & 1 == 1).collect(), minimal: true })
        .collect();
    sets.sort_by(|a, b| a.places.cmp(&b.places));
    SiphonList { sets, complete: true, reason: None }
}

/// Non-empty siphons containing no other non-empty siphon.
pub fn minimal_siphons(net: &Net, budget: &Budget) -> SiphonList {
    enumerate_minimal(net, budget, SetKind::Siphon)
}

/// Non-empty traps containing no other non-empty trap.
pub fn minimal_traps(net: &Net, budget: &Budget) -> SiphonList {
    enumerate_minimal(net, budget, SetKind::Trap)
}
