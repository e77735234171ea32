//! Parikh vectors, left residues and sequence reversal.

use std::collections::HashMap;
use std::hash::Hash;

use super::TVector;
use crate::Tokens;

/// Occurrence counts of each transition in `sigma`.
pub fn parikh(num_transitions: usize, sigma: &[usize]) -> TVector {
    let mut y = vec![0; num_transitions];
    for &t in sigma {
        y[t] += 1;
    }
    y
}

/// Left residue τ∸σ: for every symbol of σ, the leftmost not yet erased
/// occurrence of that symbol in τ (if any) is erased.
pub fn residue<T: Eq + Hash + Clone>(tau: &[T], sigma: &[T]) -> Vec<T> {
    let mut pending: HashMap<&T, usize> = HashMap::new();
    for s in sigma {
        *pending.entry(s).or_insert(0) += 1;
    }
    let mut out = Vec::with_capacity(tau.len());
    for s in tau {
        match pending.get_mut(s) {
            Some(k) if *k > 0 => *k -= 1,
            _ => out.push(s.clone()),
        }
    }
    out
}

/// τ∸Y: removes the min(P(τ)(t), Y(t)) leftmost occurrences of each t.
pub fn residue_tvector(tau: &[usize], y: &[Tokens]) -> Vec<usize> {
    let mut pending = y.to_vec();
    let mut out = Vec::with_capacity(tau.len());
    for &t in tau {
        if pending.get(t).copied().unwrap_or(0) > 0 {
            pending[t] -= 1;
        } else {
            out.push(t);
        }
    }
    out
}

/// σ read right to left.
pub fn reverse_sequence<T: Clone>(sigma: &[T]) -> Vec<T> {
    sigma.iter().rev().cloned().collect()
}
