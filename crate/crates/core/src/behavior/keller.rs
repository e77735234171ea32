//! Confluence of persistent systems through residues.

use super::{require, BehaviorError};
use crate::net::{residue, System};
use crate::structure::classify;

/// For feasible τ and σ in a choice-free system, fires τ(σ∸τ) and σ(τ∸σ)
/// and reports whether both succeed and end in the same marking.
pub fn keller_check(sys: &System, tau: &[usize], sigma: &[usize]) -> Result<bool, BehaviorError> {
    require(classify(&sys.net).choice_free, "net is not choice-free")?;
    sys.net.fire_sequence(&sys.m0, tau)?;
    sys.net.fire_sequence(&sys.m0, sigma)?;
    let left: Vec<usize> = tau.iter().copied().chain(residue(sigma, tau)).collect();
    let right: Vec<usize> = sigma.iter().copied().chain(residue(tau, sigma)).collect();
    match (sys.net.fire_sequence(&sys.m0, &left), sys.net.fire_sequence(&sys.m0, &right)) {
        (Ok(a), Ok(b)) => Ok(a == b),
        _ => Ok(false),
    }
}
