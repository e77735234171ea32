//! Integer solutions of linear equation systems, ignoring sign constraints.
//!
//! Column operations in unimodular steps bring `A` to lower echelon form
//! `A·U = L`; then `L·z = b` is solved by forward substitution.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// General integer solution of `A·x = b`: a particular solution and a basis
/// of the integer kernel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerSolution {
    pub particular: Vec<BigInt>,
    pub kernel: Vec<Vec<BigInt>>,
}

/// Returns `None` when `A·x = b` has no solution in Zⁿ.
pub fn solve_integer(a: &[Vec<i64>], b: &[i64], n: usize) -> Option<IntegerSolution> {
    let m = a.len();
    let mut l: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
    let mut u: Vec<Vec<BigInt>> =
        (0..n).map(|i| (0..n).map(|j| BigInt::from(i64::from(i == j))).collect()).collect();
    let swap_cols = |mat: &mut Vec<Vec<BigInt>>, x: usize, y: usize| {
        for row in mat.iter_mut() {
            row.swap(x, y);
        }
    };
    let sub_col = |mat: &mut Vec<Vec<BigInt>>, dst: usize, src: usize, q: &BigInt| {
        for row in mat.iter_mut() {
            let v = &row[src] * q;
            row[dst] -= v;
        }
    };
    let mut pivots: Vec<Option<usize>> = vec![None; m];
    let mut r = 0usize;
    for i in 0..m {
        if r >= n {
            break;
        }
        loop {
            // Smallest non-zero entry of row i among columns r.. becomes the pivot.
            let mut best: Option<usize> = None;
            for k in r..n {
                if !l[i][k].is_zero() && best.is_none_or(|bk| l[i][k].abs() < l[i][bk].abs()) {
                    best = Some(k);
                }
            }
            let Some(bk) = best else { break };
            if bk != r {
                swap_cols(&mut l, bk, r);
                swap_cols(&mut u, bk, r);
            }
            let mut done = true;
            for k in r + 1..n {
                if l[i][k].is_zero() {
                    continue;
                }
                let q = l[i][k].div_floor(&l[i][r]);
                sub_col(&mut l, k, r, &q);
                sub_col(&mut u, k, r, &q);
                if !l[i][k].is_zero() {
                    done = false;
                }
            }
            if done {
                pivots[i] = Some(r);
                r += 1;
                break;
            }
        }
    }
    let mut z = vec![BigInt::zero(); n];
    for i in 0..m {
        let mut rest = BigInt::from(b[i]);
        for k in 0..n {
            if Some(k) != pivots[i] && !l[i][k].is_zero() {
                rest -= &l[i][k] * &z[k];
            }
        }
        match pivots[i] {
            Some(p) => {
                let (q, rem) = rest.div_rem(&l[i][p]);
                if !rem.is_zero() {
                    return None;
                }
                z[p] = q;
            }
            None => {
                if !rest.is_zero() {
                    return None;
                }
            }
        }
    }
    let particular = (0..n).map(|i| (0..n).map(|k| &u[i][k] * &z[k]).sum()).collect();
    let kernel = (r..n).map(|k| (0..n).map(|i| u[i][k].clone()).collect()).collect();
    Some(IntegerSolution { particular, kernel })
}
