//! Minimal semiflows by the Farkas elimination with support-minimality
//! pruning after each eliminated row.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::Serialize;

use super::IncidenceMatrix;
use crate::net::Net;
use crate::verdict::Budget;
use crate::Tokens;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SemiflowKind {
    T,
    P,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Semiflow {
    pub kind: SemiflowKind,
    pub vector: Vec<Tokens>,
    /// gcd of the components is 1
    pub prime: bool,
    /// prime with a support containing no other semiflow's support
    pub minimal: bool,
}

impl Semiflow {
    pub fn support(&self) -> Vec<usize> {
        self.vector.iter().enumerate().filter(|(_, &v)| v > 0).map(|(i, _)| i).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemiflowSet {
    pub flows: Vec<Semiflow>,
    /// false when the elimination hit its row cap or overflowed
    pub complete: bool,
    pub reason: Option<String>,
}

impl SemiflowSet {
    pub fn vectors(&self) -> Vec<Vec<Tokens>> {
        self.flows.iter().map(|f| f.vector.clone()).collect()
    }
}

#[derive(Clone)]
struct Row {
    x: Vec<i128>,
    r: Vec<i128>,
    support: BTreeSet<usize>,
}

fn normalize(row: &mut Row) {
    let mut g: i128 = 0;
    for v in row.x.iter().chain(&row.r) {
        g = g.gcd(v);
    }
    if g > 1 {
        for v in row.x.iter_mut().chain(row.r.iter_mut()) {
            *v /= g;
        }
    }
}

/// Non-negative integer solutions `x` of `Σ_j x_j · cols[j] = 0` with
/// minimal support, each prime.
fn farkas(cols: &[Vec<i64>], dim: usize, cap: usize) -> (Vec<Vec<i128>>, Option<String>) {
    let n = cols.len();
    let mut rows: Vec<Row> = (0..n)
        .map(|j| {
            let mut x = vec![0i128; n];
            x[j] = 1;
            Row { x, r: cols[j].iter().map(|&v| v as i128).collect(), support: BTreeSet::from([j]) }
        })
        .collect();
    for i in 0..dim {
        let (zero, nonzero): (Vec<Row>, Vec<Row>) = rows.into_iter().partition(|r| r.r[i] == 0);
        let pos: Vec<&Row> = nonzero.iter().filter(|r| r.r[i] > 0).collect();
        let neg: Vec<&Row> = nonzero.iter().filter(|r| r.r[i] < 0).collect();
        let mut next = zero;
        for a in &pos {
            for b in &neg {
                let support: BTreeSet<usize> = a.support.union(&b.support).copied().collect();
                let ca = -b.r[i];
                let cb = a.r[i];
                let combine = |u: &[i128], v: &[i128]| -> Option<Vec<i128>> {
                    u.iter().zip(v).map(|(&p, &q)| p.checked_mul(ca)?.checked_add(q.checked_mul(cb)?)).collect()
                };
                let (Some(x), Some(r)) = (combine(&a.x, &b.x), combine(&a.r, &b.r)) else {
                    return (Vec::new(), Some("integer overflow during elimination".into()));
                };
                let mut row = Row { x, r, support };
                normalize(&mut row);
                next.push(row);
                if next.len() > cap {
                    return (Vec::new(), Some(format!("semiflow row cap {cap} exceeded")));
                }
            }
        }
        // Keep rows whose support is minimal; drop duplicates of a support.
        next.sort_by(|a, b| a.support.len().cmp(&b.support.len()).then_with(|| a.x.cmp(&b.x)));
        let mut kept: Vec<Row> = Vec::with_capacity(next.len());
        for row in next {
            if kept.iter().any(|k| k.support.is_subset(&row.support)) {
                continue;
            }
            kept.push(row);
        }
        rows = kept;
    }
    let mut out: Vec<Vec<i128>> = rows.into_iter().map(|r| r.x).collect();
    out.sort();
    (out, None)
}

fn collect(kind: SemiflowKind, vecs: Vec<Vec<i128>>, reason: Option<String>) -> SemiflowSet {
    let complete = reason.is_none();
    let mut flows: Vec<Semiflow> = vecs
        .into_iter()
        .map(|v| Semiflow { kind, vector: v.into_iter().map(|c| c as Tokens).collect(), prime: true, minimal: true })
        .collect();
    flows.sort_by(|a, b| a.vector.cmp(&b.vector));
    SemiflowSet { flows, complete, reason }
}

/// All minimal T-semiflows (I·Y = 0).
pub fn minimal_t_semiflows(net: &Net, budget: &Budget) -> SemiflowSet {
    let inc = IncidenceMatrix::of(net);
    let cols: Vec<Vec<i64>> = (0..net.num_transitions()).map(|t| inc.column(t)).collect();
    let (v, reason) = farkas(&cols, net.num_places(), budget.semiflow_cap);
    collect(SemiflowKind::T, v, reason)
}

/// All minimal P-semiflows (Xᵀ·I = 0).
pub fn minimal_p_semiflows(net: &Net, budget: &Budget) -> SemiflowSet {
    let inc = IncidenceMatrix::of(net);
    let cols: Vec<Vec<i64>> = (0..net.num_places()).map(|p| inc.rows[p].clone()).collect();
    let (v, reason) = farkas(&cols, net.num_transitions(), budget.semiflow_cap);
    collect(SemiflowKind::P, v, reason)
}
