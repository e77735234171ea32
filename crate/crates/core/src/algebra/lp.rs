//! Exact two-phase simplex over any [`ExactScalar`].
//!
//! Bland's rule keeps pivoting finite. Instances at hand have a few dozen
//! columns, so a dense tableau is adequate.

use super::scalar::ExactScalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<F> {
    Infeasible,
    Unbounded,
    Optimal { x: Vec<F>, value: F },
}

impl<F> LpOutcome<F> {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

/// `rows` are `a·x rel b`; each variable has optional lower and upper bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram<F> {
    pub num_vars: usize,
    pub rows: Vec<(Vec<F>, Relation, F)>,
    pub lower: Vec<Option<F>>,
    pub upper: Vec<Option<F>>,
}

/// How an original variable is written in terms of non-negative columns.
#[derive(Debug, Clone)]
enum VarMap<F> {
    /// x = offset + z
    Shift(F, usize),
    /// x = offset − z
    Flip(F, usize),
    /// x = z⁺ − z⁻
    Split(usize, usize),
}

impl<F: ExactScalar> LinearProgram<F> {
    /// All variables non-negative, no rows.
    pub fn nonnegative(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            rows: Vec::new(),
            lower: vec![Some(F::zero()); num_vars],
            upper: vec![None; num_vars],
        }
    }

    pub fn free(num_vars: usize) -> Self {
        LinearProgram { num_vars, rows: Vec::new(), lower: vec![None; num_vars], upper: vec![None; num_vars] }
    }

    pub fn add_row(&mut self, coeffs: Vec<F>, rel: Relation, rhs: F) {
        debug_assert_eq!(coeffs.len(), self.num_vars);
        self.rows.push((coeffs, rel, rhs));
    }

    /// Any feasible point, or `None`.
    pub fn feasible_point(&self) -> Option<Vec<F>> {
        match self.minimize(&vec![F::zero(); self.num_vars]) {
            LpOutcome::Optimal { x, .. } => Some(x),
            _ => None,
        }
    }

    pub fn maximize(&self, c: &[F]) -> LpOutcome<F> {
        let neg: Vec<F> = c.iter().map(|v| -v.clone()).collect();
        match self.minimize(&neg) {
            LpOutcome::Optimal { x, value } => LpOutcome::Optimal { x, value: -value },
            other => other,
        }
    }

    pub fn minimize(&self, c: &[F]) -> LpOutcome<F> {
        for j in 0..self.num_vars {
            if let (Some(l), Some(u)) = (&self.lower[j], &self.upper[j]) {
                if l > u {
                    return LpOutcome::Infeasible;
                }
            }
        }
        // Column layout of the standard form.
        let mut maps = Vec::with_capacity(self.num_vars);
        let mut ncols = 0usize;
        let mut bound_rows: Vec<(usize, F)> = Vec::new();
        for j in 0..self.num_vars {
            match (&self.lower[j], &self.upper[j]) {
                (Some(l), u) => {
                    maps.push(VarMap::Shift(l.clone(), ncols));
                    if let Some(u) = u {
                        bound_rows.push((ncols, u.clone() - l.clone()));
                    }
                    ncols += 1;
                }
                (None, Some(u)) => {
                    maps.push(VarMap::Flip(u.clone(), ncols));
                    ncols += 1;
                }
                (None, None) => {
                    maps.push(VarMap::Split(ncols, ncols + 1));
                    ncols += 2;
                }
            }
        }
        let structural = ncols;
        // Rows over z plus slack columns.
        let mut eqs: Vec<(Vec<F>, F)> = Vec::new();
        let mut slack_kinds: Vec<Option<bool>> = Vec::new();
        for (a, rel, b) in &self.rows {
            let mut row = vec![F::zero(); structural];
            let mut rhs = b.clone();
            for (j, aj) in a.iter().enumerate() {
                if aj.is_zero() {
                    continue;
                }
                match &maps[j] {
                    VarMap::Shift(off, z) => {
                        rhs = rhs - aj.clone() * off.clone();
                        row[*z] = row[*z].clone() + aj.clone();
                    }
                    VarMap::Flip(off, z) => {
                        rhs = rhs - aj.clone() * off.clone();
                        row[*z] = row[*z].clone() - aj.clone();
                    }
                    VarMap::Split(zp, zn) => {
                        row[*zp] = row[*zp].clone() + aj.clone();
                        row[*zn] = row[*zn].clone() - aj.clone();
                    }
                }
            }
            eqs.push((row, rhs));
            slack_kinds.push(match rel {
                Relation::Le => Some(true),
                Relation::Ge => Some(false),
                Relation::Eq => None,
            });
        }
        for (z, cap) in bound_rows {
            let mut row = vec![F::zero(); structural];
            row[z] = F::one();
            eqs.push((row, cap));
            slack_kinds.push(Some(true));
        }
        let nslack = slack_kinds.iter().filter(|k| k.is_some()).count();
        let total = structural + nslack;
        let mut a: Vec<Vec<F>> = Vec::with_capacity(eqs.len());
        let mut b: Vec<F> = Vec::with_capacity(eqs.len());
        let mut s = structural;
        for ((mut row, rhs), kind) in eqs.into_iter().zip(slack_kinds) {
            row.resize(total, F::zero());
            if let Some(le) = kind {
                row[s] = if le { F::one() } else { -F::one() };
                s += 1;
            }
            a.push(row);
            b.push(rhs);
        }
        let mut cost = vec![F::zero(); total];
        let mut constant = F::zero();
        for (j, cj) in c.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            match &maps[j] {
                VarMap::Shift(off, z) => {
                    constant = constant + cj.clone() * off.clone();
                    cost[*z] = cost[*z].clone() + cj.clone();
                }
                VarMap::Flip(off, z) => {
                    constant = constant + cj.clone() * off.clone();
                    cost[*z] = cost[*z].clone() - cj.clone();
                }
                VarMap::Split(zp, zn) => {
                    cost[*zp] = cost[*zp].clone() + cj.clone();
                    cost[*zn] = cost[*zn].clone() - cj.clone();
                }
            }
        }
        match solve_standard(a, b, &cost) {
            StdOutcome::Infeasible => LpOutcome::Infeasible,
            StdOutcome::Unbounded => LpOutcome::Unbounded,
            StdOutcome::Optimal(z, v) => {
                let x = maps
                    .iter()
                    .map(|m| match m {
                        VarMap::Shift(off, k) => off.clone() + z[*k].clone(),
                        VarMap::Flip(off, k) => off.clone() - z[*k].clone(),
                        VarMap::Split(p, n) => z[*p].clone() - z[*n].clone(),
                    })
                    .collect();
                LpOutcome::Optimal { x, value: v + constant }
            }
        }
    }
}

enum StdOutcome<F> {
    Infeasible,
    Unbounded,
    Optimal(Vec<F>, F),
}

struct Tableau<F> {
    a: Vec<Vec<F>>,
    b: Vec<F>,
    basis: Vec<usize>,
    /// Reduced costs of the current objective.
    d: Vec<F>,
}

impl<F: ExactScalar> Tableau<F> {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = F::one() / self.a[r][c].clone();
        for v in self.a[r].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        self.b[r] = self.b[r].clone() * inv;
        let prow = self.a[r].clone();
        let pb = self.b[r].clone();
        for i in 0..self.a.len() {
            if i == r || self.a[i][c].is_zero() {
                continue;
            }
            let f = self.a[i][c].clone();
            for (v, p) in self.a[i].iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v = v.clone() - f.clone() * p.clone();
                }
            }
            self.b[i] = self.b[i].clone() - f * pb.clone();
        }
        if !self.d[c].is_zero() {
            let f = self.d[c].clone();
            for (v, p) in self.d.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v = v.clone() - f.clone() * p.clone();
                }
            }
        }
        self.basis[r] = c;
    }

    fn set_objective(&mut self, cost: &[F]) {
        self.d = cost.to_vec();
        for (i, &bv) in self.basis.iter().enumerate() {
            let cb = cost[bv].clone();
            if cb.is_zero() {
                continue;
            }
            for (v, p) in self.d.iter_mut().zip(&self.a[i]) {
                *v = v.clone() - cb.clone() * p.clone();
            }
        }
    }

    /// Runs Bland's rule over columns `< allowed`. Returns false when unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        loop {
            let Some(c) = (0..allowed).find(|&j| self.d[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, F)> = None;
            for i in 0..self.a.len() {
                if self.a[i][c].is_positive() {
                    let ratio = self.b[i].clone() / self.a[i][c].clone();
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            match best {
                None => return false,
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }
}

/// min cost·z subject to a·z = b, z ≥ 0.
fn solve_standard<F: ExactScalar>(mut a: Vec<Vec<F>>, mut b: Vec<F>, cost: &[F]) -> StdOutcome<F> {
    let m = a.len();
    let n = cost.len();
    for i in 0..m {
        if b[i].is_negative() {
            for v in a[i].iter_mut() {
                *v = -v.clone();
            }
            b[i] = -b[i].clone();
        }
    }
    // Artificial columns n..n+m.
    for (i, row) in a.iter_mut().enumerate() {
        row.resize(n + m, F::zero());
        row[n + i] = F::one();
    }
    let mut t = Tableau { a, b, basis: (n..n + m).collect(), d: Vec::new() };
    let mut phase1 = vec![F::zero(); n + m];
    for v in phase1.iter_mut().skip(n) {
        *v = F::one();
    }
    t.set_objective(&phase1);
    t.optimize(n + m);
    let infeas: F = t.basis.iter().zip(&t.b).filter(|(&bv, _)| bv >= n).fold(F::zero(), |acc, (_, v)| acc + v.clone());
    if infeas.is_positive() {
        return StdOutcome::Infeasible;
    }
    // Drive zero-valued artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < t.a.len() {
        if t.basis[i] >= n {
            if let Some(c) = (0..n).find(|&j| !t.a[i][j].is_zero()) {
                t.pivot(i, c);
                i += 1;
            } else {
                t.a.remove(i);
                t.b.remove(i);
                t.basis.remove(i);
            }
        } else {
            i += 1;
        }
    }
    let mut full_cost = cost.to_vec();
    full_cost.resize(n + m, F::zero());
    t.set_objective(&full_cost);
    if !t.optimize(n) {
        return StdOutcome::Unbounded;
    }
    let mut z = vec![F::zero(); n];
    for (i, &bv) in t.basis.iter().enumerate() {
        if bv < n {
            z[bv] = t.b[i].clone();
        }
    }
    let value = z.iter().zip(cost).fold(F::zero(), |acc, (zi, ci)| acc + zi.clone() * ci.clone());
    StdOutcome::Optimal(z, value)
}
