//! Dense bounded-variable dual simplex.
//!
//! Every row `k` gets a logical variable `s_k = a_k x` whose bounds carry the
//! row sense. The tableau stores basic variables as linear functions of the
//! nonbasic ones (`x_B = T x_N`, no constant term), so rows can be appended
//! and variables fixed without losing dual feasibility. The objective is
//! always maximized.

use std::time::Instant;

use super::Row;

pub(crate) const FEAS_TOL: f64 = 1e-7;
pub(crate) const DUAL_TOL: f64 = 1e-7;
pub(crate) const PIVOT_TOL: f64 = 1e-10;
/// Pivots smaller than this are avoided when a larger one is available.
const SAFE_PIVOT: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum SimplexStatus {
    Optimal,
    Infeasible,
    /// The objective dropped to or below the cutoff before optimality.
    Cutoff,
    IterationLimit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Loc {
    Basic(usize),
    Nonbasic(usize),
}

#[derive(Clone, Debug)]
pub(crate) struct Tableau {
    n: usize,
    cost: Vec<f64>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    val: Vec<f64>,
    /// Pool index of each active row, in activation order.
    row_ids: Vec<usize>,
    basic: Vec<usize>,
    nonbasic: Vec<usize>,
    loc: Vec<Loc>,
    tab: Vec<f64>,
    d: Vec<f64>,
    pub(crate) iterations: usize,
    /// Wall-clock stop; `solve` reports `IterationLimit` once it passes.
    pub(crate) deadline: Option<Instant>,
}

impl Tableau {
    /// Starts from the all-logical basis with each structural at the bound
    /// its cost prefers, which is dual feasible.
    pub(crate) fn new(cost: Vec<f64>, lo: Vec<f64>, hi: Vec<f64>) -> Self {
        let n = cost.len();
        let val: Vec<f64> = (0..n).map(|j| if cost[j] > 0.0 { hi[j] } else { lo[j] }).collect();
        Tableau {
            n,
            d: cost.clone(),
            cost,
            lo,
            hi,
            val,
            row_ids: Vec::new(),
            basic: Vec::new(),
            nonbasic: (0..n).collect(),
            loc: (0..n).map(Loc::Nonbasic).collect(),
            tab: Vec::new(),
            iterations: 0,
            deadline: None,
        }
    }

    pub(crate) fn is_fixed(&self, j: usize) -> bool {
        self.lo[j] == self.hi[j]
    }

    pub(crate) fn row_ids(&self) -> &[usize] {
        &self.row_ids
    }

    pub(crate) fn bytes(&self) -> usize {
        8 * (self.tab.len() + self.d.len() + 3 * self.val.len()) + 24 * self.loc.len()
    }

    /// Structural values.
    pub(crate) fn values(&self) -> &[f64] {
        &self.val[..self.n]
    }

    pub(crate) fn objective(&self) -> f64 {
        self.cost.iter().zip(&self.val).map(|(c, v)| c * v).sum()
    }

    fn row(&self, r: usize) -> &[f64] {
        &self.tab[r * self.n..(r + 1) * self.n]
    }

    /// Activates a pool row; its logical variable enters the basis.
    pub(crate) fn add_row(&mut self, id: usize, row: &Row) {
        let n = self.n;
        let mut new = vec![0.0; n];
        let mut value = 0.0;
        for (&j, &a) in row.idx.iter().zip(&row.coef) {
            let j = j as usize;
            value += a * self.val[j];
            match self.loc[j] {
                Loc::Nonbasic(c) => new[c] += a,
                Loc::Basic(r) => {
                    let src = &self.tab[r * n..(r + 1) * n];
                    for (x, &t) in new.iter_mut().zip(src) {
                        *x += a * t;
                    }
                }
            }
        }
        let var = self.val.len();
        self.val.push(value);
        self.lo.push(row.lo);
        self.hi.push(row.hi);
        self.loc.push(Loc::Basic(self.basic.len()));
        self.basic.push(var);
        self.row_ids.push(id);
        self.tab.extend_from_slice(&new);
    }

    /// Pins a structural variable to `v`, which must lie in its current range.
    pub(crate) fn fix(&mut self, j: usize, v: f64) {
        self.lo[j] = v;
        self.hi[j] = v;
        if let Loc::Nonbasic(c) = self.loc[j] {
            let delta = v - self.val[j];
            if delta != 0.0 {
                self.val[j] = v;
                let n = self.n;
                for (r, &b) in self.basic.iter().enumerate() {
                    let t = self.tab[r * n + c];
                    if t != 0.0 {
                        self.val[b] += t * delta;
                    }
                }
            }
        }
    }

    fn infeasibility(&self, var: usize) -> f64 {
        let v = self.val[var];
        if v < self.lo[var] - FEAS_TOL {
            self.lo[var] - v
        } else if v > self.hi[var] + FEAS_TOL {
            v - self.hi[var]
        } else {
            0.0
        }
    }

    fn choose_leaving(&self, bland: bool) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (r, &b) in self.basic.iter().enumerate() {
            let inf = self.infeasibility(b);
            if inf <= 0.0 {
                continue;
            }
            let better = match best {
                None => true,
                Some((br, bi)) => {
                    if bland {
                        b < self.basic[br]
                    } else {
                        inf > bi
                    }
                }
            };
            if better {
                best = Some((r, inf));
            }
        }
        best.map(|(r, _)| r)
    }

    /// Column able to move the leaving variable towards its violated bound
    /// while keeping reduced costs sign-correct. `up` says the leaving
    /// variable must increase.
    fn choose_entering(&self, r: usize, up: bool, bland: bool) -> Option<usize> {
        let row = self.row(r);
        let eligible = |c: usize| -> Option<f64> {
            let a = row[c];
            if a.abs() <= PIVOT_TOL {
                return None;
            }
            let var = self.nonbasic[c];
            if self.lo[var] == self.hi[var] {
                return None;
            }
            let at_lower = self.val[var] <= self.lo[var];
            // increasing x_var raises the leaving variable iff a > 0
            let ok = if at_lower { (a > 0.0) == up } else { (a < 0.0) == up };
            ok.then_some(a)
        };
        if bland {
            let mut best: Option<(usize, f64)> = None;
            for c in 0..self.n {
                if let Some(a) = eligible(c) {
                    let ratio = self.d[c].abs() / a.abs();
                    let better = match best {
                        None => true,
                        Some((bc, br)) => {
                            ratio < br - 1e-12 || (ratio <= br + 1e-12 && self.nonbasic[c] < self.nonbasic[bc])
                        }
                    };
                    if better {
                        best = Some((c, ratio));
                    }
                }
            }
            return best.map(|(c, _)| c);
        }
        // Harris two-pass ratio test.
        let mut bound = f64::INFINITY;
        for c in 0..self.n {
            if let Some(a) = eligible(c) {
                let t = (self.d[c].abs() + DUAL_TOL * 0.01) / a.abs();
                if t < bound {
                    bound = t;
                }
            }
        }
        if !bound.is_finite() {
            return None;
        }
        let mut best: Option<(usize, f64)> = None;
        for c in 0..self.n {
            if let Some(a) = eligible(c) {
                if self.d[c].abs() / a.abs() <= bound {
                    let better = match best {
                        None => true,
                        Some((_, ba)) => a.abs() > ba,
                    };
                    if better {
                        best = Some((c, a.abs()));
                    }
                }
            }
        }
        match best {
            Some((c, a)) if a >= SAFE_PIVOT => Some(c),
            // Fall back to the exact minimum ratio among decent pivots.
            _ => {
                let mut fallback: Option<(usize, f64)> = None;
                for c in 0..self.n {
                    if let Some(a) = eligible(c) {
                        if a.abs() < SAFE_PIVOT {
                            continue;
                        }
                        let ratio = self.d[c].abs() / a.abs();
                        if fallback.map_or(true, |(_, br)| ratio < br) {
                            fallback = Some((c, ratio));
                        }
                    }
                }
                fallback.map(|(c, _)| c).or(best.map(|(c, _)| c))
            }
        }
    }

    fn pivot(&mut self, r: usize, q: usize, target: f64) {
        let n = self.n;
        let leaving = self.basic[r];
        let entering = self.nonbasic[q];
        let arq = self.tab[r * n + q];
        let step = (target - self.val[leaving]) / arq;
        // primal update
        self.val[entering] += step;
        for (i, &b) in self.basic.iter().enumerate() {
            let t = self.tab[i * n + q];
            if t != 0.0 {
                self.val[b] += t * step;
            }
        }
        self.val[leaving] = target;
        // new pivot row
        let mut prow: Vec<f64> = self.row(r).iter().map(|&t| -t / arq).collect();
        prow[q] = 1.0 / arq;
        for i in 0..self.basic.len() {
            if i == r {
                continue;
            }
            let base = i * n;
            let t = self.tab[base + q];
            if t == 0.0 {
                continue;
            }
            self.tab[base + q] = 0.0;
            let dst = &mut self.tab[base..base + n];
            for (x, &p) in dst.iter_mut().zip(&prow) {
                *x += t * p;
            }
        }
        let dq = self.d[q];
        if dq != 0.0 {
            self.d[q] = 0.0;
            for (x, &p) in self.d.iter_mut().zip(&prow) {
                *x += dq * p;
            }
        }
        self.tab[r * n..(r + 1) * n].copy_from_slice(&prow);
        self.basic[r] = entering;
        self.nonbasic[q] = leaving;
        self.loc[entering] = Loc::Basic(r);
        self.loc[leaving] = Loc::Nonbasic(q);
    }

    /// Runs dual simplex pivots until primal feasibility, infeasibility,
    /// the objective falling to `cutoff`, or the iteration budget.
    pub(crate) fn solve(&mut self, cutoff: f64, max_iters: usize) -> SimplexStatus {
        let bland_after = 10 * (self.n + self.basic.len()) + 50;
        let mut local = 0usize;
        loop {
            if self.objective() <= cutoff {
                return SimplexStatus::Cutoff;
            }
            let bland = local >= bland_after;
            let Some(r) = self.choose_leaving(bland) else {
                return SimplexStatus::Optimal;
            };
            if local >= max_iters || (local % 64 == 63 && self.deadline.is_some_and(|d| Instant::now() >= d)) {
                return SimplexStatus::IterationLimit;
            }
            let b = self.basic[r];
            let up = self.val[b] < self.lo[b];
            let target = if up { self.lo[b] } else { self.hi[b] };
            let Some(q) = self.choose_entering(r, up, bland) else {
                return SimplexStatus::Infeasible;
            };
            self.pivot(r, q, target);
            local += 1;
            self.iterations += 1;
        }
    }

    /// Row multipliers with signs forced to match the row senses.
    fn duals(&self) -> Vec<(usize, f64)> {
        let mut out = Vec::new();
        for (c, &var) in self.nonbasic.iter().enumerate() {
            if var < self.n {
                continue;
            }
            let k = var - self.n;
            let y = self.d[c];
            let y = if y > 0.0 && self.hi[var].is_finite() {
                y
            } else if y < 0.0 && self.lo[var].is_finite() {
                y
            } else {
                0.0
            };
            if y != 0.0 {
                out.push((k, y));
            }
        }
        out
    }

    /// An upper bound on the LP optimum computed from the original rows and
    /// the current (sign-corrected) duals; valid whatever rounding the
    /// tableau has accumulated.
    pub(crate) fn safe_bound(&self, pool: &[Row]) -> f64 {
        let mut red = self.cost.clone();
        let mut bound = 0.0;
        for (k, y) in self.duals() {
            let var = self.n + k;
            let row = &pool[self.row_ids[k]];
            bound += y * if y > 0.0 { self.hi[var] } else { self.lo[var] };
            for (&j, &a) in row.idx.iter().zip(&row.coef) {
                red[j as usize] -= y * a;
            }
        }
        for j in 0..self.n {
            bound += (red[j] * self.lo[j]).max(red[j] * self.hi[j]);
        }
        bound
    }

    /// Rebuilds the tableau for the current basis from the original rows
    /// (Gauss-Jordan with partial pivoting), discarding accumulated error.
    /// Returns false if the basis turns out singular.
    pub(crate) fn refactor(&mut self, pool: &[Row]) -> bool {
        let mut fresh = Tableau::new(self.cost.clone(), self.lo[..self.n].to_vec(), self.hi[..self.n].to_vec());
        for j in 0..self.n {
            fresh.val[j] = self.val[j];
        }
        for (k, &id) in self.row_ids.iter().enumerate() {
            fresh.add_row(id, &pool[id]);
            let var = self.n + k;
            fresh.lo[var] = self.lo[var];
            fresh.hi[var] = self.hi[var];
        }
        // Structurals that must become basic, each replacing a logical that
        // must leave.
        let want_basic: Vec<usize> = self.basic.iter().copied().filter(|&v| v < self.n).collect();
        for &j in &want_basic {
            let Loc::Nonbasic(q) = fresh.loc[j] else {
                continue;
            };
            let mut best: Option<(usize, f64)> = None;
            for (r, &b) in fresh.basic.iter().enumerate() {
                if b < self.n || matches!(self.loc[b], Loc::Basic(_)) {
                    continue;
                }
                let a = fresh.tab[r * self.n + q].abs();
                if a > PIVOT_TOL && best.map_or(true, |(_, ba)| a > ba) {
                    best = Some((r, a));
                }
            }
            let Some((r, _)) = best else { return false };
            let leaving = fresh.basic[r];
            let target = self.val[leaving];
            fresh.pivot(r, q, target);
        }
        // Exact values: nonbasics at their recorded values, basics recomputed.
        for &v in &fresh.nonbasic {
            fresh.val[v] = self.val[v];
        }
        for r in 0..fresh.basic.len() {
            let row = fresh.row(r);
            let v: f64 = row.iter().zip(&fresh.nonbasic).map(|(t, &nb)| t * fresh.val[nb]).sum();
            let b = fresh.basic[r];
            fresh.val[b] = v;
        }
        // Reduced costs from scratch.
        let mut d: Vec<f64> = fresh.nonbasic.iter().map(|&v| if v < self.n { self.cost[v] } else { 0.0 }).collect();
        for (r, &b) in fresh.basic.iter().enumerate() {
            if b < self.n && self.cost[b] != 0.0 {
                let cb = self.cost[b];
                for (x, &t) in d.iter_mut().zip(fresh.row(r)) {
                    *x += cb * t;
                }
            }
        }
        fresh.d = d;
        fresh.iterations = self.iterations;
        *self = fresh;
        true
    }

    /// Largest reduced-cost sign violation (0 when dual feasible).
    pub(crate) fn dual_infeasibility(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (c, &v) in self.nonbasic.iter().enumerate() {
            if self.lo[v] == self.hi[v] {
                continue;
            }
            let at_lower = self.val[v] <= self.lo[v];
            let bad = if at_lower { self.d[c] } else { -self.d[c] };
            worst = worst.max(bad);
        }
        worst
    }
}
