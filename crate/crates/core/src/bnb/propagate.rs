//! Activity-based bound propagation over integer rows with an undo trail.

use crate::ilp::{Cmp, IlpModel, Sense};

pub(crate) const NO_LO: i64 = i64::MIN;
pub(crate) const NO_HI: i64 = i64::MAX;

#[derive(Clone, Debug)]
pub(crate) struct IRow {
    pub terms: Vec<(u32, i64)>,
    pub lo: i64,
    pub hi: i64,
    pub maxabs: i64,
}

/// Model data in maximization form, shared read-only by all nodes.
#[derive(Debug)]
pub(crate) struct Problem {
    pub n: usize,
    pub cost: Vec<i64>,
    pub rows: Vec<IRow>,
    pub cols: Vec<Vec<(u32, i64)>>,
    /// Model-level pins: -1 free, 0 or 1.
    pub pinned: Vec<i8>,
}

impl Problem {
    pub(crate) fn new(m: &IlpModel) -> Self {
        let n = m.num_vars();
        let sign = if m.sense() == Sense::Maximize { 1 } else { -1 };
        let mut cost = vec![0i64; n];
        for &(v, c) in m.objective() {
            cost[v] = sign * c;
        }
        let mut rows = Vec::with_capacity(m.num_constraints());
        let mut cols = vec![Vec::new(); n];
        for (r, c) in m.constraints().iter().enumerate() {
            let (lo, hi) = match c.cmp() {
                Cmp::Le => (NO_LO, c.rhs()),
                Cmp::Ge => (c.rhs(), NO_HI),
                Cmp::Eq => (c.rhs(), c.rhs()),
            };
            let terms: Vec<(u32, i64)> = c.terms().iter().map(|&(v, a)| (v as u32, a)).collect();
            for &(v, a) in &terms {
                cols[v as usize].push((r as u32, a));
            }
            let maxabs = terms.iter().map(|t| t.1.abs()).max().unwrap_or(0);
            rows.push(IRow { terms, lo, hi, maxabs });
        }
        let mut pinned = vec![-1i8; n];
        for (&v, &b) in m.fixed() {
            pinned[v] = b as i8;
        }
        Problem { n, cost, rows, cols, pinned }
    }

    pub(crate) fn objective(&self, x: &[bool]) -> i64 {
        self.cost.iter().zip(x).filter(|(_, &b)| b).map(|(c, _)| c).sum()
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Prop<'p> {
    p: &'p Problem,
    pub val: Vec<i8>,
    minact: Vec<i64>,
    maxact: Vec<i64>,
    trail: Vec<u32>,
    queue: Vec<u32>,
    queued: Vec<bool>,
}

impl<'p> Prop<'p> {
    pub(crate) fn new(p: &'p Problem) -> Self {
        let mut minact = vec![0i64; p.rows.len()];
        let mut maxact = vec![0i64; p.rows.len()];
        for (r, row) in p.rows.iter().enumerate() {
            for &(_, a) in &row.terms {
                if a < 0 {
                    minact[r] += a;
                } else {
                    maxact[r] += a;
                }
            }
        }
        Prop {
            p,
            val: vec![-1; p.n],
            minact,
            maxact,
            trail: Vec::new(),
            queue: (0..p.rows.len() as u32).collect(),
            queued: vec![true; p.rows.len()],
        }
    }

    pub(crate) fn is_free(&self, j: usize) -> bool {
        self.val[j] < 0
    }

    /// Assigns `x_j = v`; false if it already holds the other value.
    pub(crate) fn set(&mut self, j: usize, v: bool) -> bool {
        let cur = self.val[j];
        if cur >= 0 {
            return cur == v as i8;
        }
        self.val[j] = v as i8;
        self.trail.push(j as u32);
        let vi = v as i64;
        for &(r, a) in &self.p.cols[j] {
            let r = r as usize;
            if a > 0 {
                self.minact[r] += a * vi;
                self.maxact[r] += a * vi - a;
            } else {
                self.minact[r] += a * vi - a;
                self.maxact[r] += a * vi;
            }
            if !self.queued[r] {
                self.queued[r] = true;
                self.queue.push(r as u32);
            }
        }
        true
    }

    fn clear_queue(&mut self) {
        for &r in &self.queue {
            self.queued[r as usize] = false;
        }
        self.queue.clear();
    }

    /// Runs to a fixpoint; false on a conflict.
    pub(crate) fn propagate(&mut self) -> bool {
        while let Some(r) = self.queue.pop() {
            let r = r as usize;
            self.queued[r] = false;
            let row = &self.p.rows[r];
            if row.hi != NO_HI {
                if self.minact[r] > row.hi {
                    self.clear_queue();
                    return false;
                }
                let slack = row.hi - self.minact[r];
                if slack < row.maxabs {
                    for &(j, a) in &row.terms {
                        let j = j as usize;
                        if self.val[j] < 0 && a.abs() > slack {
                            self.set(j, a < 0);
                        }
                    }
                }
            }
            if row.lo != NO_LO {
                if self.maxact[r] < row.lo {
                    self.clear_queue();
                    return false;
                }
                let slack = self.maxact[r] - row.lo;
                if slack < row.maxabs {
                    for &(j, a) in &row.terms {
                        let j = j as usize;
                        if self.val[j] < 0 && a.abs() > slack {
                            self.set(j, a > 0);
                        }
                    }
                }
            }
        }
        true
    }

    pub(crate) fn mark(&self) -> usize {
        self.trail.len()
    }

    pub(crate) fn undo(&mut self, mark: usize) {
        self.clear_queue();
        while self.trail.len() > mark {
            let j = self.trail.pop().unwrap() as usize;
            let vi = self.val[j] as i64;
            for &(r, a) in &self.p.cols[j] {
                let r = r as usize;
                if a > 0 {
                    self.minact[r] -= a * vi;
                    self.maxact[r] -= a * vi - a;
                } else {
                    self.minact[r] -= a * vi - a;
                    self.maxact[r] -= a * vi;
                }
            }
            self.val[j] = -1;
        }
    }

    /// Every variable fixed.
    pub(crate) fn complete(&self) -> bool {
        self.trail.len() == self.p.n
    }

    pub(crate) fn assignment(&self) -> Vec<bool> {
        self.val.iter().map(|&v| v == 1).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ilp::IlpModel;

    #[test]
    fn packing_and_covering_rows_propagate() {
        let mut m = IlpModel::new("t", Sense::Maximize);
        for i in 0..4 {
            m.add_binary_var(format!("x{i}")).unwrap();
        }
        m.add_constraint([(0, 1), (1, 1), (2, 1)], Cmp::Le, 1).unwrap();
        m.add_constraint([(2, 1), (3, 1)], Cmp::Ge, 1).unwrap();
        let p = Problem::new(&m);
        let mut s = Prop::new(&p);
        assert!(s.propagate());
        let mark = s.mark();
        assert!(s.set(0, true));
        assert!(s.propagate());
        assert_eq!(s.val, vec![1, 0, 0, 1]);
        s.undo(mark);
        assert_eq!(s.val, vec![-1; 4]);
        assert!(s.set(3, false));
        assert!(s.propagate());
        assert_eq!(s.val, vec![0, 0, 1, 0]);
        s.undo(mark);
        s.set(0, true);
        s.set(3, false);
        assert!(!s.propagate());
    }

    #[test]
    fn general_coefficients() {
        // 3a - 2b + c <= 1
        let mut m = IlpModel::new("t", Sense::Maximize);
        for i in 0..3 {
            m.add_binary_var(format!("x{i}")).unwrap();
        }
        m.add_constraint([(0, 3), (1, -2), (2, 1)], Cmp::Le, 1).unwrap();
        let p = Problem::new(&m);
        let mut s = Prop::new(&p);
        assert!(s.propagate());
        s.set(0, true);
        assert!(s.propagate());
        assert_eq!(s.val, vec![1, 1, 0]);
    }
}
