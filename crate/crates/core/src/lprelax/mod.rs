//! Continuous relaxation of a 0-1 model: every variable in `[0, 1]`, some
//! pinned to 0 or 1.

pub(crate) mod simplex;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ilp::{Cmp, IlpModel, Sense};
use simplex::{SimplexStatus, Tableau, FEAS_TOL};

/// A sparse row `lo <= a x <= hi`.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Row {
    pub idx: Vec<u32>,
    pub coef: Vec<f64>,
    pub lo: f64,
    pub hi: f64,
}

impl Row {
    pub(crate) fn activity(&self, x: &[f64]) -> f64 {
        self.idx.iter().zip(&self.coef).map(|(&j, &a)| a * x[j as usize]).sum()
    }

    pub(crate) fn violation(&self, x: &[f64]) -> f64 {
        let a = self.activity(x);
        (self.lo - a).max(a - self.hi).max(0.0)
    }
}

pub(crate) fn model_rows(m: &IlpModel) -> Vec<Row> {
    m.constraints()
        .iter()
        .map(|c| {
            let b = c.rhs() as f64;
            let (lo, hi) = match c.cmp() {
                Cmp::Le => (f64::NEG_INFINITY, b),
                Cmp::Ge => (b, f64::INFINITY),
                Cmp::Eq => (b, b),
            };
            Row {
                idx: c.terms().iter().map(|&(v, _)| v as u32).collect(),
                coef: c.terms().iter().map(|&(_, a)| a as f64).collect(),
                lo,
                hi,
            }
        })
        .collect()
}

/// Objective coefficients turned into a maximization.
pub(crate) fn max_cost(m: &IlpModel) -> Vec<f64> {
    let sign = match m.sense() {
        Sense::Maximize => 1.0,
        Sense::Minimize => -1.0,
    };
    let mut c = vec![0.0; m.num_vars()];
    for &(v, a) in m.objective() {
        c[v] = sign * a as f64;
    }
    c
}

/// Variables pinned to 0 or 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Fixings(BTreeMap<usize, bool>);

impl Fixings {
    pub fn new() -> Self {
        Fixings(BTreeMap::new())
    }

    /// Fails if `v` is already pinned to the other value.
    pub fn insert(&mut self, v: usize, value: bool) -> Result<()> {
        match self.0.insert(v, value) {
            Some(old) if old != value => Err(crate::error::invalid(format!("variable {v} fixed to both 0 and 1"))),
            _ => Ok(()),
        }
    }

    pub fn get(&self, v: usize) -> Option<bool> {
        self.0.get(&v).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, bool)> + '_ {
        self.0.iter().map(|(&v, &b)| (v, b))
    }
}

impl FromIterator<(usize, bool)> for Fixings {
    /// Later entries win on conflict; use [`Fixings::insert`] to detect it.
    fn from_iter<I: IntoIterator<Item = (usize, bool)>>(iter: I) -> Self {
        Fixings(iter.into_iter().collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    NumericalFailure,
}

#[derive(Clone, Debug, Serialize)]
pub struct LpOutcome {
    pub status: LpStatus,
    /// One value per model variable (empty unless optimal).
    pub primal: Vec<f64>,
    /// In the model's own sense.
    pub objective: f64,
    pub max_violation: f64,
    pub iterations: usize,
}

/// How many violated rows are activated per round.
const ROW_BATCH: usize = 64;

/// Dual simplex with lazy row activation: rows of `pool` enter the tableau
/// only once the current point violates them.
pub(crate) fn solve_lazy(tab: &mut Tableau, pool: &[Row], cutoff: f64, max_iters: usize) -> SimplexStatus {
    let mut active = vec![false; pool.len()];
    for &id in tab.row_ids() {
        active[id] = true;
    }
    let start = tab.iterations;
    let mut viol: Vec<(f64, usize)> = Vec::new();
    loop {
        let budget = max_iters.saturating_sub(tab.iterations - start);
        let status = tab.solve(cutoff, budget);
        if status != SimplexStatus::Optimal {
            return status;
        }
        viol.clear();
        let x = tab.values();
        for (id, row) in pool.iter().enumerate() {
            if !active[id] {
                let v = row.violation(x);
                if v > FEAS_TOL {
                    viol.push((v, id));
                }
            }
        }
        if viol.is_empty() {
            return SimplexStatus::Optimal;
        }
        if viol.len() > ROW_BATCH {
            viol.select_nth_unstable_by(ROW_BATCH, |a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
            viol.truncate(ROW_BATCH);
        }
        viol.sort_unstable_by_key(|&(_, id)| id);
        for &(_, id) in &viol {
            active[id] = true;
            tab.add_row(id, &pool[id]);
        }
    }
}

fn max_violation(pool: &[Row], x: &[f64], lo: &[f64], hi: &[f64]) -> f64 {
    let rows = pool.iter().map(|r| r.violation(x)).fold(0.0, f64::max);
    let bounds = x.iter().zip(lo.iter().zip(hi)).map(|(&v, (&l, &h))| (l - v).max(v - h).max(0.0)).fold(0.0, f64::max);
    rows.max(bounds)
}

/// Optimal basic solution of the relaxation of `model` with `fix` and the
/// model's own pinned variables applied.
pub fn solve_relaxation(model: &IlpModel, fix: &Fixings) -> Result<LpOutcome> {
    let n = model.num_vars();
    let mut lo = vec![0.0; n];
    let mut hi = vec![1.0; n];
    let mut all = Fixings::new();
    for (&v, &b) in model.fixed() {
        all.insert(v, b)?;
    }
    for (v, b) in fix.iter() {
        if v >= n {
            return Err(Error::VariableIndex { index: v, len: n });
        }
        all.insert(v, b)?;
    }
    for (v, b) in all.iter() {
        lo[v] = b as u8 as f64;
        hi[v] = lo[v];
    }
    let pool = model_rows(model);
    let cost = max_cost(model);
    let sign = if model.sense() == Sense::Maximize { 1.0 } else { -1.0 };
    let max_iters = 50 * (n + pool.len()) + 10_000;

    let mut tab = Tableau::new(cost.clone(), lo.clone(), hi.clone());
    let mut status = solve_lazy(&mut tab, &pool, f64::NEG_INFINITY, max_iters);
    let mut attempts = 0;
    loop {
        match status {
            SimplexStatus::Infeasible => {
                return Ok(LpOutcome {
                    status: LpStatus::Infeasible,
                    primal: Vec::new(),
                    objective: f64::NAN,
                    max_violation: f64::NAN,
                    iterations: tab.iterations,
                })
            }
            SimplexStatus::Optimal => {
                let mut x = tab.values().to_vec();
                for j in 0..n {
                    if x[j] > hi[j] && x[j] - hi[j] <= 1e-9 {
                        x[j] = hi[j];
                    }
                    if x[j] < lo[j] && lo[j] - x[j] <= 1e-9 {
                        x[j] = lo[j];
                    }
                }
                let viol = max_violation(&pool, &x, &lo, &hi);
                if viol <= FEAS_TOL && tab.dual_infeasibility() <= simplex::DUAL_TOL {
                    let objective = sign * cost.iter().zip(&x).map(|(c, v)| c * v).sum::<f64>();
                    return Ok(LpOutcome {
                        status: LpStatus::Optimal,
                        primal: x,
                        objective,
                        max_violation: viol,
                        iterations: tab.iterations,
                    });
                }
            }
            SimplexStatus::Cutoff | SimplexStatus::IterationLimit => {}
        }
        attempts += 1;
        match attempts {
            1 if tab.refactor(&pool) => {}
            1 | 2 => {
                // cold restart with every row active from the outset
                let iters = tab.iterations;
                tab = Tableau::new(cost.clone(), lo.clone(), hi.clone());
                tab.iterations = iters;
                for (id, r) in pool.iter().enumerate() {
                    tab.add_row(id, r);
                }
                attempts = 2;
            }
            _ => {
                return Ok(LpOutcome {
                    status: LpStatus::NumericalFailure,
                    primal: Vec::new(),
                    objective: f64::NAN,
                    max_violation: f64::NAN,
                    iterations: tab.iterations,
                })
            }
        }
        status = solve_lazy(&mut tab, &pool, f64::NEG_INFINITY, max_iters);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ilp::Assignment;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn model(nv: usize, obj: &[i64], rows: &[(&[(usize, i64)], Cmp, i64)], sense: Sense) -> IlpModel {
        let mut m = IlpModel::new("t", sense);
        for i in 0..nv {
            m.add_binary_var(format!("x{i}")).unwrap();
        }
        m.set_objective(obj.iter().copied().enumerate()).unwrap();
        for (t, c, r) in rows {
            m.add_constraint(t.iter().copied(), *c, *r).unwrap();
        }
        m
    }

    #[test]
    fn trivial_bound() {
        let m = model(1, &[1], &[(&[(0, 1)], Cmp::Le, 1)], Sense::Maximize);
        let out = solve_relaxation(&m, &Fixings::new()).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert!((out.objective - 1.0).abs() < 1e-9);
    }

    #[test]
    fn sperner_two_relaxation() {
        // x_empty, x_1, x_2, x_12 with comparability constraints
        let rows: Vec<(&[(usize, i64)], Cmp, i64)> = vec![
            (&[(0, 1), (1, 1)], Cmp::Le, 1),
            (&[(0, 1), (2, 1)], Cmp::Le, 1),
            (&[(0, 1), (3, 1)], Cmp::Le, 1),
            (&[(1, 1), (3, 1)], Cmp::Le, 1),
            (&[(2, 1), (3, 1)], Cmp::Le, 1),
        ];
        let m = model(4, &[1, 1, 1, 1], &rows, Sense::Maximize);
        let out = solve_relaxation(&m, &Fixings::new()).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert!((out.objective - 2.0).abs() < 1e-9, "{}", out.objective);
    }

    #[test]
    fn fixings_can_make_it_infeasible() {
        let m = model(2, &[1, 1], &[(&[(0, 1), (1, 1)], Cmp::Le, 1)], Sense::Maximize);
        let fix: Fixings = [(0, true), (1, true)].into_iter().collect();
        assert_eq!(solve_relaxation(&m, &fix).unwrap().status, LpStatus::Infeasible);
        let mut f = Fixings::new();
        f.insert(0, true).unwrap();
        assert!(f.insert(0, false).is_err());
        assert!(solve_relaxation(&m, &[(7, true)].into_iter().collect()).is_err());
    }

    #[test]
    fn minimization_and_equalities() {
        // min x0 + x1 + x2 s.t. x0 + x1 >= 1, x1 + x2 >= 1, x0 + x2 >= 1
        let rows: Vec<(&[(usize, i64)], Cmp, i64)> =
            vec![(&[(0, 1), (1, 1)], Cmp::Ge, 1), (&[(1, 1), (2, 1)], Cmp::Ge, 1), (&[(0, 1), (2, 1)], Cmp::Ge, 1)];
        let m = model(3, &[1, 1, 1], &rows, Sense::Minimize);
        let out = solve_relaxation(&m, &Fixings::new()).unwrap();
        assert!((out.objective - 1.5).abs() < 1e-9);
        let eq = model(3, &[1, 2, 3], &[(&[(0, 1), (1, 1), (2, 1)], Cmp::Eq, 2)], Sense::Maximize);
        assert!((solve_relaxation(&eq, &Fixings::new()).unwrap().objective - 5.0).abs() < 1e-9);
    }

    /// Random model: `nv` binaries, objective and rows with small integer
    /// coefficients.
    pub(crate) fn random_model(rng: &mut impl Rng, nv: usize, nc: usize, sense: Sense) -> IlpModel {
        let mut m = IlpModel::new("rand", sense);
        for i in 0..nv {
            m.add_binary_var(format!("x{i}")).unwrap();
        }
        m.set_objective((0..nv).map(|v| (v, rng.gen_range(-3..=5)))).unwrap();
        for _ in 0..nc {
            let k = rng.gen_range(1..=nv.min(5));
            let terms: Vec<(usize, i64)> = (0..k)
                .map(|_| (rng.gen_range(0..nv), *[-2i64, -1, 1, 1, 1, 2, 3].get(rng.gen_range(0..7)).unwrap()))
                .collect();
            let cmp = [Cmp::Le, Cmp::Le, Cmp::Le, Cmp::Ge, Cmp::Eq][rng.gen_range(0..5)];
            let rhs = rng.gen_range(-1..=3);
            let _ = m.add_constraint(terms, cmp, rhs);
        }
        m
    }

    fn exhaustive_best(m: &IlpModel, fix: &Fixings) -> Option<i64> {
        let n = m.num_vars();
        let mut best: Option<i64> = None;
        for mask in 0u32..(1 << n) {
            let a = Assignment::new((0..n).map(|i| mask >> i & 1 == 1).collect());
            if fix.iter().any(|(v, b)| a.get(v) != b) {
                continue;
            }
            let r = m.check_assignment(&a).unwrap();
            if r.feasible {
                let z = r.objective;
                best = Some(match (best, m.sense()) {
                    (None, _) => z,
                    (Some(b), Sense::Maximize) => b.max(z),
                    (Some(b), Sense::Minimize) => b.min(z),
                });
            }
        }
        best
    }

    #[test]
    fn bound_validity_on_random_models() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..1000 {
            let nv = rng.gen_range(1..=9);
            let nc = rng.gen_range(0..=10);
            let sense = if trial % 4 == 3 { Sense::Minimize } else { Sense::Maximize };
            let m = random_model(&mut rng, nv, nc, sense);
            let out = solve_relaxation(&m, &Fixings::new()).unwrap();
            assert_ne!(out.status, LpStatus::NumericalFailure);
            match exhaustive_best(&m, &Fixings::new()) {
                Some(best) => {
                    assert_eq!(out.status, LpStatus::Optimal, "trial {trial}");
                    match sense {
                        Sense::Maximize => {
                            assert!(out.objective >= best as f64 - 1e-6, "trial {trial}")
                        }
                        Sense::Minimize => {
                            assert!(out.objective <= best as f64 + 1e-6, "trial {trial}")
                        }
                    }
                }
                None => {}
            }
            if out.status == LpStatus::Optimal {
                assert!(out.max_violation <= 1e-7);
                assert!(out.primal.iter().all(|&v| (-1e-9..=1.0 + 1e-9).contains(&v)));
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn feasibility_and_monotonicity(seed in any::<u64>(), var in 0usize..8, value in any::<bool>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let nv = rng.gen_range(2..=8);
            let nc = rng.gen_range(1..=12);
            let m = random_model(&mut rng, nv, nc, Sense::Maximize);
            let base = solve_relaxation(&m, &Fixings::new()).unwrap();
            let v = var % nv;
            let fix: Fixings = [(v, value)].into_iter().collect();
            let out = solve_relaxation(&m, &fix).unwrap();
            prop_assert_ne!(out.status, LpStatus::NumericalFailure);
            if out.status == LpStatus::Optimal {
                prop_assert_eq!(out.primal[v], value as u8 as f64);
                prop_assert!(out.max_violation <= 1e-7);
                prop_assert_eq!(base.status, LpStatus::Optimal);
                prop_assert!(out.objective <= base.objective + 1e-6);
            }
        }
    }
}
