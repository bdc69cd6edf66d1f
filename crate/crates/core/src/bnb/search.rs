use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;

use super::cuts::ConflictGraph;
use super::dfs::{Dfs, End, Limits, NodeLp};
use super::propagate::{Problem, Prop};
use super::{Branching, IpOutcome, IpStatus, NodeSearch, SolveConfig};
use crate::ilp::{Assignment, IlpModel, Sense};
use crate::lprelax::simplex::{SimplexStatus, Tableau};
use crate::lprelax::{max_cost, model_rows, solve_lazy, Row};

const INT_TOL: f64 = 1e-6;
/// Open-node tableau copies are kept while their total stays under this.
const SNAPSHOT_BUDGET: usize = 1 << 30;
const ROOT_CUT_ROUNDS: usize = 60;
const CUTS_PER_ROUND: usize = 200;

struct Node {
    id: u64,
    depth: u32,
    bound: i64,
    ones: Vec<u64>,
    zeros: Vec<u64>,
    snap: Option<Arc<Tableau>>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    /// Max-heap order: best bound, then deepest, then oldest.
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound.cmp(&other.bound).then(self.depth.cmp(&other.depth)).then(other.id.cmp(&self.id))
    }
}

struct Child {
    depth: u32,
    bound: i64,
    ones: Vec<u64>,
    zeros: Vec<u64>,
    snap: Option<Arc<Tableau>>,
}

#[derive(Default)]
struct Processed {
    children: Vec<Child>,
    found: Option<(i64, Vec<bool>)>,
    iterations: usize,
}

struct Engine {
    p: Problem,
    pool: Vec<Row>,
    cover: Vec<Vec<u32>>,
    root: Tableau,
    branching: Branching,
    words: usize,
    iter_cap: usize,
}

fn bits_of(val: &[i8], words: usize) -> (Vec<u64>, Vec<u64>) {
    let mut ones = vec![0u64; words];
    let mut zeros = vec![0u64; words];
    for (j, &v) in val.iter().enumerate() {
        match v {
            1 => ones[j / 64] |= 1 << (j % 64),
            0 => zeros[j / 64] |= 1 << (j % 64),
            _ => {}
        }
    }
    (ones, zeros)
}

pub(super) fn is_int(x: f64) -> bool {
    x.min(1.0 - x).abs() <= INT_TOL
}

/// Sum over cover cliques of the best still-possible cost; variables with
/// non-positive cost only count when fixed to 1.
pub(super) fn cover_bound(p: &Problem, cover: &[Vec<u32>], prop: &Prop) -> i64 {
    let mut b = 0;
    for k in cover {
        let mut fixed = None;
        let mut best = 0;
        for &j in k {
            match prop.val[j as usize] {
                1 => fixed = Some(p.cost[j as usize]),
                -1 => best = best.max(p.cost[j as usize]),
                _ => {}
            }
        }
        b += fixed.unwrap_or(best);
    }
    for j in 0..p.n {
        if p.cost[j] <= 0 && prop.val[j] == 1 {
            b += p.cost[j];
        }
    }
    b
}

/// Fixes variables that the objective threshold forces to 1; `None` when the
/// threshold is out of reach.
pub(super) fn cover_tighten(p: &Problem, cover: &[Vec<u32>], prop: &mut Prop, threshold: i64) -> Option<i64> {
    loop {
        let b = cover_bound(p, cover, prop);
        if b < threshold {
            return None;
        }
        let mut forced = Vec::new();
        for k in cover {
            if k.iter().any(|&j| prop.val[j as usize] == 1) {
                continue;
            }
            let (mut best, mut second, mut arg) = (0, 0, None);
            for &j in k {
                if prop.val[j as usize] == -1 {
                    let c = p.cost[j as usize];
                    if c > best {
                        second = best;
                        best = c;
                        arg = Some(j as usize);
                    } else if c > second {
                        second = c;
                    }
                }
            }
            if let Some(j) = arg {
                if b - (best - second) < threshold {
                    forced.push(j);
                }
            }
        }
        if forced.is_empty() {
            return Some(b);
        }
        for j in forced {
            prop.set(j, true);
        }
        if !prop.propagate() {
            return None;
        }
    }
}

pub(super) enum LpVerdict {
    /// Infeasible, or provably below the threshold.
    Pruned,
    /// Integer bound from a safe LP optimum; `tab` holds the optimal point.
    Bound(i64),
    /// The LP stopped early and proves nothing.
    Unknown,
}

/// Applies the fixings in `val` to `tab` and solves it; returns the verdict
/// and the simplex iterations spent.
pub(super) fn node_lp(
    tab: &mut Tableau,
    pool: &[Row],
    val: &[i8],
    threshold: Option<i64>,
    iter_cap: usize,
) -> (LpVerdict, usize) {
    for (j, &v) in val.iter().enumerate() {
        if v >= 0 && !tab.is_fixed(j) {
            tab.fix(j, v as f64);
        }
    }
    let cut = threshold.map_or(f64::NEG_INFINITY, |t| t as f64 - INT_TOL);
    let before = tab.iterations;
    let mut status = solve_lazy(tab, pool, cut, iter_cap);
    if status == SimplexStatus::Cutoff {
        if tab.safe_bound(pool) < cut {
            return (LpVerdict::Pruned, tab.iterations - before);
        }
        status = solve_lazy(tab, pool, f64::NEG_INFINITY, iter_cap);
    }
    if status == SimplexStatus::Infeasible {
        // confirm on a freshly factored tableau before discarding the subtree
        if tab.refactor(pool) {
            status = solve_lazy(tab, pool, f64::NEG_INFINITY, iter_cap);
        }
        if status == SimplexStatus::Infeasible {
            return (LpVerdict::Pruned, tab.iterations - before);
        }
    }
    let iters = tab.iterations - before;
    if status == SimplexStatus::Optimal {
        (LpVerdict::Bound((tab.safe_bound(pool) + INT_TOL).floor() as i64), iters)
    } else {
        (LpVerdict::Unknown, iters)
    }
}

impl Engine {
    /// Fix-and-propagate rounding guided by `x`; leaves `prop` unchanged.
    fn dive(&self, prop: &mut Prop, x: &[f64]) -> Option<Vec<bool>> {
        let mark = prop.mark();
        let mut order: Vec<usize> = (0..self.p.n).filter(|&j| prop.is_free(j)).collect();
        order.sort_by(|&a, &b| x[b].total_cmp(&x[a]).then(self.p.cost[b].cmp(&self.p.cost[a])).then(a.cmp(&b)));
        for j in order {
            if !prop.is_free(j) {
                continue;
            }
            let pref = x[j] > 0.5 || self.p.cost[j] > 0;
            let m = prop.mark();
            if prop.set(j, pref) && prop.propagate() {
                continue;
            }
            prop.undo(m);
            if !(prop.set(j, !pref) && prop.propagate()) {
                prop.undo(mark);
                return None;
            }
        }
        let out = prop.complete().then(|| prop.assignment());
        prop.undo(mark);
        out
    }

    fn feasible(&self, x: &[bool]) -> bool {
        self.p.rows.iter().all(|r| {
            let act: i64 = r.terms.iter().filter(|t| x[t.0 as usize]).map(|t| t.1).sum();
            act >= r.lo && act <= r.hi
        }) && self.p.pinned.iter().zip(x).all(|(&p, &v)| p < 0 || (p == 1) == v)
    }

    fn process(&self, node: &Node, threshold: Option<i64>, keep_snapshot: bool, heuristic: bool) -> Processed {
        let mut out = Processed::default();
        let p = &self.p;
        let mut prop = Prop::new(p);
        for j in 0..p.n {
            let (w, b) = (j / 64, 1u64 << (j % 64));
            let v = if node.ones[w] & b != 0 {
                1
            } else if node.zeros[w] & b != 0 {
                0
            } else {
                p.pinned[j]
            };
            if v >= 0 && !prop.set(j, v == 1) {
                return out;
            }
        }
        if !prop.propagate() {
            return out;
        }
        let mut bound = node.bound;
        match threshold {
            Some(t) => match cover_tighten(p, &self.cover, &mut prop, t) {
                Some(b) => bound = bound.min(b),
                None => return out,
            },
            None => bound = bound.min(cover_bound(p, &self.cover, &prop)),
        }

        let mut tab = match &node.snap {
            Some(s) => (**s).clone(),
            None => self.root.clone(),
        };
        let (verdict, iters) = node_lp(&mut tab, &self.pool, &prop.val, threshold, self.iter_cap);
        out.iterations = iters;
        let status = match verdict {
            LpVerdict::Pruned => return out,
            LpVerdict::Bound(b) => {
                bound = bound.min(b);
                if threshold.is_some_and(|t| bound < t) {
                    return out;
                }
                SimplexStatus::Optimal
            }
            LpVerdict::Unknown => SimplexStatus::IterationLimit,
        };
        let x: Vec<f64> = if status == SimplexStatus::Optimal {
            tab.values().to_vec()
        } else {
            // no usable LP point: branch blindly
            (0..p.n).map(|j| if prop.val[j] >= 0 { prop.val[j] as f64 } else { 0.5 }).collect()
        };

        let fractional: Vec<usize> = (0..p.n).filter(|&j| prop.is_free(j) && !is_int(x[j])).collect();
        if fractional.is_empty() && status == SimplexStatus::Optimal {
            let cand: Vec<bool> =
                (0..p.n).map(|j| if prop.val[j] >= 0 { prop.val[j] == 1 } else { x[j] > 0.5 }).collect();
            if self.feasible(&cand) {
                let z = p.objective(&cand);
                let done = z >= bound;
                out.found = Some((z, cand));
                if done {
                    return out;
                }
            }
        }
        if heuristic {
            if let Some(a) = self.dive(&mut prop, &x) {
                let z = p.objective(&a);
                if out.found.as_ref().map_or(true, |f| z > f.0) {
                    out.found = Some((z, a));
                }
            }
        }
        let branch_var = match self.branching {
            Branching::MostFractional => fractional
                .iter()
                .copied()
                .min_by(|&a, &b| (x[a] - 0.5).abs().total_cmp(&(x[b] - 0.5).abs()).then(a.cmp(&b))),
            Branching::FirstFractional => fractional.first().copied(),
        }
        .or_else(|| (0..p.n).find(|&j| prop.is_free(j)));
        let Some(j) = branch_var else { return out };

        let snap = (keep_snapshot && status == SimplexStatus::Optimal).then(|| Arc::new(tab));
        for v in [true, false] {
            let m = prop.mark();
            if prop.set(j, v) && prop.propagate() {
                let (ones, zeros) = bits_of(&prop.val, self.words);
                out.children.push(Child { depth: node.depth + 1, bound, ones, zeros, snap: snap.clone() });
            }
            prop.undo(m);
        }
        out
    }
}

/// Core loop shared by optimization and target queries. `target` is in the
/// internal maximization sense.
pub(super) fn run(model: &IlpModel, cfg: &SolveConfig, target: Option<i64>) -> IpOutcome {
    let start = Instant::now();
    let sign = if model.sense() == Sense::Maximize { 1 } else { -1 };
    let p = Problem::new(model);
    let n = p.n;
    let words = n.div_ceil(64).max(1);
    let mut pool = model_rows(model);
    let graph = ConflictGraph::build(&p);
    let positive: Vec<usize> = (0..n).filter(|&j| p.cost[j] > 0).collect();
    let cover = graph.clique_partition(&positive);

    let mut incumbent: Option<(i64, Vec<bool>)> =
        cfg.warm_start.as_ref().map(|a| (p.objective(a.values()), a.values().to_vec()));
    let threshold = |inc: &Option<(i64, Vec<bool>)>| -> Option<i64> {
        let from_inc = inc.as_ref().map(|(v, _)| v + 1);
        match (from_inc, target) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        }
    };
    let reached = |inc: &Option<(i64, Vec<bool>)>| matches!((inc, target), (Some((v, _)), Some(t)) if *v >= t);
    let finish = |status: IpStatus,
                  inc: Option<(i64, Vec<bool>)>,
                  dual: Option<i64>,
                  nodes: u64,
                  iters: u64,
                  cuts: usize,
                  root_bound: f64| {
        let objective = inc.as_ref().map(|(v, _)| sign * v);
        let dual_internal = match (status, &inc) {
            (IpStatus::Optimal, Some((v, _))) => *v as f64,
            _ => {
                let d = dual.map(|d| d as f64).unwrap_or(f64::NEG_INFINITY);
                inc.as_ref().map_or(d, |(v, _)| d.max(*v as f64))
            }
        };
        IpOutcome {
            status,
            restricted: model.is_restricted(),
            objective,
            assignment: inc.map(|(_, a)| Assignment::new(a)),
            dual_bound: sign as f64 * dual_internal,
            nodes,
            lp_iterations: iters,
            cuts,
            root_bound: sign as f64 * root_bound,
            elapsed: start.elapsed(),
        }
    };

    // Root: propagate the model pins, then a clique-cut loop on the LP.
    let mut root_prop = Prop::new(&p);
    let mut ok = (0..n).all(|j| p.pinned[j] < 0 || root_prop.set(j, p.pinned[j] == 1)) && root_prop.propagate();
    if ok {
        if let Some(t) = threshold(&incumbent) {
            ok = reached(&incumbent) || cover_tighten(&p, &cover, &mut root_prop, t).is_some();
        }
    }
    if !ok {
        let status = if incumbent.is_some() { IpStatus::Optimal } else { IpStatus::Infeasible };
        return finish(status, incumbent, None, 0, 0, 0, f64::NEG_INFINITY);
    }
    if reached(&incumbent) {
        return finish(IpStatus::Feasible, incumbent, None, 0, 0, 0, f64::NEG_INFINITY);
    }
    let cost = max_cost(model);
    let mut lo = vec![0.0; n];
    let mut hi = vec![1.0; n];
    for j in 0..n {
        if root_prop.val[j] >= 0 {
            lo[j] = root_prop.val[j] as f64;
            hi[j] = lo[j];
        }
    }
    let iter_cap = 50 * (n + pool.len()) + 10_000;
    let deadline = cfg.time_limit.map(|l| start + l);
    let mut root = Tableau::new(cost, lo, hi);
    root.deadline = deadline;
    let mut iterations = 0u64;
    let mut seen = HashSet::new();
    let mut cuts = 0usize;
    let mut root_bound = f64::INFINITY;
    let mut stall = 0;
    for round in 0..=ROOT_CUT_ROUNDS {
        let before = root.iterations;
        let st = solve_lazy(&mut root, &pool, f64::NEG_INFINITY, iter_cap);
        iterations += (root.iterations - before) as u64;
        if st != SimplexStatus::Optimal {
            break;
        }
        let b = root.safe_bound(&pool);
        if b > root_bound - 1e-3 {
            stall += 1;
        } else {
            stall = 0;
        }
        root_bound = root_bound.min(b);
        if !cfg.cuts || round == ROOT_CUT_ROUNDS || stall >= 3 || graph.edge_count() == 0 {
            break;
        }
        let found = graph.separate(root.values(), &mut seen, CUTS_PER_ROUND);
        if found.is_empty() {
            break;
        }
        cuts += found.len();
        for k in found {
            pool.push(Row { coef: vec![1.0; k.len()], idx: k, lo: f64::NEG_INFINITY, hi: 1.0 });
        }
    }
    root.deadline = None;
    let cover_root = cover_bound(&p, &cover, &root_prop);
    if deadline.is_some_and(|d| Instant::now() >= d) {
        let lp = if root_bound.is_finite() { (root_bound + INT_TOL).floor() as i64 } else { i64::MAX };
        let rb = if root_bound.is_finite() { root_bound } else { f64::NEG_INFINITY };
        return finish(IpStatus::TimeLimit, incumbent, Some(lp.min(cover_root)), 0, iterations, cuts, rb);
    }
    if !root_bound.is_finite() {
        root_bound = f64::NEG_INFINITY;
    }

    let lp_idle = !cover.is_empty() && root_bound.is_finite() && (root_bound + INT_TOL).floor() as i64 >= cover_root;
    let mode = match cfg.node_search {
        NodeSearch::Auto if lp_idle => NodeSearch::Propagation,
        NodeSearch::Auto if !cfg.symmetries.is_empty() => NodeSearch::LpDepthFirst,
        NodeSearch::Auto => NodeSearch::Lp,
        m => m,
    };
    if mode != NodeSearch::Lp {
        let syms: Vec<Vec<u32>> = cfg.symmetries.iter().map(|g| g.iter().map(|&x| x as u32).collect()).collect();
        let lp = (mode == NodeSearch::LpDepthFirst).then_some(NodeLp { pool: &pool, root: &root, iter_cap });
        let mut dfs = Dfs { p: &p, cover: &cover, syms: &syms, target, lp, nodes: 0, iterations: 0 };
        let lim = Limits { deadline: cfg.time_limit.map(|l| start + l), node_limit: cfg.node_limit };
        let end = dfs.run(&mut root_prop, &mut incumbent, &lim);
        let (status, dual) = match end {
            End::Reached => (IpStatus::Feasible, None),
            End::Exhausted if incumbent.is_none() => (IpStatus::Infeasible, None),
            End::Exhausted if target.is_some() && reached(&incumbent) => (IpStatus::Feasible, None),
            End::Exhausted => (IpStatus::Optimal, None),
            End::Stopped(s) => {
                let lp = if root_bound.is_finite() { (root_bound + INT_TOL).floor() as i64 } else { i64::MAX };
                (s, Some(lp.min(cover_root)))
            }
        };
        return finish(status, incumbent, dual, dfs.nodes, iterations + dfs.iterations, cuts, root_bound);
    }

    let root_val = std::mem::take(&mut root_prop.val);
    drop(root_prop);
    let engine = Engine { p, pool, cover, root, branching: cfg.branching, words, iter_cap };
    let threads = cfg.threads.max(1);
    let tp = (threads > 1).then(|| rayon::ThreadPoolBuilder::new().num_threads(threads).build().ok()).flatten();

    let (ones, zeros) = bits_of(&root_val, words);
    let mut heap = BinaryHeap::new();
    heap.push(Node { id: 0, depth: 0, bound: i64::MAX, ones, zeros, snap: None });
    let mut next_id = 1u64;
    let mut nodes = 0u64;
    let snap_bytes = engine.root.bytes().max(1) * 2;

    loop {
        let t = threshold(&incumbent);
        let mut batch = Vec::with_capacity(threads);
        while batch.len() < threads {
            match heap.pop() {
                Some(nd) if t.is_some_and(|t| nd.bound < t) => continue,
                Some(nd) => batch.push(nd),
                None => break,
            }
        }
        if batch.is_empty() {
            let status = if incumbent.is_some() {
                if target.is_some() && reached(&incumbent) {
                    IpStatus::Feasible
                } else {
                    IpStatus::Optimal
                }
            } else {
                IpStatus::Infeasible
            };
            return finish(status, incumbent, None, nodes, iterations, cuts, root_bound);
        }
        let limit = if cfg.time_limit.is_some_and(|l| start.elapsed() >= l) {
            Some(IpStatus::TimeLimit)
        } else if cfg.node_limit.is_some_and(|l| nodes >= l) {
            Some(IpStatus::NodeLimit)
        } else {
            None
        };
        if let Some(status) = limit {
            let open = batch.iter().chain(heap.iter()).map(|nd| nd.bound).max();
            let open = open.map(|b| if b == i64::MAX { root_bound.floor() as i64 } else { b });
            return finish(status, incumbent, open, nodes, iterations, cuts, root_bound);
        }
        let keep = (heap.len() + 2 * batch.len()) * snap_bytes < SNAPSHOT_BUDGET;
        let heuristic_at = |nd: &Node| nd.depth <= 6 || nd.id % 16 == 0;
        let results: Vec<Processed> = match &tp {
            Some(pool) => {
                pool.install(|| batch.par_iter().map(|nd| engine.process(nd, t, keep, heuristic_at(nd))).collect())
            }
            None => batch.iter().map(|nd| engine.process(nd, t, keep, heuristic_at(nd))).collect(),
        };
        for res in results {
            nodes += 1;
            iterations += res.iterations as u64;
            if let Some((z, a)) = res.found {
                if incumbent.as_ref().map_or(true, |(v, _)| z > *v) {
                    incumbent = Some((z, a));
                }
            }
            for c in res.children {
                heap.push(Node {
                    id: next_id,
                    depth: c.depth,
                    bound: c.bound,
                    ones: c.ones,
                    zeros: c.zeros,
                    snap: c.snap,
                });
                next_id += 1;
            }
        }
        if target.is_some() && reached(&incumbent) {
            return finish(IpStatus::Feasible, incumbent, None, nodes, iterations, cuts, root_bound);
        }
    }
}
