//! Depth-first search with orbital fixing.
//!
//! Without an LP every node costs only propagation, which suits
//! covering-style feasibility questions whose relaxation proves nothing
//! beyond the clique-cover bound; branching is then first-fail over the
//! cover cliques. With an LP each node warm-starts from its parent's
//! tableau and branches on the most fractional variable. Either way, once a
//! branch `x_j = v` is exhausted, its sibling also fixes the orbit of `j`
//! under the known symmetries that stabilize the current fixings.

use std::time::Instant;

use super::propagate::{Problem, Prop};
use super::search::{cover_tighten, is_int, node_lp, LpVerdict};
use super::IpStatus;
use crate::lprelax::simplex::Tableau;
use crate::lprelax::Row;

pub(super) struct NodeLp<'a> {
    pub pool: &'a [Row],
    pub root: &'a Tableau,
    pub iter_cap: usize,
}

pub(super) struct Limits {
    pub deadline: Option<Instant>,
    pub node_limit: Option<u64>,
}

pub(super) enum End {
    /// Whole tree explored.
    Exhausted,
    /// The target was met.
    Reached,
    Stopped(IpStatus),
}

struct Frame {
    mark: usize,
    var: usize,
    first: bool,
    tried_second: bool,
}

pub(super) struct Dfs<'a> {
    pub p: &'a Problem,
    pub cover: &'a [Vec<u32>],
    /// Variable permutations preserving the model.
    pub syms: &'a [Vec<u32>],
    pub target: Option<i64>,
    pub lp: Option<NodeLp<'a>>,
    pub nodes: u64,
    pub iterations: u64,
}

impl Dfs<'_> {
    fn threshold(&self, inc: &Option<(i64, Vec<bool>)>) -> Option<i64> {
        let from_inc = inc.as_ref().map(|(v, _)| v + 1);
        match (from_inc, self.target) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        }
    }

    /// Next branching decision: a free variable of the open cover clique with
    /// the fewest free members, else the lowest free index.
    fn pick(&self, prop: &Prop) -> Option<(usize, bool)> {
        let mut best: Option<(usize, usize)> = None;
        for (ci, k) in self.cover.iter().enumerate() {
            let mut free = 0;
            let mut one = false;
            for &j in k {
                match prop.val[j as usize] {
                    1 => one = true,
                    -1 => free += 1,
                    _ => {}
                }
            }
            if !one && free > 0 && best.map_or(true, |b| free < b.0) {
                best = Some((free, ci));
                if free == 1 {
                    break;
                }
            }
        }
        if let Some((_, ci)) = best {
            let j = self.cover[ci]
                .iter()
                .map(|&j| j as usize)
                .filter(|&j| prop.is_free(j))
                .max_by(|&a, &b| self.p.cost[a].cmp(&self.p.cost[b]).then(b.cmp(&a)))?;
            return Some((j, true));
        }
        let j = (0..self.p.n).find(|&j| prop.is_free(j))?;
        Some((j, self.p.cost[j] > 0))
    }

    /// Bounds the node by its LP when one is configured and chooses the
    /// branching variable; `None` when the node is finished.
    fn decide(
        &mut self,
        prop: &mut Prop,
        inc: &mut Option<(i64, Vec<bool>)>,
        tabs: &mut Vec<Tableau>,
        depth: usize,
    ) -> Option<(usize, bool)> {
        let Some(lp) = &self.lp else {
            return self.pick(prop);
        };
        tabs.truncate(depth);
        let mut tab = tabs.last().unwrap_or(lp.root).clone();
        let t = self.threshold(inc);
        let (verdict, iters) = node_lp(&mut tab, lp.pool, &prop.val, t, lp.iter_cap);
        self.iterations += iters as u64;
        let bound = match verdict {
            LpVerdict::Pruned => return None,
            LpVerdict::Bound(b) if t.is_some_and(|t| b < t) => return None,
            LpVerdict::Bound(b) => Some(b),
            LpVerdict::Unknown => None,
        };
        let x = tab.values();
        let mut choice = None;
        if bound.is_some() {
            let frac = (0..self.p.n)
                .filter(|&j| prop.is_free(j) && !is_int(x[j]))
                .min_by(|&a, &b| (x[a] - 0.5).abs().total_cmp(&(x[b] - 0.5).abs()).then(a.cmp(&b)));
            match frac {
                Some(j) => choice = Some((j, x[j] >= 0.5)),
                None => {
                    // integral relaxation: try it as a solution
                    let mark = prop.mark();
                    let ok = (0..self.p.n).all(|j| !prop.is_free(j) || prop.set(j, x[j] > 0.5)) && prop.propagate();
                    if ok && prop.complete() {
                        let cand = prop.assignment();
                        let z = self.p.objective(&cand);
                        if inc.as_ref().map_or(true, |(v, _)| z > *v) {
                            *inc = Some((z, cand));
                        }
                    }
                    prop.undo(mark);
                    let t = self.threshold(inc);
                    if bound.zip(t).is_some_and(|(b, t)| b < t) {
                        return None;
                    }
                }
            }
        }
        tabs.push(tab);
        choice.or_else(|| self.pick(prop))
    }

    /// Orbit of `j` under the symmetries that fix every current value.
    fn orbit(&self, prop: &Prop, j: usize) -> Vec<usize> {
        let stab: Vec<&Vec<u32>> = self
            .syms
            .iter()
            .filter(|g| g.iter().enumerate().all(|(i, &gi)| prop.val[i] == prop.val[gi as usize]))
            .collect();
        if stab.is_empty() {
            return Vec::new();
        }
        let mut seen = vec![false; self.p.n];
        seen[j] = true;
        let mut stack = vec![j];
        let mut out = Vec::new();
        while let Some(u) = stack.pop() {
            for g in &stab {
                let w = g[u] as usize;
                if !seen[w] {
                    seen[w] = true;
                    out.push(w);
                    stack.push(w);
                }
            }
        }
        out
    }

    /// Explores the subtree below the current state of `prop`, which must be
    /// propagated and consistent. `prop` is restored before returning.
    pub(super) fn run(&mut self, prop: &mut Prop, inc: &mut Option<(i64, Vec<bool>)>, lim: &Limits) -> End {
        let base = prop.mark();
        let mut stack: Vec<Frame> = Vec::new();
        // tabs[d] is the solved tableau of the current node at depth d
        let mut tabs: Vec<Tableau> = Vec::new();
        // `enter` is true when `prop` holds a fresh, consistent child node
        let mut enter = true;
        loop {
            if enter {
                self.nodes += 1;
                if self.nodes % 256 == 0 {
                    if lim.deadline.is_some_and(|d| Instant::now() >= d) {
                        prop.undo(base);
                        return End::Stopped(IpStatus::TimeLimit);
                    }
                }
                if lim.node_limit.is_some_and(|l| self.nodes >= l) {
                    prop.undo(base);
                    return End::Stopped(IpStatus::NodeLimit);
                }
                let alive = match self.threshold(inc) {
                    Some(t) => cover_tighten(self.p, self.cover, prop, t).is_some(),
                    None => true,
                };
                if alive {
                    if prop.complete() {
                        let x = prop.assignment();
                        let z = self.p.objective(&x);
                        if inc.as_ref().map_or(true, |(v, _)| z > *v) {
                            *inc = Some((z, x));
                        }
                        if self.target.is_some_and(|t| z >= t) {
                            prop.undo(base);
                            return End::Reached;
                        }
                    } else if let Some((var, first)) = self.decide(prop, inc, &mut tabs, stack.len()) {
                        let mark = prop.mark();
                        stack.push(Frame { mark, var, first, tried_second: false });
                        if prop.set(var, first) && prop.propagate() {
                            continue;
                        }
                        // first value failed at once; fall through to backtrack
                    }
                }
            }
            // backtrack to the deepest frame with an untried value
            enter = false;
            let Some(f) = stack.last_mut() else {
                prop.undo(base);
                return End::Exhausted;
            };
            prop.undo(f.mark);
            if f.tried_second {
                stack.pop();
                continue;
            }
            f.tried_second = true;
            let (var, v) = (f.var, !f.first);
            let orbit = if self.syms.is_empty() { Vec::new() } else { self.orbit(prop, var) };
            let ok = prop.set(var, v) && orbit.iter().all(|&o| prop.set(o, v)) && prop.propagate();
            if ok {
                enter = true;
            }
        }
    }
}
