//! Conflict graph (pairs of variables that cannot both be 1) and clique
//! inequalities derived from it.

use std::collections::HashSet;

use super::propagate::{Problem, NO_HI};

/// Rows longer than this are not expanded into pairwise conflicts.
const MAX_PAIR_ROW: usize = 400;

#[derive(Clone, Debug)]
pub(crate) struct ConflictGraph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
    degree: Vec<usize>,
}

impl ConflictGraph {
    /// Two variables conflict when some row with `hi` cannot hold both at 1
    /// even with every other variable at its most favourable value.
    pub(crate) fn build(p: &Problem) -> Self {
        let n = p.n;
        let words = n.div_ceil(64);
        let mut g = ConflictGraph { n, words, adj: vec![0; n * words], degree: vec![0; n] };
        for row in &p.rows {
            if row.hi == NO_HI || row.terms.len() > MAX_PAIR_ROW {
                continue;
            }
            let minact: i64 = row.terms.iter().map(|&(_, a)| a.min(0)).sum();
            let slack = row.hi - minact;
            // only positive coefficients can conflict at value 1
            let pos: Vec<(u32, i64)> = row.terms.iter().copied().filter(|t| t.1 > 0).collect();
            for (i, &(u, a)) in pos.iter().enumerate() {
                if a > slack {
                    continue; // u alone is impossible; propagation handles it
                }
                for &(v, b) in &pos[i + 1..] {
                    if b <= slack && a + b > slack {
                        g.add_edge(u as usize, v as usize);
                    }
                }
            }
        }
        for v in 0..n {
            g.degree[v] = g.row(v).iter().map(|w| w.count_ones() as usize).sum();
        }
        g
    }

    fn add_edge(&mut self, u: usize, v: usize) {
        self.adj[u * self.words + v / 64] |= 1 << (v % 64);
        self.adj[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub(crate) fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    pub(crate) fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub(crate) fn edge_count(&self) -> usize {
        self.degree.iter().sum::<usize>() / 2
    }

    /// Greedy partition of `vars` into cliques, highest degree first.
    pub(crate) fn clique_partition(&self, vars: &[usize]) -> Vec<Vec<u32>> {
        let mut order = vars.to_vec();
        order.sort_by_key(|&v| (std::cmp::Reverse(self.degree[v]), v));
        let mut taken = vec![false; self.n];
        let mut out = Vec::new();
        for &v in &order {
            if taken[v] {
                continue;
            }
            taken[v] = true;
            let mut clique = vec![v as u32];
            for &u in &order {
                if !taken[u] && clique.iter().all(|&w| self.adjacent(u, w as usize)) {
                    taken[u] = true;
                    clique.push(u as u32);
                }
            }
            clique.sort_unstable();
            out.push(clique);
        }
        out
    }

    /// Cliques whose `x`-weight exceeds 1, each extended to a maximal clique.
    /// Variables fixed to 0 (`val == 0`) are skipped during extension.
    pub(crate) fn separate(&self, x: &[f64], seen: &mut HashSet<Vec<u32>>, max_cuts: usize) -> Vec<Vec<u32>> {
        let mut support: Vec<usize> = (0..self.n).filter(|&v| x[v] > 1e-6 && self.degree[v] > 0).collect();
        support.sort_by(|&a, &b| x[b].total_cmp(&x[a]).then(a.cmp(&b)));
        let mut out = Vec::new();
        let mut cand = vec![0u64; self.words];
        for (si, &seed) in support.iter().enumerate() {
            if out.len() >= max_cuts {
                break;
            }
            cand.copy_from_slice(self.row(seed));
            let mut clique = vec![seed];
            let mut weight = x[seed];
            for &u in support.iter().skip(si + 1).chain(support.iter().take(si)) {
                if cand[u / 64] >> (u % 64) & 1 == 1 {
                    clique.push(u);
                    weight += x[u];
                    for (c, &a) in cand.iter_mut().zip(self.row(u)) {
                        *c &= a;
                    }
                }
            }
            if weight <= 1.0 + 1e-4 {
                continue;
            }
            // extend with the remaining common neighbours in index order
            for (w, &word) in cand.clone().iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    let u = w * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    if cand[u / 64] >> (u % 64) & 1 == 1 {
                        clique.push(u);
                        for (c, &a) in cand.iter_mut().zip(self.row(u)) {
                            *c &= a;
                        }
                    }
                }
            }
            let mut key: Vec<u32> = clique.iter().map(|&v| v as u32).collect();
            key.sort_unstable();
            if seen.insert(key.clone()) {
                out.push(key);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ilp::{Cmp, IlpModel, Sense};

    #[test]
    fn triangle_becomes_a_clique_cut() {
        let mut m = IlpModel::new("t", Sense::Maximize);
        for i in 0..4 {
            m.add_binary_var(format!("x{i}")).unwrap();
        }
        for (a, b) in [(0, 1), (1, 2), (0, 2)] {
            m.add_constraint([(a, 1), (b, 1)], Cmp::Le, 1).unwrap();
        }
        m.add_constraint([(0, 1), (1, 1), (3, 1)], Cmp::Le, 2).unwrap();
        let g = ConflictGraph::build(&Problem::new(&m));
        assert_eq!(g.edge_count(), 3);
        let mut seen = HashSet::new();
        let cuts = g.separate(&[0.5, 0.5, 0.5, 1.0], &mut seen, 10);
        assert_eq!(cuts, vec![vec![0, 1, 2]]);
        assert!(g.separate(&[0.5, 0.5, 0.5, 1.0], &mut seen, 10).is_empty());
        let parts = g.clique_partition(&[0, 1, 2, 3]);
        assert_eq!(parts, vec![vec![0, 1, 2], vec![3]]);
    }
}
