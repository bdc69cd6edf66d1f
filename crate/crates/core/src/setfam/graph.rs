use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{check_ground, k_subsets, Family};
use crate::error::{Error, Result};

/// Simple undirected graph on vertices `0..vertices` with optional partite
/// class labels. Vertices print 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    vertices: usize,
    edges: Vec<(usize, usize)>,
    parts: Option<Vec<usize>>,
}

impl LabeledGraph {
    /// Edges are normalized to `(min, max)` and sorted.
    pub fn new(vertices: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {}", u + 1)));
            }
            if u >= vertices || v >= vertices {
                return Err(Error::InvalidGraph(format!("edge {}-{} out of range", u + 1, v + 1)));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::InvalidGraph(format!("duplicate edge {}-{}", e.0 + 1, e.1 + 1)));
            }
            out.push(e);
        }
        out.sort_unstable();
        Ok(LabeledGraph { vertices, edges: out, parts: None })
    }

    /// Attaches partite labels; every edge must join different classes.
    pub fn with_parts(mut self, parts: Vec<usize>) -> Result<Self> {
        if parts.len() != self.vertices {
            return Err(Error::InvalidGraph("one partite label per vertex expected".into()));
        }
        if let Some(&(u, v)) = self.edges.iter().find(|&&(u, v)| parts[u] == parts[v]) {
            return Err(Error::InvalidGraph(format!("edge {}-{} inside a partite class", u + 1, v + 1)));
        }
        self.parts = Some(parts);
        Ok(self)
    }

    pub fn empty(n: usize) -> Self {
        LabeledGraph { vertices: n, edges: Vec::new(), parts: None }
    }

    pub fn path(n: usize) -> Self {
        LabeledGraph::new(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGraph("a cycle needs at least 3 vertices".into()));
        }
        LabeledGraph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        LabeledGraph::new(n, edges).unwrap()
    }

    /// `K_{n_1,...,n_r}` with classes labelled `0..r` in order.
    pub fn complete_multipartite(sizes: &[usize]) -> Self {
        let parts: Vec<usize> = sizes.iter().enumerate().flat_map(|(i, &s)| std::iter::repeat(i).take(s)).collect();
        let n = parts.len();
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if parts[u] != parts[v] {
                    edges.push((u, v));
                }
            }
        }
        LabeledGraph::new(n, edges).unwrap().with_parts(parts).unwrap()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn parts(&self) -> Option<&[usize]> {
        self.parts.as_deref()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    /// Neighbourhood bitmasks; valid for graphs on at most 64 vertices.
    pub fn adjacency_masks(&self) -> Vec<u64> {
        let mut adj = vec![0u64; self.vertices];
        for &(u, v) in &self.edges {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        adj
    }

    /// Vertex-set bitmasks of every triangle.
    pub fn triangles(&self) -> Vec<u64> {
        let adj = self.adjacency_masks();
        let mut out = Vec::new();
        for &(u, v) in &self.edges {
            let mut common = adj[u] & adj[v] & !((1u64 << (v + 1)) - 1);
            while common != 0 {
                let w = common.trailing_zeros() as usize;
                out.push((1u64 << u) | (1 << v) | (1 << w));
                common &= common - 1;
            }
        }
        out
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.vertices,
            edges: self.edges.iter().map(|&(u, v)| [u + 1, v + 1]).collect(),
            parts: self.parts.as_ref().map(|p| p.iter().map(|&c| c + 1).collect()),
        }
    }
}

/// Wire form of a graph with 1-based vertex and class labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parts: Option<Vec<usize>>,
}

impl TryFrom<GraphJson> for LabeledGraph {
    type Error = Error;

    fn try_from(j: GraphJson) -> Result<Self> {
        let mut edges = Vec::with_capacity(j.edges.len());
        for [u, v] in j.edges {
            if u == 0 || v == 0 {
                return Err(Error::InvalidGraph("vertex labels are 1-based".into()));
            }
            edges.push((u - 1, v - 1));
        }
        let g = LabeledGraph::new(j.vertices, edges)?;
        match j.parts {
            Some(p) => {
                if p.iter().any(|&c| c == 0) {
                    return Err(Error::InvalidGraph("partite labels are 1-based".into()));
                }
                g.with_parts(p.into_iter().map(|c| c - 1).collect())
            }
            None => Ok(g),
        }
    }
}

impl Serialize for LabeledGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for LabeledGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        LabeledGraph::try_from(GraphJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// All `r`-subsets of the vertices that span no edge.
pub fn independent_set_layer(g: &LabeledGraph, r: usize) -> Result<Family> {
    check_ground(g.vertex_count())?;
    if r > g.vertex_count() {
        return Err(crate::error::invalid(format!("layer {r} exceeds vertex count {}", g.vertex_count())));
    }
    let edge_masks: Vec<u32> = g.edges().iter().map(|&(u, v)| (1u32 << u) | (1 << v)).collect();
    let sets = k_subsets(g.vertex_count(), r).into_iter().filter(|&s| edge_masks.iter().all(|&e| s & e != e));
    Family::from_bits(g.vertex_count(), sets)
}

/// Whether one edge can be chosen from each graph with all chosen edges
/// pairwise vertex-disjoint. Vertex labels must be below 64.
pub fn has_rainbow_matching(graphs: &[Vec<(usize, usize)>]) -> bool {
    let mut order: Vec<usize> = (0..graphs.len()).collect();
    order.sort_by_key(|&i| (graphs[i].len(), i));
    let masks: Vec<Vec<u64>> =
        graphs.iter().map(|g| g.iter().map(|&(a, b)| (1u64 << a) | (1u64 << b)).collect()).collect();
    fn rec(order: &[usize], masks: &[Vec<u64>], depth: usize, used: u64) -> bool {
        if depth == order.len() {
            return true;
        }
        masks[order[depth]].iter().any(|&e| e & used == 0 && rec(order, masks, depth + 1, used | e))
    }
    rec(&order, &masks, 0, 0)
}

/// Whether `g` contains `k` vertex-disjoint triangles.
///
/// Branches on the vertex in the fewest remaining triangles: either one of
/// its triangles is used or the vertex is dropped. A greedy hitting set of
/// the remaining triangles bounds how many more disjoint ones can fit.
pub fn contains_disjoint_triangles(g: &LabeledGraph, k: usize) -> bool {
    fn greedy_hitting(live: &[u64]) -> usize {
        let mut rest = live.to_vec();
        let mut picks = 0;
        while !rest.is_empty() {
            let mut count = [0u32; 64];
            for &t in &rest {
                let mut b = t;
                while b != 0 {
                    count[b.trailing_zeros() as usize] += 1;
                    b &= b - 1;
                }
            }
            let v = (0..64).max_by_key(|&v| (count[v], std::cmp::Reverse(v))).unwrap_or(0);
            rest.retain(|&t| t >> v & 1 == 0);
            picks += 1;
        }
        picks
    }
    fn rec(tri: &[u64], left: usize, used: u64) -> bool {
        if left == 0 {
            return true;
        }
        let live: Vec<u64> = tri.iter().copied().filter(|&t| t & used == 0).collect();
        if live.len() < left || greedy_hitting(&live) < left {
            return false;
        }
        let mut count = [0u32; 64];
        for &t in &live {
            let mut b = t;
            while b != 0 {
                count[b.trailing_zeros() as usize] += 1;
                b &= b - 1;
            }
        }
        let v = (0..64).filter(|&v| count[v] > 0).min_by_key(|&v| (count[v], v)).unwrap_or(0);
        live.iter().any(|&t| t >> v & 1 == 1 && rec(&live, left - 1, used | t)) || rec(&live, left, used | 1 << v)
    }
    rec(&g.triangles(), k, 0)
}
