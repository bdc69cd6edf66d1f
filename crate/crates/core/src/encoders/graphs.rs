//! Builders whose variables are vertex colors or graph edges.

use super::{check_cap, EncodedModel, ProblemSpec, VarObject};
use crate::error::{invalid, Result};
use crate::ilp::{Cmp, IlpModel, Sense};
use crate::setfam::{LabeledGraph, SetCode};

/// Most vertices of `g` that can be properly colored with `c` colors; the
/// graph is `c`-colorable exactly when the optimum is `|V(g)|`.
pub fn coloring(g: &LabeledGraph, c: usize) -> Result<EncodedModel> {
    let n = g.vertex_count();
    if n == 0 || c == 0 {
        return Err(invalid("need at least one vertex and one color"));
    }
    check_cap("variable count", n * c, 200_000)?;
    let spec = ProblemSpec::Coloring { graph: g.clone(), c };
    let mut em = EncodedModel::new(IlpModel::new(format!("coloring_{n}_{c}"), Sense::Maximize), spec, n);
    let mut var = vec![vec![0usize; n]; c];
    for (color, row) in var.iter_mut().enumerate() {
        for (vertex, slot) in row.iter_mut().enumerate() {
            *slot = em.add_var(format!("c{}_v{}", color + 1, vertex + 1), VarObject::Color { vertex, color })?;
        }
    }
    em.model.set_objective(var.iter().flatten().map(|&v| (v, 1)))?;
    if c > 1 {
        for vertex in 0..n {
            em.model.add_constraint(var.iter().map(|row| (row[vertex], 1)), Cmp::Le, 1)?;
        }
    }
    for row in &var {
        for &(u, v) in g.edges() {
            em.model.add_constraint([(row[u], 1), (row[v], 1)], Cmp::Le, 1)?;
        }
    }
    Ok(em)
}

/// Bipartite graphs `F_1..F_k` on `[n]`, `F_i` between `left[i]` and its
/// complement, with maximum degree at most `d`, `|F_i| > (k-1)d` for
/// `i >= 2` and no rainbow matching. Maximizes `|F_1|`.
pub fn rainbow(n: usize, k: usize, d: usize, left: &[Vec<usize>]) -> Result<EncodedModel> {
    if n < 2 || n > 30 {
        return Err(invalid("n must lie in 2..=30"));
    }
    if k == 0 || left.len() != k {
        return Err(invalid("one left class per graph expected"));
    }
    let spec = ProblemSpec::Rainbow { n, k, d, left: left.to_vec() };
    let mut em = EncodedModel::new(IlpModel::new(format!("rainbow_{n}_{k}_{d}"), Sense::Maximize), spec, n);
    let mut edges: Vec<Vec<(usize, usize, usize)>> = Vec::with_capacity(k);
    for (i, l) in left.iter().enumerate() {
        let mask = SetCode::from_elements(n, l)?.0;
        let mut list = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if (mask >> u & 1) != (mask >> v & 1) {
                    let var =
                        em.add_var(format!("e{}_{}_{}", i + 1, u + 1, v + 1), VarObject::Edge { graph: i, u, v })?;
                    list.push((u, v, var));
                }
            }
        }
        if list.is_empty() {
            return Err(invalid(format!("graph {} has no possible edges", i + 1)));
        }
        edges.push(list);
    }
    em.model.set_objective(edges[0].iter().map(|e| (e.2, 1)))?;
    for list in &edges {
        for x in 0..n {
            let terms: Vec<(usize, i64)> = list.iter().filter(|e| e.0 == x || e.1 == x).map(|e| (e.2, 1)).collect();
            if !terms.is_empty() {
                em.model.add_constraint(terms, Cmp::Le, d as i64)?;
            }
        }
    }
    let min_size = ((k - 1) * d + 1) as i64;
    for list in &edges[1..] {
        em.model.add_constraint(list.iter().map(|e| (e.2, 1)), Cmp::Ge, min_size)?;
    }
    let mut pick = Vec::with_capacity(k);
    let mut out = Vec::new();
    transversals(&edges, 0, 0, &mut pick, &mut out);
    for t in out {
        em.model.add_constraint(t.iter().map(|&v| (v, 1)), Cmp::Le, k as i64 - 1)?;
    }
    Ok(em)
}

fn transversals(
    edges: &[Vec<(usize, usize, usize)>],
    i: usize,
    used: u64,
    pick: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if i == edges.len() {
        out.push(pick.clone());
        return;
    }
    for &(u, v, var) in &edges[i] {
        let m = (1u64 << u) | (1 << v);
        if m & used == 0 {
            pick.push(var);
            transversals(edges, i + 1, used | m, pick, out);
            pick.pop();
        }
    }
}

/// Most edges of the complete multipartite graph with the given part sizes
/// that contain no `k` vertex-disjoint triangles.
pub fn multipartite_turan(parts: &[usize], k: usize) -> Result<EncodedModel> {
    if parts.len() < 2 || parts.contains(&0) {
        return Err(invalid("need at least two nonempty parts"));
    }
    if k == 0 {
        return Err(invalid("k must be positive"));
    }
    let n: usize = parts.iter().sum();
    check_cap("vertex count", n, 20)?;
    let g = LabeledGraph::complete_multipartite(parts);
    let spec = ProblemSpec::MultipartiteTuran { parts: parts.to_vec(), k };
    let mut em = EncodedModel::new(IlpModel::new(format!("turan_{n}_{k}"), Sense::Maximize), spec, n);
    let mut idx = vec![vec![usize::MAX; n]; n];
    for &(u, v) in g.edges() {
        let var = em.add_var(format!("e_{}_{}", u + 1, v + 1), VarObject::Edge { graph: 0, u, v })?;
        idx[u][v] = var;
        idx[v][u] = var;
    }
    em.model.set_objective((0..em.objects.len()).map(|v| (v, 1)))?;
    let tri: Vec<(u64, [usize; 3])> = g
        .triangles()
        .into_iter()
        .map(|m| {
            let vs: Vec<usize> = (0..n).filter(|&i| m >> i & 1 == 1).collect();
            (m, [idx[vs[0]][vs[1]], idx[vs[0]][vs[2]], idx[vs[1]][vs[2]]])
        })
        .collect();
    let mut pick = Vec::with_capacity(k);
    let mut emit = Vec::new();
    triangle_packings(&tri, k, 0, 0, &mut pick, &mut emit);
    for p in emit {
        let terms = p.iter().flat_map(|&t| tri[t].1).map(|v| (v, 1));
        em.model.add_constraint(terms, Cmp::Le, 3 * k as i64 - 1)?;
    }
    Ok(em)
}

fn triangle_packings(
    tri: &[(u64, [usize; 3])],
    k: usize,
    from: usize,
    used: u64,
    pick: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if pick.len() == k {
        out.push(pick.clone());
        return;
    }
    for i in from..tri.len() {
        if tri[i].0 & used == 0 {
            pick.push(i);
            triangle_packings(tri, k, i + 1, used | tri[i].0, pick, out);
            pick.pop();
        }
    }
}
