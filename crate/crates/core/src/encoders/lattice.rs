//! Builders whose variables are subsets of a single ground set.

use std::collections::HashMap;

use super::{check_cap, set_tag, EncodedModel, NeighborhoodMode, ProblemSpec, VarObject};
use crate::error::{invalid, Result};
use crate::ilp::{Cmp, IlpModel, Sense};
use crate::setfam::{
    binom, check_ground, configuration_tuples, independent_set_layer, k_subsets, LabeledGraph, PatternMatrix, SetCode,
};

/// Adds one variable per set in `sets` (family `class`, name prefix `prefix`).
pub(crate) fn add_sets(em: &mut EncodedModel, class: usize, prefix: &str, sets: &[u32]) -> Result<Vec<usize>> {
    let ground = em.ground;
    sets.iter()
        .map(|&s| {
            let name = format!("{prefix}_{}", set_tag(SetCode(s), ground));
            em.add_var(name, VarObject::Set { class, set: SetCode(s) })
        })
        .collect()
}

/// All subsets of `[n]` with size in `sizes` (every size when empty),
/// ascending by bit value.
pub(crate) fn sets_of_sizes(n: usize, sizes: &[usize]) -> Result<Vec<u32>> {
    for &s in sizes {
        if s > n {
            return Err(invalid(format!("set size {s} exceeds ground size {n}")));
        }
    }
    let mut out: Vec<u32> = if sizes.is_empty() {
        (0..1u32 << n).collect()
    } else {
        let mut sz = sizes.to_vec();
        sz.sort_unstable();
        sz.dedup();
        sz.iter().flat_map(|&s| k_subsets(n, s)).collect()
    };
    out.sort_unstable();
    Ok(out)
}

/// For each position in `sets`, the positions of its proper supersets.
fn superset_lists(sets: &[u32], ground: usize) -> Vec<Vec<usize>> {
    if ground <= 16 {
        let mut pos = vec![usize::MAX; 1 << ground];
        for (i, &s) in sets.iter().enumerate() {
            pos[s as usize] = i;
        }
        let full = (1u32 << ground) - 1;
        sets.iter()
            .map(|&a| {
                let rest = full & !a;
                let mut out = Vec::new();
                let mut t = rest;
                while t != 0 {
                    let p = pos[(a | t) as usize];
                    if p != usize::MAX {
                        out.push(p);
                    }
                    t = (t - 1) & rest;
                }
                out.sort_unstable();
                out
            })
            .collect()
    } else {
        sets.iter().map(|&a| (0..sets.len()).filter(|&j| sets[j] != a && sets[j] & a == a).collect()).collect()
    }
}

/// Emits every strict chain of `len` members, each as increasing positions.
fn for_each_chain(sup: &[Vec<usize>], len: usize, emit: &mut dyn FnMut(&[usize]) -> Result<()>) -> Result<()> {
    fn rec(
        sup: &[Vec<usize>],
        len: usize,
        chain: &mut Vec<usize>,
        emit: &mut dyn FnMut(&[usize]) -> Result<()>,
    ) -> Result<()> {
        if chain.len() == len {
            return emit(chain);
        }
        let last = *chain.last().unwrap();
        for &b in &sup[last] {
            chain.push(b);
            rec(sup, len, chain, emit)?;
            chain.pop();
        }
        Ok(())
    }
    let mut chain = Vec::with_capacity(len);
    for a in 0..sup.len() {
        chain.push(a);
        rec(sup, len, &mut chain, emit)?;
        chain.pop();
    }
    Ok(())
}

fn add_chain_constraints(em: &mut EncodedModel, vars: &[usize], sets: &[u32], len: usize) -> Result<()> {
    let sup = superset_lists(sets, em.ground);
    let rhs = len as i64 - 1;
    let model = &mut em.model;
    for_each_chain(&sup, len, &mut |c| {
        model.add_constraint(c.iter().map(|&p| (vars[p], 1)), Cmp::Le, rhs)?;
        Ok(())
    })
}

fn count_objective(em: &mut EncodedModel, vars: &[usize]) -> Result<()> {
    em.model.set_objective(vars.iter().map(|&v| (v, 1)))
}

/// Largest antichain in `2^[n]`.
pub fn sperner(n: usize) -> Result<EncodedModel> {
    check_ground(n)?;
    check_cap("n", n, 14)?;
    let spec = ProblemSpec::Sperner { n };
    let mut em = EncodedModel::new(IlpModel::new(format!("sperner_{n}"), Sense::Maximize), spec, n);
    let sets = sets_of_sizes(n, &[])?;
    let vars = add_sets(&mut em, 0, "x", &sets)?;
    count_objective(&mut em, &vars)?;
    add_chain_constraints(&mut em, &vars, &sets, 2)?;
    Ok(em)
}

/// The sizes `r` with `(n-1)/4 < r < (n+2)/3`, where a largest antichain of
/// independent sets of the path on `n` vertices can be found.
pub fn path_antichain_layers(n: usize) -> Vec<usize> {
    (0..=n).filter(|&r| 4 * r > n.saturating_sub(1) && 3 * r < n + 2).collect()
}

/// Largest family of independent sets of `g` (sizes in `layers`, all when
/// empty) containing no strict chain of `chain_len` members.
pub fn poset_antichain(g: &LabeledGraph, layers: &[usize], chain_len: usize) -> Result<EncodedModel> {
    let n = g.vertex_count();
    check_ground(n)?;
    check_cap("vertex count", n, 26)?;
    if chain_len < 2 {
        return Err(invalid("chain length must be at least 2"));
    }
    let all: Vec<usize> = (0..=n).collect();
    let layers = if layers.is_empty() { all.as_slice() } else { layers };
    let mut sets = Vec::new();
    let mut sorted = layers.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for &r in &sorted {
        sets.extend_from_slice(independent_set_layer(g, r)?.bits());
    }
    sets.sort_unstable();
    check_cap("variable count", sets.len(), 20_000)?;
    let spec = ProblemSpec::PosetAntichain { graph: g.clone(), layers: layers.to_vec(), chain_len };
    let mut em = EncodedModel::new(IlpModel::new(format!("poset_antichain_{n}"), Sense::Maximize), spec, n);
    let vars = add_sets(&mut em, 0, "x", &sets)?;
    count_objective(&mut em, &vars)?;
    add_chain_constraints(&mut em, &vars, &sets, chain_len)?;
    Ok(em)
}

/// Extremal size of `N_d(F)` restricted to `k`-sets over families `F` of
/// `m` sets of size `r`. `x` variables pick `F`, `y` variables the
/// neighborhood.
pub fn neighborhood(n: usize, r: usize, k: usize, d: usize, m: usize, mode: NeighborhoodMode) -> Result<EncodedModel> {
    check_ground(n)?;
    check_cap("n", n, 16)?;
    if r > n || k > n {
        return Err(invalid("set sizes must not exceed n"));
    }
    if m as u64 > binom(n as u64, r as u64) {
        return Err(invalid(format!("no family of {m} sets of size {r} in [{n}]")));
    }
    let sense = match mode {
        NeighborhoodMode::Min => Sense::Minimize,
        NeighborhoodMode::Max => Sense::Maximize,
    };
    let spec = ProblemSpec::Neighborhood { n, r, k, d, m, mode };
    let mut em = EncodedModel::new(IlpModel::new(format!("neighborhood_{n}_{r}_{k}_{d}_{m}"), sense), spec, n);
    let xs = k_subsets(n, r);
    let ys = k_subsets(n, k);
    let xv = add_sets(&mut em, 0, "x", &xs)?;
    let yv = add_sets(&mut em, 1, "y", &ys)?;
    count_objective(&mut em, &yv)?;
    if !xv.is_empty() {
        em.model.add_constraint(xv.iter().map(|&v| (v, 1)), Cmp::Eq, m as i64)?;
    } else if m > 0 {
        return Err(invalid("no sets of the requested size"));
    }
    for (j, &b) in ys.iter().enumerate() {
        let near: Vec<usize> = (0..xs.len()).filter(|&i| (xs[i] ^ b).count_ones() as usize == d).collect();
        match mode {
            NeighborhoodMode::Min => {
                for i in near {
                    em.model.add_constraint([(yv[j], 1), (xv[i], -1)], Cmp::Ge, 0)?;
                }
            }
            NeighborhoodMode::Max => {
                let terms = std::iter::once((yv[j], 1)).chain(near.iter().map(|&i| (xv[i], -1)));
                em.model.add_constraint(terms, Cmp::Le, 0)?;
            }
        }
    }
    Ok(em)
}

/// Cover of `2^[n]` by `c` disjoint union-free families: optimum `2^n`
/// exactly when such a cover exists.
pub fn unionfree_cover(n: usize, c: usize) -> Result<EncodedModel> {
    check_ground(n)?;
    check_cap("n", n, 7)?;
    if c == 0 {
        return Err(invalid("need at least one family"));
    }
    let spec = ProblemSpec::UnionfreeCover { n, c };
    let mut em = EncodedModel::new(IlpModel::new(format!("unionfree_{n}_{c}"), Sense::Maximize), spec, n);
    let sets = sets_of_sizes(n, &[])?;
    let mut vars = Vec::with_capacity(c);
    for class in 0..c {
        vars.push(add_sets(&mut em, class, &format!("f{}", class + 1), &sets)?);
    }
    em.model.set_objective(vars.iter().flatten().map(|&v| (v, 1)))?;
    if c > 1 {
        for s in 0..sets.len() {
            em.model.add_constraint(vars.iter().map(|cv| (cv[s], 1)), Cmp::Le, 1)?;
        }
    }
    let triples = union_triples(n);
    for cv in &vars {
        for &(a, b, u) in &triples {
            em.model.add_constraint([(cv[a as usize], 1), (cv[b as usize], 1), (cv[u as usize], 1)], Cmp::Le, 2)?;
        }
    }
    Ok(em)
}

/// All `(A, B, C)` with `A < B`, `A ∪ B = C` and `A, B ≠ C`, ordered by
/// `C`, then `A`, then `B`.
fn union_triples(n: usize) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for u in 0..1u32 << n {
        let mut here = Vec::new();
        // proper submasks a of u
        let mut a = u;
        loop {
            a = a.wrapping_sub(1) & u;
            if a == u {
                break;
            }
            // b = (u \ a) | t with t a proper submask of a
            let base = u & !a;
            let mut t = a;
            loop {
                t = t.wrapping_sub(1) & a;
                if t == a {
                    break;
                }
                let b = base | t;
                if a < b {
                    here.push((a, b, u));
                }
                if t == 0 {
                    break;
                }
            }
            if a == 0 {
                break;
            }
        }
        here.sort_unstable();
        out.extend(here);
    }
    out
}

/// Fewest vertices of the `n`-cube meeting every geodesic between
/// antipodal vertices.
pub fn geodesic_blocker(n: usize) -> Result<EncodedModel> {
    check_ground(n)?;
    check_cap("n", n, 7)?;
    let spec = ProblemSpec::GeodesicBlocker { n };
    let mut em = EncodedModel::new(IlpModel::new(format!("geodesic_{n}"), Sense::Minimize), spec, n);
    let sets = sets_of_sizes(n, &[])?;
    let vars = add_sets(&mut em, 0, "x", &sets)?;
    count_objective(&mut em, &vars)?;
    let mut perm: Vec<usize> = (0..n).collect();
    let mut path = Vec::with_capacity(n + 1);
    loop {
        for start in 0..1u32 << n {
            path.clear();
            let mut cur = start;
            path.push(vars[cur as usize]);
            for &i in &perm {
                cur ^= 1 << i;
                path.push(vars[cur as usize]);
            }
            // each geodesic is met from both ends; the model keeps one copy
            em.model.add_constraint(path.iter().map(|&v| (v, 1)), Cmp::Ge, 1)?;
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(em)
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Largest family in `2^[n]` with no strict chain of `chain_len` members
/// and no two members at symmetric-difference distance above `d`.
pub fn diameter_antichain(n: usize, d: usize, chain_len: usize) -> Result<EncodedModel> {
    check_ground(n)?;
    check_cap("n", n, 10)?;
    if chain_len < 2 {
        return Err(invalid("chain length must be at least 2"));
    }
    let spec = ProblemSpec::DiameterAntichain { n, d, chain_len };
    let mut em = EncodedModel::new(IlpModel::new(format!("diameter_{n}_{d}_{chain_len}"), Sense::Maximize), spec, n);
    let sets = sets_of_sizes(n, &[])?;
    let vars = add_sets(&mut em, 0, "x", &sets)?;
    count_objective(&mut em, &vars)?;
    add_chain_constraints(&mut em, &vars, &sets, chain_len)?;
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if (sets[i] ^ sets[j]).count_ones() as usize > d {
                em.model.add_constraint([(vars[i], 1), (vars[j], 1)], Cmp::Le, 1)?;
            }
        }
    }
    Ok(em)
}

/// Most subsets of `[m]` (sizes in `sizes`, default `2..=m`) without the
/// configuration `p`.
pub fn forb(m: usize, p: &PatternMatrix, sizes: &[usize]) -> Result<EncodedModel> {
    check_ground(m)?;
    check_cap("m", m, 9)?;
    let sizes: Vec<usize> = if sizes.is_empty() { (2.min(m)..=m).collect() } else { sizes.to_vec() };
    let sets = sets_of_sizes(m, &sizes)?;
    let default = *p == PatternMatrix::two_common_one_private();
    let pattern = if default {
        None
    } else {
        Some((0..p.rows()).map(|r| (0..p.cols()).map(|c| p.entry(r, c)).collect()).collect())
    };
    let spec = ProblemSpec::Forb { m, pattern, sizes: sizes.clone() };
    let mut em = EncodedModel::new(IlpModel::new(format!("forb_{m}"), Sense::Maximize), spec, m);
    let vars = add_sets(&mut em, 0, "x", &sets)?;
    count_objective(&mut em, &vars)?;
    let rhs = p.cols() as i64 - 1;
    for t in configuration_tuples(&sets, m, p) {
        em.model.add_constraint(t.iter().map(|&i| (vars[i], 1)), Cmp::Le, rhs)?;
    }
    Ok(em)
}

/// Blocks of size `block_size` on `[m]` covering every pair exactly
/// `lambda` times and containing every block of `required`.
pub fn design(m: usize, block_size: usize, lambda: usize, required: &[Vec<usize>]) -> Result<EncodedModel> {
    check_ground(m)?;
    check_cap("m", m, 16)?;
    if block_size < 2 || block_size > m {
        return Err(invalid("block size must lie in 2..=m"));
    }
    if lambda == 0 {
        return Err(invalid("multiplicity must be positive"));
    }
    let pairs = binom(m as u64, 2) * lambda as u64;
    let per_block = binom(block_size as u64, 2);
    if pairs % per_block != 0 {
        return Err(invalid(format!(
            "{lambda} * C({m},2) = {pairs} is not divisible by C({block_size},2) = {per_block}"
        )));
    }
    let spec = ProblemSpec::Design { m, block_size, lambda, required: required.to_vec() };
    let mut em =
        EncodedModel::new(IlpModel::new(format!("design_{m}_{block_size}_{lambda}"), Sense::Maximize), spec, m);
    let blocks = k_subsets(m, block_size);
    let vars = add_sets(&mut em, 0, "x", &blocks)?;
    for i in 0..m {
        for j in i + 1..m {
            let pair = (1u32 << i) | (1 << j);
            let terms = blocks.iter().zip(&vars).filter(|(&b, _)| b & pair == pair).map(|(_, &v)| (v, 1));
            em.model.add_constraint(terms, Cmp::Eq, lambda as i64)?;
        }
    }
    let pos: HashMap<u32, usize> = blocks.iter().enumerate().map(|(i, &b)| (b, i)).collect();
    for r in required {
        let s = SetCode::from_elements(m, r)?;
        let i = pos.get(&s.0).ok_or_else(|| invalid(format!("required block {s} does not have size {block_size}")))?;
        em.model.add_constraint([(vars[*i], 1)], Cmp::Ge, 1)?;
    }
    Ok(em)
}

/// Largest family in `2^[n]` (sizes in `sizes`, all when empty) without `s`
/// pairwise disjoint members.
pub fn kleitman(n: usize, s: usize, sizes: &[usize]) -> Result<EncodedModel> {
    check_ground(n)?;
    check_cap("n", n, 10)?;
    if s < 2 {
        return Err(invalid("s must be at least 2"));
    }
    let sets = sets_of_sizes(n, sizes)?;
    let spec = ProblemSpec::Kleitman { n, s, sizes: sizes.to_vec() };
    let mut em = EncodedModel::new(IlpModel::new(format!("kleitman_{n}_{s}"), Sense::Maximize), spec, n);
    let vars = add_sets(&mut em, 0, "x", &sets)?;
    count_objective(&mut em, &vars)?;
    let mut tuple = Vec::with_capacity(s);
    let mut out = Vec::new();
    disjoint_tuples(&sets, s, 0, 0, &mut tuple, &mut out);
    for t in out {
        em.model.add_constraint(t.iter().map(|&i| (vars[i], 1)), Cmp::Le, s as i64 - 1)?;
    }
    Ok(em)
}

fn disjoint_tuples(sets: &[u32], s: usize, from: usize, used: u32, tuple: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if tuple.len() == s {
        out.push(tuple.clone());
        return;
    }
    for i in from..sets.len() {
        if sets[i] & used == 0 {
            tuple.push(i);
            disjoint_tuples(sets, s, i + 1, used | sets[i], tuple, out);
            tuple.pop();
        }
    }
}
