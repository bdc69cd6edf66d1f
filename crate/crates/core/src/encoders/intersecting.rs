//! Intersecting-family builders: every pair of disjoint members is excluded.

use super::lattice::{add_sets, sets_of_sizes};
use super::{check_cap, EkrMode, EncodedModel, ProblemSpec};
use crate::error::{invalid, Result};
use crate::ilp::{Cmp, IlpModel, Sense};
use crate::setfam::{check_ground, k_subsets, Family};

fn add_disjoint_pairs(em: &mut EncodedModel, vars: &[usize], sets: &[u32]) -> Result<()> {
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if sets[i] & sets[j] == 0 {
                em.model.add_constraint([(vars[i], 1), (vars[j], 1)], Cmp::Le, 1)?;
            }
        }
    }
    Ok(())
}

/// Objective `#{A : 1 ∉ A}` plus `deg(1) >= deg(i)` for every other
/// element, so the optimum is the largest diversity `|F| - Δ(F)`.
fn add_diversity(em: &mut EncodedModel, vars: &[usize], sets: &[u32], n: usize) -> Result<()> {
    let avoid = |e: usize| vars.iter().zip(sets).filter(move |(_, &s)| s >> e & 1 == 0).map(|(&v, _)| v);
    em.model.set_objective(avoid(0).map(|v| (v, 1)))?;
    for i in 1..n {
        let terms = avoid(0).map(|v| (v, 1)).chain(avoid(i).map(|v| (v, -1)));
        // both sides may cancel completely
        match em.model.add_constraint(terms, Cmp::Le, 0) {
            Err(crate::error::Error::EmptyConstraint) => {}
            r => {
                r?;
            }
        }
    }
    Ok(())
}

/// Largest diversity of an intersecting family of `k`-subsets of `[n]`.
pub fn diversity_uniform(n: usize, k: usize) -> Result<EncodedModel> {
    check_ground(n)?;
    check_cap("n", n, 12)?;
    if k == 0 || k > n {
        return Err(invalid("k must lie in 1..=n"));
    }
    let spec = ProblemSpec::DiversityUniform { n, k };
    let mut em = EncodedModel::new(IlpModel::new(format!("diversity_{n}_{k}"), Sense::Maximize), spec, n);
    let sets = k_subsets(n, k);
    let vars = add_sets(&mut em, 0, "x", &sets)?;
    add_disjoint_pairs(&mut em, &vars, &sets)?;
    add_diversity(&mut em, &vars, &sets, n)?;
    Ok(em)
}

/// Largest diversity of an intersecting family of nonempty subsets of `[n]`.
pub fn diversity_full(n: usize) -> Result<EncodedModel> {
    check_ground(n)?;
    check_cap("n", n, 10)?;
    let spec = ProblemSpec::DiversityFull { n };
    let mut em = EncodedModel::new(IlpModel::new(format!("diversity_full_{n}"), Sense::Maximize), spec, n);
    let sizes: Vec<usize> = (1..=n).collect();
    let sets = sets_of_sizes(n, &sizes)?;
    let vars = add_sets(&mut em, 0, "x", &sets)?;
    add_disjoint_pairs(&mut em, &vars, &sets)?;
    add_diversity(&mut em, &vars, &sets, n)?;
    Ok(em)
}

/// Sets meeting `X1 = [n1]` in `k` and `X2 = [n1+1, n1+n2]` in `l` elements.
fn bipartite_sets(n1: usize, n2: usize, k: usize, l: usize) -> Vec<u32> {
    let mut out = Vec::new();
    for &a in &k_subsets(n1, k) {
        for &b in &k_subsets(n2, l) {
            out.push(a | b << n1);
        }
    }
    out.sort_unstable();
    out
}

/// Largest intersecting family of sets meeting `X1 = [n1]` in `k` and
/// `X2 = {n1+1..n1+n2}` in `l` elements that is not a star
/// ([`EkrMode::Nontrivial`]) or is two-sided ([`EkrMode::TwoSided`]).
///
/// The two-sided witnesses are fixed to contain the first and second `k`
/// elements of `X1` and the first and second `l` elements of `X2`; any
/// two-sided family can be relabeled to use these.
pub fn bipartite_ekr(n1: usize, n2: usize, k: usize, l: usize, mode: EkrMode) -> Result<EncodedModel> {
    let n = n1 + n2;
    check_ground(n)?;
    if k == 0 || l == 0 || 2 * k > n1 || 2 * l > n2 {
        return Err(invalid("need 1 <= k, 2k <= n1, 1 <= l and 2l <= n2"));
    }
    let sets = bipartite_sets(n1, n2, k, l);
    check_cap("variable count", sets.len(), 20_000)?;
    let spec = ProblemSpec::BipartiteEkr { n1, n2, k, l, mode };
    let tag = match mode {
        EkrMode::Nontrivial => "nontrivial",
        EkrMode::TwoSided => "two_sided",
    };
    let mut em = EncodedModel::new(IlpModel::new(format!("ekr_{tag}_{n1}_{n2}_{k}_{l}"), Sense::Maximize), spec, n);
    let vars = add_sets(&mut em, 0, "x", &sets)?;
    em.model.set_objective(vars.iter().map(|&v| (v, 1)))?;
    add_disjoint_pairs(&mut em, &vars, &sets)?;
    match mode {
        EkrMode::Nontrivial => {
            for e in 0..n {
                let terms = vars.iter().zip(&sets).filter(|(_, &s)| s >> e & 1 == 0).map(|(&v, _)| (v, 1));
                em.model.add_constraint(terms, Cmp::Ge, 1)?;
            }
        }
        EkrMode::TwoSided => {
            let run = |from: usize, len: usize| ((1u32 << len) - 1) << from;
            let witnesses = [run(0, k), run(k, k), run(n1, l), run(n1 + l, l)];
            for w in witnesses {
                let terms = vars.iter().zip(&sets).filter(|(_, &s)| s & w == w).map(|(&v, _)| (v, 1));
                em.model.add_constraint(terms, Cmp::Ge, 1)?;
            }
            em.model.add_comment("two-sided witnesses: first and second blocks of each side");
        }
    }
    Ok(em)
}

fn part_masks(parts: &[usize]) -> Vec<u32> {
    let mut from = 0;
    parts
        .iter()
        .map(|&p| {
            let m = ((1u32 << p) - 1) << from;
            from += p;
            m
        })
        .collect()
}

/// `H = {F ⊆ [n], |F| = k, |F ∩ X_i| >= quotas[i]}` for consecutive parts
/// `X_i` of the given sizes.
pub fn multipart_family(parts: &[usize], quotas: &[usize], k: usize) -> Result<Family> {
    if parts.is_empty() || parts.len() != quotas.len() {
        return Err(invalid("one quota per part expected"));
    }
    if parts.contains(&0) {
        return Err(invalid("parts must be nonempty"));
    }
    let n: usize = parts.iter().sum();
    check_ground(n)?;
    if quotas.iter().sum::<usize>() > k || k > n {
        return Err(invalid("need sum of quotas <= k <= n"));
    }
    if parts.iter().zip(quotas).any(|(p, q)| q > p) {
        return Err(invalid("a quota exceeds its part size"));
    }
    let masks = part_masks(parts);
    let sets = k_subsets(n, k)
        .into_iter()
        .filter(|&s| masks.iter().zip(quotas).all(|(&m, &q)| (s & m).count_ones() as usize >= q));
    Family::from_bits(n, sets)
}

/// Size of the largest star `{F ∈ f : x ∈ F}`.
pub fn max_star(f: &Family) -> usize {
    (0..f.ground()).map(|e| f.bits().iter().filter(|&&s| s >> e & 1 == 1).count()).max().unwrap_or(0)
}

/// Largest intersecting subfamily of [`multipart_family`].
pub fn multipart_ekr(parts: &[usize], quotas: &[usize], k: usize) -> Result<EncodedModel> {
    let h = multipart_family(parts, quotas, k)?;
    check_cap("variable count", h.len(), 20_000)?;
    let n = h.ground();
    let spec = ProblemSpec::MultipartEkr { parts: parts.to_vec(), quotas: quotas.to_vec(), k };
    let mut em = EncodedModel::new(IlpModel::new(format!("multipart_ekr_{n}_{k}"), Sense::Maximize), spec, n);
    let vars = add_sets(&mut em, 0, "x", h.bits())?;
    em.model.set_objective(vars.iter().map(|&v| (v, 1)))?;
    add_disjoint_pairs(&mut em, &vars, h.bits())?;
    Ok(em)
}
