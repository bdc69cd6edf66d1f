//! Explicit families and graphs with closed-form sizes.
//!
//! Each generator builds its object from the defining rule; the matching
//! `*_size` function evaluates the closed form so the two can be compared.
//! Bipartite ground sets use `X = {1..m}` and `Y = {m+1..2m}`.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::setfam::{binom, check_ground, k_subsets, Family, LabeledGraph, SetCode};

/// `binom([n], h) ∪ {A ∈ binom([n], h+1) : 1 ∈ A}` with `h = ⌊d/2⌋`: diameter
/// at most `d` and no chain of three members.
pub fn diameter_star(n: usize, d: usize) -> Result<Family> {
    check_ground(n)?;
    if d % 2 == 0 || d >= n {
        return Err(invalid("need d odd and d < n"));
    }
    let h = d / 2;
    let star = k_subsets(n, h + 1).into_iter().filter(|s| s & 1 == 1);
    Family::from_bits(n, k_subsets(n, h).into_iter().chain(star))
}

pub fn diameter_star_size(n: usize, d: usize) -> u64 {
    binom(n as u64, (d / 2) as u64) + binom(n as u64 - 1, (d / 2) as u64)
}

fn side_pairs(m: usize, offset: usize) -> Vec<u32> {
    k_subsets(m, 2).into_iter().map(|s| s << offset).collect()
}

/// Two-sided intersecting family in `binom(X, Y; 2, 2)` for `|X| = |Y| = m`:
/// every `{x1, x}` with a pair of `Y` meeting `{y1, y2}`, every `{x1, x2}`
/// and `{x1, x3}` with any pair of `Y`, and `{x2, x3, y1, y2}`.
pub fn bipartite_22(m: usize) -> Result<Family> {
    if m < 5 {
        return Err(invalid("need m >= 5"));
    }
    check_ground(2 * m)?;
    let (x, y) = (side_pairs(m, 0), side_pairs(m, m));
    let y12 = 0b11u32 << m;
    let mut sets = Vec::new();
    for &g in &x {
        for &f in &y {
            let hits = f & y12 != 0;
            if g & 1 == 1 && (hits || g == 0b11 || g == 0b101) {
                sets.push(g | f);
            }
        }
    }
    sets.push(0b110 | y12);
    Family::from_bits(2 * m, sets)
}

pub fn bipartite_22_size(m: usize) -> u64 {
    let m = m as u64;
    3 * m * m + 10 - 10 * m
}

/// Two-sided intersecting family in `binom(X, Y; k, k)`: with
/// `K1 = {x2..x_{k+1}}` and `K2 = {y1..yk}`, every `F1 ∪ F2` where `x1 ∈ F1`
/// and either `F1` meets `K1` or `F2` meets `K2`, plus `K1 ∪ K2`.
pub fn two_sided(m: usize, k: usize) -> Result<Family> {
    // for k = 1 every member contains y1, so the family is not two-sided
    if k < 2 || 2 * k > m {
        return Err(invalid("need 2 <= k and 2k <= m"));
    }
    check_ground(2 * m)?;
    let k1 = ((1u32 << k) - 1) << 1;
    let k2 = ((1u32 << k) - 1) << m;
    let ys: Vec<u32> = k_subsets(m, k).into_iter().map(|s| s << m).collect();
    let mut sets = Vec::new();
    for f1 in k_subsets(m, k).into_iter().filter(|s| s & 1 == 1) {
        for &f2 in &ys {
            if f1 & k1 != 0 || f2 & k2 != 0 {
                sets.push(f1 | f2);
            }
        }
    }
    sets.push(k1 | k2);
    Family::from_bits(2 * m, sets)
}

pub fn two_sided_size(m: usize, k: usize) -> u64 {
    let (m, k) = (m as u64, k as u64);
    let b = binom;
    let rest = b(m - k - 1, k - 1);
    (b(m - 1, k - 1) - rest) * b(m, k) + rest * (b(m, k) - b(m - k, k)) + 1
}

/// Subsets of `[9]` with no four pairwise disjoint members: every set of size
/// at least 3 and the 2-sets meeting `{1, 2}`.
pub fn disjoint_free_9() -> Family {
    let pairs = k_subsets(9, 2).into_iter().filter(|s| s & 0b11 != 0);
    let big = (3..=9).flat_map(|r| k_subsets(9, r));
    Family::from_bits(9, pairs.chain(big)).expect("valid ground set")
}

/// All sets containing some generator.
pub fn upset(generators: &Family) -> Result<Family> {
    let n = generators.ground();
    if n > 20 {
        return Err(invalid(format!("upward closure over a ground set of {n} elements is too large")));
    }
    let sets = (0..1u32 << n).filter(|&a| generators.bits().iter().any(|&g| g & a == g));
    Family::from_bits(n, sets)
}

/// All four 3-subsets of each block `{4i+1, .., 4i+4}`, `i < k`: a partial
/// triple system of multiplicity 2 on `[4k]`.
pub fn partial_quad_system(k: usize) -> Result<Family> {
    if k == 0 {
        return Err(invalid("need k >= 1"));
    }
    check_ground(4 * k)?;
    let sets = (0..k).flat_map(|i| k_subsets(4, 3).into_iter().map(move |t| t << (4 * i)));
    Family::from_bits(4 * k, sets)
}

/// Checks that every pair of `[m]` lies in exactly one block of a 4-uniform
/// family.
fn check_pair_design(design: &Family) -> Result<()> {
    let m = design.ground();
    if design.iter().any(|b| b.len() != 4) {
        return Err(invalid("design blocks must have 4 elements"));
    }
    for pair in k_subsets(m, 2) {
        let c = design.bits().iter().filter(|&&b| b & pair == pair).count();
        if c != 1 {
            let p = SetCode(pair).elements();
            return Err(invalid(format!("pair {{{},{}}} lies in {c} blocks, expected 1", p[0], p[1])));
        }
    }
    Ok(())
}

/// From a design where every pair lies in exactly one 4-block: all sets of
/// size at most 2, the 3-subsets of every block, and the blocks themselves.
/// Avoids two common rows over one private row.
pub fn forb_from_design(design: &Family) -> Result<Family> {
    check_pair_design(design)?;
    let m = design.ground();
    let small = (0..=2).flat_map(|r| k_subsets(m, r));
    let triples: Vec<u32> = design
        .bits()
        .iter()
        .flat_map(|&b| (0..32).filter(move |i| b >> i & 1 == 1).map(move |i| b & !(1 << i)))
        .collect();
    Family::from_bits(m, small.chain(triples).chain(design.bits().iter().copied()))
}

/// `11/6 binom(m, 2) + m + 1`, the size of [`forb_from_design`] on `[m]`.
pub fn forb_from_design_size(m: usize) -> u64 {
    11 * binom(m as u64, 2) / 6 + m as u64 + 1
}

/// Develops base blocks modulo `modulus`; elements are printed 1-based, so
/// residue `r` becomes element `r + 1`.
pub fn cyclic_design(modulus: usize, base: &[Vec<usize>]) -> Result<Family> {
    check_ground(modulus)?;
    let mut sets = std::collections::BTreeSet::new();
    for b in base {
        for shift in 0..modulus {
            sets.insert(b.iter().fold(0u32, |acc, &r| acc | 1 << ((r + shift) % modulus)));
        }
    }
    Family::from_bits(modulus, sets)
}

/// `K_{n,n,n,n}` on parts `A, B, C, D` without the `A-B` and `C-D` edges,
/// plus every edge between the first `k-1` vertices of `C` and all of `D`.
/// Has no `k` vertex-disjoint triangles.
pub fn four_part_turan(n: usize, k: usize) -> Result<LabeledGraph> {
    if k == 0 || k > n {
        return Err(invalid("need 1 <= k <= n"));
    }
    if 4 * n > 64 {
        return Err(invalid("at most 64 vertices supported"));
    }
    let part = |v: usize| v / n;
    let mut edges = Vec::new();
    for u in 0..4 * n {
        for v in u + 1..4 * n {
            let keep = match (part(u), part(v)) {
                (a, b) if a == b => false,
                (0, 1) => false,
                (2, 3) => u - 2 * n < k - 1,
                _ => true,
            };
            if keep {
                edges.push((u, v));
            }
        }
    }
    LabeledGraph::new(4 * n, edges)?.with_parts((0..4 * n).map(part).collect())
}

pub fn four_part_turan_edges(n: usize, k: usize) -> u64 {
    (4 * n * n + (k - 1) * n) as u64
}

/// Generator names with their parameters, for listings.
#[derive(Clone, Debug, Serialize)]
pub struct ConstructionInfo {
    pub name: &'static str,
    pub params: &'static str,
    pub summary: &'static str,
}

pub fn catalog() -> Vec<ConstructionInfo> {
    let c = |name, params, summary| ConstructionInfo { name, params, summary };
    vec![
        c("diameter_star", "n, d", "full layer d/2 plus a star on the next layer"),
        c("bipartite_22", "m", "two-sided intersecting family of 3m^2-10m+10 sets (2,2)"),
        c("two_sided", "m, k", "two-sided intersecting family in binom(X,Y;k,k)"),
        c("disjoint_free_9", "", "481 subsets of [9] without four pairwise disjoint"),
        c("upset", "n, generators", "all supersets of the given sets"),
        c("partial_quad_system", "k", "the four triples of each of k disjoint 4-blocks"),
        c("forb_from_design", "modulus, base | design", "configuration-free family from a pair design"),
        c("four_part_turan", "n, k", "4n^2+(k-1)n edges of K_{n,n,n,n} without k disjoint triangles"),
    ]
}
