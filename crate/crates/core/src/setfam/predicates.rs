use std::collections::HashSet;

use super::{k_subsets, Family, SetCode};
use crate::error::{Error, Result};

/// No member is a proper subset of another.
pub fn is_antichain(f: &Family) -> bool {
    let m = f.bits();
    for (i, &a) in m.iter().enumerate() {
        for &b in &m[i + 1..] {
            if a & b == a || a & b == b {
                return false;
            }
        }
    }
    true
}

/// Length of the longest chain `A1 ⊊ A2 ⊊ ...` inside `f`; 0 for the empty family.
pub fn longest_chain(f: &Family) -> usize {
    let mut sets: Vec<u32> = f.bits().to_vec();
    sets.sort_by_key(|s| (s.count_ones(), *s));
    let mut best = vec![1usize; sets.len()];
    for i in 0..sets.len() {
        for j in 0..i {
            let (a, b) = (sets[j], sets[i]);
            if a != b && a & b == a && best[j] + 1 > best[i] {
                best[i] = best[j] + 1;
            }
        }
    }
    best.into_iter().max().unwrap_or(0)
}

/// Largest symmetric difference between two members.
pub fn diameter(f: &Family) -> Result<usize> {
    if f.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let m = f.bits();
    let mut d = 0;
    for (i, &a) in m.iter().enumerate() {
        for &b in &m[i + 1..] {
            d = d.max((a ^ b).count_ones() as usize);
        }
    }
    Ok(d)
}

/// Every two distinct members intersect. `{∅}` alone counts as intersecting.
pub fn is_intersecting(f: &Family) -> bool {
    let m = f.bits();
    for (i, &a) in m.iter().enumerate() {
        for &b in &m[i + 1..] {
            if a & b == 0 {
                return false;
            }
        }
    }
    true
}

/// Some two members have traces on `side` that are disjoint, and some two
/// members have disjoint traces on the rest of the ground set.
pub fn is_two_sided(f: &Family, side: SetCode) -> bool {
    let other = SetCode::full(f.ground()).0 & !side.0;
    let splits = |mask: u32| {
        let m = f.bits();
        m.iter().enumerate().any(|(i, &a)| m[i..].iter().any(|&b| a & b & mask == 0))
    };
    splits(side.0) && splits(other)
}

/// `|F| - max_i deg(i)` together with the smallest element attaining the
/// maximum degree (1-based).
pub fn diversity(f: &Family) -> Result<(usize, usize)> {
    if f.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let mut degree = vec![0usize; f.ground()];
    for &m in f.bits() {
        let mut b = m;
        while b != 0 {
            degree[b.trailing_zeros() as usize] += 1;
            b &= b - 1;
        }
    }
    let mut arg = 0;
    for i in 1..degree.len() {
        if degree[i] > degree[arg] {
            arg = i;
        }
    }
    Ok((f.len() - degree[arg], arg + 1))
}

/// Every `s`-subset of the ground set lies in the same number of members.
pub fn is_s_subset_regular(f: &Family, s: usize) -> bool {
    if s > f.ground() {
        return true;
    }
    let mut common: Option<usize> = None;
    for sub in k_subsets(f.ground(), s) {
        let c = f.bits().iter().filter(|&&m| m & sub == sub).count();
        match common {
            None => common = Some(c),
            Some(x) if x != c => return false,
            _ => {}
        }
    }
    true
}

/// No three distinct members with `A ∪ B = C`.
pub fn is_union_free(f: &Family) -> bool {
    let members: HashSet<u32> = f.bits().iter().copied().collect();
    let m = f.bits();
    for (i, &a) in m.iter().enumerate() {
        for &b in &m[i + 1..] {
            let c = a | b;
            if c != a && c != b && members.contains(&c) {
                return false;
            }
        }
    }
    true
}

/// Size of the largest pairwise-disjoint subfamily.
///
/// Members are scanned in order of increasing size; a branch is cut when
/// even the smallest remaining sets cannot fit into the unused part of the
/// ground set.
pub fn max_pairwise_disjoint(f: &Family) -> usize {
    let mut sets: Vec<u32> = f.bits().to_vec();
    sets.sort_by_key(|s| (s.count_ones(), *s));
    let sizes: Vec<usize> = sets.iter().map(|s| s.count_ones() as usize).collect();
    let mut best = 0;
    disjoint_search(&sets, &sizes, 0, 0, 0, f.ground(), &mut best);
    best
}

fn disjoint_search(
    sets: &[u32],
    sizes: &[usize],
    start: usize,
    used: u32,
    count: usize,
    ground: usize,
    best: &mut usize,
) {
    if count > *best {
        *best = count;
    }
    let capacity = ground - used.count_ones() as usize;
    // Sets are size-sorted, so the cheapest way to add t more sets is to take
    // the next t in order.
    let mut room = 0;
    let mut total = 0;
    for &s in &sizes[start.min(sizes.len())..] {
        if total + s > capacity {
            break;
        }
        total += s;
        room += 1;
    }
    if count + room <= *best {
        return;
    }
    for i in start..sets.len() {
        if sets[i] & used != 0 {
            continue;
        }
        if sizes[i] > capacity {
            break;
        }
        disjoint_search(sets, sizes, i + 1, used | sets[i], count + 1, ground, best);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setfam::{enum_subsets, SetCode};

    fn fam(n: usize, labels: &[&str]) -> Family {
        Family::from_digit_labels(n, labels).unwrap()
    }

    /// binom([6],2) ∪ {A ∈ binom([6],3): 1 ∈ A} ∪ {23456}
    fn diameter_family_26() -> Family {
        let two = enum_subsets(6, &[2]).unwrap();
        let star: Vec<u32> = k_subsets(6, 3).into_iter().filter(|s| s & 1 != 0).collect();
        let top = SetCode::from_elements(6, &[2, 3, 4, 5, 6]).unwrap().0;
        Family::from_bits(6, two.bits().iter().copied().chain(star).chain([top])).unwrap()
    }

    #[test]
    fn antichain_examples() {
        assert!(is_antichain(&Family::from_bits(3, [0]).unwrap()));
        assert!(!is_antichain(&fam(2, &["1", "12"])));
        let f = diameter_family_26();
        assert_eq!(f.len(), 26);
        assert!(!is_antichain(&f));
        assert_eq!(longest_chain(&f), 2);
        assert_eq!(diameter(&f).unwrap(), 5);
    }

    #[test]
    fn chain_examples() {
        assert_eq!(longest_chain(&Family::from_bits(3, []).unwrap()), 0);
        assert_eq!(longest_chain(&fam(3, &["1", "12", "123"])), 3);
        assert_eq!(longest_chain(&fam(3, &["1", "2", "3"])), 1);
    }

    #[test]
    fn diameter_examples() {
        assert_eq!(diameter(&fam(4, &["12"])).unwrap(), 0);
        assert_eq!(diameter(&fam(4, &["12", "34"])).unwrap(), 4);
        assert!(matches!(diameter(&Family::from_bits(3, []).unwrap()), Err(Error::EmptyFamily)));
    }

    #[test]
    fn intersecting_examples() {
        let f = fam(7, &["235", "236", "246", "345", "456", "124", "125", "134", "136", "156"]);
        assert!(is_intersecting(&f));
        assert_eq!(diversity(&f).unwrap(), (5, 1));
        assert!(!is_intersecting(&fam(2, &["1", "2"])));
        assert!(is_intersecting(&Family::from_bits(3, [0]).unwrap()));
        assert!(!is_intersecting(&Family::from_bits(3, [0, 1]).unwrap()));
    }

    #[test]
    fn diversity_of_star_is_zero() {
        let star: Vec<u32> = k_subsets(7, 3).into_iter().filter(|s| s & 1 != 0).collect();
        let f = Family::from_bits(7, star).unwrap();
        assert_eq!(diversity(&f).unwrap(), (0, 1));
        assert!(matches!(diversity(&Family::from_bits(3, []).unwrap()), Err(Error::EmptyFamily)));
    }

    #[test]
    fn regularity_examples() {
        assert!(is_s_subset_regular(&enum_subsets(5, &[3]).unwrap(), 1));
        assert!(!is_s_subset_regular(&fam(3, &["12"]), 1));
        assert!(is_s_subset_regular(&fam(3, &["12"]), 0));
    }

    #[test]
    fn union_free_examples() {
        assert!(!is_union_free(&fam(2, &["1", "2", "12"])));
        assert!(is_union_free(&fam(2, &["1", "12"])));
        assert!(is_union_free(&enum_subsets(6, &[3]).unwrap()));
    }

    #[test]
    fn disjoint_examples() {
        assert_eq!(max_pairwise_disjoint(&fam(3, &["1", "2", "3"])), 3);
        assert_eq!(max_pairwise_disjoint(&enum_subsets(9, &[3]).unwrap()), 3);
        assert_eq!(max_pairwise_disjoint(&Family::from_bits(3, []).unwrap()), 0);
        // ∅ is disjoint from everything, including the other members.
        assert_eq!(max_pairwise_disjoint(&Family::from_bits(2, [0, 1, 2]).unwrap()), 3);
    }
}
