//! Set families over a small ground set `[n]`.
//!
//! A subset of `[n]` is a single `u32` bitset: bit `i` is set when element
//! `i + 1` belongs to the set. Element labels are 1-based everywhere outside
//! this module (JSON, LP variable names, CLI output).

mod config;
mod graph;
mod predicates;

pub use config::{configuration_tuples, has_configuration, PatternMatrix};
pub use graph::{contains_disjoint_triangles, has_rainbow_matching, independent_set_layer, GraphJson, LabeledGraph};
pub use predicates::{
    diameter, diversity, is_antichain, is_intersecting, is_s_subset_regular, is_two_sided, is_union_free,
    longest_chain, max_pairwise_disjoint,
};

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported ground size; every subset fits in one `u32`.
pub const MAX_GROUND: usize = 30;

pub(crate) fn check_ground(n: usize) -> Result<()> {
    if n == 0 || n > MAX_GROUND {
        return Err(Error::GroundSize(n));
    }
    Ok(())
}

/// A subset of `[n]` as a bitset.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetCode(pub u32);

impl SetCode {
    pub const EMPTY: SetCode = SetCode(0);

    /// Builds a set from 1-based element labels.
    pub fn from_elements(ground: usize, elements: &[usize]) -> Result<Self> {
        let mut bits = 0u32;
        for &e in elements {
            if e == 0 || e > ground {
                return Err(Error::ElementOutOfRange { element: e, ground });
            }
            bits |= 1 << (e - 1);
        }
        Ok(SetCode(bits))
    }

    /// `[1..=n]` as a set.
    pub fn full(n: usize) -> Self {
        if n >= 32 {
            SetCode(u32::MAX)
        } else {
            SetCode((1u32 << n) - 1)
        }
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Membership test for a 1-based element.
    pub fn contains(self, element: usize) -> bool {
        element >= 1 && element <= 32 && self.0 & (1 << (element - 1)) != 0
    }

    /// 1-based elements in increasing order.
    pub fn elements(self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut b = self.0;
        while b != 0 {
            out.push(b.trailing_zeros() as usize + 1);
            b &= b - 1;
        }
        out
    }

    pub fn is_subset_of(self, other: SetCode) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_proper_subset_of(self, other: SetCode) -> bool {
        self != other && self.is_subset_of(other)
    }

    pub fn is_disjoint(self, other: SetCode) -> bool {
        self.0 & other.0 == 0
    }

    /// `|A △ B|`
    pub fn sym_diff_len(self, other: SetCode) -> usize {
        (self.0 ^ other.0).count_ones() as usize
    }

    pub fn union(self, other: SetCode) -> SetCode {
        SetCode(self.0 | other.0)
    }

    pub fn intersection(self, other: SetCode) -> SetCode {
        SetCode(self.0 & other.0)
    }

    /// Compact label such as `135` (or `1_10_11` when an element exceeds 9).
    pub fn label(self) -> String {
        let el = self.elements();
        if el.is_empty() {
            return "{}".to_string();
        }
        if el.iter().all(|&e| e <= 9) {
            el.iter().map(|e| e.to_string()).collect()
        } else {
            el.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("_")
        }
    }
}

impl fmt::Display for SetCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let el = self.elements();
        write!(f, "{{")?;
        for (i, e) in el.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// Serialized as its sorted 1-based elements.
impl Serialize for SetCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.elements().serialize(s)
    }
}

/// A duplicate-free family of subsets of `[n]`, stored sorted by bit value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Family {
    ground: usize,
    members: Vec<u32>,
}

impl Family {
    /// Builds a family from bitsets; rejects duplicates and out-of-range bits.
    pub fn from_bits(ground: usize, members: impl IntoIterator<Item = u32>) -> Result<Self> {
        check_ground(ground)?;
        let full = SetCode::full(ground).0;
        let mut members: Vec<u32> = members.into_iter().collect();
        for &m in &members {
            if m & !full != 0 {
                let top = 32 - m.leading_zeros() as usize;
                return Err(Error::ElementOutOfRange { element: top, ground });
            }
        }
        members.sort_unstable();
        if let Some(w) = members.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateSet(SetCode(w[0]).elements()));
        }
        Ok(Family { ground, members })
    }

    /// Builds a family from lists of 1-based elements.
    pub fn from_element_lists<S: AsRef<[usize]>>(ground: usize, sets: &[S]) -> Result<Self> {
        check_ground(ground)?;
        let codes =
            sets.iter().map(|s| SetCode::from_elements(ground, s.as_ref()).map(|c| c.0)).collect::<Result<Vec<_>>>()?;
        Family::from_bits(ground, codes)
    }

    /// Parses compact labels like `"235"` (single-digit elements only).
    pub fn from_digit_labels(ground: usize, labels: &[&str]) -> Result<Self> {
        let sets: Vec<Vec<usize>> =
            labels.iter().map(|l| l.chars().map(|c| c.to_digit(10).unwrap_or(0) as usize).collect()).collect();
        Family::from_element_lists(ground, &sets)
    }

    /// Union of two families over the same ground set; shared members kept once.
    pub fn union(&self, other: &Family) -> Result<Family> {
        let ground = self.ground.max(other.ground);
        let set: HashSet<u32> = self.members.iter().chain(&other.members).copied().collect();
        Family::from_bits(ground, set)
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn bits(&self) -> &[u32] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = SetCode> + '_ {
        self.members.iter().map(|&b| SetCode(b))
    }

    pub fn contains(&self, set: SetCode) -> bool {
        self.members.binary_search(&set.0).is_ok()
    }

    /// Members with 1-based elements, sorted lexicographically.
    pub fn canonical_sets(&self) -> Vec<Vec<usize>> {
        let mut sets: Vec<Vec<usize>> = self.iter().map(|s| s.elements()).collect();
        sets.sort();
        sets
    }

    pub fn to_json(&self) -> FamilyJson {
        FamilyJson { n: self.ground, sets: self.canonical_sets() }
    }
}

/// Wire form of a family: `{"n": 7, "sets": [[1,2,3], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub n: usize,
    pub sets: Vec<Vec<usize>>,
}

impl TryFrom<FamilyJson> for Family {
    type Error = Error;

    fn try_from(j: FamilyJson) -> Result<Family> {
        Family::from_element_lists(j.n, &j.sets)
    }
}

impl Serialize for Family {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Family {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = FamilyJson::deserialize(d)?;
        Family::try_from(j).map_err(serde::de::Error::custom)
    }
}

/// All subsets of `[n]` whose size lies in `sizes`, ascending by bit value.
pub fn enum_subsets(n: usize, sizes: &[usize]) -> Result<Family> {
    check_ground(n)?;
    let mut wanted = [false; MAX_GROUND + 1];
    for &s in sizes {
        if s > n {
            return Err(crate::error::invalid(format!("subset size {s} exceeds ground size {n}")));
        }
        wanted[s] = true;
    }
    let mut members = Vec::new();
    for &s in sizes {
        if !wanted[s] {
            continue;
        }
        wanted[s] = false;
        members.extend(k_subsets(n, s));
    }
    members.sort_unstable();
    Ok(Family { ground: n, members })
}

/// All `k`-subsets of `[n]` in colexicographic (= increasing bit value) order.
pub fn k_subsets(n: usize, k: usize) -> Vec<u32> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    if k == 0 {
        out.push(0);
        return out;
    }
    let limit: u64 = 1u64 << n;
    let mut v: u64 = (1u64 << k) - 1;
    while v < limit {
        out.push(v as u32);
        // Gosper's hack: next integer with the same popcount.
        let t = v | (v - 1);
        let w = (t + 1) | (((!t & (t + 1)) - 1) >> (v.trailing_zeros() + 1));
        v = w;
    }
    out
}

/// Binomial coefficient; saturates at `u64::MAX`.
pub fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enum_subsets_counts() {
        assert_eq!(enum_subsets(4, &[2]).unwrap().len(), 6);
        assert_eq!(enum_subsets(3, &[0, 1, 2, 3]).unwrap().len(), 8);
        assert_eq!(enum_subsets(9, &[2, 3]).unwrap().len(), 120);
        let f = enum_subsets(5, &[2, 2, 3]).unwrap();
        assert_eq!(f.len(), 20);
        assert!(f.bits().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn enum_subsets_rejects_bad_ground() {
        assert!(matches!(enum_subsets(0, &[0]), Err(Error::GroundSize(0))));
        assert!(matches!(enum_subsets(31, &[1]), Err(Error::GroundSize(31))));
        assert!(enum_subsets(3, &[4]).is_err());
    }

    #[test]
    fn k_subsets_match_binomials() {
        for n in 0..=12u64 {
            for k in 0..=n {
                assert_eq!(k_subsets(n as usize, k as usize).len() as u64, binom(n, k));
            }
        }
    }

    #[test]
    fn family_rejects_duplicates_and_range() {
        assert!(matches!(Family::from_element_lists(3, &[vec![1, 2], vec![2, 1]]), Err(Error::DuplicateSet(_))));
        assert!(Family::from_element_lists(3, &[vec![4]]).is_err());
        assert!(Family::from_bits(3, [0b1000]).is_err());
    }

    #[test]
    fn family_json_is_canonical() {
        let f = Family::from_digit_labels(4, &["34", "12", "2"]).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"n":4,"sets":[[1,2],[2],[3,4]]}"#);
        let back: Family = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<Family>(r#"{"n":2,"sets":[[3]]}"#).is_err());
    }

    #[test]
    fn setcode_basics() {
        let a = SetCode::from_elements(6, &[1, 3, 5]).unwrap();
        let b = SetCode::from_elements(6, &[3, 4]).unwrap();
        assert_eq!(a.elements(), vec![1, 3, 5]);
        assert_eq!(a.sym_diff_len(b), 3);
        assert_eq!(a.label(), "135");
        assert_eq!(SetCode::from_elements(11, &[1, 10]).unwrap().label(), "1_10");
        assert_eq!(a.to_string(), "{1,3,5}");
        assert!(SetCode::EMPTY.is_proper_subset_of(a));
    }
}
