use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::Family;
use crate::error::{Error, Result};

/// A 0-1 matrix forbidden as a configuration: rows are ground elements,
/// columns are members, and any row/column permutation counts as a match.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<u8>,
}

impl PatternMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<u8>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidPattern("needs at least one row and one column".into()));
        }
        if rows > 16 {
            return Err(Error::InvalidPattern("at most 16 rows are supported".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::InvalidPattern(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        if entries.iter().any(|&e| e > 1) {
            return Err(Error::InvalidPattern("entries must be 0 or 1".into()));
        }
        Ok(PatternMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: &[&[u8]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidPattern("ragged rows".into()));
        }
        PatternMatrix::new(rows.len(), cols, rows.concat())
    }

    /// Two rows of ones over four columns and a row with a single one.
    pub fn two_common_one_private() -> Self {
        PatternMatrix::from_rows(&[&[1, 1, 1, 1], &[1, 1, 1, 1], &[1, 0, 0, 0]]).unwrap()
    }

    /// All `2^k` columns over `k` rows (shattering a `k`-set).
    pub fn shattered(k: usize) -> Self {
        let cols = 1usize << k;
        let mut entries = vec![0u8; k * cols];
        for c in 0..cols {
            for r in 0..k {
                entries[r * cols + c] = ((c >> r) & 1) as u8;
            }
        }
        PatternMatrix::new(k, cols, entries).unwrap()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, row: usize, col: usize) -> u8 {
        self.entries[row * self.cols + col]
    }

    /// Column `c` as a bit vector (bit `r` = entry in row `r`).
    pub fn column_code(&self, col: usize) -> u32 {
        (0..self.rows).fold(0, |acc, r| acc | ((self.entry(r, col) as u32) << r))
    }

    /// Whether this is (a row/column permutation of) the two-common-rows,
    /// one-private-row 3x4 matrix.
    pub fn is_two_common_one_private(&self) -> bool {
        if self.rows != 3 || self.cols != 4 {
            return false;
        }
        let row_sum = |r: usize| (0..4).map(|c| self.entry(r, c) as usize).sum::<usize>();
        let mut sums: Vec<usize> = (0..3).map(row_sum).collect();
        sums.sort_unstable();
        sums == [1, 4, 4]
    }
}

fn column_multiset(p: &PatternMatrix) -> HashMap<u32, usize> {
    let mut need = HashMap::new();
    for c in 0..p.cols() {
        *need.entry(p.column_code(c)).or_insert(0) += 1;
    }
    need
}

/// Calls `visit` with every ordered tuple of `k` distinct elements of `0..n`
/// until it returns `true`.
fn any_ordered_tuple(n: usize, k: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn rec(n: usize, k: usize, used: u32, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return visit(cur);
        }
        for e in 0..n {
            if used & (1 << e) != 0 {
                continue;
            }
            cur.push(e);
            if rec(n, k, used | (1 << e), cur, visit) {
                return true;
            }
            cur.pop();
        }
        false
    }
    rec(n, k, 0, &mut Vec::with_capacity(k), visit)
}

fn trace(set: u32, rows: &[usize]) -> u32 {
    rows.iter().enumerate().fold(0, |acc, (r, &e)| acc | (((set >> e) & 1) << r))
}

/// Whether some `p.cols()` members and `p.rows()` elements of `f` realize `p`
/// up to row and column permutation.
///
/// Every ordered choice of rows is tried; for a fixed row order a column
/// injection exists exactly when each pattern column occurs among the member
/// traces at least as often as in `p`.
pub fn has_configuration(f: &Family, p: &PatternMatrix) -> bool {
    if p.cols() > f.len() || p.rows() > f.ground() {
        return false;
    }
    if p.is_two_common_one_private() {
        return has_two_common_one_private(f);
    }
    realizes_within(f.bits(), f.ground(), p)
}

fn realizes_within(sets: &[u32], ground: usize, p: &PatternMatrix) -> bool {
    let need = column_multiset(p);
    let mut have: HashMap<u32, usize> = HashMap::new();
    any_ordered_tuple(ground, p.rows(), &mut |rows| {
        have.clear();
        for &s in sets {
            *have.entry(trace(s, rows)).or_insert(0) += 1;
        }
        need.iter().all(|(code, &k)| have.get(code).copied().unwrap_or(0) >= k)
    })
}

/// Four members sharing two elements, one of them owning a further element
/// that the other three lack.
fn has_two_common_one_private(f: &Family) -> bool {
    let n = f.ground();
    let mut group = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let pair = (1u32 << a) | (1u32 << b);
            group.clear();
            group.extend(f.bits().iter().copied().filter(|&s| s & pair == pair));
            if group.len() < 4 {
                continue;
            }
            for c in 0..n {
                let inside = group.iter().filter(|&&s| s >> c & 1 == 1).count();
                if inside >= 1 && group.len() - inside >= 3 {
                    return true;
                }
            }
        }
    }
    false
}

/// Every `p.cols()`-subset of `candidates` (as sorted index tuples into
/// `candidates`) whose members alone already realize `p`.
pub fn configuration_tuples(candidates: &[u32], ground: usize, p: &PatternMatrix) -> Vec<Vec<usize>> {
    if p.is_two_common_one_private() {
        return two_common_one_private_tuples(candidates, ground);
    }
    let k = p.cols();
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > candidates.len() {
        return out;
    }
    let mut sets = vec![0u32; k];
    loop {
        for (s, &i) in sets.iter_mut().zip(&idx) {
            *s = candidates[i];
        }
        if realizes_within(&sets, ground, p) {
            out.push(idx.clone());
        }
        // next combination
        let mut i = k;
        while i > 0 && idx[i - 1] == candidates.len() - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out
}

fn two_common_one_private_tuples(candidates: &[u32], ground: usize) -> Vec<Vec<usize>> {
    let mut found: BTreeSet<[usize; 4]> = BTreeSet::new();
    for a in 0..ground {
        for b in a + 1..ground {
            let pair = (1u32 << a) | (1u32 << b);
            let group: Vec<usize> = (0..candidates.len()).filter(|&i| candidates[i] & pair == pair).collect();
            let g = group.len();
            if g < 4 {
                continue;
            }
            for i in 0..g {
                for j in i + 1..g {
                    for k in j + 1..g {
                        for l in k + 1..g {
                            let t = [group[i], group[j], group[k], group[l]];
                            let s = t.map(|x| candidates[x]);
                            if has_private_element(&s) {
                                found.insert(t);
                            }
                        }
                    }
                }
            }
        }
    }
    found.into_iter().map(|t| t.to_vec()).collect()
}

fn has_private_element(s: &[u32; 4]) -> bool {
    // elements covered exactly once
    let once = (s[0] & !(s[1] | s[2] | s[3]))
        | (s[1] & !(s[0] | s[2] | s[3]))
        | (s[2] & !(s[0] | s[1] | s[3]))
        | (s[3] & !(s[0] | s[1] | s[2]));
    once != 0
}
