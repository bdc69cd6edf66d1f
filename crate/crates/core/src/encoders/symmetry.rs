//! Ordering constraints that cut away relabeled copies of solutions.
//!
//! Element transpositions and family swaps are tested directly against the
//! model: a swap is kept only when it maps the objective, every constraint
//! and every pin onto the model itself. Kept transpositions generate the
//! full symmetric group on each connected block, so any solution can be
//! relabeled to have non-increasing degrees inside every block and
//! non-increasing family sizes, without changing its value.

use std::collections::{HashMap, HashSet};

use super::{EncodedModel, VarObject};
use crate::error::Result;
use crate::ilp::{Cmp, LinConstraint};
use crate::setfam::SetCode;

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a.max(b)] = a.min(b);
    }

    fn blocks(&mut self) -> Vec<Vec<usize>> {
        let mut by_root: HashMap<usize, Vec<usize>> = HashMap::new();
        for x in 0..self.0.len() {
            let r = self.find(x);
            by_root.entry(r).or_default().push(x);
        }
        let mut out: Vec<Vec<usize>> = by_root.into_values().filter(|b| b.len() > 1).collect();
        out.sort();
        out
    }
}

fn swap_bits(s: u32, i: usize, j: usize) -> u32 {
    let (bi, bj) = (s >> i & 1, s >> j & 1);
    if bi == bj {
        s
    } else {
        s ^ (1 << i) ^ (1 << j)
    }
}

struct Found {
    elem_blocks: Vec<Vec<usize>>,
    class_blocks: Vec<Vec<usize>>,
    /// Variable permutation for swapping two elements, if it exists.
    elem_perm: Box<dyn Fn(usize, usize) -> Option<Vec<usize>>>,
    class_perm: Box<dyn Fn(usize, usize) -> Option<Vec<usize>>>,
}

fn class_key(o: &VarObject) -> Option<(usize, u64)> {
    match o {
        VarObject::Set { class, set } => Some((*class, set.0 as u64)),
        VarObject::Color { vertex, color } => Some((*color, *vertex as u64)),
        _ => None,
    }
}

fn detect(em: &EncodedModel) -> Found {
    let rows: HashSet<&LinConstraint> = em.model.constraints().iter().collect();
    let nv = em.objects.len();

    let classes = em.objects.iter().filter_map(class_key).map(|k| k.0 + 1).max().unwrap_or(0);
    let index: HashMap<(usize, u64), usize> =
        em.objects.iter().enumerate().filter_map(|(v, o)| class_key(o).map(|k| (k, v))).collect();
    let objects = em.objects.clone();
    let class_perm = move |a: usize, b: usize| -> Option<Vec<usize>> {
        let swap = |x: usize| {
            if x == a {
                b
            } else if x == b {
                a
            } else {
                x
            }
        };
        objects
            .iter()
            .enumerate()
            .map(|(v, o)| match class_key(o) {
                Some((cl, id)) => index.get(&(swap(cl), id)).copied(),
                None => Some(v),
            })
            .collect()
    };
    let mut class_uf = UnionFind((0..classes).collect());
    for c in 1..classes {
        if class_perm(c - 1, c).is_some_and(|p| em.model.is_automorphism_with(&p, &rows)) {
            class_uf.union(c - 1, c);
        }
    }

    // element transpositions, on set variables only
    let sets: HashMap<(usize, u32), usize> = em
        .objects
        .iter()
        .enumerate()
        .filter_map(|(v, o)| match o {
            VarObject::Set { class, set } => Some(((*class, set.0), v)),
            _ => None,
        })
        .collect();
    let all_sets = !sets.is_empty() && sets.len() == nv;
    let objects = em.objects.clone();
    let elem_perm = move |i: usize, j: usize| -> Option<Vec<usize>> {
        if !all_sets {
            return None;
        }
        objects
            .iter()
            .map(|o| match o {
                VarObject::Set { class, set } => sets.get(&(*class, swap_bits(set.0, i, j))).copied(),
                _ => None,
            })
            .collect()
    };
    let ground = em.ground;
    let mut elem_uf = UnionFind((0..ground).collect());
    if all_sets {
        for i in 0..ground {
            for j in i + 1..ground {
                if elem_uf.find(i) == elem_uf.find(j) {
                    continue;
                }
                if elem_perm(i, j).is_some_and(|p| em.model.is_automorphism_with(&p, &rows)) {
                    elem_uf.union(i, j);
                }
            }
        }
    }
    Found {
        elem_blocks: elem_uf.blocks(),
        class_blocks: class_uf.blocks(),
        elem_perm: Box::new(elem_perm),
        class_perm: Box::new(class_perm),
    }
}

/// Variable permutations preserving the model: every element transposition
/// and family swap inside a detected block. Each block's transpositions
/// generate its full symmetric group, so all of them are automorphisms.
pub(super) fn generators(em: &EncodedModel) -> Vec<Vec<usize>> {
    let f = detect(em);
    let mut out = Vec::new();
    for (blocks, perm) in [(&f.elem_blocks, &f.elem_perm), (&f.class_blocks, &f.class_perm)] {
        for b in blocks {
            for (x, &i) in b.iter().enumerate() {
                for &j in &b[x + 1..] {
                    out.extend(perm(i, j));
                }
            }
        }
    }
    out
}

/// Adds degree and family-size ordering constraints for every symmetry
/// found; returns the number of constraints added.
pub(super) fn add_ordering(em: &mut EncodedModel) -> Result<usize> {
    let Found { elem_blocks, class_blocks, .. } = detect(em);
    let mut added = 0;
    for b in &class_blocks {
        for w in b.windows(2) {
            let size = |c: usize| {
                em.objects.iter().enumerate().filter(move |(_, o)| {
                    matches!(o, VarObject::Set { class, .. } | VarObject::Color { color: class, .. } if *class == c)
                })
            };
            let terms: Vec<(usize, i64)> =
                size(w[0]).map(|(v, _)| (v, 1)).chain(size(w[1]).map(|(v, _)| (v, -1))).collect();
            if em.model.add_constraint(terms, Cmp::Ge, 0)?.is_some() {
                added += 1;
            }
        }
    }
    for b in &elem_blocks {
        for w in b.windows(2) {
            let (a, c) = (w[0], w[1]);
            let terms: Vec<(usize, i64)> = em
                .objects
                .iter()
                .enumerate()
                .filter_map(|(v, o)| match o {
                    VarObject::Set { class: 0, set } => {
                        let coef = set.contains(a + 1) as i64 - set.contains(c + 1) as i64;
                        (coef != 0).then_some((v, coef))
                    }
                    _ => None,
                })
                .collect();
            if terms.is_empty() {
                continue;
            }
            if em.model.add_constraint(terms, Cmp::Ge, 0)?.is_some() {
                added += 1;
            }
        }
    }
    if added > 0 {
        let show = |bs: &[Vec<usize>]| {
            bs.iter().map(|b| SetCode(b.iter().fold(0u32, |m, &e| m | 1 << e)).label()).collect::<Vec<_>>().join(" ")
        };
        em.model.add_comment(format!(
            "symmetry ordering: element blocks [{}], family blocks [{}]",
            show(&elem_blocks),
            show(&class_blocks)
        ));
    }
    Ok(added)
}
