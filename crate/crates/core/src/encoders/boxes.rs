//! Partitions of a discrete box into proper sub-boxes.

use super::{check_cap, EncodedModel, ProblemSpec, VarObject};
use crate::error::{invalid, Result};
use crate::ilp::{Cmp, IlpModel, Sense};

/// Fewest proper sub-boxes partitioning `[dims[0]] × … × [dims[d-1]]`.
///
/// With `odd_only` every factor of a sub-box has odd size. Exact cover is
/// an equality per cell; `disjoint_pairs` additionally adds `x_B + x_C <= 1`
/// for every intersecting pair, which the equalities already imply.
pub fn box_partition(dims: &[usize], odd_only: bool, disjoint_pairs: bool) -> Result<EncodedModel> {
    if dims.is_empty() {
        return Err(invalid("need at least one dimension"));
    }
    if dims.iter().any(|&a| !(2..=16).contains(&a)) {
        return Err(invalid("every side must have between 2 and 16 elements"));
    }
    let factors: Vec<Vec<u32>> = dims
        .iter()
        .map(|&a| {
            let full = (1u32 << a) - 1;
            (1..full).filter(|m| !odd_only || m.count_ones() % 2 == 1).collect()
        })
        .collect();
    let count = factors.iter().try_fold(1usize, |acc, f| acc.checked_mul(f.len()));
    let count = count.ok_or_else(|| invalid("too many sub-boxes"))?;
    check_cap("sub-box count", count, 1_000_000)?;
    let cells = dims.iter().try_fold(1usize, |acc, &a| acc.checked_mul(a));
    check_cap("cell count", cells.ok_or_else(|| invalid("too many cells"))?, 1_000_000)?;

    let spec = ProblemSpec::BoxPartition { dims: dims.to_vec(), odd_only, disjoint_pairs };
    let dim_tag: Vec<String> = dims.iter().map(|a| a.to_string()).collect();
    let name = format!("box_{}{}", dim_tag.join("x"), if odd_only { "_odd" } else { "" });
    let mut em = EncodedModel::new(IlpModel::new(name, Sense::Minimize), spec, dims.len());

    let mut boxes: Vec<Vec<u32>> = Vec::with_capacity(count);
    let mut digit = vec![0usize; dims.len()];
    'outer: loop {
        boxes.push(digit.iter().zip(&factors).map(|(&i, f)| f[i]).collect());
        for pos in (0..dims.len()).rev() {
            digit[pos] += 1;
            if digit[pos] < factors[pos].len() {
                continue 'outer;
            }
            digit[pos] = 0;
        }
        break;
    }
    let mut vars = Vec::with_capacity(boxes.len());
    for b in &boxes {
        let tag: Vec<String> = b.iter().map(|m| m.to_string()).collect();
        vars.push(em.add_var(format!("b_{}", tag.join("_")), VarObject::Box { masks: b.clone() })?);
    }
    em.model.set_objective(vars.iter().map(|&v| (v, 1)))?;

    let mut cell = vec![0usize; dims.len()];
    'cells: loop {
        let terms: Vec<(usize, i64)> = boxes
            .iter()
            .zip(&vars)
            .filter(|(b, _)| b.iter().zip(&cell).all(|(&m, &c)| m >> c & 1 == 1))
            .map(|(_, &v)| (v, 1))
            .collect();
        em.model.add_constraint(terms, Cmp::Eq, 1)?;
        for pos in (0..dims.len()).rev() {
            cell[pos] += 1;
            if cell[pos] < dims[pos] {
                continue 'cells;
            }
            cell[pos] = 0;
        }
        break;
    }
    if disjoint_pairs {
        for i in 0..boxes.len() {
            for j in i + 1..boxes.len() {
                if boxes[i].iter().zip(&boxes[j]).all(|(a, b)| a & b != 0) {
                    em.model.add_constraint([(vars[i], 1), (vars[j], 1)], Cmp::Le, 1)?;
                }
            }
        }
    }
    Ok(em)
}
