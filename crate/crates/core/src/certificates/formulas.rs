//! Closed-form extremal bounds evaluated in exact rational arithmetic.

use std::collections::BTreeMap;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::encoders::{max_star, multipart_family};
use crate::error::{invalid, Error, Result};

type Q = Ratio<i128>;

/// A formula parameter: an integer or a list of integers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Param {
    Int(i64),
    List(Vec<i64>),
}

pub type Params = BTreeMap<String, Param>;

/// Catalog entry for one formula.
#[derive(Clone, Debug, Serialize)]
pub struct FormulaInfo {
    pub name: &'static str,
    pub params: &'static str,
    pub value: &'static str,
}

pub fn formula_catalog() -> Vec<FormulaInfo> {
    let f = |name, params, value| FormulaInfo { name, params, value };
    vec![
        f("antichain_diameter", "n, d", "binom(n, d/2)"),
        f("chain_free_diameter", "n, d, l", "sum of binom(n, i) for d/2 - min(l-1, d/2) <= i <= d/2"),
        f("uniform_diversity", "n, k", "binom(n-3, k-2)"),
        f("odd_full_diversity", "n", "sum_{i=k+1}^{2k} binom(2k, i) with n = 2k+1"),
        f(
            "even_full_diversity",
            "n",
            "binom(2k-1, k-1)/2 (minus 1/2 if k is a power of 2) + sum_{i>k} binom(2k-1, i), n = 2k",
        ),
        f("nontrivial_intersecting", "n, k", "1 + binom(n-1, k-1) - binom(n-k-1, k-1)"),
        f("bipartite_nontrivial", "n1, n2, k, l", "largest known non-trivial intersecting family in binom(X1,X2;k,l)"),
        f("bipartite_two_sided", "n1, n2, k, l", "largest known two-sided intersecting family in binom(X1,X2;k,l)"),
        f("disjoint_free", "n, s", "(l-1)/s binom(n, m) + sum_{t>m} binom(n, t) with n = s(m+1) - l"),
        f("disjoint_free_two_step", "n, s", "4 disjoint_free(n-2, s), for n = 1 mod s"),
        f("regular_intersecting", "n, k, s", "binom(n,k) / (1 + binom(n-k,k) / binom(n-k-s-2, k-s-2))"),
        f("partite_turan", "parts, k", "sum_{i<j} n_i n_j - n_1 n_2 + n_2 (k-1), parts sorted"),
        f("four_part_join", "parts, k", "(n1+n2+n3) n4 + (k-1) n3"),
        f("forbidden_trace", "m", "5/3 binom(m,2) + m + 2"),
        f("multipart_star", "parts, quotas, k", "largest star of the multipart family"),
        f("rainbow_threshold", "k, d", "(k-1) d"),
    ]
}

fn int(p: &Params, key: &str) -> Result<i64> {
    match p.get(key) {
        Some(Param::Int(v)) => Ok(*v),
        Some(Param::List(_)) => Err(invalid(format!("parameter {key} must be an integer"))),
        None => Err(invalid(format!("missing parameter {key}"))),
    }
}

fn uint(p: &Params, key: &str) -> Result<i128> {
    let v = int(p, key)?;
    if v < 0 {
        return Err(invalid(format!("parameter {key} must be nonnegative")));
    }
    Ok(v as i128)
}

fn list(p: &Params, key: &str) -> Result<Vec<usize>> {
    match p.get(key) {
        Some(Param::List(v)) if v.iter().all(|&x| x >= 0) => Ok(v.iter().map(|&x| x as usize).collect()),
        Some(_) => Err(invalid(format!("parameter {key} must be a list of nonnegative integers"))),
        None => Err(invalid(format!("missing parameter {key}"))),
    }
}

/// Binomial coefficient; zero outside `0 <= k <= n`.
fn c(n: i128, k: i128) -> i128 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn q(v: i128) -> Q {
    Q::from_integer(v)
}

fn exact(v: Q) -> Result<i64> {
    if !v.is_integer() {
        return Err(Error::NonIntegral(format!("{}/{}", v.numer(), v.denom())));
    }
    i64::try_from(v.to_integer()).map_err(|_| invalid("formula value overflows"))
}

/// Value of the named bound. Intermediate values are exact rationals; a
/// non-integral result is an error.
pub fn bound_formula(name: &str, p: &Params) -> Result<i64> {
    exact(evaluate(name, p)?)
}

fn evaluate(name: &str, p: &Params) -> Result<Q> {
    let v = match name {
        "antichain_diameter" => {
            let (n, d) = (uint(p, "n")?, uint(p, "d")?);
            q(c(n, d / 2))
        }
        "chain_free_diameter" => {
            let (n, d, l) = (uint(p, "n")?, uint(p, "d")?, uint(p, "l")?);
            if l == 0 {
                return Err(invalid("need l >= 1"));
            }
            let h = d / 2;
            let s = (l - 1).min(h);
            q((h - s..=h).map(|i| c(n, i)).sum())
        }
        "uniform_diversity" => {
            let (n, k) = (uint(p, "n")?, uint(p, "k")?);
            if n < 3 || k < 2 {
                return Err(invalid("need n >= 3 and k >= 2"));
            }
            q(c(n - 3, k - 2))
        }
        "odd_full_diversity" => {
            let n = uint(p, "n")?;
            if n % 2 == 0 {
                return Err(invalid("n must be odd"));
            }
            let k = n / 2;
            q((k + 1..=2 * k).map(|i| c(2 * k, i)).sum())
        }
        "even_full_diversity" => {
            let n = uint(p, "n")?;
            if n % 2 == 1 || n == 0 {
                return Err(invalid("n must be even and positive"));
            }
            let k = n / 2;
            let mid = if (k as u128).is_power_of_two() { c(2 * k - 1, k - 1) - 1 } else { c(2 * k - 1, k - 1) };
            Q::new(mid, 2) + q((k + 1..2 * k).map(|i| c(2 * k - 1, i)).sum())
        }
        "nontrivial_intersecting" => {
            let (n, k) = (uint(p, "n")?, uint(p, "k")?);
            if k == 0 || 2 * k > n {
                return Err(invalid("need 1 <= k and 2k <= n"));
            }
            q(1 + c(n - 1, k - 1) - c(n - k - 1, k - 1))
        }
        "bipartite_nontrivial" | "bipartite_two_sided" => {
            let (n1, n2, k, l) = (uint(p, "n1")?, uint(p, "n2")?, uint(p, "k")?, uint(p, "l")?);
            if k == 0 || l == 0 || 2 * k > n1 || 2 * l > n2 {
                return Err(invalid("need 1 <= k, 1 <= l, 2k <= n1 and 2l <= n2"));
            }
            // largest non-star families on each side
            let hm = |n: i128, k: i128| c(n - 1, k - 1) - c(n - k - 1, k - 1);
            let (a, b) = if name == "bipartite_nontrivial" {
                ((1 + hm(n1, k)) * c(n2, l), c(n1, k) * (1 + hm(n2, l)))
            } else {
                (hm(n2, l) * c(n1, k) + 1 + c(n1, k) - c(n1 - k, k), hm(n1, k) * c(n2, l) + 1 + c(n2, l) - c(n2 - l, l))
            };
            q(a.max(b))
        }
        "disjoint_free" => {
            let (n, s) = (uint(p, "n")?, uint(p, "s")?);
            disjoint_free(n, s)?
        }
        "disjoint_free_two_step" => {
            let (n, s) = (uint(p, "n")?, uint(p, "s")?);
            if s < 2 || n < 2 || n % s != 1 % s {
                return Err(invalid("need s >= 2 and n = 1 (mod s)"));
            }
            q(4) * disjoint_free(n - 2, s)?
        }
        "regular_intersecting" => {
            let (n, k, s) = (uint(p, "n")?, uint(p, "k")?, uint(p, "s")?);
            let low = c(n - k - s - 2, k - s - 2);
            if k < s + 2 || n < k + s + 2 || low == 0 {
                return Err(invalid("need k >= s + 2 and n >= k + s + 2"));
            }
            q(c(n, k)) / (q(1) + Q::new(c(n - k, k), low))
        }
        "partite_turan" => {
            let mut parts = list(p, "parts")?;
            let k = uint(p, "k")?;
            parts.sort_unstable();
            if parts.len() < 2 || k == 0 || k as usize > parts[0] {
                return Err(invalid("need at least two parts and 1 <= k <= smallest part"));
            }
            let n: Vec<i128> = parts.iter().map(|&x| x as i128).collect();
            let pairs: i128 =
                (0..n.len()).flat_map(|i| (i + 1..n.len()).map(move |j| (i, j))).map(|(i, j)| n[i] * n[j]).sum();
            q(pairs - n[0] * n[1] + n[1] * (k - 1))
        }
        "four_part_join" => {
            let parts = list(p, "parts")?;
            let k = uint(p, "k")?;
            if parts.len() != 4 || k == 0 {
                return Err(invalid("need four parts and k >= 1"));
            }
            let n: Vec<i128> = parts.iter().map(|&x| x as i128).collect();
            q((n[0] + n[1] + n[2]) * n[3] + (k - 1) * n[2])
        }
        "forbidden_trace" => {
            let m = uint(p, "m")?;
            Q::new(5 * c(m, 2), 3) + q(m + 2)
        }
        "multipart_star" => {
            let h = multipart_family(&list(p, "parts")?, &list(p, "quotas")?, uint(p, "k")? as usize)?;
            q(max_star(&h) as i128)
        }
        "rainbow_threshold" => q((uint(p, "k")? - 1).max(0) * uint(p, "d")?),
        _ => return Err(Error::Unknown { kind: "formula", name: name.to_string() }),
    };
    Ok(v)
}

/// Upper bound on a family of subsets of `[n]` without `s` pairwise disjoint
/// members, writing `n = s(m+1) - l` with `1 <= l <= s`.
fn disjoint_free(n: i128, s: i128) -> Result<Q> {
    if s < 2 {
        return Err(invalid("need s >= 2"));
    }
    let m = (n + 1 + s - 1) / s - 1;
    let l = s * (m + 1) - n;
    Ok(Q::new(l - 1, s) * q(c(n, m)) + q((m + 1..=n).map(|t| c(n, t)).sum()))
}

/// Builds a parameter map from `(name, value)` pairs.
pub fn params<const N: usize>(pairs: [(&str, i64); N]) -> Params {
    pairs.into_iter().map(|(k, v)| (k.to_string(), Param::Int(v))).collect()
}
