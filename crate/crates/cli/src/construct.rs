//! `construct`: builds a named family or graph and checks it.

use anyhow::{anyhow, bail, Result};
use serde::Serialize;
use serde_json::{Map, Value};
use setlp::constructions as cons;
use setlp::setfam::{
    contains_disjoint_triangles, diameter, has_configuration, is_intersecting, is_two_sided, longest_chain,
    max_pairwise_disjoint, FamilyJson,
};
use setlp::{Family, GraphJson, PatternMatrix, SetCode};

use crate::params::{only, usize_param};

#[derive(Serialize)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
}

#[derive(Serialize)]
pub struct Built {
    pub construction: String,
    pub params: Map<String, Value>,
    pub size: usize,
    /// The closed-form size, when the construction has one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphJson>,
    pub checks: Vec<CheckLine>,
}

impl Built {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn check(name: impl Into<String>, pass: bool) -> CheckLine {
    CheckLine { name: name.into(), pass }
}

/// A family given either as `{"n":..,"sets":[..]}` or as a list of sets
/// with the ground size in `n_key`.
fn family_param(p: &Map<String, Value>, key: &str, n_key: &str) -> Result<Family> {
    let v = p.get(key).ok_or_else(|| anyhow!("missing parameter {key}"))?;
    let j: FamilyJson = match v {
        Value::Object(_) => serde_json::from_value(v.clone())?,
        Value::Array(a) => {
            // a single flat list is one set
            let sets = if a.iter().all(Value::is_number) { Value::Array(vec![v.clone()]) } else { v.clone() };
            FamilyJson { n: usize_param(p, n_key)?, sets: serde_json::from_value(sets)? }
        }
        _ => bail!("parameter {key} must be a family or a list of sets"),
    };
    Ok(Family::try_from(j)?)
}

fn from_family(
    name: &str,
    p: Map<String, Value>,
    f: &Family,
    closed: Option<u64>,
    mut checks: Vec<CheckLine>,
) -> Built {
    if let Some(c) = closed {
        checks.insert(0, check(format!("size {} = closed form {c}", f.len()), f.len() as u64 == c));
    }
    Built {
        construction: name.to_string(),
        params: p,
        size: f.len(),
        closed_form: closed,
        family: Some(f.to_json()),
        graph: None,
        checks,
    }
}

pub fn build(name: &str, p: Map<String, Value>) -> Result<Built> {
    let built = match name {
        "diameter_star" => {
            only(&p, &["n", "d"])?;
            let (n, d) = (usize_param(&p, "n")?, usize_param(&p, "d")?);
            let f = cons::diameter_star(n, d)?;
            let checks = vec![
                check(format!("diameter <= {d}"), diameter(&f)? <= d),
                check("no 3-chain", longest_chain(&f) <= 2),
            ];
            from_family(name, p, &f, Some(cons::diameter_star_size(n, d)), checks)
        }
        "bipartite_22" => {
            only(&p, &["m"])?;
            let m = usize_param(&p, "m")?;
            let f = cons::bipartite_22(m)?;
            let checks = vec![
                check("intersecting", is_intersecting(&f)),
                check("two-sided", is_two_sided(&f, SetCode::full(m))),
            ];
            from_family(name, p, &f, Some(cons::bipartite_22_size(m)), checks)
        }
        "two_sided" => {
            only(&p, &["m", "k"])?;
            let (m, k) = (usize_param(&p, "m")?, usize_param(&p, "k")?);
            let f = cons::two_sided(m, k)?;
            let checks = vec![
                check("intersecting", is_intersecting(&f)),
                check("two-sided", is_two_sided(&f, SetCode::full(m))),
            ];
            from_family(name, p, &f, Some(cons::two_sided_size(m, k)), checks)
        }
        "disjoint_free_9" => {
            only(&p, &[])?;
            let f = cons::disjoint_free_9();
            let checks = vec![check("no 4 pairwise disjoint members", max_pairwise_disjoint(&f) < 4)];
            from_family(name, p, &f, Some(481), checks)
        }
        "upset" => {
            only(&p, &["n", "generators"])?;
            let g = family_param(&p, "generators", "n")?;
            let f = cons::upset(&g)?;
            let full = SetCode::full(f.ground()).0;
            let closed = f.iter().all(|s| (0..f.ground()).all(|e| f.contains(SetCode((s.0 | 1 << e) & full))));
            from_family(name, p, &f, None, vec![check("closed under supersets", closed)])
        }
        "partial_quad_system" => {
            only(&p, &["k"])?;
            let f = cons::partial_quad_system(usize_param(&p, "k")?)?;
            let most = max_pair_multiplicity(&f);
            let checks = vec![
                check("3-uniform", f.iter().all(|s| s.len() == 3)),
                check(format!("every pair in at most 2 members (max {most})"), most <= 2),
            ];
            from_family(name, p, &f, None, checks)
        }
        "forb_from_design" => {
            let design = if p.contains_key("design") {
                only(&p, &["design", "m"])?;
                family_param(&p, "design", "m")?
            } else {
                only(&p, &["modulus", "base"])?;
                let base = p.get("base").ok_or_else(|| anyhow!("missing parameter base (or design)"))?;
                let base: Vec<Vec<usize>> = match base {
                    Value::Array(a) if a.iter().all(Value::is_number) => {
                        vec![serde_json::from_value(base.clone())?]
                    }
                    _ => serde_json::from_value(base.clone())?,
                };
                cons::cyclic_design(usize_param(&p, "modulus")?, &base)?
            };
            let f = cons::forb_from_design(&design)?;
            let free = !has_configuration(&f, &PatternMatrix::two_common_one_private());
            let closed = cons::forb_from_design_size(f.ground());
            from_family(name, p, &f, Some(closed), vec![check("configuration-free", free)])
        }
        "four_part_turan" => {
            only(&p, &["n", "k"])?;
            let (n, k) = (usize_param(&p, "n")?, usize_param(&p, "k")?);
            let g = cons::four_part_turan(n, k)?;
            let closed = cons::four_part_turan_edges(n, k);
            let checks = vec![
                check(format!("edges {} = closed form {closed}", g.edge_count()), g.edge_count() as u64 == closed),
                check(format!("no {k} disjoint triangles"), !contains_disjoint_triangles(&g, k)),
            ];
            Built {
                construction: name.to_string(),
                params: p,
                size: g.edge_count(),
                closed_form: Some(closed),
                family: None,
                graph: Some(g.to_json()),
                checks,
            }
        }
        _ => {
            let names: Vec<&str> = cons::catalog().iter().map(|c| c.name).collect();
            bail!("unknown construction {name:?} (known: {})", names.join(", "))
        }
    };
    Ok(built)
}

fn max_pair_multiplicity(f: &Family) -> usize {
    let n = f.ground();
    let mut most = 0;
    for i in 0..n {
        for j in i + 1..n {
            let pair = 1u32 << i | 1 << j;
            most = most.max(f.bits().iter().filter(|&&b| b & pair == pair).count());
        }
    }
    most
}
