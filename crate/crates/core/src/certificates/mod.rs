//! Stored counterexample families and a verifier that recomputes every
//! claimed quantity from the payload.
//!
//! A certificate is a JSON document holding a family or graph, a set of
//! claimed invariants, and the published bounds those invariants beat. The
//! verifier never trusts a claim: each one is recomputed with the
//! [`crate::setfam`] predicates or [`bound_formula`] and compared exactly.

mod formulas;

pub use formulas::{bound_formula, formula_catalog, params, FormulaInfo, Param, Params};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::encoders::{max_star, multipart_family, ProblemSpec};
use crate::error::{Error, Result};
use crate::setfam::{
    contains_disjoint_triangles, diameter, diversity, has_rainbow_matching, is_intersecting, is_s_subset_regular,
    is_two_sided, k_subsets, longest_chain, max_pairwise_disjoint, Family, GraphJson, LabeledGraph, SetCode,
};

/// One layer of a rule-based family: the `size`-subsets of the ground set
/// that contain every element of `containing`, avoid `avoiding`, and meet
/// `meeting` when it is nonempty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerRule {
    pub size: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub containing: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub avoiding: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub meeting: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Payload {
    /// Listed sets together with any rule-based layers.
    Sets {
        n: usize,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        sets: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        layers: Vec<LayerRule>,
    },
    /// Every subset of `[n]` containing one of the listed sets.
    Upset {
        n: usize,
        sets: Vec<Vec<usize>>,
    },
    /// Bipartite graphs on `[n]`; graph `i` has left class `left[i]`.
    BipartiteGraphs {
        n: usize,
        left: Vec<Vec<usize>>,
        graphs: Vec<Vec<[usize; 2]>>,
    },
    Graph {
        graph: GraphJson,
    },
}

/// Claimed invariants; absent fields are not checked.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Claims {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    /// Every member has this many elements.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uniform: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diversity: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diameter: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub longest_chain: Option<usize>,
    /// Largest number of pairwise disjoint members.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_disjoint: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intersecting: Option<bool>,
    /// No element lies in every member.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub non_trivial: Option<bool>,
    /// Two-sided with respect to the first side of the bipartite problem.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub two_sided: Option<bool>,
    /// Every member is a candidate set of the stated problem.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub within_problem: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_star: Option<usize>,
    /// Every subset of this size lies in equally many members.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subset_regular: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph_sizes: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rainbow_matching: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<usize>,
    /// Largest number of vertex-disjoint triangles.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triangle_packing: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Size,
    Diversity,
    Edges,
    /// Edge count of the smallest graph in a sequence.
    MinGraphSize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// Strictly larger than the bound.
    Exceeds,
    Equals,
}

/// A published bound compared against a recomputed quantity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundClaim {
    pub quantity: Quantity,
    pub formula: String,
    pub params: Params,
    pub relation: Relation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub id: String,
    /// What the payload is, in words.
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problem: Option<ProblemSpec>,
    pub payload: Payload,
    pub claims: Claims,
    #[serde(default)]
    pub bounds: Vec<BoundClaim>,
}

impl Certificate {
    pub fn from_json(text: &str) -> Result<Certificate> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }

    /// The stored family, expanded from layer rules or generators; `None`
    /// for graph payloads.
    pub fn family(&self) -> Result<Option<Family>> {
        Ok(match materialize(&self.payload)? {
            Object::Family(f) => Some(f),
            _ => None,
        })
    }
}

macro_rules! store {
    ($($id:literal),* $(,)?) => {
        const STORE: &[(&str, &str)] = &[
            $(($id, include_str!(concat!("../../data/certificates/", $id, ".json")))),*
        ];
    };
}

store!(
    "chain_diameter_6_5",
    "chain_diameter_8_7",
    "chain_diameter_9_7",
    "diversity_7_3",
    "full_diversity_7",
    "full_diversity_9",
    "full_diversity_10",
    "bipartite_5_5",
    "multipart_3_4",
    "multipart_4_4",
    "regular_intersecting_11_5_3",
    "disjoint_free_9_4",
    "rainbow_6_3_2",
    "triangle_packing_2_2",
);

/// Catalog entry of a stored certificate.
#[derive(Clone, Debug, Serialize)]
pub struct CertificateInfo {
    pub id: &'static str,
    pub source: String,
}

/// Ids of the stored certificates, in catalog order.
pub fn list_certificates() -> Vec<CertificateInfo> {
    STORE
        .iter()
        .map(|&(id, text)| CertificateInfo {
            id,
            source: Certificate::from_json(text).map(|c| c.source).unwrap_or_default(),
        })
        .collect()
}

/// Raw JSON of a stored certificate.
pub fn certificate_json(id: &str) -> Result<&'static str> {
    STORE
        .iter()
        .find(|(i, _)| *i == id)
        .map(|&(_, text)| text)
        .ok_or_else(|| Error::Unknown { kind: "certificate", name: id.to_string() })
}

pub fn certificate(id: &str) -> Result<Certificate> {
    Certificate::from_json(certificate_json(id)?)
}

/// Outcome of one recomputed quantity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub found: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub id: String,
    pub checks: Vec<Check>,
}

impl Report {
    /// At least one check ran and all of them passed.
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    fn push(&mut self, name: impl Into<String>, expected: impl fmt::Display, found: impl fmt::Display, pass: bool) {
        self.checks.push(Check { name: name.into(), expected: expected.to_string(), found: found.to_string(), pass });
    }

    fn compare<T: PartialEq + fmt::Debug>(&mut self, name: &str, claimed: &Option<T>, found: impl FnOnce() -> T) {
        if let Some(c) = claimed {
            let f = found();
            let pass = *c == f;
            self.push(name, format!("{c:?}"), format!("{f:?}"), pass);
        }
    }

    /// Like `compare` for quantities that may be undefined.
    fn compare_opt<T: PartialEq + fmt::Debug>(&mut self, name: &str, claimed: &Option<T>, found: Option<T>) {
        if let Some(c) = claimed {
            match found {
                Some(f) => {
                    let pass = *c == f;
                    self.push(name, format!("{c:?}"), format!("{f:?}"), pass);
                }
                None => self.push(name, format!("{c:?}"), "undefined", false),
            }
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        writeln!(f, "{verdict} {}", self.id)?;
        for c in &self.checks {
            let mark = if c.pass { "ok  " } else { "FAIL" };
            writeln!(f, "  {mark} {}: expected {}, found {}", c.name, c.expected, c.found)?;
        }
        Ok(())
    }
}

enum Object {
    Family(Family),
    Graphs(Vec<Vec<(usize, usize)>>),
    Graph(LabeledGraph),
}

fn layer(n: usize, rule: &LayerRule) -> Result<Vec<u32>> {
    let code = |els: &[usize]| SetCode::from_elements(n, els).map(|s| s.0);
    let (inc, exc, meet) = (code(&rule.containing)?, code(&rule.avoiding)?, code(&rule.meeting)?);
    if rule.size > n {
        return Err(crate::error::invalid(format!("layer size {} exceeds ground size {n}", rule.size)));
    }
    Ok(k_subsets(n, rule.size)
        .into_iter()
        .filter(|&s| s & inc == inc && s & exc == 0 && (meet == 0 || s & meet != 0))
        .collect())
}

fn materialize(p: &Payload) -> Result<Object> {
    match p {
        Payload::Sets { n, sets, layers } => {
            let listed = Family::from_element_lists(*n, sets)?;
            let mut bits = listed.bits().to_vec();
            for rule in layers {
                bits.extend(layer(*n, rule)?);
            }
            Ok(Object::Family(Family::from_bits(*n, bits)?))
        }
        Payload::Upset { n, sets } => {
            let gens = Family::from_element_lists(*n, sets)?;
            Ok(Object::Family(crate::constructions::upset(&gens)?))
        }
        Payload::BipartiteGraphs { n, left, graphs } => {
            if left.len() != graphs.len() {
                return Err(crate::error::invalid("one left class per graph expected"));
            }
            let mut out = Vec::new();
            for (l, g) in left.iter().zip(graphs) {
                let lmask = SetCode::from_elements(*n, l)?;
                let mut edges = Vec::new();
                for &[a, b] in g {
                    // validates the labels
                    SetCode::from_elements(*n, &[a, b])?;
                    if lmask.contains(a) == lmask.contains(b) {
                        return Err(Error::InvalidGraph(format!("edge {a}-{b} does not cross the bipartition")));
                    }
                    edges.push((a, b));
                }
                // rejects loops and repeated edges
                LabeledGraph::new(n + 1, edges.iter().copied())?;
                out.push(edges);
            }
            Ok(Object::Graphs(out))
        }
        Payload::Graph { graph } => Ok(Object::Graph(LabeledGraph::try_from(graph.clone())?)),
    }
}

fn within_problem(f: &Family, problem: &Option<ProblemSpec>) -> std::result::Result<bool, String> {
    match problem {
        Some(ProblemSpec::BipartiteEkr { n1, n2, k, l, .. }) => {
            let x = SetCode::full(*n1).0;
            Ok(f.ground() == n1 + n2
                && f.bits()
                    .iter()
                    .all(|&s| (s & x).count_ones() as usize == *k && (s & !x).count_ones() as usize == *l))
        }
        Some(ProblemSpec::MultipartEkr { parts, quotas, k }) => {
            let h = multipart_family(parts, quotas, *k).map_err(|e| e.to_string())?;
            Ok(f.ground() == h.ground() && f.iter().all(|s| h.contains(s)))
        }
        Some(ProblemSpec::DiversityUniform { n, k }) => Ok(f.ground() == *n && f.iter().all(|s| s.len() == *k)),
        _ => Err("no membership rule for this problem".into()),
    }
}

fn max_degree(graphs: &[Vec<(usize, usize)>]) -> usize {
    let mut best = 0;
    for g in graphs {
        let mut deg = std::collections::HashMap::new();
        for &(a, b) in g {
            *deg.entry(a).or_insert(0usize) += 1;
            *deg.entry(b).or_insert(0usize) += 1;
        }
        best = best.max(deg.values().copied().max().unwrap_or(0));
    }
    best
}

fn triangle_packing(g: &LabeledGraph) -> usize {
    let mut k = 0;
    while contains_disjoint_triangles(g, k + 1) {
        k += 1;
    }
    k
}

/// Recomputes every claim and bound of `c`. Problems with the payload show
/// up as failed checks.
pub fn verify_certificate(c: &Certificate) -> Report {
    let mut r = Report { id: c.id.clone(), checks: Vec::new() };
    let obj = match materialize(&c.payload) {
        Ok(o) => o,
        Err(e) => {
            r.push("payload", "a valid payload", e, false);
            return r;
        }
    };
    let cl = &c.claims;
    let mut quantity: Vec<(Quantity, usize)> = Vec::new();
    match &obj {
        Object::Family(f) => {
            quantity.push((Quantity::Size, f.len()));
            r.compare("size", &cl.size, || f.len());
            if cl.uniform.is_some() {
                let k = f.iter().next().map(|s| s.len());
                r.compare_opt("uniform", &cl.uniform, k.filter(|&k| f.iter().all(|s| s.len() == k)));
            }
            let div = diversity(f).map(|d| d.0).ok();
            if let Some(d) = div {
                quantity.push((Quantity::Diversity, d));
            }
            r.compare_opt("diversity", &cl.diversity, div);
            if cl.diameter.is_some() {
                r.compare_opt("diameter", &cl.diameter, diameter(f).ok());
            }
            r.compare("longest_chain", &cl.longest_chain, || longest_chain(f));
            r.compare("max_disjoint", &cl.max_disjoint, || max_pairwise_disjoint(f));
            r.compare("intersecting", &cl.intersecting, || is_intersecting(f));
            r.compare("non_trivial", &cl.non_trivial, || max_star(f) < f.len());
            r.compare("max_star", &cl.max_star, || max_star(f));
            if let Some(s) = cl.subset_regular {
                let ok = is_s_subset_regular(f, s);
                r.push("subset_regular", format!("{s}-subset-regular"), ok, ok);
            }
            if let Some(claim) = cl.two_sided {
                match &c.problem {
                    Some(ProblemSpec::BipartiteEkr { n1, .. }) => {
                        r.compare("two_sided", &Some(claim), || is_two_sided(f, SetCode::full(*n1)))
                    }
                    _ => r.push("two_sided", claim, "no bipartite problem given", false),
                }
            }
            if let Some(claim) = cl.within_problem {
                match within_problem(f, &c.problem) {
                    Ok(v) => r.compare("within_problem", &Some(claim), || v),
                    Err(e) => r.push("within_problem", claim, e, false),
                }
            }
        }
        Object::Graphs(gs) => {
            let sizes: Vec<usize> = gs.iter().map(|g| g.len()).collect();
            quantity.push((Quantity::MinGraphSize, sizes.iter().copied().min().unwrap_or(0)));
            r.compare("graph_sizes", &cl.graph_sizes, || sizes.clone());
            r.compare("max_degree", &cl.max_degree, || max_degree(gs));
            r.compare("rainbow_matching", &cl.rainbow_matching, || has_rainbow_matching(gs));
        }
        Object::Graph(g) => {
            quantity.push((Quantity::Edges, g.edge_count()));
            r.compare("edges", &cl.edges, || g.edge_count());
            r.compare("triangle_packing", &cl.triangle_packing, || triangle_packing(g));
        }
    }
    let family_only = [
        cl.size.is_some(),
        cl.uniform.is_some(),
        cl.diversity.is_some(),
        cl.diameter.is_some(),
        cl.longest_chain.is_some(),
        cl.max_disjoint.is_some(),
        cl.intersecting.is_some(),
        cl.non_trivial.is_some(),
        cl.max_star.is_some(),
        cl.subset_regular.is_some(),
        cl.two_sided.is_some(),
        cl.within_problem.is_some(),
    ];
    let graphs_only = [cl.graph_sizes.is_some(), cl.max_degree.is_some(), cl.rainbow_matching.is_some()];
    let graph_only = [cl.edges.is_some(), cl.triangle_packing.is_some()];
    let stray = match obj {
        Object::Family(_) => graphs_only.iter().chain(&graph_only).any(|&b| b),
        Object::Graphs(_) => family_only.iter().chain(&graph_only).any(|&b| b),
        Object::Graph(_) => family_only.iter().chain(&graphs_only).any(|&b| b),
    };
    if stray {
        r.push("claims", "claims that apply to the payload", "claims for another payload kind", false);
    }
    for b in &c.bounds {
        let name = format!("bound {}", describe(b));
        let Some(&(_, value)) = quantity.iter().find(|(q, _)| *q == b.quantity) else {
            r.push(name, format!("{:?}", b.quantity), "quantity not available for this payload", false);
            continue;
        };
        match bound_formula(&b.formula, &b.params) {
            Ok(bound) => {
                let v = value as i64;
                let (want, pass) = match b.relation {
                    Relation::Exceeds => (format!("> {bound}"), v > bound),
                    Relation::Equals => (format!("= {bound}"), v == bound),
                };
                r.push(name, want, v, pass);
            }
            Err(e) => r.push(name, "a valid formula", e, false),
        }
    }
    r
}

fn describe(b: &BoundClaim) -> String {
    let args: Vec<String> = b
        .params
        .iter()
        .map(|(k, v)| match v {
            Param::Int(i) => format!("{k}={i}"),
            Param::List(l) => format!("{k}={l:?}"),
        })
        .collect();
    let q = serde_json::to_value(b.quantity).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    format!("{q} vs {}({})", b.formula, args.join(","))
}

/// Parses and verifies a certificate document; parse errors become a failed
/// report.
pub fn verify_json(text: &str) -> Report {
    match Certificate::from_json(text) {
        Ok(c) => verify_certificate(&c),
        Err(e) => Report {
            id: "<unparsed>".into(),
            checks: vec![Check {
                name: "parse".into(),
                expected: "a certificate document".into(),
                found: e.to_string(),
                pass: false,
            }],
        },
    }
}

/// Verifies a stored certificate by id.
pub fn verify_id(id: &str) -> Result<Report> {
    Ok(verify_json(certificate_json(id)?))
}
