//! Model builders: one per extremal problem.
//!
//! Every builder is a pure function from parameters to an [`EncodedModel`],
//! which keeps the 0-1 model together with the combinatorial object behind
//! each variable so that solver output can be decoded and re-checked.

mod boxes;
mod graphs;
mod intersecting;
mod lattice;
mod symmetry;
mod witness;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::ilp::IlpModel;
use crate::setfam::{LabeledGraph, SetCode};

pub use boxes::box_partition;
pub use graphs::{coloring, multipartite_turan, rainbow};
pub use intersecting::{bipartite_ekr, diversity_full, diversity_uniform, max_star, multipart_ekr, multipart_family};
pub use lattice::{
    design, diameter_antichain, forb, geodesic_blocker, kleitman, neighborhood, path_antichain_layers, poset_antichain,
    sperner, unionfree_cover,
};
pub use witness::{Witness, WitnessReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum NeighborhoodMode {
    /// Smallest possible neighborhood.
    Min,
    /// Largest possible neighborhood.
    Max,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EkrMode {
    /// Intersecting but with no element common to all members.
    Nontrivial,
    /// Pairs of members whose traces on each side are disjoint.
    TwoSided,
}

fn default_true() -> bool {
    true
}

/// Problem parameters, one variant per builder. Ground elements, vertices
/// and block members are 1-based in this type.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "problem", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProblemSpec {
    Sperner {
        n: usize,
    },
    PosetAntichain {
        graph: LabeledGraph,
        /// Allowed set sizes; empty means every size.
        #[serde(default)]
        layers: Vec<usize>,
        chain_len: usize,
    },
    Neighborhood {
        n: usize,
        r: usize,
        k: usize,
        d: usize,
        m: usize,
        mode: NeighborhoodMode,
    },
    Coloring {
        graph: LabeledGraph,
        c: usize,
    },
    UnionfreeCover {
        n: usize,
        c: usize,
    },
    BoxPartition {
        dims: Vec<usize>,
        #[serde(default)]
        odd_only: bool,
        #[serde(default = "default_true")]
        disjoint_pairs: bool,
    },
    GeodesicBlocker {
        n: usize,
    },
    DiameterAntichain {
        n: usize,
        d: usize,
        chain_len: usize,
    },
    DiversityUniform {
        n: usize,
        k: usize,
    },
    DiversityFull {
        n: usize,
    },
    BipartiteEkr {
        n1: usize,
        n2: usize,
        k: usize,
        l: usize,
        mode: EkrMode,
    },
    MultipartEkr {
        parts: Vec<usize>,
        quotas: Vec<usize>,
        k: usize,
    },
    Forb {
        m: usize,
        /// Pattern rows; the default is two full rows over a row with one 1.
        #[serde(default)]
        pattern: Option<Vec<Vec<u8>>>,
        /// Member sizes searched; empty means `2..=m`.
        #[serde(default)]
        sizes: Vec<usize>,
    },
    Design {
        m: usize,
        block_size: usize,
        lambda: usize,
        #[serde(default)]
        required: Vec<Vec<usize>>,
    },
    Kleitman {
        n: usize,
        s: usize,
        /// Member sizes searched; empty means every size.
        #[serde(default)]
        sizes: Vec<usize>,
    },
    Rainbow {
        n: usize,
        k: usize,
        d: usize,
        /// Left class of each bipartite graph; the right class is the rest.
        left: Vec<Vec<usize>>,
    },
    MultipartiteTuran {
        parts: Vec<usize>,
        k: usize,
    },
}

impl ProblemSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ProblemSpec::Sperner { .. } => "sperner",
            ProblemSpec::PosetAntichain { .. } => "poset_antichain",
            ProblemSpec::Neighborhood { .. } => "neighborhood",
            ProblemSpec::Coloring { .. } => "coloring",
            ProblemSpec::UnionfreeCover { .. } => "unionfree_cover",
            ProblemSpec::BoxPartition { .. } => "box_partition",
            ProblemSpec::GeodesicBlocker { .. } => "geodesic_blocker",
            ProblemSpec::DiameterAntichain { .. } => "diameter_antichain",
            ProblemSpec::DiversityUniform { .. } => "diversity_uniform",
            ProblemSpec::DiversityFull { .. } => "diversity_full",
            ProblemSpec::BipartiteEkr { .. } => "bipartite_ekr",
            ProblemSpec::MultipartEkr { .. } => "multipart_ekr",
            ProblemSpec::Forb { .. } => "forb",
            ProblemSpec::Design { .. } => "design",
            ProblemSpec::Kleitman { .. } => "kleitman",
            ProblemSpec::Rainbow { .. } => "rainbow",
            ProblemSpec::MultipartiteTuran { .. } => "multipartite_turan",
        }
    }
}

/// What a variable stands for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VarObject {
    /// Membership of a set in family number `class`.
    Set { class: usize, set: SetCode },
    /// Vertex `vertex` receives color `color`.
    Color { vertex: usize, color: usize },
    /// Edge `{u, v}` (0-based) belongs to graph number `graph`.
    Edge { graph: usize, u: usize, v: usize },
    /// Sub-box given by one element mask per coordinate.
    Box { masks: Vec<u32> },
}

/// A model plus the meaning of each of its variables.
#[derive(Clone, Debug)]
pub struct EncodedModel {
    pub model: IlpModel,
    /// `objects[v]` is what variable `v` encodes.
    pub objects: Vec<VarObject>,
    pub spec: ProblemSpec,
    /// Size of the ground set (or vertex count) the objects live on.
    pub ground: usize,
}

impl EncodedModel {
    fn new(model: IlpModel, spec: ProblemSpec, ground: usize) -> Self {
        let mut em = EncodedModel { model, objects: Vec::new(), spec, ground };
        let line = serde_json::to_string(&em.spec).unwrap_or_default();
        em.model.add_comment(format!("spec {line}"));
        em
    }

    pub(crate) fn add_var(&mut self, name: String, obj: VarObject) -> Result<usize> {
        let v = self.model.add_binary_var(name)?;
        self.objects.push(obj);
        Ok(v)
    }

    /// Variable index of set `s` in family `class`, if present.
    pub fn set_var(&self, class: usize, s: SetCode) -> Option<usize> {
        self.objects.iter().position(|o| matches!(o, VarObject::Set { class: c, set } if *c == class && *set == s))
    }

    /// Variable permutations that map the model onto itself, from element
    /// relabelings and family swaps; suitable for `SolveConfig::symmetries`.
    pub fn symmetry_generators(&self) -> Vec<Vec<usize>> {
        symmetry::generators(self)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodeOptions {
    /// Add ordering constraints that remove relabelings of the ground set
    /// and of interchangeable families. Optimal values are unchanged.
    #[serde(default)]
    pub symmetry: bool,
    /// Keep only these set sizes free and pin the rest by the problem's
    /// heuristic rule. The result is then a restricted search.
    #[serde(default)]
    pub restrict: Option<Vec<usize>>,
}

/// Builds the model for `spec`.
pub fn encode(spec: &ProblemSpec, opts: &EncodeOptions) -> Result<EncodedModel> {
    let mut em = match spec {
        ProblemSpec::Sperner { n } => sperner(*n)?,
        ProblemSpec::PosetAntichain { graph, layers, chain_len } => poset_antichain(graph, layers, *chain_len)?,
        ProblemSpec::Neighborhood { n, r, k, d, m, mode } => neighborhood(*n, *r, *k, *d, *m, *mode)?,
        ProblemSpec::Coloring { graph, c } => coloring(graph, *c)?,
        ProblemSpec::UnionfreeCover { n, c } => unionfree_cover(*n, *c)?,
        ProblemSpec::BoxPartition { dims, odd_only, disjoint_pairs } => {
            box_partition(dims, *odd_only, *disjoint_pairs)?
        }
        ProblemSpec::GeodesicBlocker { n } => geodesic_blocker(*n)?,
        ProblemSpec::DiameterAntichain { n, d, chain_len } => diameter_antichain(*n, *d, *chain_len)?,
        ProblemSpec::DiversityUniform { n, k } => diversity_uniform(*n, *k)?,
        ProblemSpec::DiversityFull { n } => diversity_full(*n)?,
        ProblemSpec::BipartiteEkr { n1, n2, k, l, mode } => bipartite_ekr(*n1, *n2, *k, *l, *mode)?,
        ProblemSpec::MultipartEkr { parts, quotas, k } => multipart_ekr(parts, quotas, *k)?,
        ProblemSpec::Forb { m, pattern, sizes } => {
            let p = match pattern {
                Some(rows) => {
                    let rows: Vec<&[u8]> = rows.iter().map(|r| r.as_slice()).collect();
                    crate::setfam::PatternMatrix::from_rows(&rows)?
                }
                None => crate::setfam::PatternMatrix::two_common_one_private(),
            };
            forb(*m, &p, sizes)?
        }
        ProblemSpec::Design { m, block_size, lambda, required } => design(*m, *block_size, *lambda, required)?,
        ProblemSpec::Kleitman { n, s, sizes } => kleitman(*n, *s, sizes)?,
        ProblemSpec::Rainbow { n, k, d, left } => rainbow(*n, *k, *d, left)?,
        ProblemSpec::MultipartiteTuran { parts, k } => multipartite_turan(parts, *k)?,
    };
    if let Some(free) = &opts.restrict {
        restrict(&mut em, free)?;
    }
    if opts.symmetry {
        symmetry::add_ordering(&mut em)?;
    }
    Ok(em)
}

/// Pins every set whose size is outside `free`. Disjointness problems
/// assume large sets are in and small ones out; the trace problem assumes
/// small sets are in; every other set-lattice problem pins to 0.
fn restrict(em: &mut EncodedModel, free: &[usize]) -> Result<()> {
    if free.is_empty() {
        return Err(invalid("restriction needs at least one free size"));
    }
    let lo = *free.iter().min().unwrap();
    let hi = *free.iter().max().unwrap();
    let rule: fn(usize, usize, usize) -> bool = match em.spec {
        ProblemSpec::Kleitman { .. } => |size, _lo, hi| size > hi,
        ProblemSpec::Forb { .. } => |size, lo, _hi| size < lo,
        ProblemSpec::Sperner { .. }
        | ProblemSpec::DiameterAntichain { .. }
        | ProblemSpec::DiversityFull { .. }
        | ProblemSpec::GeodesicBlocker { .. } => |_, _, _| false,
        _ => return Err(invalid(format!("{} does not support size restriction", em.spec.name()))),
    };
    let mut pins = Vec::new();
    for (v, o) in em.objects.iter().enumerate() {
        if let VarObject::Set { set, .. } = o {
            let size = set.len();
            if !free.contains(&size) {
                pins.push((v, rule(size, lo, hi)));
            }
        }
    }
    for (v, b) in pins {
        em.model.fix_var(v, b)?;
    }
    em.model.add_comment(format!("restricted: free sizes {free:?}"));
    Ok(())
}

/// Catalog entry for one builder.
#[derive(Clone, Debug, Serialize)]
pub struct EncoderInfo {
    pub name: &'static str,
    pub params: &'static str,
    pub summary: &'static str,
}

pub fn catalog() -> Vec<EncoderInfo> {
    let e = |name, params, summary| EncoderInfo { name, params, summary };
    vec![
        e("sperner", "n", "largest antichain in the Boolean lattice"),
        e("poset_antichain", "graph, layers, chain_len", "largest chain-free family of independent sets of a graph"),
        e("neighborhood", "n, r, k, d, m, mode", "extremal size of the k-sets at distance d from m r-sets"),
        e("coloring", "graph, c", "most vertices colorable with c colors"),
        e("unionfree_cover", "n, c", "cover the lattice with c union-free families"),
        e("box_partition", "dims, odd_only, disjoint_pairs", "fewest proper sub-boxes partitioning a box"),
        e("geodesic_blocker", "n", "fewest hypercube vertices meeting every antipodal geodesic"),
        e("diameter_antichain", "n, d, chain_len", "largest chain-free family of bounded diameter"),
        e("diversity_uniform", "n, k", "largest diversity of an intersecting k-uniform family"),
        e("diversity_full", "n", "largest diversity of an intersecting family"),
        e("bipartite_ekr", "n1, n2, k, l, mode", "largest non-trivial or two-sided intersecting bipartite family"),
        e("multipart_ekr", "parts, quotas, k", "largest intersecting family with part quotas"),
        e("forb", "m, pattern, sizes", "most columns avoiding a configuration"),
        e("design", "m, block_size, lambda, required", "block design with pair multiplicity lambda"),
        e("kleitman", "n, s, sizes", "largest family without s pairwise disjoint members"),
        e("rainbow", "n, k, d, left", "bipartite graphs of bounded degree without a rainbow matching"),
        e("multipartite_turan", "parts, k", "most edges of a complete multipartite graph without k disjoint triangles"),
    ]
}

/// Variable-name tag for a set: digits when the ground set is `[9]` or
/// smaller, underscore-separated otherwise, `0` for the empty set.
pub(crate) fn set_tag(s: SetCode, ground: usize) -> String {
    let el = s.elements();
    if el.is_empty() {
        "0".to_string()
    } else if ground <= 9 {
        el.iter().map(|e| e.to_string()).collect()
    } else {
        el.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("_")
    }
}

pub(crate) fn check_cap(what: &str, value: usize, cap: usize) -> Result<()> {
    if value > cap {
        return Err(invalid(format!("{what} = {value} exceeds the supported maximum {cap}")));
    }
    Ok(())
}
