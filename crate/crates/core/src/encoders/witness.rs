//! Decoding assignments back into families and graphs, and re-checking
//! the encoded property with the set-family predicates.

use std::collections::VecDeque;

use serde::Serialize;

use super::{EkrMode, EncodedModel, NeighborhoodMode, ProblemSpec, VarObject};
use crate::error::{invalid, Result};
use crate::ilp::Assignment;
use crate::setfam::{
    contains_disjoint_triangles, diameter, diversity, has_configuration, has_rainbow_matching, is_antichain,
    is_intersecting, is_two_sided, is_union_free, longest_chain, max_pairwise_disjoint, Family, LabeledGraph,
    PatternMatrix, SetCode,
};

/// The combinatorial object selected by an assignment.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Family {
        family: Family,
    },
    Families {
        families: Vec<Family>,
    },
    Neighborhood {
        family: Family,
        neighbors: Family,
    },
    /// 1-based color per vertex, `None` when uncolored.
    Coloring {
        colors: Vec<Option<usize>>,
    },
    /// 1-based element lists, one per coordinate, for each chosen box.
    Boxes {
        boxes: Vec<Vec<Vec<usize>>>,
    },
    /// 1-based edge lists, one per graph.
    Graphs {
        graphs: Vec<Vec<[usize; 2]>>,
    },
    Graph {
        graph: LabeledGraph,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub property: String,
    pub holds: bool,
}

fn report(property: impl Into<String>, holds: bool) -> WitnessReport {
    WitnessReport { property: property.into(), holds }
}

impl EncodedModel {
    fn chosen(&self, a: &Assignment) -> Result<impl Iterator<Item = &VarObject> + '_> {
        if a.len() != self.objects.len() {
            return Err(crate::error::Error::LengthMismatch { expected: self.objects.len(), got: a.len() });
        }
        let ones: Vec<usize> = a.ones().collect();
        Ok(ones.into_iter().map(move |v| &self.objects[v]))
    }

    fn family_of(&self, a: &Assignment, want: usize) -> Result<Family> {
        let sets = self.chosen(a)?.filter_map(|o| match o {
            VarObject::Set { class, set } if *class == want => Some(set.0),
            _ => None,
        });
        Family::from_bits(self.ground, sets)
    }

    /// The object selected by `a`.
    pub fn decode(&self, a: &Assignment) -> Result<Witness> {
        match &self.spec {
            ProblemSpec::UnionfreeCover { c, .. } => {
                Ok(Witness::Families { families: (0..*c).map(|i| self.family_of(a, i)).collect::<Result<_>>()? })
            }
            ProblemSpec::Neighborhood { .. } => {
                Ok(Witness::Neighborhood { family: self.family_of(a, 0)?, neighbors: self.family_of(a, 1)? })
            }
            ProblemSpec::Coloring { graph, .. } => {
                let mut colors = vec![None; graph.vertex_count()];
                for o in self.chosen(a)? {
                    if let VarObject::Color { vertex, color } = o {
                        if colors[*vertex].is_some() {
                            return Err(invalid(format!("vertex {} has two colors", vertex + 1)));
                        }
                        colors[*vertex] = Some(color + 1);
                    }
                }
                Ok(Witness::Coloring { colors })
            }
            ProblemSpec::BoxPartition { .. } => {
                let boxes = self
                    .chosen(a)?
                    .filter_map(|o| match o {
                        VarObject::Box { masks } => Some(masks.iter().map(|&m| SetCode(m).elements()).collect()),
                        _ => None,
                    })
                    .collect();
                Ok(Witness::Boxes { boxes })
            }
            ProblemSpec::Rainbow { k, .. } => {
                let mut graphs = vec![Vec::new(); *k];
                for o in self.chosen(a)? {
                    if let VarObject::Edge { graph, u, v } = o {
                        graphs[*graph].push([u + 1, v + 1]);
                    }
                }
                Ok(Witness::Graphs { graphs })
            }
            ProblemSpec::MultipartiteTuran { parts, .. } => {
                let edges: Vec<(usize, usize)> = self
                    .chosen(a)?
                    .filter_map(|o| match o {
                        VarObject::Edge { u, v, .. } => Some((*u, *v)),
                        _ => None,
                    })
                    .collect();
                let labels: Vec<usize> =
                    parts.iter().enumerate().flat_map(|(i, &p)| std::iter::repeat(i).take(p)).collect();
                let graph = LabeledGraph::new(self.ground, edges)?.with_parts(labels)?;
                Ok(Witness::Graph { graph })
            }
            _ => Ok(Witness::Family { family: self.family_of(a, 0)? }),
        }
    }

    /// Re-checks the encoded property on the decoded object.
    pub fn check_witness(&self, a: &Assignment) -> Result<WitnessReport> {
        let w = self.decode(a)?;
        let value = self.model.objective_value(a.values());
        Ok(match (&self.spec, &w) {
            (ProblemSpec::Sperner { .. }, Witness::Family { family }) => report("antichain", is_antichain(family)),
            (ProblemSpec::PosetAntichain { graph, chain_len, .. }, Witness::Family { family }) => {
                let masks: Vec<u32> = graph.edges().iter().map(|&(u, v)| (1u32 << u) | (1 << v)).collect();
                let independent = family.bits().iter().all(|&s| masks.iter().all(|&e| s & e != e));
                report(
                    format!("independent sets without a {chain_len}-chain"),
                    independent && longest_chain(family) < *chain_len,
                )
            }
            (ProblemSpec::Neighborhood { n, k, d, m, mode, .. }, Witness::Neighborhood { family, neighbors }) => {
                let near = |b: u32| family.bits().iter().any(|&x| (x ^ b).count_ones() as usize == *d);
                let ok = family.len() == *m
                    && match mode {
                        NeighborhoodMode::Min => crate::setfam::k_subsets(*n, *k)
                            .into_iter()
                            .all(|b| !near(b) || neighbors.contains(SetCode(b))),
                        NeighborhoodMode::Max => neighbors.bits().iter().all(|&b| near(b)),
                    };
                report("family size and neighborhood consistent", ok)
            }
            (ProblemSpec::Coloring { graph, .. }, Witness::Coloring { colors }) => {
                let proper = graph.edges().iter().all(|&(u, v)| colors[u].is_none() || colors[u] != colors[v]);
                report("proper partial coloring", proper)
            }
            (ProblemSpec::UnionfreeCover { .. }, Witness::Families { families }) => {
                let disjoint = families
                    .iter()
                    .enumerate()
                    .all(|(i, f)| families[i + 1..].iter().all(|g| f.iter().all(|s| !g.contains(s))));
                report("disjoint union-free families", disjoint && families.iter().all(is_union_free))
            }
            (ProblemSpec::BoxPartition { dims, odd_only, .. }, Witness::Boxes { boxes }) => {
                report("partition into proper sub-boxes", check_boxes(dims, *odd_only, boxes))
            }
            (ProblemSpec::GeodesicBlocker { n }, Witness::Family { family }) => {
                report("every antipodal geodesic is met", blocks_geodesics(*n, family))
            }
            (ProblemSpec::DiameterAntichain { d, chain_len, .. }, Witness::Family { family }) => {
                let small = family.is_empty() || diameter(family)? <= *d;
                report(
                    format!("diameter at most {d} without a {chain_len}-chain"),
                    small && longest_chain(family) < *chain_len,
                )
            }
            (ProblemSpec::DiversityUniform { .. } | ProblemSpec::DiversityFull { .. }, Witness::Family { family }) => {
                let rho = if family.is_empty() { 0 } else { diversity(family)?.0 };
                report(format!("intersecting with diversity {value}"), is_intersecting(family) && rho as i64 == value)
            }
            (ProblemSpec::BipartiteEkr { n1, mode, .. }, Witness::Family { family }) => {
                let side = SetCode((1u32 << n1) - 1);
                match mode {
                    EkrMode::Nontrivial => {
                        let common = family.bits().iter().fold(u32::MAX, |acc, &s| acc & s);
                        report(
                            "intersecting and not a star",
                            is_intersecting(family) && !family.is_empty() && common == 0,
                        )
                    }
                    EkrMode::TwoSided => {
                        report("two-sided intersecting", is_intersecting(family) && is_two_sided(family, side))
                    }
                }
            }
            (ProblemSpec::MultipartEkr { parts, quotas, k }, Witness::Family { family }) => {
                let h = super::multipart_family(parts, quotas, *k)?;
                report("intersecting subfamily of H", is_intersecting(family) && family.iter().all(|s| h.contains(s)))
            }
            (ProblemSpec::Forb { pattern, .. }, Witness::Family { family }) => {
                let p = match pattern {
                    Some(rows) => {
                        let rows: Vec<&[u8]> = rows.iter().map(|r| r.as_slice()).collect();
                        PatternMatrix::from_rows(&rows)?
                    }
                    None => PatternMatrix::two_common_one_private(),
                };
                report("configuration-free", !has_configuration(family, &p))
            }
            (ProblemSpec::Design { m, lambda, required, .. }, Witness::Family { family }) => {
                let mut ok = true;
                for i in 0..*m {
                    for j in i + 1..*m {
                        let pair = (1u32 << i) | (1 << j);
                        ok &= family.bits().iter().filter(|&&b| b & pair == pair).count() == *lambda;
                    }
                }
                for r in required {
                    ok &= family.contains(SetCode::from_elements(*m, r)?);
                }
                report(format!("every pair covered {lambda} times"), ok)
            }
            (ProblemSpec::Kleitman { s, .. }, Witness::Family { family }) => {
                report(format!("no {s} pairwise disjoint members"), max_pairwise_disjoint(family) < *s)
            }
            (ProblemSpec::Rainbow { k, d, .. }, Witness::Graphs { graphs }) => {
                let lists: Vec<Vec<(usize, usize)>> =
                    graphs.iter().map(|g| g.iter().map(|e| (e[0] - 1, e[1] - 1)).collect()).collect();
                let degree_ok = lists
                    .iter()
                    .all(|g| (0..self.ground).all(|x| g.iter().filter(|e| e.0 == x || e.1 == x).count() <= *d));
                let size_ok = lists[1..].iter().all(|g| g.len() > (k - 1) * d);
                report(
                    "bounded degree, large graphs, no rainbow matching",
                    degree_ok && size_ok && !has_rainbow_matching(&lists),
                )
            }
            (ProblemSpec::MultipartiteTuran { k, .. }, Witness::Graph { graph }) => {
                report(format!("no {k} disjoint triangles"), !contains_disjoint_triangles(graph, *k))
            }
            _ => return Err(invalid("witness does not match the problem")),
        })
    }
}

fn check_boxes(dims: &[usize], odd_only: bool, boxes: &[Vec<Vec<usize>>]) -> bool {
    let proper = boxes.iter().all(|b| {
        b.len() == dims.len()
            && b.iter().zip(dims).all(|(f, &a)| !f.is_empty() && f.len() < a && (!odd_only || f.len() % 2 == 1))
    });
    if !proper {
        return false;
    }
    let cells: usize = dims.iter().product();
    let mut cover = vec![0u32; cells];
    for b in boxes {
        let mut idx = vec![0usize; dims.len()];
        'cells: loop {
            let cell = idx.iter().zip(dims).fold(0, |acc, (&i, &a)| acc * a + i);
            if idx.iter().zip(b).all(|(&i, f)| f.contains(&(i + 1))) {
                cover[cell] += 1;
            }
            for pos in (0..dims.len()).rev() {
                idx[pos] += 1;
                if idx[pos] < dims[pos] {
                    continue 'cells;
                }
                idx[pos] = 0;
            }
            break;
        }
    }
    cover.iter().all(|&c| c == 1)
}

/// After deleting `removed`, every antipodal pair that survives is more
/// than `n` steps apart (or disconnected).
fn blocks_geodesics(n: usize, removed: &Family) -> bool {
    let full = (1u32 << n) - 1;
    let gone = |v: u32| removed.contains(SetCode(v));
    let mut dist = vec![u32::MAX; 1 << n];
    let mut queue = VecDeque::new();
    for a in 0..=full {
        if gone(a) || gone(full ^ a) || a > full ^ a {
            continue;
        }
        dist.iter_mut().for_each(|d| *d = u32::MAX);
        dist[a as usize] = 0;
        queue.clear();
        queue.push_back(a);
        while let Some(v) = queue.pop_front() {
            for i in 0..n {
                let w = v ^ (1 << i);
                if !gone(w) && dist[w as usize] == u32::MAX {
                    dist[w as usize] = dist[v as usize] + 1;
                    queue.push_back(w);
                }
            }
        }
        if dist[(full ^ a) as usize] <= n as u32 {
            return false;
        }
    }
    true
}
