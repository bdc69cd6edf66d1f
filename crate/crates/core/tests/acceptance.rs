//! Acceptance run: one PASS/FAIL line per criterion, details indented below.
//!
//! Exits nonzero when a criterion fails, except for the items listed in
//! `KNOWN_UNATTAINABLE`, which are reported as FAIL together with the reason
//! and an independent check of that reason.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use setlp::bnb::{solve_feasibility, solve_ip, IpStatus, SolveConfig};
use setlp::certificates::{self, bound_formula, params, verify_id};
use setlp::constructions as cons;
use setlp::encoders::{encode, path_antichain_layers, EkrMode, EncodeOptions, EncodedModel, ProblemSpec, VarObject};
use setlp::ilp::{export_lp, parse_lp, Assignment, Cmp, IlpModel, Sense};
use setlp::lprelax::{solve_relaxation, Fixings, LpStatus};
use setlp::setfam::{
    binom, contains_disjoint_triangles, diameter, has_configuration, is_intersecting, is_two_sided, k_subsets,
    longest_chain, max_pairwise_disjoint,
};
use setlp::{Family, LabeledGraph, PatternMatrix, SetCode};

/// Per-instance budget of criterion 2.
const SOLVE_BUDGET: Duration = Duration::from_secs(120);
const CERT_BUDGET: Duration = Duration::from_secs(30);
const LP_TOL: f64 = 1e-6;

/// Items that cannot pass as stated, with the reason.
const KNOWN_UNATTAINABLE: &[(&str, &str)] = &[(
    "design m=7 lambda=2 with the quad block required",
    "infeasible: the six pairs inside {1,2,3,4} are already covered twice, so each i in {1..4} \
     needs blocks {i,5,6},{i,5,7},{i,6,7}, covering {5,6} four times",
)];

struct Item {
    name: String,
    pass: bool,
    detail: String,
}

fn item(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Item {
    Item { name: name.into(), pass, detail: detail.into() }
}

struct Outcome {
    id: usize,
    title: &'static str,
    items: Vec<Item>,
    elapsed: Duration,
}

fn run(id: usize, title: &'static str, f: fn() -> Vec<Item>) -> Outcome {
    let t = Instant::now();
    let items = f();
    Outcome { id, title, items, elapsed: t.elapsed() }
}

fn main() {
    let outcomes = vec![
        run(1, "certificate suite", certificate_suite),
        run(2, "embedded solver optima", embedded_optima),
        run(3, "stretch set LP files", stretch_set),
        run(4, "solver soundness", solver_soundness),
        run(5, "predicate oracles", predicate_oracles),
        run(6, "construction formulas", construction_formulas),
        run(7, "LP round-trip", lp_round_trip),
    ];
    let mut unexpected = 0;
    for o in &outcomes {
        let failed: Vec<&Item> = o.items.iter().filter(|i| !i.pass).collect();
        let verdict = if failed.is_empty() { "PASS" } else { "FAIL" };
        let passed = o.items.len() - failed.len();
        println!(
            "criterion {} {:<26} {verdict} ({passed}/{} items, {:.2} s)",
            o.id,
            o.title,
            o.items.len(),
            o.elapsed.as_secs_f64()
        );
        for i in &o.items {
            println!("    {} {}: {}", if i.pass { "ok  " } else { "FAIL" }, i.name, i.detail);
        }
        for f in failed {
            match KNOWN_UNATTAINABLE.iter().find(|(n, _)| *n == f.name) {
                Some((_, why)) => println!("    known unattainable: {why}"),
                None => unexpected += 1,
            }
        }
    }
    let failing = outcomes.iter().filter(|o| o.items.iter().any(|i| !i.pass)).count();
    println!("acceptance: {}/{} criteria pass", outcomes.len() - failing, outcomes.len());
    if unexpected > 0 {
        println!("acceptance: {unexpected} unexpected failures");
        std::process::exit(1);
    }
}

// ---- criterion 1 ----

fn certificate_suite() -> Vec<Item> {
    let t = Instant::now();
    let mut items = Vec::new();
    let mut all = true;
    for info in certificates::list_certificates() {
        let r = verify_id(info.id).expect("stored certificate");
        all &= r.passed();
        let summary: Vec<String> = r
            .checks
            .iter()
            .filter(|c| c.name.starts_with("bound ") || c.name == "max_disjoint" || c.name == "max_star")
            .map(|c| match c.name.split_once(" vs ") {
                Some((q, f)) => format!("{} {} ({q} vs {})", c.found, c.expected, f.split('(').next().unwrap_or(f)),
                None => format!("{} {}", c.name, c.found),
            })
            .collect();
        items.push(item(info.id, r.passed(), summary.join("; ")));
    }
    let elapsed = t.elapsed();
    let n = items.len();
    items.push(item(
        "all 14 within budget",
        all && n == 14 && elapsed < CERT_BUDGET,
        format!("{n} certificates in {:.3} s (budget {} s)", elapsed.as_secs_f64(), CERT_BUDGET.as_secs()),
    ));
    items
}

// ---- criterion 2 ----

fn config(em: &EncodedModel) -> SolveConfig {
    let syms = em.symmetry_generators().into_iter().filter(|g| em.model.is_automorphism(g)).collect();
    SolveConfig { time_limit: Some(SOLVE_BUDGET), threads: 1, symmetries: syms, ..SolveConfig::default() }
}

fn enc(spec: &ProblemSpec) -> EncodedModel {
    encode(spec, &EncodeOptions::default()).unwrap_or_else(|e| panic!("{spec:?}: {e}"))
}

/// Solves `spec` and compares the optimum with `want`.
fn optimum(name: String, spec: ProblemSpec, want: impl Fn(i64) -> bool, shown: String) -> Item {
    let em = enc(&spec);
    let out = solve_ip(&em.model, &config(&em)).unwrap();
    let witness_ok = out.assignment.as_ref().is_none_or(|a| em.check_witness(a).is_ok_and(|r| r.holds));
    let pass =
        out.status == IpStatus::Optimal && out.objective.is_some_and(&want) && witness_ok && out.elapsed < SOLVE_BUDGET;
    let detail = format!(
        "{} {:?}, expected {shown}, witness {}, {:.2} s",
        out.status,
        out.objective,
        if witness_ok { "checked" } else { "FAILED" },
        out.elapsed.as_secs_f64()
    );
    item(name, pass, detail)
}

fn exact(name: impl Into<String>, spec: ProblemSpec, want: i64) -> Item {
    optimum(name.into(), spec, move |v| v == want, want.to_string())
}

/// Exact-cover search for a triple system where every pair lies in exactly
/// `lambda` distinct blocks, starting from `required`. Independent of the
/// integer program.
fn triple_system_exists(m: usize, lambda: usize, required: &[[usize; 3]]) -> bool {
    let pair = |a: usize, b: usize| a.min(b) * m + a.max(b);
    let mut deficit = vec![0i32; m * m];
    for a in 0..m {
        for b in a + 1..m {
            deficit[pair(a, b)] = lambda as i32;
        }
    }
    let triples: Vec<[usize; 3]> = k_subsets(m, 3)
        .into_iter()
        .map(|s| {
            let e = SetCode(s).elements();
            [e[0] - 1, e[1] - 1, e[2] - 1]
        })
        .collect();
    let mut used = vec![false; triples.len()];
    let apply = |deficit: &mut Vec<i32>, t: &[usize; 3], d: i32| {
        for (a, b) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
            deficit[pair(a, b)] -= d;
        }
    };
    for r in required {
        let t = [r[0] - 1, r[1] - 1, r[2] - 1];
        let i = triples.iter().position(|x| *x == t).expect("sorted 1-based triple");
        used[i] = true;
        apply(&mut deficit, &t, 1);
    }
    fn go(
        m: usize,
        triples: &[[usize; 3]],
        used: &mut [bool],
        deficit: &mut Vec<i32>,
        pair: &dyn Fn(usize, usize) -> usize,
    ) -> bool {
        if deficit.iter().any(|&d| d < 0) {
            return false;
        }
        let Some((a, b)) = (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b))).find(|&(a, b)| deficit[pair(a, b)] > 0)
        else {
            return true;
        };
        for i in 0..triples.len() {
            let t = triples[i];
            if used[i] || !(t.contains(&a) && t.contains(&b)) {
                continue;
            }
            used[i] = true;
            for (x, y) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
                deficit[pair(x, y)] -= 1;
            }
            if go(m, triples, used, deficit, pair) {
                return true;
            }
            for (x, y) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
                deficit[pair(x, y)] += 1;
            }
            used[i] = false;
        }
        false
    }
    go(m, &triples, &mut used, &mut deficit, &pair)
}

fn quad_block() -> Vec<Vec<usize>> {
    cons::partial_quad_system(1).unwrap().canonical_sets()
}

fn design_item(m: usize, name: &str) -> Item {
    let spec = ProblemSpec::Design { m, block_size: 3, lambda: 2, required: quad_block() };
    let em = enc(&spec);
    let out = solve_ip(&em.model, &config(&em)).unwrap();
    let req: Vec<[usize; 3]> = quad_block().iter().map(|b| [b[0], b[1], b[2]]).collect();
    let oracle = triple_system_exists(m, 2, &req);
    let feasible = matches!(out.status, IpStatus::Optimal | IpStatus::Feasible);
    let detail = format!(
        "solver {}, exact-cover search says {}, {:.2} s",
        out.status,
        if oracle { "feasible" } else { "infeasible" },
        out.elapsed.as_secs_f64()
    );
    // agreement with the oracle is required either way
    let agree = feasible == oracle && out.status != IpStatus::TimeLimit;
    item(name, agree && feasible, if agree { detail } else { format!("{detail}; SOLVER AND ORACLE DISAGREE") })
}

fn embedded_optima() -> Vec<Item> {
    let mut items = Vec::new();
    for n in 1..=8 {
        items.push(exact(format!("sperner n={n}"), ProblemSpec::Sperner { n }, binom(n as u64, n as u64 / 2) as i64));
    }
    for (c, want) in [(3, false), (4, true)] {
        let em = enc(&ProblemSpec::UnionfreeCover { n: 6, c });
        let f = solve_feasibility(&em.model, 64, &config(&em)).unwrap();
        let t = f.outcome.elapsed;
        let pass = f.achievable == Some(want) && t < SOLVE_BUDGET;
        let got = match f.achievable {
            Some(true) => "all 64 sets covered",
            Some(false) => "fewer than 64 sets coverable",
            None => "undecided",
        };
        items.push(item(format!("union-free cover n=6 c={c}"), pass, format!("{got}, {:.2} s", t.as_secs_f64())));
    }
    for n in 1..=5 {
        let want = binom(n as u64, n as u64 / 2) as i64;
        items.push(exact(format!("geodesic blocker n={n}"), ProblemSpec::GeodesicBlocker { n }, want));
    }
    items.push(exact("diversity uniform n=7 k=3", ProblemSpec::DiversityUniform { n: 7, k: 3 }, 5));
    for n in 2..=6 {
        let name = if n % 2 == 1 { "odd_full_diversity" } else { "even_full_diversity" };
        let want = bound_formula(name, &params([("n", n as i64)])).unwrap();
        items.push(exact(format!("diversity full n={n}"), ProblemSpec::DiversityFull { n }, want));
    }
    for mode in [EkrMode::Nontrivial, EkrMode::TwoSided] {
        let spec = ProblemSpec::BipartiteEkr { n1: 5, n2: 5, k: 2, l: 2, mode };
        items.push(exact(format!("bipartite ekr (5,5,2,2) {mode:?}"), spec, 35));
    }
    let spec = ProblemSpec::MultipartEkr { parts: vec![4, 4], quotas: vec![2, 1], k: 4 };
    items.push(exact("multipart ekr (4,4),(2,1),k=4", spec, 34));
    let spec = ProblemSpec::Kleitman { n: 9, s: 4, sizes: vec![2, 3] };
    items.push(exact("no 4 disjoint, n=9, sizes {2,3}", spec, 99));
    let left = vec![vec![1, 2, 3], vec![2, 3, 4], vec![3, 4, 5]];
    let spec = ProblemSpec::Rainbow { n: 6, k: 3, d: 2, left };
    items.push(optimum("rainbow n=6 k=3 d=2".into(), spec, |v| v >= 6, ">= 6".into()));
    items.push(exact("forb m=6 sizes {2..6}", ProblemSpec::Forb { m: 6, pattern: None, sizes: vec![] }, 25));
    items.push(design_item(7, KNOWN_UNATTAINABLE[0].0));
    items.push(design_item(9, "design m=9 lambda=2 with the quad block required"));
    let spec = ProblemSpec::MultipartiteTuran { parts: vec![2, 2, 2, 2], k: 2 };
    items.push(exact("multipartite turan (2,2,2,2) k=2", spec, 18));
    items
}

// ---- criterion 3 ----

fn stretch_specs() -> Vec<(&'static str, ProblemSpec, i64, Family)> {
    let middle = Family::from_bits(10, k_subsets(10, 5)).unwrap();
    let path = LabeledGraph::path(11);
    let layer3 = setlp::setfam::independent_set_layer(&path, 3).unwrap();
    let cert = |id: &str| certificates::certificate(id).unwrap().family().unwrap().unwrap();
    vec![
        ("sperner n=10", ProblemSpec::Sperner { n: 10 }, 252, middle),
        (
            "diameter (6,5) without 3-chains",
            ProblemSpec::DiameterAntichain { n: 6, d: 5, chain_len: 3 },
            26,
            cert("chain_diameter_6_5"),
        ),
        (
            "antichain of independent sets of P11",
            ProblemSpec::PosetAntichain { graph: path, layers: path_antichain_layers(11), chain_len: 2 },
            84,
            layer3,
        ),
        (
            "two-sided (7,7,3,3)",
            ProblemSpec::BipartiteEkr { n1: 7, n2: 7, k: 3, l: 3, mode: EkrMode::TwoSided },
            514,
            cons::two_sided(7, 3).unwrap(),
        ),
        ("diversity full n=7", ProblemSpec::DiversityFull { n: 7 }, 23, cert("full_diversity_7")),
    ]
}

/// Pins the set variables of family 0 to `f` and solves for the rest.
fn value_of_witness(em: &EncodedModel, f: &Family) -> Option<i64> {
    let mut m = em.model.clone();
    for (v, o) in em.objects.iter().enumerate() {
        if let VarObject::Set { class: 0, set } = o {
            m.fix_var(v, f.contains(*set)).unwrap();
        }
    }
    let cfg = SolveConfig { time_limit: Some(Duration::from_secs(60)), ..SolveConfig::default() };
    solve_ip(&m, &cfg).ok().filter(|o| o.status == IpStatus::Optimal).and_then(|o| o.objective)
}

fn relabel_two_sided(f: &Family) -> Family {
    // the encoder puts its witnesses on x1..x3 / x4..x6 and y1..y3 / y4..y6;
    // the construction meets {x1} and {x2..x4}, so swap x1 and x4
    let swap = |s: u32| {
        let (a, b) = (s & 1, s >> 3 & 1);
        (s & !0b1001) | b | a << 3
    };
    Family::from_bits(f.ground(), f.bits().iter().map(|&s| swap(s))).unwrap()
}

fn stretch_set() -> Vec<Item> {
    let dir = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("stretch");
    std::fs::create_dir_all(&dir).unwrap();
    let mut items = Vec::new();
    for (name, spec, target, witness) in stretch_specs() {
        let first = export_lp(&enc(&spec).model);
        let second = export_lp(&enc(&spec).model);
        let file = dir.join(format!("{}.lp", enc(&spec).model.name()));
        std::fs::write(&file, &first).unwrap();
        let reread = std::fs::read_to_string(&file).unwrap();
        let same = first == second && reread == first;
        let hash: String = Sha256::digest(first.as_bytes()).iter().take(8).map(|b| format!("{b:02x}")).collect();
        let em = enc(&spec);
        let mut value = value_of_witness(&em, &witness);
        if value != Some(target) && matches!(spec, ProblemSpec::BipartiteEkr { .. }) {
            value = value_of_witness(&em, &relabel_two_sided(&witness));
        }
        let detail = format!(
            "{} bytes, sha256 {hash}, {} (value {target} {}; optimality left to an external solver)",
            first.len(),
            if same { "bit-reproducible" } else { "NOT reproducible" },
            if value == Some(target) { "attained by a known witness" } else { "NOT attained by the witness" },
        );
        items.push(item(name, same && value == Some(target), detail));
    }
    items
}

// ---- criterion 4 ----

fn random_model(rng: &mut ChaCha8Rng, nv: usize, nc: usize, sense: Sense) -> IlpModel {
    let mut m = IlpModel::new("rand", sense);
    for i in 0..nv {
        m.add_binary_var(format!("x{i}")).unwrap();
    }
    m.set_objective((0..nv).map(|v| (v, rng.gen_range(-3..=7)))).unwrap();
    for _ in 0..nc {
        let k = rng.gen_range(1..=nv.min(6));
        let terms: Vec<(usize, i64)> = (0..k).map(|_| (rng.gen_range(0..nv), rng.gen_range(-2..=3))).collect();
        let cmp = [Cmp::Le, Cmp::Le, Cmp::Ge, Cmp::Eq][rng.gen_range(0..4)];
        let _ = m.add_constraint(terms, cmp, rng.gen_range(-1..=3));
    }
    m
}

fn enumerate(m: &IlpModel) -> Option<i64> {
    let n = m.num_vars();
    (0u32..1 << n)
        .filter_map(|mask| {
            let a = Assignment::new((0..n).map(|i| mask >> i & 1 == 1).collect());
            let r = m.check_assignment(&a).unwrap();
            r.feasible.then_some(r.objective)
        })
        .reduce(|a, b| if m.sense() == Sense::Maximize { a.max(b) } else { a.min(b) })
}

fn solver_soundness() -> Vec<Item> {
    let mut rng = ChaCha8Rng::seed_from_u64(20240501);
    let trials = 500;
    let (mut equal, mut lp_dominates, mut feasible, mut threads_agree, mut optimal) = (0, 0, 0, 0, 0);
    for trial in 0..trials {
        let nv = rng.gen_range(1..=15);
        let sense = if trial % 3 == 2 { Sense::Minimize } else { Sense::Maximize };
        let nc = rng.gen_range(0..=20);
        let m = random_model(&mut rng, nv, nc, sense);
        let best = enumerate(&m);
        let outs: Vec<_> = [1, 2, 4]
            .iter()
            .map(|&threads| solve_ip(&m, &SolveConfig { threads, ..SolveConfig::default() }).unwrap())
            .collect();
        let out = &outs[0];
        equal += (out.objective == best && (best.is_some() == (out.status == IpStatus::Optimal))) as usize;
        threads_agree += outs.iter().all(|o| o.objective == out.objective && o.status == out.status) as usize;
        feasible +=
            outs.iter().all(|o| o.assignment.as_ref().is_none_or(|a| m.check_assignment(a).unwrap().feasible)) as usize;
        let lp = solve_relaxation(&m, &Fixings::default()).unwrap();
        lp_dominates += match (best, lp.status) {
            (Some(b), LpStatus::Optimal) => match sense {
                Sense::Maximize => lp.objective >= b as f64 - LP_TOL,
                Sense::Minimize => lp.objective <= b as f64 + LP_TOL,
            },
            (None, _) => true,
            _ => false,
        } as usize;
        optimal += best.is_some() as usize;
    }
    let line =
        |name: &str, k: usize| item(name, k == trials, format!("{k}/{trials} random models ({optimal} feasible)"));
    vec![
        line("branch and bound equals enumeration", equal),
        line("LP bound dominates the optimum", lp_dominates),
        line("returned assignments feasible", feasible),
        line("same result with 1, 2 and 4 threads", threads_agree),
    ]
}

// ---- criterion 5 ----

fn random_family(rng: &mut ChaCha8Rng) -> Family {
    let n = rng.gen_range(1..=8);
    let want = rng.gen_range(1..=12);
    let mut sets = BTreeSet::new();
    for _ in 0..want * 4 {
        if sets.len() == want {
            break;
        }
        sets.insert(rng.gen_range(0..1u32 << n));
    }
    Family::from_bits(n, sets).unwrap()
}

fn naive_disjoint(f: &Family) -> usize {
    let b = f.bits();
    (0u32..1 << b.len())
        .filter(|mask| {
            let chosen: Vec<u32> = (0..b.len()).filter(|i| mask >> i & 1 == 1).map(|i| b[i]).collect();
            chosen.iter().enumerate().all(|(i, x)| chosen[i + 1..].iter().all(|y| x & y == 0))
        })
        .map(|mask| mask.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Every ordered choice of distinct rows, then a multiset match of the
/// restricted columns against the pattern's columns.
fn naive_configuration(f: &Family, p: &PatternMatrix) -> bool {
    let n = f.ground();
    if p.rows() > n || p.cols() > f.len() {
        return false;
    }
    let mut want: Vec<u32> = (0..p.cols()).map(|c| p.column_code(c)).collect();
    want.sort_unstable();
    let mut rows = Vec::new();
    fn go(n: usize, k: usize, rows: &mut Vec<usize>, f: &Family, want: &[u32]) -> bool {
        if rows.len() == k {
            let mut have: Vec<u32> = f
                .bits()
                .iter()
                .map(|&s| rows.iter().enumerate().fold(0, |acc, (i, &r)| acc | (s >> r & 1) << i))
                .collect();
            have.sort_unstable();
            // a sub-multiset test on sorted lists
            let mut it = have.iter().peekable();
            return want.iter().all(|w| {
                while it.peek().is_some_and(|h| *h < w) {
                    it.next();
                }
                it.next() == Some(w)
            });
        }
        for r in 0..n {
            if !rows.contains(&r) {
                rows.push(r);
                if go(n, k, rows, f, want) {
                    return true;
                }
                rows.pop();
            }
        }
        false
    }
    go(n, p.rows(), &mut rows, f, &want)
}

fn random_pattern(rng: &mut ChaCha8Rng) -> PatternMatrix {
    let (r, c) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
    PatternMatrix::new(r, c, (0..r * c).map(|_| rng.gen_range(0..=1)).collect()).unwrap()
}

fn predicate_oracles() -> Vec<Item> {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let fixed = [PatternMatrix::two_common_one_private(), PatternMatrix::shattered(2)];
    let (mut disjoint, mut config, mut hits) = (0, 0, 0);
    let families = 200;
    for _ in 0..families {
        let f = random_family(&mut rng);
        disjoint += (max_pairwise_disjoint(&f) == naive_disjoint(&f)) as usize;
        let patterns = [fixed[0].clone(), fixed[1].clone(), random_pattern(&mut rng)];
        let ok = patterns.iter().all(|p| {
            let got = has_configuration(&f, p);
            hits += got as usize;
            got == naive_configuration(&f, p)
        });
        config += ok as usize;
    }
    vec![
        item("max_pairwise_disjoint", disjoint == families, format!("{disjoint}/{families} families match")),
        item(
            "has_configuration",
            config == families,
            format!("{config}/{families} families match on 3 patterns each ({hits} contain one)"),
        ),
    ]
}

// ---- criterion 6 ----

fn construction_formulas() -> Vec<Item> {
    let mut items = Vec::new();
    let (mut total, mut good) = (0, 0);
    for m in 5..=9 {
        let f = cons::bipartite_22(m).unwrap();
        total += 1;
        good += (f.len() as u64 == cons::bipartite_22_size(m)
            && is_intersecting(&f)
            && is_two_sided(&f, SetCode::full(m))) as usize;
    }
    items.push(item("bipartite_22, m = 5..9", good == total, format!("{good}/{total} sizes and predicates")));

    let (mut total, mut good) = (0, 0);
    for m in 4..=9 {
        for k in 2..=m / 2 {
            let f = cons::two_sided(m, k).unwrap();
            total += 1;
            good += (f.len() as u64 == cons::two_sided_size(m, k)
                && is_intersecting(&f)
                && is_two_sided(&f, SetCode::full(m))) as usize;
        }
    }
    let ts = cons::two_sided(7, 3).unwrap().len();
    items.push(item(
        "two_sided, m <= 9, 2 <= k <= m/2",
        good == total && ts == 514,
        format!("{good}/{total} sizes and predicates; m=7 k=3 gives {ts}"),
    ));

    let (mut total, mut good) = (0, 0);
    for n in 2..=9 {
        for d in (1..n).step_by(2) {
            let f = cons::diameter_star(n, d).unwrap();
            total += 1;
            good += (f.len() as u64 == cons::diameter_star_size(n, d)
                && diameter(&f).unwrap() <= d
                && longest_chain(&f) <= 2) as usize;
        }
    }
    items.push(item("diameter_star, n <= 9, d odd", good == total, format!("{good}/{total} sizes and predicates")));

    let (mut total, mut good) = (0, 0);
    for n in 1..=9 {
        for k in 1..=n {
            let g = cons::four_part_turan(n, k).unwrap();
            total += 1;
            good += (g.edge_count() as u64 == cons::four_part_turan_edges(n, k) && !contains_disjoint_triangles(&g, k))
                as usize;
        }
    }
    items.push(item(
        "four_part_turan, k <= n <= 9",
        good == total,
        format!("{good}/{total} edge counts and predicates"),
    ));
    items
}

// ---- criterion 7 ----

fn lp_round_trip() -> Vec<Item> {
    let mut specs: Vec<(String, ProblemSpec)> = vec![
        ("sperner n=8".into(), ProblemSpec::Sperner { n: 8 }),
        ("union-free cover n=6 c=3".into(), ProblemSpec::UnionfreeCover { n: 6, c: 3 }),
        ("union-free cover n=6 c=4".into(), ProblemSpec::UnionfreeCover { n: 6, c: 4 }),
        ("geodesic blocker n=5".into(), ProblemSpec::GeodesicBlocker { n: 5 }),
        ("diversity uniform 7,3".into(), ProblemSpec::DiversityUniform { n: 7, k: 3 }),
        ("diversity full n=6".into(), ProblemSpec::DiversityFull { n: 6 }),
        ("multipart ekr".into(), ProblemSpec::MultipartEkr { parts: vec![4, 4], quotas: vec![2, 1], k: 4 }),
        ("no 4 disjoint n=9".into(), ProblemSpec::Kleitman { n: 9, s: 4, sizes: vec![2, 3] }),
        (
            "rainbow".into(),
            ProblemSpec::Rainbow { n: 6, k: 3, d: 2, left: vec![vec![1, 2, 3], vec![2, 3, 4], vec![3, 4, 5]] },
        ),
        ("forb m=6".into(), ProblemSpec::Forb { m: 6, pattern: None, sizes: vec![] }),
        ("design m=7".into(), ProblemSpec::Design { m: 7, block_size: 3, lambda: 2, required: quad_block() }),
        ("turan".into(), ProblemSpec::MultipartiteTuran { parts: vec![2, 2, 2, 2], k: 2 }),
    ];
    for mode in [EkrMode::Nontrivial, EkrMode::TwoSided] {
        specs.push((format!("bipartite ekr {mode:?}"), ProblemSpec::BipartiteEkr { n1: 5, n2: 5, k: 2, l: 2, mode }));
    }
    specs.extend(stretch_specs().into_iter().map(|(n, s, _, _)| (n.to_string(), s)));
    let mut good = 0;
    let mut bad = Vec::new();
    for (name, spec) in &specs {
        let m = enc(spec).model;
        let text = export_lp(&m);
        let ok = parse_lp(&text).is_ok_and(|back| back == m && export_lp(&back) == text);
        if ok {
            good += 1;
        } else {
            bad.push(name.clone());
        }
    }
    let detail = if bad.is_empty() {
        format!("{good}/{} encoder outputs of criteria 2 and 3", specs.len())
    } else {
        format!("{good}/{}; mismatched: {}", specs.len(), bad.join(", "))
    };
    vec![item("parse(export(model)) == model", bad.is_empty(), detail)]
}
