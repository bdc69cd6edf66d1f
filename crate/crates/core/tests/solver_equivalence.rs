use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use setlp::bnb::{solve_feasibility, solve_ip, IpStatus, NodeSearch, SolveConfig};
use setlp::ilp::{Assignment, Cmp, IlpModel, Sense};

fn random_model(rng: &mut ChaCha8Rng, nv: usize, nc: usize, sense: Sense) -> IlpModel {
    let mut m = IlpModel::new("rand", sense);
    for i in 0..nv {
        m.add_binary_var(format!("x{i}")).unwrap();
    }
    m.set_objective((0..nv).map(|v| (v, rng.gen_range(-2..=6)))).unwrap();
    for _ in 0..nc {
        let k = rng.gen_range(1..=nv.min(6));
        let packing = rng.gen_bool(0.6);
        let terms: Vec<(usize, i64)> = (0..k)
            .map(|_| {
                let c = if packing { 1 } else { [-2, -1, 1, 2, 3][rng.gen_range(0..5)] };
                (rng.gen_range(0..nv), c)
            })
            .collect();
        let (cmp, rhs) = if packing {
            (Cmp::Le, rng.gen_range(1..=2))
        } else {
            ([Cmp::Le, Cmp::Ge, Cmp::Eq][rng.gen_range(0..3)], rng.gen_range(-1..=3))
        };
        let _ = m.add_constraint(terms, cmp, rhs);
    }
    m
}

fn exhaustive(m: &IlpModel) -> Option<i64> {
    let n = m.num_vars();
    let mut best: Option<i64> = None;
    for mask in 0u32..(1 << n) {
        let a = Assignment::new((0..n).map(|i| mask >> i & 1 == 1).collect());
        if !m.respects_fixings(&a) {
            continue;
        }
        let r = m.check_assignment(&a).unwrap();
        if r.feasible {
            best = Some(match (best, m.sense()) {
                (None, _) => r.objective,
                (Some(b), Sense::Maximize) => b.max(r.objective),
                (Some(b), Sense::Minimize) => b.min(r.objective),
            });
        }
    }
    best
}

#[test]
fn matches_exhaustive_enumeration_on_random_models() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let cfg = SolveConfig::default();
    for trial in 0..600 {
        let nv = rng.gen_range(1..=15);
        let nc = rng.gen_range(0..=25);
        let sense = if trial % 3 == 2 { Sense::Minimize } else { Sense::Maximize };
        let mut m = random_model(&mut rng, nv, nc, sense);
        if trial % 10 == 9 {
            let v = rng.gen_range(0..nv);
            m.fix_var(v, rng.gen_bool(0.5)).unwrap();
        }
        let out = solve_ip(&m, &cfg).unwrap();
        match exhaustive(&m) {
            Some(best) => {
                assert_eq!(out.status, IpStatus::Optimal, "trial {trial}");
                assert_eq!(out.objective, Some(best), "trial {trial}");
                let a = out.assignment.as_ref().unwrap();
                assert!(m.check_assignment(a).unwrap().feasible);
                assert!(m.respects_fixings(a));
                assert_eq!(out.dual_bound, best as f64);
            }
            None => assert_eq!(out.status, IpStatus::Infeasible, "trial {trial}"),
        }
    }
}

#[test]
fn value_independent_of_thread_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for trial in 0..40 {
        let m = random_model(&mut rng, 15, 25, Sense::Maximize);
        let values: Vec<Option<i64>> = [1, 2, 4]
            .iter()
            .map(|&threads| {
                let cfg = SolveConfig { threads, ..SolveConfig::default() };
                solve_ip(&m, &cfg).unwrap().objective
            })
            .collect();
        assert!(values.windows(2).all(|w| w[0] == w[1]), "trial {trial}: {values:?}");
    }
}

#[test]
fn cuts_do_not_change_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let m = random_model(&mut rng, 12, 20, Sense::Maximize);
        let with = solve_ip(&m, &SolveConfig::default()).unwrap();
        let without = solve_ip(&m, &SolveConfig { cuts: false, ..SolveConfig::default() }).unwrap();
        assert_eq!(with.objective, without.objective);
    }
}

#[test]
fn limits_report_sound_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let m = random_model(&mut rng, 15, 10, Sense::Maximize);
        let Some(best) = exhaustive(&m) else { continue };
        let cfg = SolveConfig { node_limit: Some(1), ..SolveConfig::default() };
        let out = solve_ip(&m, &cfg).unwrap();
        assert!(out.dual_bound >= best as f64 - 1e-9);
        if let Some(v) = out.objective {
            assert!(v <= best);
            assert!(m.check_assignment(out.assignment.as_ref().unwrap()).unwrap().feasible);
        }
    }
}

#[test]
fn feasibility_queries_agree_with_optimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let m = random_model(&mut rng, 10, 12, Sense::Maximize);
        let best = exhaustive(&m);
        for target in [-1, 3, 8] {
            let f = solve_feasibility(&m, target, &SolveConfig::default()).unwrap();
            let want = best.is_some_and(|b| b >= target);
            assert_eq!(f.achievable, Some(want));
            if let Some(w) = &f.witness {
                let r = m.check_assignment(w).unwrap();
                assert!(r.feasible && r.objective >= target);
            }
        }
    }
}

#[test]
fn warm_start_is_validated() {
    let mut m = IlpModel::new("t", Sense::Maximize);
    let a = m.add_binary_var("a").unwrap();
    let b = m.add_binary_var("b").unwrap();
    m.set_objective([(a, 1), (b, 1)]).unwrap();
    m.add_constraint([(a, 1), (b, 1)], Cmp::Le, 1).unwrap();
    let bad = SolveConfig { warm_start: Some(Assignment::from_ones(2, &[0, 1])), ..SolveConfig::default() };
    assert!(solve_ip(&m, &bad).is_err());
    let good = SolveConfig { warm_start: Some(Assignment::from_ones(2, &[1])), ..SolveConfig::default() };
    assert_eq!(solve_ip(&m, &good).unwrap().objective, Some(1));
    assert!(solve_ip(&m, &SolveConfig { threads: 0, ..SolveConfig::default() }).is_err());
}

#[test]
fn every_node_search_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for trial in 0..300 {
        let nv = rng.gen_range(1..=13);
        let sense = if trial % 4 == 3 { Sense::Minimize } else { Sense::Maximize };
        let nc = rng.gen_range(0..=20);
        let m = random_model(&mut rng, nv, nc, sense);
        let best = exhaustive(&m);
        for mode in [NodeSearch::Lp, NodeSearch::LpDepthFirst, NodeSearch::Propagation] {
            let out = solve_ip(&m, &SolveConfig { node_search: mode, ..SolveConfig::default() }).unwrap();
            assert_eq!(out.objective, best, "trial {trial} {mode:?}");
            if best.is_none() {
                assert_eq!(out.status, IpStatus::Infeasible);
            }
        }
    }
}

/// Random model closed under the involution swapping `v` and `v + half`.
fn mirrored_model(rng: &mut ChaCha8Rng, half: usize, nc: usize) -> (IlpModel, Vec<usize>) {
    let nv = 2 * half;
    let g: Vec<usize> = (0..nv).map(|v| (v + half) % nv).collect();
    let mut m = IlpModel::new("mirror", Sense::Maximize);
    for i in 0..nv {
        m.add_binary_var(format!("x{i}")).unwrap();
    }
    let cost: Vec<i64> = (0..half).map(|_| rng.gen_range(-1..=5)).collect();
    m.set_objective((0..nv).map(|v| (v, cost[v % half]))).unwrap();
    for _ in 0..nc {
        let k = rng.gen_range(2..=4);
        let terms: Vec<(usize, i64)> = (0..k).map(|_| (rng.gen_range(0..nv), 1)).collect();
        let rhs = rng.gen_range(1..k as i64);
        let image: Vec<(usize, i64)> = terms.iter().map(|&(v, a)| (g[v], a)).collect();
        let _ = m.add_constraint(terms, Cmp::Le, rhs);
        let _ = m.add_constraint(image, Cmp::Le, rhs);
    }
    (m, g)
}

#[test]
fn orbital_fixing_keeps_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for trial in 0..150 {
        let (half, nc) = (rng.gen_range(2..=7), rng.gen_range(1..=12));
        let (m, g) = mirrored_model(&mut rng, half, nc);
        assert!(m.is_automorphism(&g));
        let best = exhaustive(&m);
        for mode in [NodeSearch::Auto, NodeSearch::LpDepthFirst, NodeSearch::Propagation] {
            let cfg = SolveConfig { node_search: mode, symmetries: vec![g.clone()], ..SolveConfig::default() };
            let out = solve_ip(&m, &cfg).unwrap();
            assert_eq!(out.objective, best, "trial {trial} {mode:?}");
            for target in [2, 6] {
                let f = solve_feasibility(&m, target, &cfg).unwrap();
                assert_eq!(f.achievable, Some(best.is_some_and(|b| b >= target)), "trial {trial}");
            }
        }
    }
}

#[test]
fn non_automorphisms_are_rejected() {
    let mut m = IlpModel::new("t", Sense::Maximize);
    for i in 0..3 {
        m.add_binary_var(format!("x{i}")).unwrap();
    }
    m.set_objective([(0, 1), (1, 1), (2, 1)]).unwrap();
    m.add_constraint([(0, 1), (1, 1)], Cmp::Le, 1).unwrap();
    assert!(m.is_automorphism(&[1, 0, 2]));
    assert!(!m.is_automorphism(&[2, 1, 0]));
    assert!(!m.is_automorphism(&[0, 0, 1]));
    let cfg = SolveConfig { symmetries: vec![vec![2, 1, 0]], ..SolveConfig::default() };
    assert!(solve_ip(&m, &cfg).is_err());
}
