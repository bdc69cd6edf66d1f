use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use setlp::certificates::{list_certificates, verify_id};
use setlp::constructions::{cyclic_design, disjoint_free_9, forb_from_design, four_part_turan, two_sided};
use setlp::setfam::{
    contains_disjoint_triangles, diversity, has_configuration, is_intersecting, max_pairwise_disjoint,
};
use setlp::PatternMatrix;

fn predicates(c: &mut Criterion) {
    let k9 = disjoint_free_9();
    c.bench_function("max_pairwise_disjoint_481", |b| b.iter(|| max_pairwise_disjoint(black_box(&k9))));

    let ts = two_sided(7, 3).unwrap();
    c.bench_function("is_intersecting_514", |b| b.iter(|| is_intersecting(black_box(&ts))));
    c.bench_function("diversity_514", |b| b.iter(|| diversity(black_box(&ts)).unwrap()));

    let f = forb_from_design(&cyclic_design(13, &[vec![0, 1, 3, 9]]).unwrap()).unwrap();
    let p = PatternMatrix::two_common_one_private();
    c.bench_function("has_configuration_157", |b| b.iter(|| has_configuration(black_box(&f), &p)));

    let g = four_part_turan(6, 6).unwrap();
    c.bench_function("triangle_packing_24_vertices", |b| b.iter(|| contains_disjoint_triangles(black_box(&g), 6)));
}

fn certificates(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify");
    g.sample_size(10);
    g.bench_function("all", |b| {
        b.iter(|| {
            for info in list_certificates() {
                assert!(verify_id(info.id).unwrap().passed());
            }
        })
    });
    g.finish();
}

criterion_group!(benches, predicates, certificates);
criterion_main!(benches);
