use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hg_core::blacksets::amalgamate_blacksets;
use hg_core::linalg::span;
use hg_core::random::{self, FuzzBounds};
use hg_core::witnesses::{gen_instability, gen_tp2, lexicographic_functions};

fn bench_span(c: &mut Criterion) {
    let mut group = c.benchmark_group("span");
    for dim in [4usize, 8, 16] {
        let mut rng = random::rng(1);
        let gens: Vec<_> = (0..dim).map(|_| random::vector(&mut rng, dim, 4)).collect();
        group.bench_with_input(BenchmarkId::from_parameter(dim), &gens, |b, g| {
            b.iter(|| span(dim, black_box(g)).unwrap())
        });
    }
    group.finish();
}

fn bench_dist_black(c: &mut Criterion) {
    let mut group = c.benchmark_group("dist_black_sq");
    for n in [4usize, 10] {
        let (s, _) = gen_instability(n).unwrap();
        let mut rng = random::rng(2);
        let probe = random::point_in(&mut rng, s.space(), 4);
        group.bench_with_input(BenchmarkId::from_parameter(n), &probe, |b, p| {
            b.iter(|| s.dist_black_sq(black_box(p)).unwrap())
        });
    }
    group.finish();
}

fn bench_amalgam_formula(c: &mut Criterion) {
    let mut rng = random::rng(3);
    let inst = random::blackset_instance(&mut rng, &FuzzBounds::default()).unwrap();
    let am = amalgamate_blacksets(&inst.base, &inst.s1, &inst.s2, &inst.emb1, &inst.emb2).unwrap();
    let probes = am.default_probes();
    c.bench_function("amalgam_formula", |b| {
        b.iter(|| am.certify_formula(black_box(&probes)).unwrap())
    });
}

fn bench_tp2(c: &mut Criterion) {
    let funcs = lexicographic_functions(4, 4, 16);
    c.bench_function("gen_tp2_4x4x16", |b| b.iter(|| gen_tp2(4, 4, black_box(&funcs)).unwrap()));
}

criterion_group!(benches, bench_span, bench_dist_black, bench_amalgam_formula, bench_tp2);
criterion_main!(benches);
