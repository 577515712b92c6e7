use criterion::{criterion_group, criterion_main, Criterion};
use efgc_bench::{cycle_instance, generic_lines, ladder, path_instance, star3_identical};
use efgc_core::arrangement::{box_region, enumerate_by_search, enumerate_by_sweep};
use efgc_core::cutset::{solve_cycle, solve_tree_gc_bounded_degree, solve_tree_vdgc};
use efgc_core::few_edges::solve_few_edges;
use efgc_core::model::Variant;
use efgc_core::oracle::solve_explicit_oracle;
use efgc_core::rational::int;
use std::hint::black_box;

fn solvers(c: &mut Criterion) {
    let star = star3_identical();
    let star_v = star.with_variant(Variant::Vdgc);
    let path = path_instance(3, 3, Variant::Gc);
    let mut g = c.benchmark_group("solvers");
    g.sample_size(10);
    g.bench_function("few_edges/star3", |b| b.iter(|| solve_few_edges(black_box(&star))));
    g.bench_function("few_edges/path3x3", |b| b.iter(|| solve_few_edges(black_box(&path))));
    g.bench_function("tree_gc/star3", |b| b.iter(|| solve_tree_gc_bounded_degree(black_box(&star))));
    g.bench_function("tree_vdgc/star3", |b| b.iter(|| solve_tree_vdgc(black_box(&star_v))));
    g.bench_function("oracle/path3x3", |b| b.iter(|| solve_explicit_oracle(black_box(&path))));
    g.bench_function("oracle/ladder_1234", |b| {
        let l = ladder(&[1, 2, 3, 4]);
        b.iter(|| solve_explicit_oracle(black_box(&l)))
    });
    g.finish();
}

fn cycles(c: &mut Criterion) {
    let mut g = c.benchmark_group("cycle");
    g.sample_size(10);
    for variant in [Variant::Gc, Variant::Vdgc] {
        let inst = cycle_instance(4, 3, variant);
        g.bench_function(format!("c4x3/{variant}"), |b| b.iter(|| solve_cycle(black_box(&inst))));
    }
    g.finish();
}

fn arrangements(c: &mut Criterion) {
    let region = box_region(2, &int(-100), &int(100));
    let mut g = c.benchmark_group("arrangement");
    g.sample_size(10);
    for s in [3, 5] {
        let lines = generic_lines(s);
        g.bench_function(format!("sweep/{s}"), |b| b.iter(|| enumerate_by_sweep(black_box(&lines), &region)));
        g.bench_function(format!("search/{s}"), |b| b.iter(|| enumerate_by_search(black_box(&lines), &region)));
    }
    g.finish();
}

criterion_group!(benches, solvers, cycles, arrangements);
criterion_main!(benches);
