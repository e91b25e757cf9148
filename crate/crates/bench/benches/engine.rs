use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kromatik::orientation::multi_orientations;
use kromatik::tableaux::{gpt_coefficients, kromatic_x_partitions, sbar_expand_partitions};
use kromatik::{expand_in_basis, kromatic, kromatic_l, BasisId, Graph, Poset, Variant};
use std::hint::black_box;

fn colorings(c: &mut Criterion) {
    let mut group = c.benchmark_group("kromatic");
    for n in [5usize, 7, 9] {
        group.bench_with_input(BenchmarkId::new("K3", n), &n, |b, &n| b.iter(|| kromatic(black_box(&Graph::complete(3)), n)));
    }
    let c4 = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
    group.bench_function("Lbar C4 N=7", |b| b.iter(|| kromatic_l(black_box(&c4), 7, Variant::AscMax)));
    group.finish();
}

fn expansions(c: &mut Criterion) {
    let s = kromatic_l(&Graph::path(4), 7, Variant::AscMax);
    c.bench_function("Lbar expansion P4 N=7", |b| b.iter(|| expand_in_basis(black_box(&s), BasisId::Lbar).unwrap()));
    let k = kromatic(&Graph::path(4), 7);
    c.bench_function("sbar expansion P4 N=7", |b| b.iter(|| expand_in_basis(black_box(&k), BasisId::Sbar).unwrap()));
}

fn orientations(c: &mut Criterion) {
    let g = Graph::complete(3);
    c.bench_function("multi-orientations K3 N=6", |b| b.iter(|| multi_orientations(black_box(&g), 6).len()));
}

fn grothendieck(c: &mut Criterion) {
    let p = Poset::on_range(4, &[(1, 3), (1, 4), (2, 4)]);
    let g = p.incomparability_graph();
    let mut group = c.benchmark_group("grothendieck");
    group.sample_size(10);
    group.bench_function("coloring side w=8", |b| b.iter(|| sbar_expand_partitions(&kromatic_x_partitions(black_box(&g), 8))));
    group.bench_function("tableau side w=8", |b| b.iter(|| gpt_coefficients(black_box(&p), 8)));
    group.finish();
}

criterion_group!(benches, colorings, expansions, orientations, grothendieck);
criterion_main!(benches);
