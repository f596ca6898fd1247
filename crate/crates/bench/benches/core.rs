use std::collections::BTreeSet;

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use thurston_bench::corpus_pair;
use thurston_core::curves::{pullback_saturate, SaturationBounds};
use thurston_core::fuzz::{fuzz_instance, FuzzConfig};
use thurston_core::generate::{generate_one, Family, GeneratorConfig};
use thurston_core::obstruction::{
    default_tolerance, find_levy_cycles, leading_eigenvalue_bounds, transition_matrix, TransitionMatrix,
};
use thurston_core::sphere_group::canonical_word;

fn lifting(c: &mut Criterion) {
    let (p, g) = corpus_pair("quadratic-like");
    let w = g.members()[0].word().clone();
    c.bench_function("lift_curve quadratic-like", |b| b.iter(|| p.lift_curve(black_box(&w))));
    let long = w.pow(8);
    c.bench_function("canonical_word length 8x", |b| b.iter(|| canonical_word(black_box(&long))));
}

fn matrices(c: &mut Criterion) {
    let (p, g) = corpus_pair("quadratic-like");
    c.bench_function("transition_matrix quadratic-like", |b| b.iter(|| transition_matrix(&p, black_box(&g))));
    c.bench_function("find_levy_cycles quadratic-like", |b| b.iter(|| find_levy_cycles(&p, black_box(&g))));
    let tol = default_tolerance();
    let golden = TransitionMatrix::from_ratios(&[&[(1, 1), (1, 1)], &[(1, 1), (0, 1)]]).unwrap();
    c.bench_function("eigenvalue bounds golden ratio", |b| b.iter(|| leading_eigenvalue_bounds(black_box(&golden), &tol)));
    let unit = TransitionMatrix::from_ratios(&[&[(0, 1), (2, 1), (0, 1)], &[(0, 1), (0, 1), (1, 2)], &[(1, 1), (0, 1), (0, 1)]]).unwrap();
    c.bench_function("eigenvalue bounds exact unit", |b| b.iter(|| leading_eigenvalue_bounds(black_box(&unit), &tol)));
}

fn pipeline(c: &mut Criterion) {
    let (p, g) = corpus_pair("basilica-selfmating");
    let seeds: BTreeSet<_> = g.members().iter().cloned().collect();
    c.bench_function("saturate basilica self-mating", |b| {
        b.iter(|| pullback_saturate(&p, black_box(&seeds), SaturationBounds::default()))
    });
    let cfg = GeneratorConfig { seed: 7, ..Default::default() };
    c.bench_function("generate cubic instance", |b| b.iter(|| generate_one(Family::CubicTwoFixed, &cfg, black_box(3))));
    let fuzz = FuzzConfig::new(Family::CubicTwoFixed, 7, 16);
    c.bench_function("fuzz 16 cubic instances", |b| {
        b.iter(|| (0..16).map(|i| fuzz_instance(&fuzz, i).map(|(_, r)| r.findings.len())).collect::<Vec<_>>())
    });
}

criterion_group!(benches, lifting, matrices, pipeline);
criterion_main!(benches);
