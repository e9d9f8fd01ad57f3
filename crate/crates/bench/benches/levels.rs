use std::hint::black_box;

use arithlevel::density::{basis_for, find_transvection};
use arithlevel::level::{analyze, AnalyzeOptions};
use arithlevel::{delta, families, Ambient, Config, LayeredChain, ResidueMatrix};
use criterion::{criterion_group, criterion_main, Criterion};

fn chains(c: &mut Criterion) {
    let config = Config::default();
    let sl3 = Ambient::sl(3).unwrap();
    let sp4 = Ambient::sp(4).unwrap();
    let mut g = c.benchmark_group("chain");
    for (name, amb, m) in [
        ("sl3 mod 125", sl3, 125u64),
        ("sl3 mod 360", sl3, 360),
        ("sp4 mod 64", sp4, 64),
    ] {
        let gens: Vec<ResidueMatrix> = amb
            .elementary_generators(1)
            .iter()
            .map(|x| ResidueMatrix::reduce(x, m))
            .collect();
        g.bench_function(name, |b| {
            b.iter(|| {
                LayeredChain::build(black_box(&gens), &config)
                    .unwrap()
                    .order()
            })
        });
    }
    g.finish();
}

fn levels(c: &mut Criterion) {
    let config = Config::default();
    let opts = AnalyzeOptions::default();
    let mut g = c.benchmark_group("analyze");
    g.sample_size(10);
    for t in [1i64, -1, 2, -2] {
        let spec = families::beta(t, true).unwrap();
        g.bench_function(format!("beta {t}"), |b| {
            b.iter(|| analyze(&spec, &config, &opts).unwrap().index)
        });
    }
    for (d, k) in [(2i64, 3i64), (16, 8)] {
        let spec = families::hypergeometric(d, k).unwrap();
        g.bench_function(format!("G({d},{k})"), |b| {
            b.iter(|| analyze(&spec, &config, &opts).unwrap().index)
        });
    }
    g.finish();

    let mixed = families::mixed_level_example().unwrap();
    c.bench_function("delta mixed mod 45", |b| {
        b.iter(|| delta(&mixed, black_box(45), &config).unwrap())
    });
}

fn density(c: &mut Criterion) {
    let h = families::humphries(998).unwrap();
    c.bench_function("basis humphries 998", |b| {
        b.iter(|| basis_for(black_box(&h)).unwrap().rank())
    });
    let rho = families::rho(3, false).unwrap();
    let mut g = c.benchmark_group("search");
    g.sample_size(10);
    g.bench_function("transvection rho 3", |b| {
        b.iter(|| find_transvection(black_box(&rho), 8))
    });
    g.finish();
}

criterion_group!(benches, chains, levels, density);
criterion_main!(benches);
