use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use cdist::condition::{gaussian_noise, posterior_bounds};
use cdist::exactreal::{exp, rational::rat, sqrt};
use cdist::measure::measure_bounds;
use cdist::sampler::{cantor, render_on, std_normal, std_uniform};
use cdist::{BitTape, CReal, OpenSet};
use cdist_bench::{program, GEOMETRIC, MY_NORMAL};

fn reals(c: &mut Criterion) {
    let mut g = c.benchmark_group("creal");
    for n in [32u32, 128, 512] {
        g.bench_with_input(BenchmarkId::new("sqrt2", n), &n, |b, &n| {
            b.iter(|| sqrt(&CReal::from_int(2)).approx(black_box(n)).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("exp_third", n), &n, |b, &n| {
            b.iter(|| {
                exp(&CReal::from_rational(rat(1, 3)))
                    .approx(black_box(n))
                    .unwrap()
            })
        });
    }
    g.finish();
}

fn sampling(c: &mut Criterion) {
    let mut g = c.benchmark_group("sample");
    let normal = std_normal();
    let cantor = cantor();
    let geo = program(GEOMETRIC);
    let my_normal = program(MY_NORMAL);
    let mut seed = 0u64;
    let mut next = || {
        seed += 1;
        BitTape::prng(seed)
    };
    g.bench_function("std_normal_p20", |b| {
        b.iter(|| render_on(&normal, &next(), 20).unwrap())
    });
    g.bench_function("cantor_p20", |b| {
        b.iter(|| render_on(&cantor, &next(), 20).unwrap())
    });
    g.bench_function("lambda_geometric", |b| {
        b.iter(|| render_on(&geo, &next(), 0).unwrap())
    });
    g.bench_function("lambda_my_normal_p10", |b| {
        b.iter(|| render_on(&my_normal, &next(), 10))
    });
    g.finish();
}

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("measure");
    g.sample_size(10);
    let half = OpenSet::interval(rat(0, 1), rat(1, 2)).unwrap();
    let u = std_uniform();
    for k in [10u32, 12, 14] {
        g.bench_with_input(BenchmarkId::new("uniform_half", k), &k, |b, &k| {
            b.iter(|| measure_bounds(&u, &half, k, k - 2).unwrap())
        });
    }
    let geo = program(GEOMETRIC);
    let one = OpenSet::nats([1]);
    g.bench_function("lambda_geometric_k10", |b| {
        b.iter(|| measure_bounds(&geo, &one, 10, 0).unwrap())
    });
    let d = gaussian_noise(&rat(1, 1)).unwrap();
    let y = CReal::from_rational(rat(1, 2));
    g.bench_function("posterior_uniform_gauss_k12", |b| {
        b.iter(|| posterior_bounds(&u, &d, &y, &half, 12, 10).unwrap())
    });
    g.finish();
}

criterion_group!(benches, reals, sampling, enumeration);
criterion_main!(benches);
