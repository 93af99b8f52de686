use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use smlat::compound::{build_compound, worker_optimal_compound};
use smlat::da::worker_da;
use smlat::lattice::{build_rotation_poset, stable_under_all};
use smlat::lp::{build_lp, solve_feasible};
use smlat::multiroom::worker_optimal_multiroom;
use smlat::random::{random_family, random_instance, trial_rng};

fn da(c: &mut Criterion) {
    let mut g = c.benchmark_group("worker_da");
    for n in [8, 32, 128] {
        let inst = random_instance(n, &mut trial_rng(1, n as u64));
        g.bench_with_input(BenchmarkId::from_parameter(n), &inst, |b, i| {
            b.iter(|| worker_da(i))
        });
    }
    g.finish();
}

fn poset(c: &mut Criterion) {
    let mut g = c.benchmark_group("rotation_poset");
    for n in [8, 32, 64] {
        let inst = random_instance(n, &mut trial_rng(2, n as u64));
        g.bench_with_input(BenchmarkId::from_parameter(n), &inst, |b, i| {
            b.iter(|| build_rotation_poset(i))
        });
    }
    g.finish();
}

fn engines(c: &mut Criterion) {
    let zero = random_family(32, 3, 0, 4, &mut trial_rng(3, 0));
    let one = random_family(32, 3, 1, 4, &mut trial_rng(3, 1));
    c.bench_function("compound_worker_optimal/n32", |b| {
        b.iter(|| worker_optimal_compound(&build_compound(&zero).unwrap()))
    });
    c.bench_function("multiroom_worker_optimal/n32", |b| {
        b.iter(|| worker_optimal_multiroom(&one).unwrap())
    });
    let small = random_family(6, 2, 1, 2, &mut trial_rng(3, 2));
    c.bench_function("oracle_intersection/n6", |b| {
        b.iter(|| stable_under_all(&small, 8).unwrap())
    });
}

fn lp(c: &mut Criterion) {
    let mut g = c.benchmark_group("lp_feasible");
    g.sample_size(10);
    for n in [4, 6] {
        let family = random_family(n, 2, 1, 2, &mut trial_rng(4, n as u64));
        let model = build_lp(&family).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &model, |b, m| {
            b.iter(|| solve_feasible(m))
        });
    }
    g.finish();
}

criterion_group!(benches, da, poset, engines, lp);
criterion_main!(benches);
