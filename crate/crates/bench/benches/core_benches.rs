use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use emproc::chaining::chaining_bound_check;
use emproc::distributions::DistributionModel;
use emproc::edf::{build_edf, weighted_sup_norm};
use emproc::functionals::{holder_constant, l_statistic, v_plugin, LKernel, VKernel};
use emproc::mixing::simulate_ar1;
use emproc::weights::{make_adaptive_weight, WeightFunction};

fn bench_sampling(c: &mut Criterion) {
    let pareto = DistributionModel::pareto(2.0, 1.0, 0.25, 0.25).unwrap();
    let mut group = c.benchmark_group("sampling");
    for n in [1 << 10, 1 << 14] {
        group.bench_with_input(BenchmarkId::new("iid_pareto", n), &n, |b, &n| {
            b.iter(|| pareto.sample_iid(n, black_box(7)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("ar1", n), &n, |b, &n| {
            b.iter(|| simulate_ar1(0.5, n, black_box(7)).unwrap())
        });
    }
    group.finish();
}

fn bench_sup_norm(c: &mut Criterion) {
    let pareto = DistributionModel::pareto(4.0, 1.0, 0.25, 0.25).unwrap();
    let adaptive = make_adaptive_weight(&pareto, 0.9).unwrap();
    let uniform01 = DistributionModel::Uniform01;
    let mut group = c.benchmark_group("weighted_sup_norm");
    for n in [1 << 10, 1 << 14] {
        let edf_u = build_edf(&uniform01.sample_iid(n, 3).unwrap()).unwrap();
        group.bench_with_input(BenchmarkId::new("uniform_weight", n), &edf_u, |b, edf| {
            b.iter(|| weighted_sup_norm(edf, &uniform01, &WeightFunction::Uniform, 8))
        });
        let edf_p = build_edf(&pareto.sample_iid(n, 3).unwrap()).unwrap();
        group.bench_with_input(BenchmarkId::new("adaptive_pareto", n), &edf_p, |b, edf| {
            b.iter(|| weighted_sup_norm(edf, &pareto, &adaptive, 8))
        });
    }
    group.finish();
}

fn bench_functionals(c: &mut Criterion) {
    let normal = DistributionModel::StdNormal;
    let edf = build_edf(&normal.sample_iid(1 << 14, 5).unwrap()).unwrap();
    c.bench_function("l_statistic_power_16k", |b| {
        b.iter(|| l_statistic(&edf, &LKernel::Power { beta: 0.5 }))
    });
    c.bench_function("v_plugin_half_squared_16k", |b| {
        b.iter(|| v_plugin(&edf, &VKernel::HalfSquaredDiff))
    });
    let pareto = DistributionModel::pareto(4.0, 1.0, 0.25, 0.25).unwrap();
    c.bench_function("holder_constant_pareto", |b| {
        b.iter(|| holder_constant(&pareto, &LKernel::Power { beta: 0.5 }, 0.9, 1e-10).unwrap())
    });
}

fn bench_chaining(c: &mut Criterion) {
    let u = DistributionModel::Uniform01.sample_iid(1000, 9).unwrap();
    let t_grid: Vec<f64> = (0..=100).map(|k| k as f64 / 100.0).collect();
    c.bench_function("chaining_bound_check_n1000", |b| {
        b.iter(|| chaining_bound_check(&u, 1000, &t_grid).unwrap())
    });
}

criterion_group!(benches, bench_sampling, bench_sup_norm, bench_functionals, bench_chaining);
criterion_main!(benches);
