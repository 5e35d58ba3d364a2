use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use reslie::corpus::{abelian, heisenberg, witt};
use reslie::rescochain::delta2_matrix;
use reslie::sample::Sampler;
use reslie::{build_resolution, FpMatrix, Prime, RestrictedModule, Ures};

fn rank(c: &mut Criterion) {
    let mut group = c.benchmark_group("rank");
    for size in [32usize, 64, 128] {
        let p = Prime::new(7).unwrap();
        let mut sampler = Sampler::new(p, size, "bench rank");
        let m = FpMatrix::from_columns(
            p,
            size,
            &sampler.vector(size * size).chunks(size).map(<[u32]>::to_vec).collect::<Vec<_>>(),
        );
        group.bench_with_input(BenchmarkId::from_parameter(size), &m, |b, m| b.iter(|| black_box(m.rank())));
    }
    group.finish();
}

fn pbw_normalize(c: &mut Criterion) {
    let mut group = c.benchmark_group("pbw normalize");
    for p in [3u32, 5] {
        let alg = Arc::new(witt(p));
        let ures = Ures::new(alg);
        let n = p as usize;
        let word: Vec<usize> = (0..3 * n).map(|k| (k * 7 + 3) % n).collect();
        group.bench_with_input(BenchmarkId::new("witt", p), &word, |b, w| b.iter(|| black_box(ures.normalize(w))));
    }
    group.finish();
}

fn delta2_assembly(c: &mut Criterion) {
    let mut group = c.benchmark_group("delta2 assembly");
    group.sample_size(10);
    for (name, alg) in [("heisenberg p=5", heisenberg(5, true)), ("witt p=5", witt(5))] {
        let module = RestrictedModule::adjoint(&Arc::new(alg));
        group.bench_function(name, |b| b.iter(|| black_box(delta2_matrix(&module))));
    }
    group.finish();
}

fn resolution(c: &mut Criterion) {
    let mut group = c.benchmark_group("resolution build");
    group.sample_size(10);
    for (n, p, k_max) in [(2usize, 3u32, 2usize), (2, 5, 4), (3, 3, 2)] {
        let alg = Arc::new(abelian(p, n, true));
        group.bench_function(format!("n={n} p={p} kmax={k_max}"), |b| {
            b.iter(|| black_box(build_resolution(&alg, k_max)))
        });
    }
    group.finish();
}

criterion_group!(kernels, rank, pbw_normalize, delta2_assembly, resolution);
criterion_main!(kernels);
