use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use detrace_bench::{generic_square, sl2_lists};
use detrace_core::families::build_thm1;
use detrace_core::matrix::{det_dp, det_perm_oracle, pfaffian};
use detrace_core::sl2::{build_magnus_matrices, Generator};
use detrace_core::verify::generic_skew;

fn determinants(c: &mut Criterion) {
    let mut group = c.benchmark_group("det");
    group.sample_size(10);
    for n in [4, 5, 6] {
        let m = generic_square(n);
        group.bench_with_input(BenchmarkId::new("subset_dp", n), &m, |b, m| b.iter(|| det_dp(black_box(m)).unwrap()));
        group.bench_with_input(BenchmarkId::new("permutation_oracle", n), &m, |b, m| {
            b.iter(|| det_perm_oracle(black_box(m)).unwrap())
        });
    }
    for n in [4, 5] {
        let a = build_thm1(n).a;
        group.bench_with_input(BenchmarkId::new("first_family_a", n), &a, |b, a| b.iter(|| det_dp(black_box(a)).unwrap()));
    }
    group.finish();
}

fn pfaffians(c: &mut Criterion) {
    let mut group = c.benchmark_group("pfaffian");
    for n in [4, 6, 8] {
        let m = generic_skew(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| b.iter(|| pfaffian(black_box(m)).unwrap()));
    }
    group.finish();
}

fn exact(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact");
    for generator in [Generator::sl2z(), Generator::gaussian()] {
        let (m, big_m) = sl2_lists(6, generator, 1);
        group.bench_function(BenchmarkId::new("magnus_build", generator.name()), |b| {
            b.iter(|| build_magnus_matrices(black_box(&m), black_box(&big_m)).unwrap())
        });
        let mats = build_magnus_matrices(&m, &big_m).unwrap();
        group.bench_function(BenchmarkId::new("det_7x7", generator.name()), |b| b.iter(|| black_box(&mats.a).det().unwrap()));
    }
    group.finish();
}

criterion_group!(benches, determinants, pfaffians, exact);
criterion_main!(benches);
