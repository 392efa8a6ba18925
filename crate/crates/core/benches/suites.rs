//! Sequential vs rayon timing of the randomized verification suites.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hskernel_core::verify::{self, Parallelism};

fn bench_suites(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    for (name, run) in [
        (
            "theta_multiplicativity",
            verify::theta_multiplicativity as fn(u64, usize, Parallelism) -> _,
        ),
        ("hs_group_symbol", verify::hs_group_symbol),
        ("hs_curio_diagram", verify::hs_curio_diagram),
        ("divided_power_axioms", verify::divided_power_axioms),
    ] {
        for par in [Parallelism::Sequential, Parallelism::Parallel] {
            let label = match par {
                Parallelism::Sequential => "sequential",
                Parallelism::Parallel => "parallel",
            };
            group.bench_with_input(BenchmarkId::new(name, label), &par, |b, &par| {
                b.iter(|| {
                    let outcome = run(42, 50, par);
                    assert!(outcome.passed());
                });
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_suites);
criterion_main!(benches);
