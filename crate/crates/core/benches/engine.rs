use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use wpbailey::pairs::{catalog, verify_pair, PairCheck};
use wpbailey::verify::run_suite;

const MODES: [(&str, Option<usize>); 2] = [("sequential", Some(1)), ("parallel", None)];

fn suite(c: &mut Criterion) {
    let mut g = c.benchmark_group("identity_suite");
    g.sample_size(10);
    for (name, jobs) in MODES {
        g.bench_with_input(BenchmarkId::new(name, "slater*@20"), &jobs, |b, &jobs| {
            b.iter(|| run_suite("slater*", Some(20), 7, jobs).unwrap())
        });
    }
    g.finish();
}

fn pair(c: &mut Criterion) {
    let pr = catalog("H6prime").unwrap();
    let mut g = c.benchmark_group("verify_pair");
    g.sample_size(10);
    for (name, jobs) in MODES {
        let mut check = PairCheck::sampled(&pr, 6, 1, 8, 16, 7);
        check.jobs = jobs;
        g.bench_with_input(BenchmarkId::new(name, "H6prime"), &check, |b, check| {
            b.iter(|| verify_pair(&pr, check).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, suite, pair);
criterion_main!(benches);
