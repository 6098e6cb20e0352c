use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use levy_strong::config::StudyConfig;
use levy_strong::exec::Execution;
use levy_strong::harness::strong_error_study;

const CONFIG: &str = r#"{
    "model": {
        "small": { "kind": "atoms", "atoms": [{ "x": 0.5, "mass": 0.6 }, { "x": -0.25, "mass": 0.4 }] },
        "tail": [{ "x": 1.5, "mass": 0.3 }, { "x": -1.2, "mass": 0.2 }]
    },
    "coefficients": { "b": -0.5, "sigma": 0.3, "f": 0.2, "g": 0.1 },
    "scheme": "milstein",
    "levels": [3, 4, 5, 6],
    "paths": 256,
    "seed": 7
}"#;

fn study(c: &mut Criterion) {
    let cfg = StudyConfig::from_json(CONFIG).unwrap();
    let mut group = c.benchmark_group("strong_error_study");
    group.sample_size(10);
    for exec in [Execution::Sequential, Execution::Parallel] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &exec| {
            b.iter(|| strong_error_study(&cfg, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, study);
criterion_main!(benches);
