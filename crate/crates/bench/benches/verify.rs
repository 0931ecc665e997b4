use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use shearconv_core::verify::{run_checks, VerifyOptions};
use shearconv_core::{TheoremId, TheoremParams};

fn theorem_bundles(c: &mut Criterion) {
    let options = VerifyOptions::default();
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    let cases = [
        ("t2.3", TheoremParams { a: Some(0.2), eta: Some(3.0), n: Some(2), ..Default::default() }),
        ("t3.2", TheoremParams { b: Some(0.0), eta: Some(1.8), n: Some(1), ..Default::default() }),
    ];
    for (name, params) in cases {
        let theorem: TheoremId = name.parse().unwrap();
        let pair = theorem.resolve(&params).unwrap();
        group.bench_function(name, |b| {
            b.iter(|| run_checks(theorem, black_box(&pair), true, &options).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, theorem_bundles);
criterion_main!(benches);
