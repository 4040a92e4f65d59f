use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use voa_core::exec::Execution;
use voa_core::fusion::{check_nm_products, verify_fusion_ee7};
use voa_core::props::{form_props, PropSettings};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn fusion(c: &mut Criterion) {
    let mut g = c.benchmark_group("fusion");
    g.sample_size(10);
    for (name, ex) in MODES {
        g.bench_with_input(BenchmarkId::new("ee7 k=2 cutoff 14", name), &ex, |b, &ex| b.iter(|| verify_fusion_ee7(2, 14, ex)));
        g.bench_with_input(BenchmarkId::new("nm 1.1 k=2 cutoff 14", name), &ex, |b, &ex| {
            b.iter(|| check_nm_products(2, 1, 1, 14, ex))
        });
    }
    g.finish();
}

fn props(c: &mut Criterion) {
    let mut g = c.benchmark_group("props");
    g.sample_size(10);
    for (name, exec) in MODES {
        let s = PropSettings { samples: 64, seed: 0, exec };
        g.bench_with_input(BenchmarkId::new("form 64 draws", name), &s, |b, s| b.iter(|| form_props(s)));
    }
    g.finish();
}

criterion_group!(benches, fusion, props);
criterion_main!(benches);
