use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use waring_core::criteria::{certify, CertConfig};
use waring_core::field::{PrimeField, DEFAULT_PRIME};
use waring_core::flattening::{self, FlatteningKind};
use waring_core::par;
use waring_core::scan::{self, ScanConfig};

fn scan_bench(c: &mut Criterion) {
    let cfg = ScanConfig {
        trials: 8,
        ..ScanConfig::new(4, 4, 8)
    };
    let mut g = c.benchmark_group("scan n=4 d=4 r=8");
    g.sample_size(10);
    g.bench_function(BenchmarkId::new("rayon", 8), |b| b.iter(|| scan::generic_scan(&cfg).unwrap()));
    g.bench_function(BenchmarkId::new("sequential", 8), |b| {
        b.iter(|| par::single_threaded(|| scan::generic_scan(&cfg).unwrap()))
    });
    g.finish();
}

fn certify_bench(c: &mut Criterion) {
    let f = PrimeField::new(DEFAULT_PRIME).unwrap();
    let w = scan::random_decomposition(f, 6, 3, 10, 1, 0).unwrap();
    let cfg = CertConfig::default();
    let mut g = c.benchmark_group("certify n=6 d=3 r=10");
    g.sample_size(10);
    g.bench_function("rayon", |b| b.iter(|| certify(&w, &cfg).unwrap()));
    g.bench_function("sequential", |b| b.iter(|| par::single_threaded(|| certify(&w, &cfg).unwrap())));
    g.finish();
}

fn elimination_bench(c: &mut Criterion) {
    let f = PrimeField::new(DEFAULT_PRIME).unwrap();
    let w = scan::random_decomposition(f, 6, 3, 11, 2, 0).unwrap();
    let m = FlatteningKind::Koszul { a: 3 }.matrix(&w.tensor()).unwrap();
    let mut g = c.benchmark_group("koszul rank n=6 a=3");
    g.sample_size(10);
    g.bench_function("rayon", |b| b.iter(|| m.rank()));
    g.bench_function("sequential", |b| b.iter(|| par::single_threaded(|| m.rank())));
    g.finish();

    let w = scan::random_decomposition(f, 3, 6, 12, 3, 0).unwrap();
    let p = w.tensor();
    let kind = FlatteningKind::Catalecticant { k: 3 };
    let mut g = c.benchmark_group("determinantal tangent n=3 d=6 r=12");
    g.sample_size(10);
    g.bench_function("rayon", |b| b.iter(|| flattening::determinantal_tangent_dimension(kind, &p, 12).unwrap()));
    g.bench_function("sequential", |b| {
        b.iter(|| par::single_threaded(|| flattening::determinantal_tangent_dimension(kind, &p, 12).unwrap()))
    });
    g.finish();
}

criterion_group!(benches, scan_bench, certify_bench, elimination_bench);
criterion_main!(benches);
