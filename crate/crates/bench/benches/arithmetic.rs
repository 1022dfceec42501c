use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use wittbox_core::witt::{witt_op_polys, WittGenRequest, WittOp};
use wittbox_core::{Fq, GaloisRing, Ring};

fn witt_generation(c: &mut Criterion) {
    let mut group = c.benchmark_group("witt_polys");
    group.sample_size(10);
    for (p, n, r) in [(2, 3, 2), (3, 2, 2), (2, 2, 3)] {
        let req = WittGenRequest::new(p, n, r, WittOp::Product).unwrap();
        // memoized after the first call, so this measures the cache hit
        group.bench_with_input(BenchmarkId::new("cached", format!("p{p}_n{n}_r{r}")), &req, |b, req| {
            b.iter(|| witt_op_polys(black_box(req)).unwrap())
        });
    }
    group.finish();
}

fn galois_ring(c: &mut Criterion) {
    let mut group = c.benchmark_group("galois_ring");
    for (p, h, m) in [(2, 1, 8), (2, 4, 4), (5, 2, 3)] {
        let ring = GaloisRing::new(Fq::with_degree(p, h).unwrap(), m).unwrap();
        let a = ring.element(12345 % ring.cardinality().unwrap_or(u64::MAX));
        let b = ring.element(6789 % ring.cardinality().unwrap_or(u64::MAX));
        let label = format!("GR({p}^{m},{h})");
        group.bench_function(BenchmarkId::new("mul", &label), |bch| {
            bch.iter(|| ring.mul(black_box(&a), black_box(&b)))
        });
        group.bench_function(BenchmarkId::new("teichmuller", &label), |bch| {
            bch.iter(|| ring.teichmuller_lift(black_box(&ring.field().element(3 % ring.field().q()))))
        });
        let (da, db) = (ring.to_digits(&a), ring.to_digits(&b));
        group.bench_function(BenchmarkId::new("witt_digit_mul", &label), |bch| {
            bch.iter(|| ring.witt_digit_op(black_box(&da), black_box(&db), WittOp::Product).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, witt_generation, galois_ring);
criterion_main!(benches);
