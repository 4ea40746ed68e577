use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use interlab::{
    choquet, lebesgue_extended, verify_interchange, Capacity, ExtReal, Family, FnClass, Functional,
    InterchangeOptions, MeasureSpace, Scalar,
};

fn space(n: usize) -> Arc<MeasureSpace> {
    MeasureSpace::from_weights((1..=n as i64).map(|k| Scalar::ratio(1, k)).collect())
        .unwrap()
        .into_shared()
}

fn zigzag(s: &Arc<MeasureSpace>, shift: i64) -> FnClass {
    let values: Vec<i64> = (0..s.len() as i64).map(|i| (i * 7 + shift) % 11).collect();
    FnClass::from_ints(s.clone(), &values).unwrap()
}

fn integrals(c: &mut Criterion) {
    let mut group = c.benchmark_group("integrals");
    for n in [4usize, 8, 12] {
        let s = space(n);
        let f = zigzag(&s, 3);
        let mut g = f.values().to_vec();
        g[0] = ExtReal::NegInf;
        let g = FnClass::new(s.clone(), g).unwrap();
        let cap = Capacity::distortion(s.clone(), Scalar::int(2)).unwrap();
        group.bench_with_input(BenchmarkId::new("lebesgue_extended", n), &g, |b, g| {
            b.iter(|| lebesgue_extended(black_box(g)))
        });
        group.bench_with_input(BenchmarkId::new("choquet", n), &f, |b, f| {
            b.iter(|| choquet(black_box(f), &cap))
        });
    }
    group.finish();
}

fn interchange(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_interchange");
    let opts = InterchangeOptions::default();
    let s = space(6);
    for k in [2usize, 4, 8] {
        let x = Family::new((0..k as i64).map(|j| zigzag(&s, j)).collect()).unwrap();
        for phi in [Functional::extended_lebesgue(), Functional::ess_sup()] {
            group.bench_with_input(BenchmarkId::new(phi.name().to_string(), k), &x, |b, x| {
                b.iter(|| verify_interchange(black_box(x), &phi, &opts))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, integrals, interchange);
criterion_main!(benches);
