//! Rayon vs sequential comparison for the finite-field enumeration of the
//! fiber variety, the data-parallel hot loop of the crate.
//!
//! Run with `cargo bench -p lieverify`; the parallel feature must be on
//! (it is by default) so both code paths are available side by side.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use lieverify::exact::FieldTag;
use lieverify::keylemma::{lii_members_par, lii_members_seq, KeyLemmaInstance};

fn bench_enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("lii_members");
    group.sample_size(10);
    for (n, p) in [(2usize, 7u64), (3, 3), (3, 5)] {
        let inst = KeyLemmaInstance::new(n, FieldTag::Prime(p)).unwrap();
        group.bench_with_input(BenchmarkId::new("seq", format!("n{n}_p{p}")), &inst, |b, inst| {
            b.iter(|| lii_members_seq(inst, 1).unwrap().len());
        });
        group.bench_with_input(BenchmarkId::new("par", format!("n{n}_p{p}")), &inst, |b, inst| {
            b.iter(|| lii_members_par(inst, 1).unwrap().len());
        });
    }
    group.finish();
}

criterion_group!(benches, bench_enumeration);
criterion_main!(benches);
