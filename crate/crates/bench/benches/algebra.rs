use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use gbord_core::bt::BtContext;
use gbord_core::exact::intmat::snf;
use gbord_core::exact::IntMatrix;
use gbord_core::fgl::{FormalGroupLaw, LazardBasis};
use gbord_core::flag::torsion_index;
use gbord_core::twisted::TwistedContext;
use gbord_core::weyl::{RootDatum, WeylGroup};
use num_bigint::BigInt;

fn lazard(c: &mut Criterion) {
    c.bench_function("lazard_basis_6", |b| b.iter(|| LazardBasis::new(black_box(6))));
    let law = FormalGroupLaw::universal(6);
    c.bench_function("associativity_residual_6", |b| b.iter(|| law.associativity_residual(6).unwrap()));
}

fn lattices(c: &mut Criterion) {
    // Deterministic 12x12 matrix with small entries.
    let rows: Vec<Vec<BigInt>> = (0..12)
        .map(|i| (0..12).map(|j| BigInt::from(((i * 7 + j * 13 + i * j) % 11) as i64 - 5)).collect())
        .collect();
    let m = IntMatrix::from_rows(&rows, 12);
    c.bench_function("snf_12x12", |b| b.iter(|| snf(black_box(&m))));
}

fn weyl(c: &mut Criterion) {
    let sl4 = RootDatum::preset("SL4").unwrap();
    c.bench_function("enumerate_sl4", |b| b.iter(|| WeylGroup::enumerate(black_box(&sl4)).unwrap()));
    let g2 = WeylGroup::enumerate(&RootDatum::preset("G2").unwrap()).unwrap();
    c.bench_function("torsion_index_g2", |b| b.iter(|| torsion_index(black_box(&g2)).unwrap()));
}

fn duality(c: &mut Criterion) {
    let ctx = BtContext::new(1, 6).unwrap();
    let tw = TwistedContext::new(ctx.law().clone(), RootDatum::preset("SL2").unwrap(), 6).unwrap();
    let tau = BigInt::from(1);
    c.bench_function("duality_sl2_degree_4", |b| b.iter(|| ctx.duality_check(&tw, black_box(4), &tau).unwrap()));
    c.bench_function("coinvariants_sl2_degree_6", |b| b.iter(|| ctx.coinvariants(tw.weyl(), black_box(6)).unwrap()));
}

criterion_group!(benches, lazard, lattices, weyl, duality);
criterion_main!(benches);
