use criterion::{criterion_group, criterion_main, Criterion};

use psi11_core::corpus::psi11::{psi11_lhs_num, verify_1psi1_formal, Psi11Formal};
use psi11_core::corpus::triple::verify_triple_product_formal;
use psi11_core::corpus::NumParams;
use psi11_core::ncalg::verify_noncommutative_seeded;
use psi11_core::numeric::NumericContext;
use psi11_core::roots::{build_root_system, verify_poincare, Family, OrbitParams};

fn formal(c: &mut Criterion) {
    let mut g = c.benchmark_group("formal");
    g.sample_size(10);
    g.bench_function("1psi1 order 20", |b| b.iter(|| verify_1psi1_formal("b", &Psi11Formal::canonical(), 20).unwrap()));
    g.bench_function("triple product order 30", |b| b.iter(|| verify_triple_product_formal("b", 1, 30).unwrap()));
    let a3 = build_root_system(Family::A, 3).unwrap();
    g.bench_function("poincare A3", |b| b.iter(|| verify_poincare(&a3, OrbitParams::Equal).unwrap()));
    g.finish();
}

fn numeric(c: &mut Criterion) {
    let mut g = c.benchmark_group("numeric");
    for prec in [128u32, 256, 512] {
        let ctx = NumericContext::parse(prec, "0.3", 1e-25).unwrap();
        let (a, b, z) = (ctx.num(2.0), ctx.parse_num("0.1").unwrap(), ctx.parse_num("0.4").unwrap());
        g.bench_function(format!("1psi1 sum {prec} bits"), |bch| bch.iter(|| psi11_lhs_num(&ctx, &a, &b, &z).unwrap()));
    }
    let p = NumParams::new([("q", "0.2"), ("b", "0.05")]);
    g.sample_size(10);
    g.bench_function("noncommutative d=3", |b| {
        b.iter(|| verify_noncommutative_seeded("b", 3, 0, &p, 256, 1e-15).unwrap())
    });
    g.finish();
}

criterion_group!(benches, formal, numeric);
criterion_main!(benches);
