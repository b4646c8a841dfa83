use criterion::{criterion_group, criterion_main, Criterion};
use irrtopo_bench::{lambda, nat_inf, rat01};
use irrtopo_core::battery::{generate, BatteryConfig, BatterySize};
use irrtopo_core::derive::{si_iterate, sobriety_spectrum};
use irrtopo_core::exact::rat;
use irrtopo_core::nets::{irr_converges, kelley_check, main_verdict};
use irrtopo_core::parse::parse_net;
use irrtopo_core::waybelow::way_below;
use irrtopo_core::PointId;

fn bench_way_below(c: &mut Criterion) {
    let rat_space = rat01();
    let lam = lambda();
    c.bench_function("way_below/rational_pair", |b| {
        let x = PointId::Rational(rat(1, 3));
        let y = PointId::Rational(rat(1, 2));
        b.iter(|| way_below(&rat_space, &x, &y).unwrap())
    });
    c.bench_function("way_below/lambda_chain_vs_top", |b| {
        let x = PointId::chain_at("A", 3);
        let y = PointId::finite("top");
        b.iter(|| way_below(&lam, &x, &y).unwrap())
    });
}

fn bench_derivative(c: &mut Criterion) {
    let s = nat_inf();
    c.bench_function("si_iterate/nat_inf", |b| b.iter(|| si_iterate(&s, 8)));
    c.bench_function("sobriety/rational", |b| {
        let r = rat01();
        b.iter(|| sobriety_spectrum(&r).unwrap())
    });
}

fn bench_convergence(c: &mut Criterion) {
    let lam = lambda();
    let net = parse_net(&lam, "interleave(chain(A),chain(B))").unwrap();
    let top = PointId::finite("top");
    c.bench_function("irr_converges/lambda_interleave", |b| {
        b.iter(|| irr_converges(&lam, &net, &top).unwrap())
    });
    c.bench_function("kelley/lambda_small", |b| {
        let battery = generate(&lam, &BatteryConfig { seed: 42, size: BatterySize::Small });
        b.iter(|| kelley_check(&lam, &battery).unwrap())
    });
    c.bench_function("main_verdict/rational", |b| {
        let r = rat01();
        let battery = generate(&r, &BatteryConfig { seed: 42, size: BatterySize::Small });
        b.iter(|| main_verdict(&r, &battery).unwrap())
    });
}

criterion_group!(deciders, bench_way_below, bench_derivative, bench_convergence);
criterion_main!(deciders);
