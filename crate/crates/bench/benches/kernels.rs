use criterion::{black_box, criterion_group, criterion_main, Criterion};
use finisig_core::blocks::{build_block_pc, certify_equilibrium, BlockRequest};
use finisig_core::cones::{cone_rates, verify_cone_condition, ManifoldKind};
use finisig_core::linalg::{enclose_spectrum, log_norm_bounds};
use finisig_core::lohner::integrate;
use finisig_core::systems::{canard_system, cubic_wave_system};
use finisig_core::{IMatrix, IVector, Interval, LohnerConfig};

fn interval_ops(c: &mut Criterion) {
    let x = Interval::new(0.1, 0.2);
    let y = Interval::new(-0.3, 0.7);
    c.bench_function("interval_mul_add_div", |b| {
        b.iter(|| {
            let z = black_box(x) * black_box(y) + black_box(x);
            z.checked_div(&Interval::new(1.0, 2.0)).unwrap()
        })
    });
    c.bench_function("interval_pow_3_4", |b| b.iter(|| black_box(x).pow_dyadic(3, 2).unwrap()));
}

fn linear_algebra(c: &mut Criterion) {
    let a = IMatrix::from_fn(3, 3, |i, j| Interval::new(0.1 * (i + 2 * j) as f64 - 0.3, 0.1 * (i + 2 * j) as f64 - 0.29));
    c.bench_function("log_norm_3x3", |b| b.iter(|| log_norm_bounds(black_box(&a))));
    let s = IMatrix::from_fn(2, 2, |i, j| match (i, j) {
        (0, 1) | (1, 0) => Interval::ONE,
        (1, 1) => Interval::point(-0.28),
        _ => Interval::ZERO,
    });
    c.bench_function("spectrum_2x2", |b| b.iter(|| enclose_spectrum(black_box(&s)).unwrap()));
}

fn blocks_and_cones(c: &mut Criterion) {
    let sys = cubic_wave_system(Interval::from_decimal("0.3").unwrap());
    let k = IVector::new(vec![Interval::new(-1.5e-6, 1.5e-6)]);
    let req = BlockRequest {
        field: &*sys.base,
        x0: &[0.0, 0.0],
        mu0: &[0.0],
        params: &k,
    };
    c.bench_function("block_origin_cubic", |b| b.iter(|| build_block_pc(&req, &[1e-4, 1e-5]).unwrap()));
    let block = build_block_pc(&req, &[1e-4, 1e-5]).unwrap();
    let eq = certify_equilibrium(&block, &*sys.base, &k).unwrap();
    c.bench_function("cone_rates", |b| b.iter(|| cone_rates(&*sys.base, &block.hset, &k, 20.0).unwrap()));
    c.bench_function("cone_condition_extended", |b| {
        b.iter(|| verify_cone_condition(&*sys.base, &eq, ManifoldKind::Unstable, 20.0, 0.0015).unwrap())
    });
}

fn lohner(c: &mut Criterion) {
    let mut g = c.benchmark_group("lohner");
    g.sample_size(20);
    let pair = canard_system(Interval::point(0.2));
    let x0 = IVector::new(vec![Interval::new(0.692948, 0.692966), Interval::point(2.8)]);
    for order in [8, 12] {
        let cfg = LohnerConfig { order, step: 0.001 };
        g.bench_function(format!("canard_100_steps_order_{order}"), |b| {
            b.iter(|| integrate(&pair.desing, &x0, &pair.mu, 0.1, cfg).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, interval_ops, linear_algebra, blocks_and_cones, lohner);
criterion_main!(benches);
