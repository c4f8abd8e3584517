use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use num_complex::Complex64;

use symquad_core::numerics::{algebraic_integrate, aberth_roots, ToleranceConfig};
use symquad_core::{
    darboux_halphen, detect_symmetry, lv_tensor, monic_coeffs, rat, reduce_generic,
    sigma_system, vieta_image, Rational, SymmetricSystem,
};

fn bench_reduction(c: &mut Criterion) {
    let mut group = c.benchmark_group("reduce");
    for n in [2usize, 3, 4, 5] {
        let sys = SymmetricSystem::new(n, rat(3, 7), rat(-1, 3), rat(2, 5), rat(1, 6));
        group.bench_function(format!("generic_n{n}"), |b| {
            b.iter(|| reduce_generic(&sys).unwrap())
        });
    }
    group.bench_function("sigma_system_n6", |b| {
        let sys = SymmetricSystem::new(6, rat(3, 7), rat(-1, 3), rat(2, 5), rat(1, 6));
        b.iter(|| sigma_system(&sys))
    });
    group.finish();
}

fn bench_roots(c: &mut Criterion) {
    let mut group = c.benchmark_group("roots");
    let xs: Vec<Complex64> = vec![
        Complex64::new(1.0, 0.5),
        Complex64::new(-2.0, 0.1),
        Complex64::new(0.3, -1.2),
        Complex64::new(2.5, 0.0),
        Complex64::new(-0.7, -0.4),
        Complex64::new(0.9, 2.0),
    ];
    let coeffs = monic_coeffs(&vieta_image(&xs));
    group.bench_function("aberth_cold_deg6", |b| {
        b.iter(|| aberth_roots(&coeffs, None, 1e-13, 400).unwrap())
    });
    let warm: Vec<Complex64> = xs
        .iter()
        .map(|z| z + Complex64::new(1e-4, -1e-4))
        .collect();
    group.bench_function("aberth_warm_deg6", |b| {
        b.iter(|| aberth_roots(&coeffs, Some(&warm), 1e-13, 400).unwrap())
    });
    group.finish();
}

fn bench_round_trip(c: &mut Criterion) {
    let mut group = c.benchmark_group("round_trip");
    group.sample_size(20);
    let cfg = ToleranceConfig::default();
    let x0 = vec![
        Complex64::new(1.0, 0.0),
        Complex64::new(2.0, 0.0),
        Complex64::new(3.0, 0.0),
    ];
    let dh = darboux_halphen();
    group.bench_function("darboux_halphen", |b| {
        b.iter_batched(
            || (dh.clone(), x0.clone()),
            |(sys, x0)| algebraic_integrate(&sys, &x0, (0.0, 0.05), &cfg).unwrap(),
            BatchSize::SmallInput,
        )
    });
    let lv3: SymmetricSystem<Rational> = detect_symmetry(&lv_tensor(3)).unwrap();
    group.bench_function("lv3", |b| {
        b.iter_batched(
            || (lv3.clone(), x0.clone()),
            |(sys, x0)| algebraic_integrate(&sys, &x0, (0.0, 0.05), &cfg).unwrap(),
            BatchSize::SmallInput,
        )
    });
    group.finish();
}

criterion_group!(benches, bench_reduction, bench_roots, bench_round_trip);
criterion_main!(benches);
