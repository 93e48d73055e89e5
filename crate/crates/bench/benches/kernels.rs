use aspec_bench::{linear_quiver, truncated};
use aspec_core::aspec::ASpecSpace;
use aspec_core::hull::hull;
use aspec_core::linalg::rref;
use aspec_core::module::simple_modules;
use aspec_core::oalg::o_algebra_of;
use aspec_core::polyline::from_univariate;
use aspec_core::{Field, Mat};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_mat(f: Field, n: usize, seed: u64) -> Mat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..n * n).map(|_| f.frac(rng.gen_range(-20..=20), rng.gen_range(1..=6)).unwrap()).collect();
    Mat::new(f, n, n, data).unwrap()
}

fn bench_rref(c: &mut Criterion) {
    let mut g = c.benchmark_group("rref");
    for n in [8, 16, 32] {
        let q = random_mat(Field::Rational, n, 7);
        g.bench_with_input(BenchmarkId::new("Q", n), &q, |b, m| b.iter(|| rref(m)));
        let p = random_mat(Field::Prime(32003), n, 7);
        g.bench_with_input(BenchmarkId::new("F32003", n), &p, |b, m| b.iter(|| rref(m)));
    }
    g.finish();
}

fn bench_hull(c: &mut Criterion) {
    let mut g = c.benchmark_group("hull");
    for n in [3, 5] {
        let a = truncated(Field::Rational, n);
        let s = simple_modules(&a).unwrap();
        g.bench_with_input(BenchmarkId::new("truncated", n), &n, |b, &n| b.iter(|| hull(&a, &s, n).unwrap()));
    }
    let a = linear_quiver(3);
    let s = simple_modules(&a).unwrap();
    g.bench_function("A3", |b| b.iter(|| hull(&a, &s, 3).unwrap()));
    g.finish();
}

fn bench_oalg(c: &mut Criterion) {
    let mut g = c.benchmark_group("o-algebra");
    let a = linear_quiver(3);
    let s = simple_modules(&a).unwrap();
    g.bench_function("A3", |b| b.iter(|| o_algebra_of(&a, &s, 3).unwrap()));
    let k4 = truncated(Field::Rational, 4);
    let s4 = simple_modules(&k4).unwrap();
    g.bench_function("k[x]/x^4", |b| b.iter(|| o_algebra_of(&k4, &s4, 4).unwrap()));
    g.finish();
}

fn bench_aspec(c: &mut Criterion) {
    let split = std::sync::Arc::new(
        from_univariate(&aspec_core::poly::Poly::from_ints(Field::Rational, &[0, -1, 0, 1])).unwrap(),
    );
    c.bench_function("aspec/sheaf check x^3-x", |b| {
        b.iter(|| ASpecSpace::of_simples(&split).unwrap().sheafify_check().unwrap())
    });
}

criterion_group!(benches, bench_rref, bench_hull, bench_oalg, bench_aspec);
criterion_main!(benches);
