use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ncvalue_core::operators::product;
use ncvalue_core::sampling::{sample_operator, sample_state};
use ncvalue_core::{
    metric_chart, normalize_ray, sd_product_h, sd_product_w, sd_product_z, symdata_h, symdata_w,
    symdata_z, MetricKind,
};

fn bench_products(c: &mut Criterion) {
    let hbar = 1.0;
    let mut group = c.benchmark_group("products");
    for &dim in &[4usize, 8, 16] {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let beta = sample_operator(&mut rng, dim, hbar);
        let gamma = sample_operator(&mut rng, dim, hbar);
        let s = sample_state(&mut rng, dim, hbar);
        let p = normalize_ray(&s).unwrap();
        let metric_z = metric_chart(MetricKind::HomogeneousFs, &s).unwrap();
        let metric_w = ncvalue_core::metric_chart_affine(&p).unwrap();

        group.bench_with_input(BenchmarkId::new("matrix_oracle", dim), &dim, |b, _| {
            b.iter(|| product(&beta, &gamma).unwrap())
        });

        let (bh, gh) = (symdata_h(&beta, &s).unwrap(), symdata_h(&gamma, &s).unwrap());
        group.bench_with_input(BenchmarkId::new("sd_product_H", dim), &dim, |b, _| {
            b.iter(|| sd_product_h(&bh, &gh).unwrap())
        });

        let (bz, gz) = (symdata_z(&beta, &s).unwrap(), symdata_z(&gamma, &s).unwrap());
        group.bench_with_input(BenchmarkId::new("sd_product_z", dim), &dim, |b, _| {
            b.iter(|| sd_product_z(&bz, &gz, &metric_z).unwrap())
        });

        let (bw, gw) = (symdata_w(&beta, &p).unwrap(), symdata_w(&gamma, &p).unwrap());
        group.bench_with_input(BenchmarkId::new("sd_product_w", dim), &dim, |b, _| {
            b.iter(|| sd_product_w(&bw, &gw, &metric_w).unwrap())
        });

        group.bench_with_input(BenchmarkId::new("symdata_z", dim), &dim, |b, _| {
            b.iter(|| symdata_z(&beta, &s).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_products);
criterion_main!(benches);
