//! Wall-clock profiles of the main pipelines at bench scale. These are
//! informational; no guarantee in the suite is a timing guarantee.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use lvs_core::{
    algorithm1_ls, apply_svt, build_sign_polynomial, dilate_block_encoding, ridge_row_scores,
    row_leverage_scores, stream_rng, svd, SamplingConfig, ScoreMode,
};

fn gaussian(n: usize, d: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = stream_rng(seed, 0);
    DMatrix::from_fn(n, d, |_, _| rng.sample::<f64, _>(StandardNormal))
}

fn bench_scores(c: &mut Criterion) {
    let a = gaussian(2000, 30, 1);
    let mut group = c.benchmark_group("scores_2000x30");
    group.sample_size(10);
    group.bench_function("exact", |b| {
        b.iter(|| row_leverage_scores(&svd(&a, 1e-10).unwrap()))
    });
    group.bench_function("sketched", |b| {
        let mut rng = stream_rng(2, 0);
        b.iter(|| {
            lvs_core::approx_leverage_scores_sketched(&a, 0.25, &mut rng, &Default::default())
                .unwrap()
        })
    });
    group.bench_function("ridge", |b| b.iter(|| ridge_row_scores(&a, 0.5).unwrap()));
    group.finish();
}

fn bench_solve(c: &mut Criterion) {
    let a = gaussian(1024, 20, 3);
    let mut rng = stream_rng(3, 1);
    let x0 = DVector::from_fn(20, |_, _| rng.random::<f64>());
    let noise = DVector::from_fn(1024, |_, _| rng.random::<f64>() - 0.5);
    let b = &a * x0 + noise;
    let mut group = c.benchmark_group("solve_ls_1024x20");
    group.sample_size(10);
    group.bench_function("sampled_sketched", |bench| {
        bench.iter_batched(
            || rng.random::<u64>(),
            |seed| {
                algorithm1_ls(&a, &b, 0.25, seed, ScoreMode::Sketched, &SamplingConfig::default())
                    .unwrap()
            },
            BatchSize::SmallInput,
        )
    });
    group.finish();
}

fn bench_qsim(c: &mut Criterion) {
    let mut group = c.benchmark_group("qsim");
    group.sample_size(10);
    group.bench_function("sign_polynomial_d05_e3", |b| {
        b.iter(|| build_sign_polynomial(0.05, 1e-3).unwrap())
    });
    let a = gaussian(256, 24, 4) / 40.0;
    group.bench_function("dilate_and_svt_256x24", |b| {
        let f = svd(&a, 1e-10).unwrap();
        b.iter(|| {
            let be = dilate_block_encoding(&a, None).unwrap();
            let delta = (f.sigma_min() / be.alpha / 3.0).min(1.0 / 6.0 - 1e-9);
            let poly = build_sign_polynomial(delta, 0.01).unwrap();
            apply_svt(&be, &poly).unwrap()
        })
    });
    group.finish();
}

criterion_group!(benches, bench_scores, bench_solve, bench_qsim);
criterion_main!(benches);
