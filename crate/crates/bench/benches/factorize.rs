use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use wh_core::factor::{factorize_symbol, BlockToeplitz};
use wh_core::jordan::{jordan_structure, k_form, JordanBlock};
use wh_core::linalg::{identity, inverse, CMat};
use wh_core::symbol::builtin;
use wh_core::{CircleFunction, Tolerances, C64};
use wienerhopf_bench::{jordan2_a_star, options, OMEGA};

fn levinson(c: &mut Criterion) {
    let b = jordan2_a_star(12);
    let mut g = c.benchmark_group("levinson");
    for order in [128, 512, 1024] {
        let t = BlockToeplitz::from_symbol(&b, order);
        g.bench_with_input(BenchmarkId::from_parameter(order), &t, |bench, t| {
            bench.iter(|| t.solve_unit().unwrap())
        });
    }
    g.finish();
}

fn fft(c: &mut Criterion) {
    let mut g = c.benchmark_group("circle_fft");
    for log2 in [12u32, 16] {
        let n = 1usize << log2;
        let samples: Vec<C64> = (0..n)
            .map(|j| C64::new((j as f64 * 0.37).sin(), (j as f64 * 0.11).cos()))
            .collect();
        g.bench_with_input(BenchmarkId::from_parameter(n), &samples, |bench, s| {
            bench.iter(|| CircleFunction::from_samples(black_box(s)))
        });
    }
    g.finish();
}

fn jordan(c: &mut Criterion) {
    let eigs = [
        JordanBlock {
            lambda: C64::new(0.8, 0.3),
            size: 2,
        },
        JordanBlock {
            lambda: C64::new(-0.4, 1.1),
            size: 2,
        },
    ];
    let s = CMat::from_fn(4, 4, |i, j| {
        if i == j {
            C64::new(2.0, 0.0)
        } else {
            C64::new(0.1 * (i + 2 * j) as f64, -0.05 * i as f64)
        }
    });
    let e = &s * k_form(&eigs) * inverse(&s).unwrap();
    let tol = Tolerances::default();
    c.bench_function("jordan_structure_4x4", |bench| {
        bench.iter(|| jordan_structure(black_box(&e), &identity(4), &tol, None).unwrap())
    });
}

fn pipeline(c: &mut Criterion) {
    let mut g = c.benchmark_group("factorize_symbol");
    g.sample_size(10);
    for name in ["rational_scalar", "jordan2"] {
        let sym = builtin(name).unwrap();
        for log2 in [10u32, 12] {
            let opts = options(log2);
            g.bench_with_input(BenchmarkId::new(name, 1usize << log2), &opts, |bench, o| {
                bench.iter(|| factorize_symbol(&sym, &OMEGA, o).unwrap())
            });
        }
    }
    g.finish();
}

criterion_group!(benches, levinson, fft, jordan, pipeline);
criterion_main!(benches);
