use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use jetbound::catalog::run_case;
use jetbound::exactmath::{smith_normal_form, IntMatrix};
use jetbound::spaces::FlagFactor;

/// A dense, deterministic n×n integer matrix with small entries.
fn sample_matrix(n: usize) -> IntMatrix {
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| ((i * 7 + j * 13 + i * j) % 23) as i64 - 11).collect())
        .collect();
    IntMatrix::from_rows(&rows).expect("rectangular")
}

fn snf(c: &mut Criterion) {
    for n in [6, 12, 20] {
        let m = sample_matrix(n);
        c.bench_function(&format!("snf {n}x{n}"), |b| b.iter(|| smith_normal_form(black_box(&m))));
    }
}

fn bgg_spinor(c: &mut Criterion) {
    // Degree of the spinor variety: ω^10 against the top Schubert class,
    // ten divided differences in type D5.
    let f = FlagFactor::spinor(5).expect("spinor variety");
    let top = f.quotient().top().clone();
    let omega = f.char_poly(f.omega());
    let p = omega.pow(f.dim() as u32);
    c.bench_function("bgg D5 degree", |b| b.iter(|| f.pair(black_box(&p), &top).expect("pairing")));
}

fn pipelines(c: &mut Criterion) {
    let mut g = c.benchmark_group("pipelines");
    g.sample_size(10);
    for id in ["prop-g2", "prop-lgr", "prop-weighted", "prop-quintic", "prop-ogr"] {
        g.bench_function(id, |b| b.iter(|| run_case(black_box(id)).expect("case runs")));
    }
    g.finish();
}

criterion_group!(benches, snf, bgg_spinor, pipelines);
criterion_main!(benches);
