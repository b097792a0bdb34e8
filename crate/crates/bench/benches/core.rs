use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use ppdual_bench::{formula, modules};
use ppdual_core::{character_dual, decompose_indecomposable, pp_lattice, pp_solve, DEFAULT_BOUND};

fn benches(c: &mut Criterion) {
    for m in modules() {
        let name = m.name().to_string();
        let phi = formula(&m);
        c.bench_function(&format!("pp_solve {name}"), |b| b.iter(|| pp_solve(black_box(&phi), &m).unwrap()));
        c.bench_function(&format!("pp_lattice {name}"), |b| {
            b.iter(|| pp_lattice(black_box(&m), DEFAULT_BOUND).unwrap())
        });
        c.bench_function(&format!("character_dual {name}"), |b| b.iter(|| character_dual(black_box(&m)).unwrap()));
        c.bench_function(&format!("decompose {name}"), |b| {
            b.iter(|| decompose_indecomposable(black_box(&m)).unwrap())
        });
    }
}

criterion_group! {
    name = core;
    config = Criterion::default().sample_size(10);
    targets = benches
}
criterion_main!(core);
