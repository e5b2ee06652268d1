use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use gapped_bench::{barcode_pairs, gapped_with_class, persistence_modules};
use gapped_core::{bottleneck_distance, exhaustive_bottleneck};

fn barcode(c: &mut Criterion) {
    let modules = persistence_modules(7, 64, 9, 4);
    c.bench_function("barcode/random64", |b| {
        b.iter(|| {
            for m in &modules {
                black_box(m.barcode().unwrap());
            }
        })
    });
}

fn bottleneck(c: &mut Criterion) {
    let pairs = barcode_pairs(7, 64, 12);
    c.bench_function("bottleneck/matching", |b| {
        b.iter(|| {
            for (x, y) in &pairs {
                black_box(bottleneck_distance(x, y));
            }
        })
    });
    let small = barcode_pairs(8, 16, 4);
    c.bench_function("bottleneck/exhaustive", |b| {
        b.iter(|| {
            for (x, y) in &small {
                black_box(exhaustive_bottleneck(x, y));
            }
        })
    });
}

fn gapped_spectral(c: &mut Criterion) {
    c.bench_function("gapped/spectral", |b| {
        b.iter_batched(
            || gapped_with_class(7, 16),
            |work| {
                for (g, a) in &work {
                    black_box(g.spectral_invariant(a).unwrap());
                }
            },
            BatchSize::SmallInput,
        )
    });
}

criterion_group!(benches, barcode, bottleneck, gapped_spectral);
criterion_main!(benches);
