//! Seeded workloads shared by the benchmarks.

use gapped_core::random::{random_barcode, random_interleaved_instance, random_persistence_module, rng_from_seed};
use gapped_core::{Barcode, GappedModule, PersistenceModule, Rational};

pub fn persistence_modules(seed: u64, count: usize, max_indices: usize, max_dim: usize) -> Vec<PersistenceModule<Rational>> {
    let mut rng = rng_from_seed(seed);
    (0..count)
        .map(|_| random_persistence_module(&mut rng, max_indices, max_dim, 3))
        .collect()
}

pub fn barcode_pairs(seed: u64, count: usize, max_bars: usize) -> Vec<(Barcode<Rational>, Barcode<Rational>)> {
    let mut rng = rng_from_seed(seed);
    (0..count)
        .map(|_| (random_barcode(&mut rng, max_bars), random_barcode(&mut rng, max_bars)))
        .collect()
}

/// Gapped modules with a class whose spectral value is defined.
pub fn gapped_with_class(seed: u64, count: usize) -> Vec<(GappedModule<Rational>, Vec<u32>)> {
    let mut rng = rng_from_seed(seed);
    (0..count)
        .map(|_| {
            let inst = random_interleaved_instance(&mut rng, false);
            (inst.g, inst.class)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn workloads_are_usable() {
        for m in persistence_modules(1, 5, 6, 3) {
            m.barcode().unwrap();
        }
        assert_eq!(barcode_pairs(1, 4, 8).len(), 4);
        for (g, a) in gapped_with_class(1, 3) {
            g.spectral_invariant(&a).unwrap();
        }
    }
}
