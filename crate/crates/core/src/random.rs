//! Seeded generators for randomized property checks.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
pub use rand_chacha::ChaCha8Rng;

use crate::gapped::{
    identity_certificate, padded_translate, translation_certificate, GappedLimit, GappedModule,
    InterleavingCertificate, RestrictionSequence,
};
use crate::linalg::Matrix;
use crate::param::{q, qi, Extended, Param, Rational};
use crate::persistence::{Bar, Barcode, IndexSet, LimitKind, LimitSlot, PersistenceModule};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, p: u32) -> Matrix {
    let entries: Vec<i64> = (0..rows * cols).map(|_| rng.gen_range(0..p) as i64).collect();
    Matrix::new(rows, cols, p, &entries).expect("sizes agree")
}

pub fn random_vector<R: Rng>(rng: &mut R, n: usize, p: u32) -> Vec<u32> {
    (0..n).map(|_| rng.gen_range(0..p)).collect()
}

/// Distinct sorted points from the half-integer grid in `[-4, 4]`.
fn random_points<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
    let mut grid: Vec<i64> = (-8..=8).collect();
    grid.shuffle(rng);
    let mut pts: Vec<Rational> = grid[..n].iter().map(|&j| q(j, 2)).collect();
    pts.sort();
    pts
}

/// Random module with at most `max_indices` samples and every space,
/// including the limit slot, of dimension at most `max_dim`. The limit
/// slot is absent, a colimit, or (rarely) an initial slot.
pub fn random_persistence_module<R: Rng>(
    rng: &mut R,
    max_indices: usize,
    max_dim: usize,
    p: u32,
) -> PersistenceModule<Rational> {
    let n = rng.gen_range(0..=max_indices);
    let pts = random_points(rng, n);
    let dims: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=max_dim)).collect();
    let steps = dims.windows(2).map(|w| random_matrix(rng, w[1], w[0], p)).collect();
    let limit = if n == 0 {
        None
    } else {
        match rng.gen_range(0..5) {
            0 => None,
            4 => {
                let d = rng.gen_range(0..=max_dim);
                Some(LimitSlot {
                    kind: LimitKind::Limit,
                    dim: d,
                    map: random_matrix(rng, dims[0], d, p),
                })
            }
            _ => {
                let d = rng.gen_range(0..=max_dim);
                Some(LimitSlot {
                    kind: LimitKind::Colimit,
                    dim: d,
                    map: random_matrix(rng, d, dims[n - 1], p),
                })
            }
        }
    };
    PersistenceModule::new(p, IndexSet::new(pts).expect("sorted"), dims, steps, limit).expect("valid by construction")
}

/// Up to `max_bars` bars with half-integer endpoints in `[0, 4]`; some bars
/// are infinite on either side.
pub fn random_barcode<R: Rng>(rng: &mut R, max_bars: usize) -> Barcode<Rational> {
    let n = rng.gen_range(0..=max_bars);
    let mut out = Barcode::new();
    for _ in 0..n {
        let b = rng.gen_range(0..=8i64);
        let d = rng.gen_range(b..=8i64);
        let bar = match rng.gen_range(0..10) {
            0 | 1 => Bar::new(Extended::Finite(q(b, 2)), Extended::PosInf),
            2 => Bar::new(Extended::NegInf, Extended::Finite(q(d, 2))),
            _ => Bar::finite(q(b, 2), q(d, 2)),
        };
        out.insert(bar, 1);
    }
    out
}

/// Parameters of a random gapped module.
#[derive(Debug, Clone)]
pub struct GappedSample {
    pub module: GappedModule<Rational>,
    pub gap: Rational,
    /// Grid subdivision: samples are `jλ/k`.
    pub subdivision: i64,
}

/// A λ-gapped module on the grid `{jλ/k : 0 ≤ j < W}`, `W ≤ 8`, pulled back
/// from a random chain `N` along `t ↦ t + p_t` with `0 ≤ p_t < λ`.
///
/// `N` is frozen (identity steps, identity colimit) from the least image of
/// a progression's last sample onwards, so every restriction sees the same
/// tail. Optionally an ephemeral summand with zero maps is added. Spaces
/// have dimension at most 3.
pub fn random_gapped_module<R: Rng>(rng: &mut R) -> GappedSample {
    let gap = [q(1, 2), qi(1), qi(2)][rng.gen_range(0..3)];
    let k = [2i64, 4][rng.gen_range(0..2)];
    let w = rng.gen_range(2..=8i64);
    let grid: Vec<Rational> = (0..w).map(|j| gap * q(j, k)).collect();
    let f: Vec<Rational> = grid
        .iter()
        .map(|t| *t + gap * q(rng.gen_range(0..8), 8))
        .collect();

    // Last sample of each residue class mod k.
    let tail = (0..k.min(w))
        .map(|r| {
            let last = (r..w).step_by(k as usize).last().expect("nonempty class");
            f[last as usize]
        })
        .min()
        .expect("at least one class");

    let mut values: Vec<Rational> = f.clone();
    values.sort();
    values.dedup();
    let frozen_at = values.iter().position(|v| *v >= tail).expect("tail is a value");
    let mut dims: Vec<usize> = values.iter().map(|_| rng.gen_range(0..=3)).collect();
    for i in frozen_at + 1..values.len() {
        dims[i] = dims[frozen_at];
    }
    let steps: Vec<Matrix> = (0..values.len().saturating_sub(1))
        .map(|i| {
            if i >= frozen_at {
                Matrix::identity(dims[i], 2)
            } else {
                random_matrix(rng, dims[i + 1], dims[i], 2)
            }
        })
        .collect();
    let last = values.len() - 1;
    let chain = PersistenceModule::new(
        2,
        IndexSet::new(values.clone()).expect("sorted"),
        dims.clone(),
        steps,
        Some(LimitSlot {
            kind: LimitKind::Colimit,
            dim: dims[last],
            map: Matrix::identity(dims[last], 2),
        }),
    )
    .expect("valid chain");
    let colimit = chain.colimit_maps().expect("has colimit");
    let composite = |a: usize, b: usize| chain.composite(crate::persistence::Slot::Index(a), crate::persistence::Slot::Index(b)).expect("ordered");

    let pos: Vec<usize> = f.iter().map(|v| values.binary_search(v).expect("present")).collect();
    let mut maps = BTreeMap::new();
    for i in 0..grid.len() {
        for j in i..grid.len() {
            if crate::gapped::comparable(&grid[i], &grid[j], &gap) {
                maps.insert((i, j), composite(pos[i], pos[j]));
            }
        }
    }
    let g_dims: Vec<usize> = pos.iter().map(|&i| dims[i]).collect();
    let limit = GappedLimit {
        kind: LimitKind::Colimit,
        dim: dims[last],
        maps: pos.iter().map(|&i| colimit[i].clone()).collect(),
    };
    let indices = IndexSet::new(grid).expect("sorted");
    let mut module =
        GappedModule::new(2, gap, indices.clone(), g_dims.clone(), maps, Some(limit)).expect("valid pullback");
    if rng.gen_bool(0.5) {
        let pad: Vec<usize> = g_dims.iter().map(|&d| rng.gen_range(0..=3 - d)).collect();
        let e = GappedModule::ephemeral(2, gap, indices, pad).expect("valid ephemeral");
        module = module.direct_sum(&e).expect("same grid");
    }
    GappedSample {
        module,
        gap,
        subdivision: k,
    }
}

/// A nonzero class in the image of some `π_t`, if the limit space allows.
pub fn random_witnessed_class<R: Rng, P: Param>(rng: &mut R, g: &GappedModule<P>) -> Option<Vec<u32>> {
    let limit = g.limit()?;
    let mut options: Vec<Vec<u32>> = Vec::new();
    for m in &limit.maps {
        for _ in 0..3 {
            let x = random_vector(rng, m.cols(), g.modulus());
            let v = m.apply(&x).expect("shapes");
            if !crate::linalg::is_zero_vector(&v) {
                options.push(v);
            }
        }
    }
    options.choose(rng).cloned()
}

/// Two modules with a certificate at `δ`, and a class of both colimits.
#[derive(Debug, Clone)]
pub struct InterleavedInstance {
    pub g: GappedModule<Rational>,
    pub h: GappedModule<Rational>,
    pub delta: Rational,
    pub certificate: InterleavingCertificate<Rational>,
    pub class: Vec<u32>,
}

/// With `zero = true`: `H = G`, `δ = 0`, identity certificate. Otherwise
/// `H = translate(G, u) ⊕ E` with `E` ephemeral and the structure-map
/// certificate at `δ = |u| + λ`.
pub fn random_interleaved_instance<R: Rng>(rng: &mut R, zero: bool) -> InterleavedInstance {
    loop {
        let sample = random_gapped_module(rng);
        let g = sample.module;
        let Some(class) = random_witnessed_class(rng, &g) else { continue };
        let lambda = sample.gap;
        let unit = lambda * q(1, sample.subdivision);
        if zero {
            let r = g.enumerate_restrictions(&lambda, true).expect("step = gap").remove(0);
            let certificate = identity_certificate(&g, &r).expect("valid restriction");
            return InterleavedInstance {
                h: g.clone(),
                g,
                delta: qi(0),
                certificate,
                class,
            };
        }
        let u = unit * qi(rng.gen_range(-2 * sample.subdivision..=2 * sample.subdivision));
        let delta = u.abs_diff(&qi(0)) + lambda;
        let pad: Vec<usize> = g.dims().iter().map(|&d| rng.gen_range(0..=3 - d.min(3))).collect();
        let h = padded_translate(&g, &u, &pad).expect("same grid");
        // Longest progression of step δ inside both index sets.
        let mut best: Option<RestrictionSequence<Rational>> = None;
        for start in g.indices().points() {
            let mut len = 0i64;
            while {
                let t = *start + delta * qi(len);
                g.indices().contains(&t) && h.indices().contains(&t)
            } {
                len += 1;
            }
            if len >= 2 && best.as_ref().is_none_or(|b| (b.len() as i64) < len) {
                best = Some(RestrictionSequence::new(*start, delta, 0, len - 1).expect("nonempty"));
            }
        }
        let Some(r) = best else { continue };
        let certificate = translation_certificate(&g, &u, &pad, &r).expect("structure maps exist");
        return InterleavedInstance {
            g,
            h,
            delta,
            certificate,
            class,
        };
    }
}

/// A random gapped module and a class whose dual pairing exists.
pub fn random_duality_instance<R: Rng>(rng: &mut R) -> (GappedModule<Rational>, Vec<u32>, Vec<u32>) {
    loop {
        let g = random_gapped_module(rng).module;
        let Some(class) = random_witnessed_class(rng, &g) else { continue };
        if let Some(star) = g.dual_pairing(&class).expect("colimit module") {
            return (g, class, star);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic() {
        let a = random_persistence_module(&mut rng_from_seed(7), 4, 3, 2);
        let b = random_persistence_module(&mut rng_from_seed(7), 4, 3, 2);
        assert_eq!(a, b);
        let a = random_gapped_module(&mut rng_from_seed(9)).module;
        let b = random_gapped_module(&mut rng_from_seed(9)).module;
        assert_eq!(a, b);
    }

    #[test]
    fn gapped_samples_validate() {
        let mut rng = rng_from_seed(1);
        for _ in 0..50 {
            let g = random_gapped_module(&mut rng).module;
            g.validate().unwrap();
            assert!(g.dims().iter().all(|&d| d <= 3));
            assert!(g.len() <= 8);
        }
    }
}
