//! Exhaustive barcode oracle.
//!
//! Ranks are counted as `log_p` of image cardinalities, obtained by pushing
//! every vector of the source space through the maps one at a time. A
//! backtracking search then looks for the table of interval counts whose
//! containment counts reproduce every rank. No elimination is used.

use std::collections::HashSet;

use super::{Bar, Barcode, PersistenceError, PersistenceModule};
use crate::linalg::Matrix;
use crate::param::Param;

pub const BRUTE_FORCE_MAX_INDICES: usize = 4;
pub const BRUTE_FORCE_MAX_DIM: usize = 3;

fn push(m: &Matrix, v: &[u32]) -> Vec<u32> {
    let p = m.modulus() as u64;
    (0..m.rows())
        .map(|r| {
            let s: u64 = (0..m.cols()).map(|c| m.get(r, c) as u64 * v[c] as u64).sum();
            (s % p) as u32
        })
        .collect()
}

fn every_vector(n: usize, p: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..p).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn log_p(mut size: usize, p: usize) -> usize {
    let mut k = 0;
    while size > 1 {
        size /= p;
        k += 1;
    }
    k
}

/// Interval decomposition by exhaustive search, for `N ≤ 4` samples and
/// every slot of dimension at most 3.
pub fn brute_force_barcode<P: Param>(m: &PersistenceModule<P>) -> Result<Barcode<P>, PersistenceError> {
    m.validate()?;
    if m.len() > BRUTE_FORCE_MAX_INDICES {
        return Err(PersistenceError::TooLarge(format!("{} indices", m.len())));
    }
    let dims = m.slot_dims();
    if let Some(d) = dims.iter().find(|&&d| d > BRUTE_FORCE_MAX_DIM) {
        return Err(PersistenceError::TooLarge(format!("dimension {d}")));
    }
    let steps = m.slot_steps();
    let p = m.modulus();
    let s = dims.len();

    let mut rank = vec![vec![0usize; s]; s];
    for i in 0..s {
        let mut image: Vec<Vec<u32>> = every_vector(dims[i], p);
        rank[i][i] = log_p(image.len(), p as usize);
        for j in i + 1..s {
            let next: HashSet<Vec<u32>> = image.iter().map(|v| push(steps[j - 1], v)).collect();
            image = next.into_iter().collect();
            rank[i][j] = log_p(image.len(), p as usize);
        }
    }

    // alive[b][j] = number of bars born at slot b still alive at slot j.
    let mut alive = vec![vec![0usize; s]; s];
    if !search(0, &dims, &rank, &mut alive) {
        return Err(PersistenceError::TooLarge("no interval decomposition found".into()));
    }

    let limit_alone = match m.limit() {
        Some(slot) if slot.kind == super::LimitKind::Limit => Some(0),
        Some(_) => Some(s - 1),
        None => None,
    };
    let mut barcode = Barcode::new();
    for b in 0..s {
        for d in b..s {
            let here = alive[b][d];
            let later = if d + 1 < s { alive[b][d + 1] } else { 0 };
            let count = here - later;
            if count > 0 && !(Some(b) == limit_alone && d == b) {
                barcode.insert(Bar::new(m.slot_endpoint(b), m.slot_endpoint(d)), count);
            }
        }
    }
    Ok(barcode)
}

fn search(j: usize, dims: &[usize], rank: &[Vec<usize>], alive: &mut [Vec<usize>]) -> bool {
    let s = dims.len();
    if j == s {
        return (0..s).all(|i| {
            (i..s).all(|k| (0..=i).map(|b| alive[b][k]).sum::<usize>() == rank[i][k])
        });
    }
    choose(j, 0, dims, rank, alive)
}

// Choose alive[b][j] for b < j, then fill the births at j.
fn choose(j: usize, b: usize, dims: &[usize], rank: &[Vec<usize>], alive: &mut [Vec<usize>]) -> bool {
    if b == j {
        let carried: usize = (0..j).map(|b| alive[b][j]).sum();
        if carried > dims[j] {
            return false;
        }
        alive[j][j] = dims[j] - carried;
        if search(j + 1, dims, rank, alive) {
            return true;
        }
        alive[j][j] = 0;
        return false;
    }
    let cap = alive[b][j - 1];
    for c in 0..=cap {
        alive[b][j] = c;
        if choose(j, b + 1, dims, rank, alive) {
            return true;
        }
    }
    alive[b][j] = 0;
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::param::{qi, Extended, Rational};
    use crate::persistence::{IndexSet, LimitKind, LimitSlot};

    fn pts(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| qi(x)).collect()
    }

    #[test]
    fn empty_module() {
        let m = PersistenceModule::<Rational>::new(2, IndexSet::new(vec![]).unwrap(), vec![], vec![], None).unwrap();
        assert!(brute_force_barcode(&m).unwrap().is_empty());
    }

    #[test]
    fn constant_module_single_bar() {
        let m = PersistenceModule::identity_chain(2, pts(&[0, 1, 2]), 1, false).unwrap();
        let b = brute_force_barcode(&m).unwrap();
        assert_eq!(b.total(), 1);
        assert_eq!(b.multiplicity(&Bar::finite(qi(0), qi(2))), 1);
    }

    #[test]
    fn same_three_examples_as_barcode() {
        let with_colimit = PersistenceModule::identity_chain(2, pts(&[0, 1, 2]), 1, true).unwrap();
        let b = brute_force_barcode(&with_colimit).unwrap();
        assert_eq!(b.multiplicity(&Bar::new(Extended::Finite(qi(0)), Extended::PosInf)), 1);
        assert_eq!(b, with_colimit.barcode().unwrap());

        let zero = PersistenceModule::new(
            2,
            IndexSet::new(pts(&[0, 1])).unwrap(),
            vec![1, 1],
            vec![Matrix::zero(1, 1, 2)],
            None,
        )
        .unwrap();
        assert_eq!(brute_force_barcode(&zero).unwrap(), zero.barcode().unwrap());

        let limit = PersistenceModule::new(
            2,
            IndexSet::new(pts(&[0, 1])).unwrap(),
            vec![2, 1],
            vec![Matrix::from_rows(2, 2, &[[1, 1]]).unwrap()],
            Some(LimitSlot {
                kind: LimitKind::Colimit,
                dim: 1,
                map: Matrix::identity(1, 2),
            }),
        )
        .unwrap();
        assert_eq!(brute_force_barcode(&limit).unwrap(), limit.barcode().unwrap());
        assert_eq!(brute_force_barcode(&limit.dual()).unwrap(), limit.dual().barcode().unwrap());
    }

    #[test]
    fn too_large_rejected() {
        let m = PersistenceModule::identity_chain(2, pts(&[0, 1, 2, 3, 4]), 1, false).unwrap();
        assert!(matches!(brute_force_barcode(&m), Err(PersistenceError::TooLarge(_))));
        let m = PersistenceModule::identity_chain(2, pts(&[0]), 4, false).unwrap();
        assert!(matches!(brute_force_barcode(&m), Err(PersistenceError::TooLarge(_))));
    }
}
