//! Bottleneck distance between barcodes.
//!
//! The optimal cost is one of finitely many candidates: a pairwise endpoint
//! distance or a half-length. Candidates are sorted and bisected, with a
//! perfect-matching test on the threshold graph as the decision step.

use crate::matching::maximum_matching;
use crate::param::{Extended, Param};
use crate::persistence::{Bar, Barcode};

/// Minimal `ε` over partial matchings; `+∞` when infinite bars cannot be
/// paired up by type.
pub fn bottleneck_distance<P: Param>(a: &Barcode<P>, b: &Barcode<P>) -> Extended<P> {
    let xs = a.expanded();
    let ys = b.expanded();

    let mut candidates: Vec<P> = vec![P::zero()];
    for x in &xs {
        candidates.extend(x.half_length().finite().cloned());
        for y in &ys {
            candidates.extend(x.distance(y).finite().cloned());
        }
    }
    for y in &ys {
        candidates.extend(y.half_length().finite().cloned());
    }
    candidates.sort();
    candidates.dedup();

    let (mut lo, mut hi) = (0usize, candidates.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(&xs, &ys, &candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates.get(lo).cloned().map_or(Extended::PosInf, Extended::Finite)
}

/// Exhaustive reference: every partial matching is enumerated and the
/// cheapest maximal cost returned. Factorial time; small inputs only.
pub fn exhaustive_bottleneck<P: Param>(a: &Barcode<P>, b: &Barcode<P>) -> Extended<P> {
    fn go<P: Param>(i: usize, xs: &[Bar<P>], ys: &[Bar<P>], used: &mut Vec<bool>, acc: Extended<P>, best: &mut Extended<P>) {
        if acc >= *best {
            return;
        }
        if i == xs.len() {
            let rest = ys
                .iter()
                .zip(used.iter())
                .filter(|(_, &u)| !u)
                .map(|(y, _)| y.half_length())
                .fold(acc, Ord::max);
            if rest < *best {
                *best = rest;
            }
            return;
        }
        let x = &xs[i];
        go(i + 1, xs, ys, used, acc.clone().max(x.half_length()), best);
        for j in 0..ys.len() {
            if !used[j] {
                used[j] = true;
                go(i + 1, xs, ys, used, acc.clone().max(x.distance(&ys[j])), best);
                used[j] = false;
            }
        }
    }
    let xs = a.expanded();
    let ys = b.expanded();
    let mut best = Extended::PosInf;
    let mut used = vec![false; ys.len()];
    go(0, &xs, &ys, &mut used, Extended::Finite(P::zero()), &mut best);
    best
}

fn within<P: Param>(cost: Extended<P>, eps: &P) -> bool {
    match cost {
        Extended::Finite(c) => c <= *eps,
        Extended::NegInf => true,
        Extended::PosInf => false,
    }
}

// Left: xs then diagonal copies of ys. Right: ys then diagonal copies of xs.
fn feasible<P: Param>(xs: &[Bar<P>], ys: &[Bar<P>], eps: &P) -> bool {
    let (n, m) = (xs.len(), ys.len());
    let mut adj = vec![Vec::new(); n + m];
    for (i, x) in xs.iter().enumerate() {
        for (j, y) in ys.iter().enumerate() {
            if within(x.distance(y), eps) {
                adj[i].push(j);
            }
        }
        if within(x.half_length(), eps) {
            adj[i].push(m + i);
        }
    }
    for (j, y) in ys.iter().enumerate() {
        if within(y.half_length(), eps) {
            adj[n + j].push(j);
        }
        adj[n + j].extend((0..n).map(|i| m + i));
    }
    maximum_matching(&adj, n + m) == n + m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::param::{qi, Rational};

    fn fin(b: i64, d: i64) -> Bar<Rational> {
        Bar::finite(qi(b), qi(d))
    }

    #[test]
    fn oracle_agrees_on_examples() {
        let a = Barcode::from_bars([fin(0, 4), fin(1, 2)]);
        let b = Barcode::from_bars([fin(0, 3), Bar::new(Extended::Finite(qi(1)), Extended::PosInf)]);
        assert_eq!(exhaustive_bottleneck(&a, &b), Extended::PosInf);
        assert_eq!(exhaustive_bottleneck(&a, &Barcode::new()), Extended::Finite(qi(2)));
        let c = Barcode::from_bars([fin(0, 3), fin(1, 2)]);
        assert_eq!(exhaustive_bottleneck(&a, &c), bottleneck_distance(&a, &c));
        assert_eq!(exhaustive_bottleneck(&a, &c), Extended::Finite(qi(1)));
    }

    #[test]
    fn equal_barcodes() {
        let b = Barcode::from_bars([fin(0, 3), fin(1, 2), Bar::new(Extended::Finite(qi(0)), Extended::PosInf)]);
        assert_eq!(bottleneck_distance(&b, &b), Extended::Finite(qi(0)));
    }

    #[test]
    fn deletion_costs_half_length() {
        let b = Barcode::from_bars([fin(0, 4)]);
        assert_eq!(bottleneck_distance(&b, &Barcode::new()), Extended::Finite(qi(2)));
        assert_eq!(bottleneck_distance(&Barcode::new(), &b), Extended::Finite(qi(2)));
    }

    #[test]
    fn infinite_bars_only_match_their_kind() {
        let up = Barcode::from_bars([Bar::new(Extended::Finite(qi(0)), Extended::PosInf)]);
        let up2 = Barcode::from_bars([Bar::new(Extended::Finite(qi(3)), Extended::PosInf)]);
        let down = Barcode::from_bars([Bar::new(Extended::NegInf, Extended::Finite(qi(0)))]);
        assert_eq!(bottleneck_distance(&up, &up2), Extended::Finite(qi(3)));
        assert_eq!(bottleneck_distance(&up, &down), Extended::PosInf);
        assert_eq!(bottleneck_distance(&up, &Barcode::new()), Extended::PosInf);
    }

    #[test]
    fn prefers_diagonal_when_cheaper() {
        let a = Barcode::from_bars([fin(0, 2)]);
        let b = Barcode::from_bars([fin(10, 12)]);
        assert_eq!(bottleneck_distance(&a, &b), Extended::Finite(qi(1)));
    }
}
