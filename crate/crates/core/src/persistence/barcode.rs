use std::collections::BTreeMap;
use std::fmt;

use crate::param::{Extended, Param};

/// Closed interval `[birth, death]`; either end may be infinite.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bar<P> {
    pub birth: Extended<P>,
    pub death: Extended<P>,
}

impl<P: Param> Bar<P> {
    pub fn new(birth: Extended<P>, death: Extended<P>) -> Self {
        debug_assert!(birth <= death);
        Bar { birth, death }
    }

    pub fn finite(birth: P, death: P) -> Self {
        Bar::new(Extended::Finite(birth), Extended::Finite(death))
    }

    pub fn is_infinite(&self) -> bool {
        !self.birth.is_finite() || !self.death.is_finite()
    }

    /// Half the length, the cost of matching the bar to the diagonal.
    pub fn half_length(&self) -> Extended<P> {
        match (&self.birth, &self.death) {
            (Extended::Finite(b), Extended::Finite(d)) => Extended::Finite((d.clone() - b.clone()).half()),
            _ => Extended::PosInf,
        }
    }

    /// Sup-norm distance between endpoints; `+∞` when the bars are of
    /// different infinite types.
    pub fn distance(&self, other: &Bar<P>) -> Extended<P> {
        let end = |x: &Extended<P>, y: &Extended<P>| match (x, y) {
            (Extended::Finite(a), Extended::Finite(b)) => Some(a.abs_diff(b)),
            (Extended::NegInf, Extended::NegInf) | (Extended::PosInf, Extended::PosInf) => Some(P::zero()),
            _ => None,
        };
        match (end(&self.birth, &other.birth), end(&self.death, &other.death)) {
            (Some(a), Some(b)) => Extended::Finite(a.max(b)),
            _ => Extended::PosInf,
        }
    }

    pub fn translate(&self, s: &P) -> Bar<P> {
        let shift = |e: &Extended<P>| e.clone().map(|t| t + s.clone());
        Bar::new(shift(&self.birth), shift(&self.death))
    }

    /// Reflection `t ↦ -t`, which swaps the endpoints.
    pub fn reflect(&self) -> Bar<P> {
        Bar::new(-self.death.clone(), -self.birth.clone())
    }
}

/// Multiset of bars, kept sorted by `(birth, death)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Barcode<P> {
    bars: BTreeMap<Bar<P>, usize>,
}

impl<P: Param> Default for Barcode<P> {
    fn default() -> Self {
        Barcode::new()
    }
}

impl<P: Param> Barcode<P> {
    pub fn new() -> Self {
        Barcode { bars: BTreeMap::new() }
    }

    pub fn from_bars<I: IntoIterator<Item = Bar<P>>>(bars: I) -> Self {
        let mut out = Barcode::new();
        for bar in bars {
            out.insert(bar, 1);
        }
        out
    }

    pub fn insert(&mut self, bar: Bar<P>, mult: usize) {
        if mult > 0 {
            *self.bars.entry(bar).or_insert(0) += mult;
        }
    }

    pub fn bars(&self) -> impl Iterator<Item = (&Bar<P>, usize)> {
        self.bars.iter().map(|(b, &m)| (b, m))
    }

    /// Every bar repeated according to its multiplicity.
    pub fn expanded(&self) -> Vec<Bar<P>> {
        self.bars
            .iter()
            .flat_map(|(b, &m)| std::iter::repeat(b.clone()).take(m))
            .collect()
    }

    pub fn multiplicity(&self, bar: &Bar<P>) -> usize {
        self.bars.get(bar).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.bars.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    pub fn infinite_bars(&self) -> Barcode<P> {
        Barcode {
            bars: self
                .bars
                .iter()
                .filter(|(b, _)| b.is_infinite())
                .map(|(b, &m)| (b.clone(), m))
                .collect(),
        }
    }

    /// Number of bars containing the closed interval `[s, t]`.
    pub fn count_containing(&self, s: &Extended<P>, t: &Extended<P>) -> usize {
        self.bars
            .iter()
            .filter(|(b, _)| b.birth <= *s && *t <= b.death)
            .map(|(_, &m)| m)
            .sum()
    }

    pub fn translate(&self, s: &P) -> Barcode<P> {
        Barcode {
            bars: self.bars.iter().map(|(b, &m)| (b.translate(s), m)).collect(),
        }
    }

    pub fn reflect(&self) -> Barcode<P> {
        Barcode {
            bars: self.bars.iter().map(|(b, &m)| (b.reflect(), m)).collect(),
        }
    }

    /// One `birth death mult` line per distinct bar.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl<P: Param> fmt::Display for Barcode<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (bar, m) in &self.bars {
            writeln!(f, "{} {} {}", bar.birth, bar.death, m)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::param::{q, qi, Rational};

    #[test]
    fn text_rendering_sorted() {
        let mut b = Barcode::<Rational>::new();
        b.insert(Bar::new(Extended::Finite(qi(0)), Extended::PosInf), 1);
        b.insert(Bar::finite(q(-1, 2), qi(3)), 2);
        assert_eq!(b.to_text(), "-1/2 3 2\n0 inf 1\n");
        assert_eq!(Barcode::<Rational>::new().to_text(), "");
    }

    #[test]
    fn reflect_twice_is_identity() {
        let b = Barcode::from_bars([
            Bar::finite(qi(1), qi(2)),
            Bar::new(Extended::Finite(qi(0)), Extended::PosInf),
        ]);
        assert_eq!(b.reflect().multiplicity(&Bar::finite(qi(-2), qi(-1))), 1);
        assert_eq!(b.reflect().reflect(), b);
    }

    #[test]
    fn distances() {
        let a = Bar::finite(qi(0), qi(4));
        assert_eq!(a.half_length(), Extended::Finite(qi(2)));
        assert_eq!(a.distance(&Bar::finite(qi(1), qi(3))), Extended::Finite(qi(1)));
        let inf = Bar::new(Extended::Finite(qi(0)), Extended::PosInf);
        assert_eq!(a.distance(&inf), Extended::PosInf);
        assert_eq!(
            inf.distance(&Bar::new(Extended::Finite(qi(3)), Extended::PosInf)),
            Extended::Finite(qi(3))
        );
    }
}
