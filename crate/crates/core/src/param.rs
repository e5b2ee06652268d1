//! Parameter values: exact rationals and symbolic slopes `2π·q + r`.
//!
//! Persistence and gapped modules are generic over [`Param`], an ordered
//! abelian group with halving and integer multiples. [`Rational`] is the
//! everyday instance; [`SymbolicSlope`] keeps 2π formal so that contact
//! spectra land exactly on `2πZ`.

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

pub type Rational = num_rational::Rational64;

/// Shorthand for `n/d`.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Shorthand for an integer rational.
pub fn qi(n: i64) -> Rational {
    Rational::from_integer(n)
}

pub trait Param:
    Clone
    + Ord
    + Hash
    + Debug
    + Display
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn zero() -> Self;

    /// `k · self`.
    fn times(&self, k: i64) -> Self;

    fn half(&self) -> Self;

    /// Largest `k` with `k · step <= self`, for `step > 0`. `None` when no
    /// such integer exists (non-archimedean pair) or `step` is not positive.
    fn floor_div(&self, step: &Self) -> Option<i64>;

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }

    fn abs_diff(&self, other: &Self) -> Self {
        if self >= other {
            self.clone() - other.clone()
        } else {
            other.clone() - self.clone()
        }
    }
}

impl Param for Rational {
    fn zero() -> Self {
        <Rational as Zero>::zero()
    }

    fn times(&self, k: i64) -> Self {
        self * Rational::from_integer(k)
    }

    fn half(&self) -> Self {
        self / Rational::from_integer(2)
    }

    fn floor_div(&self, step: &Self) -> Option<i64> {
        if !Signed::is_positive(step) {
            return None;
        }
        Some((self / step).floor().to_integer())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseParamError {
    #[error("zero denominator in \"{0}\"")]
    ZeroDenominator(String),
    #[error("malformed rational \"{0}\"")]
    Malformed(String),
}

/// Parse `"p"`, `"-p"` or `"p/q"` into a reduced rational.
pub fn parse_rational(text: &str) -> Result<Rational, ParseParamError> {
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: i64 = num.parse().map_err(|_| ParseParamError::Malformed(text.to_string()))?;
    let d: i64 = den.parse().map_err(|_| ParseParamError::Malformed(text.to_string()))?;
    if d == 0 {
        return Err(ParseParamError::ZeroDenominator(text.to_string()));
    }
    Ok(Rational::new(n, d))
}

/// The real number `2π·two_pi + constant`, with 2π kept formal.
///
/// Ordering is lexicographic in `(two_pi, constant)`: 2π is treated as
/// dominating every constant that appears next to it. This agrees with the
/// real ordering whenever constants differ by less than 2π per unit of
/// `two_pi`, which holds for every slope the contact models sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SymbolicSlope {
    pub two_pi: Rational,
    pub constant: Rational,
}

impl SymbolicSlope {
    pub fn new(two_pi: Rational, constant: Rational) -> Self {
        SymbolicSlope { two_pi, constant }
    }

    /// `2π · k`.
    pub fn two_pi_times(k: Rational) -> Self {
        SymbolicSlope::new(k, <Rational as Zero>::zero())
    }

    pub fn constant(c: Rational) -> Self {
        SymbolicSlope::new(<Rational as Zero>::zero(), c)
    }

    /// `true` when the value lies in `2πZ`.
    pub fn is_in_two_pi_z(&self) -> bool {
        self.constant.is_zero() && self.two_pi.is_integer()
    }

    /// Drop the constant part, keeping the `2π` multiple.
    pub fn two_pi_part(&self) -> Self {
        SymbolicSlope::two_pi_times(self.two_pi)
    }

    /// `r · self`.
    pub fn scaled(&self, r: Rational) -> Self {
        SymbolicSlope::new(self.two_pi * r, self.constant * r)
    }
}

impl From<Rational> for SymbolicSlope {
    fn from(c: Rational) -> Self {
        SymbolicSlope::constant(c)
    }
}

impl PartialOrd for SymbolicSlope {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SymbolicSlope {
    fn cmp(&self, other: &Self) -> Ordering {
        self.two_pi
            .cmp(&other.two_pi)
            .then_with(|| self.constant.cmp(&other.constant))
    }
}

impl Add for SymbolicSlope {
    type Output = SymbolicSlope;
    fn add(self, rhs: SymbolicSlope) -> SymbolicSlope {
        SymbolicSlope::new(self.two_pi + rhs.two_pi, self.constant + rhs.constant)
    }
}

impl Sub for SymbolicSlope {
    type Output = SymbolicSlope;
    fn sub(self, rhs: SymbolicSlope) -> SymbolicSlope {
        SymbolicSlope::new(self.two_pi - rhs.two_pi, self.constant - rhs.constant)
    }
}

impl Neg for SymbolicSlope {
    type Output = SymbolicSlope;
    fn neg(self) -> SymbolicSlope {
        SymbolicSlope::new(-self.two_pi, -self.constant)
    }
}

impl Param for SymbolicSlope {
    fn zero() -> Self {
        SymbolicSlope::default()
    }

    fn times(&self, k: i64) -> Self {
        let k = Rational::from_integer(k);
        SymbolicSlope::new(self.two_pi * k, self.constant * k)
    }

    fn half(&self) -> Self {
        let two = Rational::from_integer(2);
        SymbolicSlope::new(self.two_pi / two, self.constant / two)
    }

    fn floor_div(&self, step: &Self) -> Option<i64> {
        if !step.is_positive() {
            return None;
        }
        let mut k = if step.two_pi.is_zero() {
            if !self.two_pi.is_zero() {
                return None;
            }
            (self.constant / step.constant).floor().to_integer()
        } else {
            (self.two_pi / step.two_pi).floor().to_integer()
        };
        // The estimate is off by at most one in either direction.
        while step.times(k + 1) <= *self {
            k += 1;
        }
        while step.times(k) > *self {
            k -= 1;
        }
        Some(k)
    }
}

fn fmt_pi_multiple(f: &mut fmt::Formatter<'_>, two_pi: Rational) -> fmt::Result {
    let k = two_pi * Rational::from_integer(2);
    let (n, d) = (*k.numer(), *k.denom());
    let sign = if n < 0 { "-" } else { "" };
    let n = n.abs();
    match (n, d) {
        (1, 1) => write!(f, "{sign}π"),
        (_, 1) => write!(f, "{sign}{n}π"),
        (1, _) => write!(f, "{sign}π/{d}"),
        _ => write!(f, "{sign}{n}π/{d}"),
    }
}

/// Renders as e.g. `0`, `-1/2`, `2π`, `-4π`, `3π/2`, `2π+1/100`.
impl Display for SymbolicSlope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.two_pi.is_zero() {
            return write!(f, "{}", self.constant);
        }
        fmt_pi_multiple(f, self.two_pi)?;
        if Signed::is_positive(&self.constant) {
            write!(f, "+{}", self.constant)?;
        } else if self.constant.is_negative() {
            write!(f, "{}", self.constant)?;
        }
        Ok(())
    }
}

impl FromStr for SymbolicSlope {
    type Err = ParseParamError;

    /// Accepts a plain rational only; symbolic values travel as structured
    /// records in documents.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_rational(s).map(SymbolicSlope::constant)
    }
}

/// A parameter value extended by `±∞`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Extended<P> {
    NegInf,
    Finite(P),
    PosInf,
}

impl<P: Param> Extended<P> {
    pub fn finite(&self) -> Option<&P> {
        match self {
            Extended::Finite(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn map<Q, F: FnOnce(P) -> Q>(self, f: F) -> Extended<Q> {
        match self {
            Extended::NegInf => Extended::NegInf,
            Extended::Finite(p) => Extended::Finite(f(p)),
            Extended::PosInf => Extended::PosInf,
        }
    }
}

impl<P: Param> Neg for Extended<P> {
    type Output = Extended<P>;
    fn neg(self) -> Extended<P> {
        match self {
            Extended::NegInf => Extended::PosInf,
            Extended::Finite(p) => Extended::Finite(-p),
            Extended::PosInf => Extended::NegInf,
        }
    }
}

impl<P: Display> Display for Extended<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::NegInf => write!(f, "-inf"),
            Extended::Finite(p) => write!(f, "{p}"),
            Extended::PosInf => write!(f, "inf"),
        }
    }
}

/// `gcd`-reduced check used by document loaders.
pub fn is_lowest_terms(r: &Rational) -> bool {
    r.numer().gcd(r.denom()) == 1 && *r.denom() > 0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("3").unwrap(), qi(3));
        assert_eq!(parse_rational("-6/4").unwrap(), q(-3, 2));
        assert_eq!(
            parse_rational("1/0").unwrap_err().to_string(),
            "zero denominator in \"1/0\""
        );
        assert!(parse_rational("x/2").is_err());
    }

    #[test]
    fn rational_floor_div() {
        assert_eq!(q(7, 2).floor_div(&qi(1)), Some(3));
        assert_eq!(q(-1, 2).floor_div(&qi(1)), Some(-1));
        assert_eq!(qi(2).floor_div(&q(1, 2)), Some(4));
        assert_eq!(qi(2).floor_div(&qi(0)), None);
    }

    #[test]
    fn symbolic_order_is_lexicographic() {
        let two_pi = SymbolicSlope::two_pi_times(qi(1));
        let eps = SymbolicSlope::constant(q(1, 100));
        assert!(SymbolicSlope::zero() < eps);
        assert!(eps < two_pi);
        assert!(two_pi < two_pi + eps);
        assert!(SymbolicSlope::constant(qi(3)) < two_pi - SymbolicSlope::constant(qi(2)));
    }

    #[test]
    fn symbolic_floor_div_by_two_pi() {
        let two_pi = SymbolicSlope::two_pi_times(qi(1));
        let x = SymbolicSlope::new(qi(2), q(1, 100));
        assert_eq!(x.floor_div(&two_pi), Some(2));
        let y = SymbolicSlope::new(qi(2), q(-1, 100));
        assert_eq!(y.floor_div(&two_pi), Some(1));
        assert_eq!(SymbolicSlope::constant(qi(5)).floor_div(&two_pi), Some(0));
        assert_eq!(two_pi.floor_div(&SymbolicSlope::constant(qi(1))), None);
    }

    #[test]
    fn symbolic_display() {
        assert_eq!(SymbolicSlope::two_pi_times(qi(1)).to_string(), "2π");
        assert_eq!(SymbolicSlope::two_pi_times(qi(-2)).to_string(), "-4π");
        assert_eq!(SymbolicSlope::two_pi_times(q(3, 4)).to_string(), "3π/2");
        assert_eq!(SymbolicSlope::two_pi_times(q(1, 2)).to_string(), "π");
        assert_eq!(SymbolicSlope::new(qi(1), q(1, 100)).to_string(), "2π+1/100");
        assert_eq!(SymbolicSlope::new(qi(-1), q(-1, 2)).to_string(), "-2π-1/2");
        assert_eq!(SymbolicSlope::constant(q(-3, 2)).to_string(), "-3/2");
    }

    #[test]
    fn extended_order_and_negation() {
        let a: Extended<Rational> = Extended::Finite(qi(1));
        assert!(Extended::NegInf < a && a < Extended::PosInf);
        assert_eq!(-Extended::<Rational>::PosInf, Extended::NegInf);
        assert_eq!(-a, Extended::Finite(qi(-1)));
        assert_eq!(Extended::<Rational>::PosInf.to_string(), "inf");
    }
}
