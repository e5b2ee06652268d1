//! Dense linear algebra over prime fields GF(p).
//!
//! Every structure map in the crate is a [`Matrix`]. Entries are stored
//! row-major as reduced `u32` residues; all arithmetic is exact.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

/// The field used when nothing else is requested.
pub const DEFAULT_MODULUS: u32 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("incompatible shapes: {left_rows}x{left_cols} composed with {right_rows}x{right_cols}")]
    IncompatibleShapes {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("modulus {0} is not a prime")]
    NotPrime(u32),
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn check_prime(p: u32) -> Result<(), LinalgError> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(LinalgError::NotPrime(p))
    }
}

#[inline]
fn add_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 + b as u64) % p as u64) as u32
}

#[inline]
fn sub_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 + p as u64 - b as u64) % p as u64) as u32
}

#[inline]
fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

fn pow_mod(mut base: u32, mut exp: u32, p: u32) -> u32 {
    let mut acc = 1 % p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Multiplicative inverse of a nonzero residue, by Fermat.
#[inline]
fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

/// Reduce an arbitrary integer into `[0, p)`.
pub fn reduce(value: i64, p: u32) -> u32 {
    value.rem_euclid(p as i64) as u32
}

/// An element of GF(p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    modulus: u32,
}

impl FieldElement {
    pub fn new(value: i64, modulus: u32) -> Result<Self, LinalgError> {
        check_prime(modulus)?;
        Ok(FieldElement {
            value: reduce(value, modulus),
            modulus,
        })
    }

    pub fn zero(modulus: u32) -> Self {
        FieldElement { value: 0, modulus }
    }

    pub fn one(modulus: u32) -> Self {
        FieldElement {
            value: 1 % modulus,
            modulus,
        }
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        (self.value != 0).then(|| FieldElement {
            value: inv_mod(self.value, self.modulus),
            modulus: self.modulus,
        })
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        assert_eq!(self.modulus, rhs.modulus, "mixed moduli");
        FieldElement {
            value: add_mod(self.value, rhs.value, self.modulus),
            modulus: self.modulus,
        }
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        assert_eq!(self.modulus, rhs.modulus, "mixed moduli");
        FieldElement {
            value: sub_mod(self.value, rhs.value, self.modulus),
            modulus: self.modulus,
        }
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        assert_eq!(self.modulus, rhs.modulus, "mixed moduli");
        FieldElement {
            value: mul_mod(self.value, rhs.value, self.modulus),
            modulus: self.modulus,
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            value: sub_mod(0, self.value, self.modulus),
            modulus: self.modulus,
        }
    }
}

/// Dense row-major matrix over GF(p).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    modulus: u32,
    data: Vec<u32>,
}

impl Matrix {
    /// Build from row-major integer entries, reducing each modulo `modulus`.
    pub fn new(rows: usize, cols: usize, modulus: u32, entries: &[i64]) -> Result<Self, LinalgError> {
        check_prime(modulus)?;
        if entries.len() != rows * cols {
            return Err(LinalgError::LengthMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(Matrix {
            rows,
            cols,
            modulus,
            data: entries.iter().map(|&e| reduce(e, modulus)).collect(),
        })
    }

    /// Build from a list of rows. `cols` must be given so that 0-row matrices keep their shape.
    pub fn from_rows<R: AsRef<[i64]>>(cols: usize, modulus: u32, rows: &[R]) -> Result<Self, LinalgError> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(LinalgError::LengthMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            entries.extend_from_slice(row);
        }
        Matrix::new(rows.len(), cols, modulus, &entries)
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(rows: usize, modulus: u32, columns: &[Vec<u32>]) -> Result<Self, LinalgError> {
        check_prime(modulus)?;
        let mut m = Matrix::zero(rows, columns.len(), modulus);
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(LinalgError::LengthMismatch {
                    expected: rows,
                    found: col.len(),
                });
            }
            for (i, &v) in col.iter().enumerate() {
                m.data[i * m.cols + j] = v % modulus;
            }
        }
        Ok(m)
    }

    pub fn zero(rows: usize, cols: usize, modulus: u32) -> Self {
        Matrix {
            rows,
            cols,
            modulus,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize, modulus: u32) -> Self {
        let mut m = Matrix::zero(n, n, modulus);
        for i in 0..n {
            m.data[i * n + i] = 1 % modulus;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn element(&self, i: usize, j: usize) -> FieldElement {
        FieldElement {
            value: self.get(i, j),
            modulus: self.modulus,
        }
    }

    pub fn set(&mut self, i: usize, j: usize, value: i64) {
        self.data[i * self.cols + j] = reduce(value, self.modulus);
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == u32::from(i == j)))
    }

    /// The product `self · rhs`, i.e. `self ∘ rhs` as linear maps.
    pub fn compose(&self, rhs: &Matrix) -> Result<Matrix, LinalgError> {
        if self.modulus != rhs.modulus {
            return Err(LinalgError::ModulusMismatch(self.modulus, rhs.modulus));
        }
        if self.cols != rhs.rows {
            return Err(LinalgError::IncompatibleShapes {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: rhs.rows,
                right_cols: rhs.cols,
            });
        }
        let p = self.modulus as u64;
        let mut out = Matrix::zero(self.rows, rhs.cols, self.modulus);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    out.data[idx] = ((out.data[idx] as u64 + a * rhs.get(k, j) as u64) % p) as u32;
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.cols, self.rows, self.modulus);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn apply(&self, v: &[u32]) -> Result<Vec<u32>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::LengthMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let p = self.modulus as u64;
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols).fold(0u64, |acc, j| (acc + self.get(i, j) as u64 * v[j] as u64) % p) as u32
            })
            .collect())
    }

    pub fn add(&self, rhs: &Matrix) -> Result<Matrix, LinalgError> {
        if self.modulus != rhs.modulus {
            return Err(LinalgError::ModulusMismatch(self.modulus, rhs.modulus));
        }
        if self.shape() != rhs.shape() {
            return Err(LinalgError::IncompatibleShapes {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: rhs.rows,
                right_cols: rhs.cols,
            });
        }
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| add_mod(a, b, self.modulus))
            .collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            modulus: self.modulus,
            data,
        })
    }

    /// Block-diagonal sum `self ⊕ rhs`.
    pub fn direct_sum(&self, rhs: &Matrix) -> Result<Matrix, LinalgError> {
        if self.modulus != rhs.modulus {
            return Err(LinalgError::ModulusMismatch(self.modulus, rhs.modulus));
        }
        let mut out = Matrix::zero(self.rows + rhs.rows, self.cols + rhs.cols, self.modulus);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[i * out.cols + j] = self.get(i, j);
            }
        }
        for i in 0..rhs.rows {
            for j in 0..rhs.cols {
                out.data[(self.rows + i) * out.cols + self.cols + j] = rhs.get(i, j);
            }
        }
        Ok(out)
    }

    /// Stack vertically; all blocks must share the column count.
    pub fn vstack(blocks: &[&Matrix]) -> Result<Matrix, LinalgError> {
        let first = blocks.first().expect("vstack of no blocks");
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            if b.modulus != first.modulus {
                return Err(LinalgError::ModulusMismatch(first.modulus, b.modulus));
            }
            if b.cols != first.cols {
                return Err(LinalgError::LengthMismatch {
                    expected: first.cols,
                    found: b.cols,
                });
            }
            rows += b.rows;
            data.extend_from_slice(&b.data);
        }
        Ok(Matrix {
            rows,
            cols: first.cols,
            modulus: first.modulus,
            data,
        })
    }

    /// Stack horizontally; all blocks must share the row count.
    pub fn hstack(blocks: &[&Matrix]) -> Result<Matrix, LinalgError> {
        let transposed: Vec<Matrix> = blocks.iter().map(|b| b.transpose()).collect();
        let refs: Vec<&Matrix> = transposed.iter().collect();
        Ok(Matrix::vstack(&refs)?.transpose())
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let p = m.modulus;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = inv_mod(m.get(r, c), p);
            for j in c..m.cols {
                let idx = r * m.cols + j;
                m.data[idx] = mul_mod(m.data[idx], inv, p);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c);
                if f == 0 {
                    continue;
                }
                for j in c..m.cols {
                    let v = mul_mod(f, m.get(r, j), p);
                    let idx = i * m.cols + j;
                    m.data[idx] = sub_mod(m.data[idx], v, p);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of the column space, as vectors of length `rows`.
    pub fn column_space_basis(&self) -> Vec<Vec<u32>> {
        let (_, pivots) = self.rref();
        pivots.into_iter().map(|j| self.column(j)).collect()
    }

    /// A basis of the kernel, as vectors of length `cols`.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let (r, pivots) = self.rref();
        let p = self.modulus;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u32; self.cols];
                v[f] = 1 % p;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = sub_mod(0, r.get(row, f), p);
                }
                v
            })
            .collect()
    }

    /// Solve `columns · x = v`; `None` when `v` is outside the column span.
    pub fn membership(v: &[u32], columns: &Matrix) -> Result<Option<Vec<u32>>, LinalgError> {
        if v.len() != columns.rows {
            return Err(LinalgError::LengthMismatch {
                expected: columns.rows,
                found: v.len(),
            });
        }
        let p = columns.modulus;
        let rhs = Matrix::from_columns(columns.rows, p, &[v.iter().map(|&x| x % p).collect()])?;
        let augmented = Matrix::hstack(&[columns, &rhs])?;
        let (r, pivots) = augmented.rref();
        if pivots.last() == Some(&columns.cols) {
            return Ok(None);
        }
        let mut x = vec![0u32; columns.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, columns.cols);
        }
        Ok(Some(x))
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// `true` when every entry is zero.
pub fn is_zero_vector(v: &[u32]) -> bool {
    v.iter().all(|&x| x == 0)
}

/// Every vector of GF(p)^n in lexicographic order. Intended for tiny n.
pub fn all_vectors(n: usize, p: u32) -> impl Iterator<Item = Vec<u32>> {
    let total = (p as u64).pow(n as u32);
    (0..total).map(move |mut code| {
        let mut v = vec![0u32; n];
        for slot in v.iter_mut() {
            *slot = (code % p as u64) as u32;
            code /= p as u64;
        }
        v
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2(rows: &[[i64; 2]]) -> Matrix {
        Matrix::from_rows(2, 2, rows).unwrap()
    }

    /// Schoolbook product, independent of `compose`.
    fn naive_product(a: &Matrix, b: &Matrix) -> Vec<Vec<u64>> {
        let p = a.modulus() as u64;
        (0..a.rows())
            .map(|i| {
                (0..b.cols())
                    .map(|j| {
                        let mut s = 0u64;
                        for k in 0..a.cols() {
                            s += a.get(i, k) as u64 * b.get(k, j) as u64;
                        }
                        s % p
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn identity_composes_to_identity() {
        let i3 = Matrix::identity(3, 2);
        assert_eq!(i3.compose(&i3).unwrap(), i3);
    }

    #[test]
    fn gf2_product_matches_hand_and_naive() {
        let a = m2(&[[1, 1], [0, 1]]);
        let b = m2(&[[1, 0], [1, 1]]);
        let c = a.compose(&b).unwrap();
        assert_eq!(c, m2(&[[0, 1], [1, 1]]));
        let naive = naive_product(&a, &b);
        assert_eq!(c.to_rows(), naive.iter().map(|r| r.iter().map(|&x| x as u32).collect::<Vec<_>>()).collect::<Vec<_>>());
    }

    #[test]
    fn zero_annihilates() {
        let z = Matrix::zero(2, 3, 2);
        let any = Matrix::new(3, 4, 2, &[1, 0, 1, 1, 0, 1, 1, 0, 1, 1, 1, 1]).unwrap();
        assert_eq!(z.compose(&any).unwrap(), Matrix::zero(2, 4, 2));
    }

    #[test]
    fn compose_rejects_bad_shapes() {
        let a = Matrix::zero(2, 3, 2);
        let err = a.compose(&Matrix::zero(2, 2, 2)).unwrap_err();
        assert!(err.to_string().contains("incompatible shapes"));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::identity(4, 2).rank(), 4);
        assert_eq!(Matrix::zero(3, 5, 2).rank(), 0);
        assert_eq!(m2(&[[1, 1], [1, 1]]).rank(), 1);
        // Over GF(3) the same matrix with a 2 is still rank 1; over GF(2), [[1,1],[1,-1]] collapses.
        assert_eq!(Matrix::from_rows(2, 2, &[[1, 1], [1, -1]]).unwrap().rank(), 1);
        assert_eq!(Matrix::from_rows(2, 3, &[[1, 1], [1, -1]]).unwrap().rank(), 2);
    }

    #[test]
    fn membership_examples() {
        let i2 = Matrix::identity(2, 2);
        assert_eq!(Matrix::membership(&[0, 0], &i2).unwrap(), Some(vec![0, 0]));
        assert_eq!(Matrix::membership(&[1, 0], &i2).unwrap(), Some(vec![1, 0]));
        assert_eq!(Matrix::membership(&[1, 1], &i2).unwrap(), Some(vec![1, 1]));
        let line = m2(&[[1, 1], [1, 1]]);
        assert_eq!(Matrix::membership(&[1, 0], &line).unwrap(), None);
        assert!(Matrix::membership(&[1], &i2).is_err());
    }

    #[test]
    fn membership_against_empty_column_set() {
        let empty = Matrix::zero(3, 0, 5);
        assert_eq!(Matrix::membership(&[0, 0, 0], &empty).unwrap(), Some(vec![]));
        assert_eq!(Matrix::membership(&[0, 4, 0], &empty).unwrap(), None);
    }

    #[test]
    fn field_axioms_small_primes() {
        for p in [2u32, 3, 5, 7] {
            let elems: Vec<FieldElement> = (0..p as i64).map(|v| FieldElement::new(v, p).unwrap()).collect();
            let zero = FieldElement::zero(p);
            let one = FieldElement::one(p);
            for &a in &elems {
                assert_eq!(a + zero, a);
                assert_eq!(a * one, a);
                assert_eq!(a + (-a), zero);
                if !a.is_zero() {
                    assert_eq!(a * a.inverse().unwrap(), one);
                }
                for &b in &elems {
                    assert_eq!(a + b, b + a);
                    assert_eq!(a * b, b * a);
                    assert_eq!((a - b) + b, a);
                    for &c in &elems {
                        assert_eq!((a + b) + c, a + (b + c));
                        assert_eq!((a * b) * c, a * (b * c));
                        assert_eq!(a * (b + c), a * b + a * c);
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_composite_modulus() {
        assert_eq!(FieldElement::new(1, 4).unwrap_err(), LinalgError::NotPrime(4));
        assert!(Matrix::new(1, 1, 9, &[1]).is_err());
    }

    #[test]
    fn kernel_vectors_are_killed() {
        let a = Matrix::new(2, 4, 3, &[1, 2, 0, 1, 0, 1, 1, 2]).unwrap();
        let ker = a.kernel_basis();
        assert_eq!(ker.len(), 4 - a.rank());
        for v in ker {
            assert!(is_zero_vector(&a.apply(&v).unwrap()));
        }
    }
}
