//! Exact linear algebra over the integers.
//!
//! Dense matrices of arbitrary-precision integers with Hermite and Smith
//! normal forms, kernels, characteristic polynomials and lattice index
//! computations. Every operation is exact; nothing here touches floating
//! point. Values are immutable after construction and freely shareable
//! across threads.

mod hnf;
mod poly;
mod snf;

pub use hnf::{kernel_basis, Echelon};
pub use poly::{charpoly, IntPoly};
pub use snf::{cokernel_of_row_lattice, order_in_cokernel, snf, snf_diagonal, AbGroupStructure};

use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;

/// Dense matrix of arbitrary-precision integers, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        IntMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// Builds from plain machine integers; convenient in tests.
    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        IntMatrix {
            rows,
            cols,
            entries: entries.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend(row);
        }
        IntMatrix {
            rows: r,
            cols: c,
            entries,
        }
    }

    pub fn diagonal(diag: &[BigInt]) -> Self {
        let n = diag.len();
        let mut m = Self::zero(n, n);
        for (i, d) in diag.iter().enumerate() {
            m.entries[i * n + i] = d.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vec(&self, r: usize) -> Vec<BigInt> {
        self.row(r).to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| x.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = Self::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.entries[c * self.rows + r] = self.at(r, c).clone();
            }
        }
        out
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(
            self.cols, other.rows,
            "product shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x * k).collect(),
        }
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows, "row vector length mismatch");
        let mut out = vec![BigInt::zero(); self.cols];
        for (r, coeff) in v.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            for c in 0..self.cols {
                let e = self.at(r, c);
                if !e.is_zero() {
                    out[c] += coeff * e;
                }
            }
        }
        out
    }

    /// Flattens into a single row-major vector, the "vectorized operator"
    /// view used for lattice computations on spaces of matrices.
    pub fn vectorize(&self) -> Vec<BigInt> {
        self.entries.clone()
    }

    pub fn trace(&self) -> BigInt {
        assert!(self.is_square());
        (0..self.rows).map(|i| self.at(i, i).clone()).sum()
    }

    /// Stacks `self` on top of `other` (same column count).
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        }
    }

    /// Keeps the first `k` rows.
    pub fn take_rows(&self, k: usize) -> IntMatrix {
        assert!(k <= self.rows);
        IntMatrix {
            rows: k,
            cols: self.cols,
            entries: self.entries[..k * self.cols].to_vec(),
        }
    }

    /// Number of leading non-zero rows; meaningful on echelonized matrices.
    pub fn nonzero_row_count(&self) -> usize {
        (0..self.rows)
            .filter(|&r| self.row(r).iter().any(|x| !x.is_zero()))
            .count()
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn det(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|r| self.row(r).to_vec()).collect();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    // Bareiss: division by the previous pivot is exact.
                    a[i][j] = &t / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        let mut d = a[n - 1][n - 1].clone();
        if sign < 0 {
            d = -d;
        }
        Ok(d)
    }

    /// Row-style Hermite normal form: row space preserved, pivots positive,
    /// entries above each pivot reduced into `[0, pivot)`. Zero rows sink to
    /// the bottom, so the shape is preserved and `hnf` is idempotent.
    pub fn hnf(&self) -> IntMatrix {
        hnf::hnf(self)
    }

    /// HNF together with a unimodular transform `u` satisfying
    /// `u * self = hnf(self)`.
    pub fn hnf_with_transform(&self) -> (IntMatrix, IntMatrix) {
        hnf::hnf_with_transform(self)
    }

    /// Elementary divisor description of the cokernel of `self` viewed as a
    /// map `Z^cols -> Z^rows` (so the cokernel is `Z^rows` modulo the column
    /// span).
    pub fn snf(&self) -> AbGroupStructure {
        snf::snf(self)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  [")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(r, c))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.at(r, c))?;
            }
            if r + 1 < self.rows {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

/// Index of the lattice spanned by the rows of `sub` inside the lattice
/// spanned by the rows of `ambient`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeIndex {
    Finite(num_bigint::BigUint),
    Infinite,
}

impl LatticeIndex {
    pub fn as_finite(&self) -> Option<&num_bigint::BigUint> {
        match self {
            LatticeIndex::Finite(n) => Some(n),
            LatticeIndex::Infinite => None,
        }
    }
}

impl fmt::Display for LatticeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeIndex::Finite(n) => write!(f, "{n}"),
            LatticeIndex::Infinite => write!(f, "infinite"),
        }
    }
}

/// Index `[ambient : sub]` for lattices given by (not necessarily reduced)
/// spanning rows. Errors when `sub` is not contained in `ambient`; reports
/// `Infinite` when the ranks differ.
pub fn lattice_index(sub: &IntMatrix, ambient: &IntMatrix) -> Result<LatticeIndex> {
    if sub.cols() != ambient.cols() {
        return Err(Error::DimensionMismatch(format!(
            "lattice_index: sub has {} columns, ambient {}",
            sub.cols(),
            ambient.cols()
        )));
    }
    let amb = Echelon::new(ambient.hnf());
    let sub_h = sub.hnf();
    let sub_rank = sub_h.nonzero_row_count();
    let mut coords = Vec::with_capacity(sub_rank);
    for r in 0..sub_rank {
        match amb.solve(sub_h.row(r)) {
            Some(x) => coords.push(x),
            None => {
                return Err(Error::NotInLattice(
                    "lattice_index: sub is not contained in ambient".into(),
                ))
            }
        }
    }
    if sub_rank < amb.rank() {
        return Ok(LatticeIndex::Infinite);
    }
    // Ranks equal: the coordinate matrix is square.
    let c = IntMatrix::from_rows(coords);
    let d = c.det()?;
    debug_assert!(!d.is_zero());
    Ok(LatticeIndex::Finite(d.magnitude().clone()))
}
