//! Hermite normal form and echelon solving.
//!
//! Row-style HNF by integer row reduction: repeated Euclidean combination on
//! the pivot column, smallest pivot first. Entry growth is controlled by
//! keeping everything reduced against the current pivot as soon as it
//! settles; correctness over speed.

use super::IntMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub(super) fn hnf(m: &IntMatrix) -> IntMatrix {
    hnf_inner(m, false).0
}

pub(super) fn hnf_with_transform(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (h, u) = hnf_inner(m, true);
    (h, u.expect("transform requested"))
}

fn hnf_inner(m: &IntMatrix, want_transform: bool) -> (IntMatrix, Option<IntMatrix>) {
    let rows = m.rows();
    let cols = m.cols();
    let mut a: Vec<Vec<BigInt>> = (0..rows).map(|r| m.row(r).to_vec()).collect();
    let mut u: Option<Vec<Vec<BigInt>>> = if want_transform {
        let mut id = vec![vec![BigInt::zero(); rows]; rows];
        for (i, row) in id.iter_mut().enumerate() {
            row[i] = BigInt::from(1);
        }
        Some(id)
    } else {
        None
    };

    let mut pivot_row = 0usize;
    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        // Euclidean phase: shrink the column below pivot_row until only one
        // non-zero entry remains.
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..rows {
                if !a[r][col].is_zero() {
                    best = match best {
                        None => Some(r),
                        Some(b) if a[r][col].magnitude() < a[b][col].magnitude() => Some(r),
                        keep => keep,
                    };
                }
            }
            let Some(b) = best else { break };
            if b != pivot_row {
                a.swap(pivot_row, b);
                if let Some(u) = u.as_mut() {
                    u.swap(pivot_row, b);
                }
            }
            let mut done = true;
            let pivot = a[pivot_row][col].clone();
            for r in pivot_row + 1..rows {
                if a[r][col].is_zero() {
                    continue;
                }
                let q = a[r][col].div_floor(&pivot);
                row_submul(&mut a, r, pivot_row, &q, col);
                if let Some(u) = u.as_mut() {
                    row_submul(u, r, pivot_row, &q, 0);
                }
                if !a[r][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[pivot_row][col].is_zero() {
            continue;
        }
        if a[pivot_row][col].is_negative() {
            for x in a[pivot_row].iter_mut() {
                *x = -std::mem::take(x);
            }
            if let Some(u) = u.as_mut() {
                for x in u[pivot_row].iter_mut() {
                    *x = -std::mem::take(x);
                }
            }
        }
        // Reduce the entries above the new pivot into [0, pivot).
        let pivot = a[pivot_row][col].clone();
        for r in 0..pivot_row {
            if a[r][col].is_zero() {
                continue;
            }
            let q = a[r][col].div_floor(&pivot);
            if q.is_zero() {
                continue;
            }
            row_submul(&mut a, r, pivot_row, &q, 0);
            if let Some(u) = u.as_mut() {
                row_submul(u, r, pivot_row, &q, 0);
            }
        }
        pivot_row += 1;
    }

    let h = IntMatrix::from_rows(a);
    let u = u.map(IntMatrix::from_rows);
    (h, u)
}

/// `a[r] -= q * a[src]`, skipping the prefix `[0, from_col)` which is known
/// to stay zero.
fn row_submul(a: &mut [Vec<BigInt>], r: usize, src: usize, q: &BigInt, from_col: usize) {
    if q.is_zero() {
        return;
    }
    let (lo, hi) = if r < src {
        let (l, h) = a.split_at_mut(src);
        (&mut l[r], &h[0])
    } else {
        let (l, h) = a.split_at_mut(r);
        (&mut h[0], &l[src])
    };
    for c in from_col..lo.len() {
        if !hi[c].is_zero() {
            lo[c] -= q * &hi[c];
        }
    }
}

/// Echelonized lattice basis with pivot bookkeeping, supporting fast
/// membership tests and coordinate extraction by back-substitution.
#[derive(Clone, Debug)]
pub struct Echelon {
    basis: IntMatrix,
    pivots: Vec<usize>,
}

impl Echelon {
    /// Wraps an HNF matrix. Zero rows are dropped.
    pub fn new(h: IntMatrix) -> Echelon {
        let rank = h.nonzero_row_count();
        let basis = h.take_rows(rank);
        let pivots = (0..rank)
            .map(|r| {
                basis
                    .row(r)
                    .iter()
                    .position(|x| !x.is_zero())
                    .expect("non-zero row")
            })
            .collect();
        Echelon { basis, pivots }
    }

    pub fn from_rows(m: &IntMatrix) -> Echelon {
        Echelon::new(m.hnf())
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// Expresses `v` as an integer combination of the basis rows; `None`
    /// when `v` is not in the lattice.
    pub fn solve(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.basis.cols(), "solve: length mismatch");
        let mut v = v.to_vec();
        let mut coeffs = vec![BigInt::zero(); self.rank()];
        for (r, &p) in self.pivots.iter().enumerate() {
            if v[p].is_zero() {
                continue;
            }
            let (q, rem) = v[p].div_rem(self.basis.at(r, p));
            if !rem.is_zero() {
                return None;
            }
            for c in p..v.len() {
                let e = self.basis.at(r, c);
                if !e.is_zero() {
                    v[c] -= &q * e;
                }
            }
            coeffs[r] = q;
        }
        if v.iter().all(|x| x.is_zero()) {
            Some(coeffs)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.solve(v).is_some()
    }
}

/// Basis of the left kernel `{ v : v * m = 0 }`, as rows. The kernel of a
/// map into a free module is saturated, so this is also a basis of the
/// kernel as a direct summand.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let (h, u) = m.hnf_with_transform();
    let rank = h.nonzero_row_count();
    let rows = m.rows();
    let mut out = Vec::with_capacity(rows - rank);
    for r in rank..rows {
        debug_assert!(h.row(r).iter().all(|x| x.is_zero()));
        out.push(u.row_vec(r));
    }
    if out.is_empty() {
        IntMatrix::zero(0, rows)
    } else {
        IntMatrix::from_rows(out)
    }
}
