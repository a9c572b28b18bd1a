//! Smith normal form and finite abelian group structure extraction.

use super::IntMatrix;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Elementary-divisor description `d_1 | d_2 | ... | d_k` of a finitely
/// generated abelian group, unit divisors dropped.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AbGroupStructure {
    /// Non-trivial elementary divisors, each `>= 2`, in a dividing chain.
    pub divisors: Vec<BigUint>,
    pub free_rank: usize,
}

impl AbGroupStructure {
    pub fn trivial() -> Self {
        AbGroupStructure {
            divisors: Vec::new(),
            free_rank: 0,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.divisors.is_empty() && self.free_rank == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Generated by at most one element.
    pub fn is_cyclic(&self) -> bool {
        self.divisors.len() + self.free_rank <= 1
    }

    /// Order of the group; `None` when infinite.
    pub fn order(&self) -> Option<BigUint> {
        if self.free_rank > 0 {
            return None;
        }
        Some(self.divisors.iter().product())
    }

    /// The `ℓ`-primary part, trivial factors dropped. The free rank is
    /// carried over unchanged so that an infinite group is never silently
    /// reported as finite.
    pub fn ell_part(&self, ell: u64) -> AbGroupStructure {
        let divisors = self
            .divisors
            .iter()
            .map(|d| crate::arith::ell_part(d, ell))
            .filter(|d| !d.is_one())
            .collect();
        AbGroupStructure {
            divisors,
            free_rank: self.free_rank,
        }
    }

    /// Normalized structure of a direct sum of finite cyclic groups of the
    /// given orders.
    pub fn from_orders(orders: &[BigUint]) -> AbGroupStructure {
        use std::collections::BTreeMap;
        // Per prime, the multiset of prime-power exponents.
        let mut by_prime: BTreeMap<BigUint, Vec<u32>> = BTreeMap::new();
        let mut max_len = 0usize;
        for n in orders {
            assert!(!n.is_zero(), "from_orders: zero order");
            let mut n = n.clone();
            let mut p = BigUint::from(2u32);
            while &p * &p <= n {
                if (&n % &p).is_zero() {
                    let mut e = 0u32;
                    while (&n % &p).is_zero() {
                        n /= &p;
                        e += 1;
                    }
                    by_prime.entry(p.clone()).or_default().push(e);
                }
                p += 1u32;
            }
            if !n.is_one() {
                by_prime.entry(n).or_default().push(1);
            }
        }
        for v in by_prime.values_mut() {
            v.sort_unstable();
            max_len = max_len.max(v.len());
        }
        // Align the largest powers together to get the dividing chain.
        let mut divisors = vec![BigUint::one(); max_len];
        for (p, exps) in &by_prime {
            let pad = max_len - exps.len();
            for (i, &e) in exps.iter().enumerate() {
                divisors[pad + i] *= p.pow(e);
            }
        }
        divisors.retain(|d| !d.is_one());
        AbGroupStructure {
            divisors,
            free_rank: 0,
        }
    }

    /// Direct sum, renormalized into a dividing chain.
    pub fn direct_sum(&self, other: &AbGroupStructure) -> AbGroupStructure {
        let mut orders: Vec<BigUint> = self.divisors.clone();
        orders.extend(other.divisors.iter().cloned());
        let mut out = AbGroupStructure::from_orders(&orders);
        out.free_rank = self.free_rank + other.free_rank;
        out
    }
}

impl fmt::Display for AbGroupStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut first = true;
        for d in &self.divisors {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "Z/{d}")?;
            first = false;
        }
        if self.free_rank > 0 {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "Z^{}", self.free_rank)?;
        }
        Ok(())
    }
}

/// Diagonal of the Smith normal form: the non-zero entries in a positive
/// dividing chain (units included), plus the rank.
pub fn snf_diagonal(m: &IntMatrix) -> (Vec<BigUint>, usize) {
    let (diag, _) = snf_with_col_transform(m, false);
    let rank = diag.len();
    (diag, rank)
}

/// Structure of the cokernel of `m` viewed as a map `Z^cols -> Z^rows`,
/// i.e. `Z^rows` modulo the span of the columns.
pub fn snf(m: &IntMatrix) -> AbGroupStructure {
    let (diag, rank) = snf_diagonal(m);
    let divisors = diag.into_iter().filter(|d| !d.is_one()).collect();
    AbGroupStructure {
        divisors,
        free_rank: m.rows() - rank,
    }
}

/// Structure of `Z^cols` modulo the span of the rows of `m`, the quotient
/// convention used for lattice cokernels throughout the crate.
pub fn cokernel_of_row_lattice(m: &IntMatrix) -> AbGroupStructure {
    snf(&m.transpose())
}

/// Order of the image of the row vector `v` in `Z^cols / rowspan(m)`;
/// `None` when the image has infinite order.
pub fn order_in_cokernel(m: &IntMatrix, v: &[BigInt]) -> Option<BigUint> {
    assert_eq!(v.len(), m.cols());
    let (diag, q) = snf_with_col_transform(m, true);
    let q = q.expect("transform requested");
    // v -> v * Q carries rowspan(m) onto the span of the d_i * e_i.
    let w = q.apply_row(v);
    let rank = diag.len();
    for coord in w.iter().skip(rank) {
        if !coord.is_zero() {
            return None;
        }
    }
    let mut order = BigUint::one();
    for (i, d) in diag.iter().enumerate() {
        let d_int = BigInt::from(d.clone());
        let g = w[i].gcd(&d_int);
        let component = (&d_int / g).magnitude().clone();
        order = order.lcm(&component);
    }
    Some(order)
}

/// Smith normal form diagonalization tracking (optionally) the column
/// transform `q` with `rowspan(m * q) = rowspan(diag)`. Row operations are
/// untracked. Returns the positive dividing-chain diagonal.
fn snf_with_col_transform(m: &IntMatrix, want_q: bool) -> (Vec<BigUint>, Option<IntMatrix>) {
    let rows = m.rows();
    let cols = m.cols();
    let mut a: Vec<Vec<BigInt>> = (0..rows).map(|r| m.row(r).to_vec()).collect();
    let mut q: Option<Vec<Vec<BigInt>>> = if want_q {
        let mut id = vec![vec![BigInt::zero(); cols]; cols];
        for (i, row) in id.iter_mut().enumerate() {
            row[i] = BigInt::one();
        }
        Some(id)
    } else {
        None
    };

    fn col_addmul(
        a: &mut [Vec<BigInt>],
        q: &mut Option<Vec<Vec<BigInt>>>,
        dst: usize,
        src: usize,
        k: &BigInt,
    ) {
        if k.is_zero() {
            return;
        }
        for row in a.iter_mut() {
            let t = &row[src] * k;
            row[dst] += t;
        }
        if let Some(q) = q {
            for row in q.iter_mut() {
                let t = &row[src] * k;
                row[dst] += t;
            }
        }
    }

    fn col_swap(a: &mut [Vec<BigInt>], q: &mut Option<Vec<Vec<BigInt>>>, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        if let Some(q) = q {
            for row in q.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    fn col_negate(a: &mut [Vec<BigInt>], q: &mut Option<Vec<Vec<BigInt>>>, i: usize) {
        for row in a.iter_mut() {
            row[i] = -std::mem::take(&mut row[i]);
        }
        if let Some(q) = q {
            for row in q.iter_mut() {
                row[i] = -std::mem::take(&mut row[i]);
            }
        }
    }

    let mut t = 0usize;
    while t < rows.min(cols) {
        // Move a non-zero entry of minimal magnitude into (t, t).
        let mut best: Option<(usize, usize)> = None;
        for r in t..rows {
            for c in t..cols {
                if !a[r][c].is_zero() {
                    best = match best {
                        None => Some((r, c)),
                        Some((br, bc)) if a[r][c].magnitude() < a[br][bc].magnitude() => {
                            Some((r, c))
                        }
                        keep => keep,
                    };
                }
            }
        }
        let Some((br, bc)) = best else { break };
        a.swap(t, br);
        col_swap(&mut a, &mut q, t, bc);

        loop {
            // Clear column t below the pivot with row operations.
            let mut dirty = false;
            for r in t + 1..rows {
                if a[r][t].is_zero() {
                    continue;
                }
                let qq = a[r][t].div_floor(&a[t][t]);
                if !qq.is_zero() {
                    for c in t..cols {
                        let s = &a[t][c] * &qq;
                        a[r][c] -= s;
                    }
                }
                if !a[r][t].is_zero() {
                    a.swap(t, r);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Clear row t right of the pivot with column operations.
            for c in t + 1..cols {
                if a[t][c].is_zero() {
                    continue;
                }
                let qq = a[t][c].div_floor(&a[t][t]);
                let negq = -qq;
                col_addmul(&mut a, &mut q, c, t, &negq);
                if !a[t][c].is_zero() {
                    col_swap(&mut a, &mut q, t, c);
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
        t += 1;
    }

    let mut rank = t;
    while rank > 0 && a[rank - 1][rank - 1].is_zero() {
        rank -= 1;
    }
    for i in 0..rank {
        if a[i][i].is_negative() {
            col_negate(&mut a, &mut q, i);
        }
    }
    // Enforce the dividing chain d_i | d_{i+1}.
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..rank.saturating_sub(1) {
            let (di, dj) = (a[i][i].clone(), a[i + 1][i + 1].clone());
            if (&dj % &di).is_zero() {
                continue;
            }
            changed = true;
            // diag(d_i, d_j) ~ diag(g, l) with g = gcd, l = lcm. At this
            // stage the matrix is diagonal, so only rows/cols i, i+1 move.
            let g = di.gcd(&dj);
            let l = (&di / &g) * &dj;
            let one = BigInt::one();
            col_addmul(&mut a, &mut q, i, i + 1, &one);
            // Block is now [d_i, 0; d_j, d_j]. Row-transform it with the
            // unimodular [x, y; -d_j/g, d_i/g] where x d_i + y d_j = g.
            let e = di.extended_gcd(&dj);
            let (x, y) = (e.x, e.y);
            let (ci, cj) = (&di / &g, &dj / &g);
            let ri = a[i].clone();
            let rj = a[i + 1].clone();
            for c in 0..cols {
                a[i][c] = &x * &ri[c] + &y * &rj[c];
                a[i + 1][c] = -&cj * &ri[c] + &ci * &rj[c];
            }
            debug_assert_eq!(a[i][i], g);
            debug_assert!(a[i + 1][i].is_zero());
            // Clear the (i, i+1) entry; it is y*d_j, a multiple of g.
            let qq = a[i][i + 1].div_floor(&g);
            let negq = -qq;
            col_addmul(&mut a, &mut q, i + 1, i, &negq);
            debug_assert!(a[i][i + 1].is_zero());
            debug_assert_eq!(a[i + 1][i + 1], l);
        }
    }
    let diag = (0..rank)
        .map(|i| a[i][i].magnitude().clone())
        .collect::<Vec<_>>();
    (diag, q.map(IntMatrix::from_rows))
}
