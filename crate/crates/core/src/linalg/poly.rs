//! Exact integer polynomials: characteristic polynomials, Sturm chains for
//! real root counting with rational endpoints, and polynomial square roots.

use super::IntMatrix;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Polynomial with integer coefficients, ascending degree order, no trailing
/// zeros (the zero polynomial has an empty coefficient vector).
#[derive(Clone, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::from_coeffs(vec![BigInt::zero(), BigInt::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Sign of `p(a/b)` for `b > 0`, evaluated without rational arithmetic
    /// via the homogenization `b^deg * p(a/b)`.
    pub fn sign_at_rational(&self, a: &BigInt, b: &BigInt) -> i32 {
        assert!(b.is_positive());
        if self.is_zero() {
            return 0;
        }
        let n = self.coeffs.len() - 1;
        let mut acc = BigInt::zero();
        let mut bpow = BigInt::one();
        // sum c_k a^k b^(n-k), accumulated from the top by Horner in a.
        for k in (0..=n).rev() {
            acc = acc * a + &self.coeffs[k] * &bpow;
            if k > 0 {
                bpow *= b;
            }
        }
        sign_of(&acc)
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + other.coeff(k));
        }
        IntPoly::from_coeffs(out)
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) - other.coeff(k));
        }
        IntPoly::from_coeffs(out)
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        IntPoly::from_coeffs(out)
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        IntPoly::from_coeffs(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn derivative(&self) -> IntPoly {
        if self.coeffs.len() <= 1 {
            return IntPoly::zero();
        }
        IntPoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    /// gcd of the coefficients, positive; zero polynomial gives 0.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        g
    }

    pub fn primitive_part(&self) -> IntPoly {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| c / &g).collect(),
        }
    }

    /// Pseudo-remainder: `lc(d)^s * self = q*d + r` where `s` is the number
    /// of reduction steps actually performed.
    pub fn pseudo_rem(&self, d: &IntPoly) -> IntPoly {
        self.pseudo_rem_steps(d).0
    }

    fn pseudo_rem_steps(&self, d: &IntPoly) -> (IntPoly, usize) {
        assert!(!d.is_zero(), "pseudo_rem by zero");
        let dd = d.degree().unwrap();
        let lc = d.leading();
        let mut r = self.clone();
        let mut steps = 0usize;
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            // r = lc * r - lead(r) * x^(dr-dd) * d
            let lead_r = r.leading();
            let mut shifted = vec![BigInt::zero(); dr - dd];
            shifted.extend(d.coeffs.iter().map(|c| c * &lead_r));
            let shifted = IntPoly::from_coeffs(shifted);
            r = r.scale(&lc).sub(&shifted);
            steps += 1;
        }
        (r, steps)
    }

    /// Polynomial gcd up to sign, primitive.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.is_zero() {
            return b;
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        if a.leading().is_negative() {
            a = a.neg();
        }
        a
    }

    /// `self / gcd(self, self')`: same roots without multiplicity.
    pub fn squarefree_part(&self) -> IntPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            return self.primitive_part();
        }
        self.exact_div(&g)
            .expect("gcd divides")
            .primitive_part()
    }

    /// Exact division; `None` when `d` does not divide `self` over Q (the
    /// result is returned primitive-scaled only when division is exact over
    /// the rationals with integer quotient).
    pub fn exact_div(&self, d: &IntPoly) -> Option<IntPoly> {
        assert!(!d.is_zero());
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let n = self.degree().unwrap();
        let dd = d.degree().unwrap();
        if n < dd {
            return None;
        }
        let lc = d.leading();
        let mut rem = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); n - dd + 1];
        for k in (0..=n - dd).rev() {
            let top = rem[k + dd].clone();
            if top.is_zero() {
                continue;
            }
            let (qq, rr) = top.div_rem(&lc);
            if !rr.is_zero() {
                return None;
            }
            q[k] = qq.clone();
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] -= &qq * dc;
            }
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(IntPoly::from_coeffs(q))
    }

    /// Monic square root of a monic polynomial of even degree, if it exists.
    pub fn monic_sqrt(&self) -> Option<IntPoly> {
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if !self.is_monic() {
            return None;
        }
        let n = self.degree().unwrap();
        if n % 2 != 0 {
            return None;
        }
        let g = n / 2;
        let two = BigInt::from(2);
        let mut h = vec![BigInt::zero(); g + 1];
        h[g] = BigInt::one();
        // Match coefficients of x^(2g-1) down to x^g to fix h, then verify.
        for k in 1..=g {
            // coefficient of x^(2g-k) in h^2 using entries h[g], ..., h[g-k+1]:
            let mut acc = BigInt::zero();
            for i in 1..k {
                // pairs (g-i, g-k+i)
                acc += &h[g - i] * &h[g - k + i];
            }
            let target = self.coeff(2 * g - k) - acc;
            let (qq, rr) = target.div_rem(&two);
            if !rr.is_zero() {
                return None;
            }
            h[g - k] = qq;
        }
        let cand = IntPoly::from_coeffs(h);
        if cand.mul(&cand) == *self {
            Some(cand)
        } else {
            None
        }
    }

    /// Sturm chain of the squarefree part; use with `count_*_roots`.
    fn sturm_chain(&self) -> Vec<IntPoly> {
        let p = self.squarefree_part();
        let mut chain = vec![p.clone(), p.derivative().primitive_part()];
        loop {
            let k = chain.len();
            if chain[k - 1].is_zero() {
                chain.pop();
                break;
            }
            if chain[k - 1].degree() == Some(0) {
                break;
            }
            let (mut r, steps) = chain[k - 2].pseudo_rem_steps(&chain[k - 1]);
            // The pseudo-remainder is lc^steps times the true remainder; undo
            // the sign so the chain keeps the signed-remainder convention.
            if chain[k - 1].leading().is_negative() && steps % 2 == 1 {
                r = r.neg();
            }
            let r = r.neg().primitive_part();
            chain.push(r);
        }
        chain
    }

    /// Number of distinct real roots in the open interval `(a/b, c/d)`,
    /// rational endpoints with positive denominators.
    pub fn count_distinct_roots_in(
        &self,
        a: &BigInt,
        b: &BigInt,
        c: &BigInt,
        d: &BigInt,
    ) -> usize {
        let chain = self.sturm_chain();
        let va = sign_changes(&chain, |p| p.sign_at_rational(a, b));
        let vc = sign_changes(&chain, |p| p.sign_at_rational(c, d));
        va.saturating_sub(vc)
    }

    /// Number of distinct real roots on the whole line.
    pub fn count_distinct_real_roots(&self) -> usize {
        let chain = self.sturm_chain();
        let at_minus_inf = sign_changes(&chain, |p| sign_at_infinity(p, false));
        let at_plus_inf = sign_changes(&chain, |p| sign_at_infinity(p, true));
        at_minus_inf.saturating_sub(at_plus_inf)
    }

    /// Number of distinct real roots greater than `a/b` (excluding `a/b`).
    pub fn count_distinct_roots_above(&self, a: &BigInt, b: &BigInt) -> usize {
        let chain = self.sturm_chain();
        let va = sign_changes(&chain, |p| p.sign_at_rational(a, b));
        let vinf = sign_changes(&chain, |p| sign_at_infinity(p, true));
        va.saturating_sub(vinf)
    }
}

fn sign_of(x: &BigInt) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

fn sign_at_infinity(p: &IntPoly, plus: bool) -> i32 {
    match p.degree() {
        None => 0,
        Some(n) => {
            let s = sign_of(&p.leading());
            if plus || n % 2 == 0 {
                s
            } else {
                -s
            }
        }
    }
}

fn sign_changes<F: Fn(&IntPoly) -> i32>(chain: &[IntPoly], eval: F) -> usize {
    let mut signs = chain.iter().map(eval).filter(|&s| s != 0);
    let mut count = 0;
    let Some(mut prev) = signs.next() else {
        return 0;
    };
    for s in signs {
        if s != prev {
            count += 1;
        }
        prev = s;
    }
    count
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.magnitude();
            if k == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                if k == 1 {
                    write!(f, "x")?;
                } else {
                    write!(f, "x^{k}")?;
                }
            }
            first = false;
        }
        Ok(())
    }
}

/// Characteristic polynomial `det(xI - m)` by the Faddeev–LeVerrier
/// recurrence; every division it performs is exact over the integers.
pub fn charpoly(m: &IntMatrix) -> Result<IntPoly> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut aux = IntMatrix::identity(n);
    for k in 1..=n {
        let prod = m.mul(&aux);
        let (c, rem) = (-prod.trace()).div_rem(&BigInt::from(k as i64));
        debug_assert!(rem.is_zero(), "Faddeev-LeVerrier division must be exact");
        coeffs[n - k] = c.clone();
        if k < n {
            aux = prod;
            for i in 0..n {
                let v = aux.at(i, i) + &c;
                aux.set(i, i, v);
            }
        }
    }
    Ok(IntPoly::from_coeffs(coeffs))
}
