//! Small elementary number theory helpers used throughout the crate.
//!
//! All levels and auxiliary primes in this project stay well below 2^32, so
//! the `u64` routines here use trial division and schoolbook modular
//! exponentiation; no probabilistic primality testing is involved.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Deterministic primality by trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// All primes `<= bound`, ascending.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut p = 2usize;
    while p * p <= n {
        if sieve[p] {
            let mut k = p * p;
            while k <= n {
                sieve[k] = false;
                k += p;
            }
        }
        p += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &b)| if b { Some(i as u64) } else { None })
        .collect()
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Prime factorization `n = ∏ p^e` as ascending `(p, e)` pairs.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    let mut n = n;
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0u32;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_squarefree(n: u64) -> bool {
    n >= 1 && factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Splits a squarefree semiprime into its two prime factors `(p, q)` with
/// `p < q`; `None` otherwise.
pub fn semiprime_factors(n: u64) -> Option<(u64, u64)> {
    let f = factorize(n);
    match f.as_slice() {
        [(p, 1), (q, 1)] => Some((*p, *q)),
        _ => None,
    }
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let prev = out.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            out.extend(prev.iter().map(|d| d * pk));
        }
    }
    out.sort_unstable();
    out
}

pub fn euler_phi(n: u64) -> u64 {
    let mut out = n;
    for (p, _) in factorize(n) {
        out = out / p * (p - 1);
    }
    out
}

/// Index `ψ(N) = [SL_2(Z) : Γ_0(N)] = N ∏_{p|N} (1 + 1/p)`.
pub fn psi_index(n: u64) -> u64 {
    let mut out = n;
    for (p, _) in factorize(n) {
        out = out / p * (p + 1);
    }
    out
}

/// `base^exp mod m` with `m < 2^63`.
pub fn mod_pow(base: u64, exp: u64, m: u64) -> u64 {
    assert!(m > 0);
    let mut result = 1u128;
    let mut b = (base % m) as u128;
    let mut e = exp;
    let m = m as u128;
    while e > 0 {
        if e & 1 == 1 {
            result = result * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    result as u64
}

/// Exact power of `p` dividing `n` (`n` nonzero).
pub fn valuation(n: &BigUint, p: u64) -> u32 {
    assert!(!n.is_zero(), "valuation of zero");
    let p = BigUint::from(p);
    let mut n = n.clone();
    let mut v = 0u32;
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    v
}

pub fn valuation_u64(n: u64, p: u64) -> u32 {
    valuation(&BigUint::from(n), p)
}

/// `ℓ`-part of `n`: the exact power of `ℓ` dividing `n`.
pub fn ell_part(n: &BigUint, ell: u64) -> BigUint {
    BigUint::from(ell).pow(valuation(n, ell))
}

/// Largest odd divisor of `n`.
pub fn odd_part(n: &BigUint) -> BigUint {
    let mut n = n.clone();
    let two = BigUint::from(2u32);
    while !n.is_zero() && (&n % &two).is_zero() {
        n /= &two;
    }
    n
}

/// Numerator of `x` in lowest terms, `num(a/b) = a / gcd(a, b)`.
pub fn num(x: &BigRational) -> BigInt {
    // BigRational is kept reduced with positive denominator.
    x.numer().clone()
}

/// `num` applied to the rational `a / b` given as integers.
pub fn num_frac(a: BigInt, b: BigInt) -> BigInt {
    assert!(!b.is_zero());
    num(&BigRational::new(a, b))
}

/// The pair `(M_p, M_q)` attached to distinct primes `p`, `q`:
/// `M_p = num((p-1)(q^2-1)/3)` and `M_q = num((p^2-1)(q-1)/3)`.
pub fn m_pair(p: u64, q: u64) -> (BigUint, BigUint) {
    let three = BigInt::from(3);
    let pm1 = BigInt::from(p) - 1;
    let qm1 = BigInt::from(q) - 1;
    let p2m1 = BigInt::from(p) * BigInt::from(p) - 1;
    let q2m1 = BigInt::from(q) * BigInt::from(q) - 1;
    let mp = num_frac(&pm1 * &q2m1, three.clone());
    let mq = num_frac(&p2m1 * &qm1, three);
    (mp.magnitude().clone(), mq.magnitude().clone())
}

/// Sign-preserving integer square root check: `Some(s)` with `s^2 = n`,
/// `s >= 0`, when `n` is a perfect square.
pub fn perfect_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.magnitude().sqrt();
    if &s * &s == *n.magnitude() {
        Some(BigInt::from(s))
    } else {
        None
    }
}

/// One for empty input, gcd of all entries otherwise.
pub fn gcd_all<'a, I: IntoIterator<Item = &'a BigUint>>(items: I) -> BigUint {
    let mut g = BigUint::zero();
    for x in items {
        g = num_integer::Integer::gcd(&g, x);
        if g.is_one() {
            break;
        }
    }
    g
}
