//! The cuspidal divisor class group of `X_0(N)` for squarefree `N`,
//! computed through eta-quotient valuations.
//!
//! A divisor supported on the cusps is principal exactly when it is the
//! divisor of a modular unit; for squarefree levels the units are generated
//! by eta quotients, so the class group is the quotient of the degree-zero
//! cusp lattice by the lattice of divisors of admissible eta quotients.
//! That classical input is cross-validated downstream against point-count
//! torsion bounds.

use crate::arith;
use crate::linalg::{
    cokernel_of_row_lattice, kernel_basis, order_in_cokernel, AbGroupStructure, IntMatrix,
};
use crate::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

pub use crate::arith::{num, num_frac};

/// The quantities `M_p`, `M_q` and the exact `ℓ`-adic exponents `α`, `β`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MAlphaBeta {
    pub m_p: BigUint,
    pub m_q: BigUint,
    pub alpha: u32,
    pub beta: u32,
}

/// `M_p = num((p-1)(q²-1)/3)`, `M_q = num((p²-1)(q-1)/3)`, `α = v_ℓ(M_p)`,
/// `β = v_ℓ(M_q)`.
pub fn m_alpha_beta(p: u64, q: u64, ell: u64) -> MAlphaBeta {
    let (m_p, m_q) = arith::m_pair(p, q);
    let alpha = arith::valuation(&m_p, ell);
    let beta = arith::valuation(&m_q, ell);
    MAlphaBeta {
        m_p,
        m_q,
        alpha,
        beta,
    }
}

/// Eta-quotient valuation data at a squarefree level.
///
/// Rows of `valuation_matrix` are indexed by the divisors `d | N` (the
/// component `η(dτ)`), columns by the cusp classes `1/c`; the entry is the
/// order of vanishing scaled by `24N` to clear denominators. `admissible`
/// holds a basis of the exponent vectors satisfying the modular-function
/// constraints; `principal` the integer divisors of the corresponding eta
/// quotients, in cusp-class coordinates.
pub struct EtaLattice {
    pub level: u64,
    pub divisors: Vec<u64>,
    pub valuation_matrix: IntMatrix,
    pub admissible: IntMatrix,
    pub principal: IntMatrix,
    /// `principal` with the last (dependent) coordinate dropped, i.e. the
    /// representation inside the degree-zero lattice.
    principal_coords: IntMatrix,
}

/// Builds the valuation and principal-divisor lattices for squarefree `N`.
pub fn eta_lattice(level: u64) -> Result<EtaLattice> {
    if !arith::is_squarefree(level) {
        return Err(Error::NotSquarefree(level));
    }
    let divisors = arith::divisors(level);
    let k = divisors.len();
    let n = level;

    // Scaled vanishing order of η(dτ) at the cusp 1/c:
    // 24N * (N gcd(c, d)² / (24 c d gcd(c, N/c))).
    let mut val = IntMatrix::zero(k, k);
    for (i, &d) in divisors.iter().enumerate() {
        for (j, &c) in divisors.iter().enumerate() {
            let g = arith::gcd_u64(c, d);
            let width = arith::gcd_u64(c, n / c);
            let numer = (n as u128) * (n as u128) * (g as u128) * (g as u128);
            let denom = (c as u128) * (d as u128) * (width as u128);
            assert_eq!(numer % denom, 0, "scaled valuation must be integral");
            val.set(i, j, BigInt::from(numer / denom));
        }
    }

    // Admissibility constraints on an exponent vector r (one slot per d):
    //   Σ r_d d ≡ 0 (24), Σ r_d (N/d) ≡ 0 (24),
    //   Σ r_d v_p(d) ≡ 0 (2) for each prime p | N,
    //   Σ r_d = 0.
    let primes: Vec<u64> = arith::factorize(n).into_iter().map(|(p, _)| p).collect();
    let n_constraints = 3 + primes.len();
    let slack_count = 2 + primes.len();
    let mut m = IntMatrix::zero(k + slack_count, n_constraints);
    for (i, &d) in divisors.iter().enumerate() {
        m.set(i, 0, BigInt::from(d));
        m.set(i, 1, BigInt::from(n / d));
        for (pi, &p) in primes.iter().enumerate() {
            if d % p == 0 {
                m.set(i, 2 + pi, BigInt::one());
            }
        }
        m.set(i, 2 + primes.len(), BigInt::one());
    }
    m.set(k, 0, BigInt::from(24));
    m.set(k + 1, 1, BigInt::from(24));
    for pi in 0..primes.len() {
        m.set(k + 2 + pi, 2 + pi, BigInt::from(2));
    }
    let kernel = kernel_basis(&m);
    let adm_rows: Vec<Vec<BigInt>> = (0..kernel.rows())
        .map(|r| kernel.row(r)[..k].to_vec())
        .collect();
    let admissible = {
        let h = IntMatrix::from_rows(adm_rows).hnf();
        h.take_rows(h.nonzero_row_count())
    };

    // Divisors of the admissible eta quotients, scaled back down to honest
    // integer divisors.
    let scale = BigInt::from(24 * n);
    let mut principal_rows = Vec::with_capacity(admissible.rows());
    for r in 0..admissible.rows() {
        let scaled = val.apply_row(admissible.row(r));
        let mut row = Vec::with_capacity(k);
        let mut degree = BigInt::zero();
        for x in &scaled {
            let (q, rem) = num_integer::Integer::div_rem(x, &scale);
            assert!(
                rem.is_zero(),
                "divisor of a modular function must be integral"
            );
            degree += &q;
            row.push(q);
        }
        assert!(degree.is_zero(), "divisor of a function has degree zero");
        principal_rows.push(row);
    }
    let principal = {
        let h = IntMatrix::from_rows(principal_rows).hnf();
        h.take_rows(h.nonzero_row_count())
    };
    // Degree-zero coordinates: drop the last cusp column.
    let coords_rows: Vec<Vec<BigInt>> = (0..principal.rows())
        .map(|r| principal.row(r)[..k - 1].to_vec())
        .collect();
    let principal_coords = if coords_rows.is_empty() {
        IntMatrix::zero(0, k - 1)
    } else {
        IntMatrix::from_rows(coords_rows)
    };

    Ok(EtaLattice {
        level,
        divisors,
        valuation_matrix: val,
        admissible,
        principal,
        principal_coords,
    })
}

impl EtaLattice {
    /// Index of the divisor `n | N` in cusp-class order.
    pub fn class_index(&self, d: u64) -> usize {
        self.divisors
            .iter()
            .position(|&x| x == d)
            .expect("divisor of the level")
    }

    /// The divisor `P_1 - P_d` as a coefficient vector over cusp classes.
    pub fn difference_divisor(&self, d: u64) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.divisors.len()];
        v[0] = BigInt::one();
        let i = self.class_index(d);
        v[i] -= BigInt::one();
        v
    }

    fn degree_zero_coords(&self, divisor: &[BigInt]) -> Result<Vec<BigInt>> {
        let k = self.divisors.len();
        if divisor.len() != k {
            return Err(Error::DimensionMismatch(format!(
                "divisor has {} coefficients, expected {k}",
                divisor.len()
            )));
        }
        let degree: BigInt = divisor.iter().sum();
        if !degree.is_zero() {
            return Err(Error::HypothesisViolated(
                "divisor must have degree zero".into(),
            ));
        }
        Ok(divisor[..k - 1].to_vec())
    }

    /// Least `n >= 1` with `n * divisor` principal.
    pub fn class_order(&self, divisor: &[BigInt]) -> Result<BigUint> {
        let coords = self.degree_zero_coords(divisor)?;
        order_in_cokernel(&self.principal_coords, &coords).ok_or_else(|| {
            Error::HypothesisViolated(
                "principal lattice does not have finite index in the degree-zero lattice".into(),
            )
        })
    }

    pub fn is_principal(&self, divisor: &[BigInt]) -> Result<bool> {
        Ok(self.class_order(divisor)? == BigUint::one())
    }

    /// Structure of the cuspidal class group: degree-zero cusp divisors
    /// modulo the principal lattice.
    pub fn group_structure(&self) -> Result<AbGroupStructure> {
        let s = cokernel_of_row_lattice(&self.principal_coords);
        if !s.is_finite() {
            return Err(Error::HypothesisViolated(
                "cuspidal class group came out infinite".into(),
            ));
        }
        Ok(s)
    }
}

/// Structure of the cuspidal divisor class group of `X_0(N)`.
pub fn cuspidal_group_structure(level: u64) -> Result<AbGroupStructure> {
    eta_lattice(level)?.group_structure()
}

/// Least multiple of the divisor that becomes principal.
pub fn class_order(level: u64, divisor: &[BigInt]) -> Result<BigUint> {
    eta_lattice(level)?.class_order(divisor)
}

/// The oriented divisor data of one semiprime level: `C_p = P_1 - P_p`,
/// `D_p = x C_p` with `M_p = ℓ^α x`, together with their orders.
pub struct DividedDivisorOrders {
    pub c_order: BigUint,
    pub d_order: BigUint,
    pub alpha: u32,
}

/// Orders of `C_p` and `D_p = x·C_p` at the prime `ℓ`, for the oriented
/// pair `(p, q)` dividing the level.
pub fn divisor_orders(
    eta: &EtaLattice,
    p: u64,
    q: u64,
    ell: u64,
) -> Result<DividedDivisorOrders> {
    let mab = m_alpha_beta(p, q, ell);
    let c_p = eta.difference_divisor(p);
    let c_order = eta.class_order(&c_p)?;
    // cofactor x with M_p = ℓ^α x.
    let x = &mab.m_p / BigUint::from(ell).pow(mab.alpha);
    let x_int = BigInt::from(x);
    let d_p: Vec<BigInt> = c_p.iter().map(|c| c * &x_int).collect();
    let d_order = eta.class_order(&d_p)?;
    Ok(DividedDivisorOrders {
        c_order,
        d_order,
        alpha: mab.alpha,
    })
}

/// Compatibility of the Hecke action with the cuspidal group: for a lift
/// `m` of the divisor `D` through the boundary map, the class of
/// `(op - c)·m` under the boundary must have order prime to `ell`
/// (or vanish outright when `exact` is requested).
pub struct AnnihilationCheck<'a> {
    space: &'a crate::modsym::ManinSpace,
    eta: &'a EtaLattice,
    boundary_solver: (IntMatrix, IntMatrix), // (echelon rows, transform rows)
}

impl<'a> AnnihilationCheck<'a> {
    pub fn new(space: &'a crate::modsym::ManinSpace, eta: &'a EtaLattice) -> Self {
        let (h, u) = space.boundary.hnf_with_transform();
        AnnihilationCheck {
            space,
            eta,
            boundary_solver: (h, u),
        }
    }

    /// A quotient-space vector whose boundary is the given degree-zero
    /// divisor; exists because the boundary map surjects onto degree zero.
    pub fn lift_divisor(&self, divisor: &[BigInt]) -> Vec<BigInt> {
        let (h, u) = &self.boundary_solver;
        let ech = crate::linalg::Echelon::new(h.clone());
        let x = ech
            .solve(divisor)
            .expect("degree-zero divisors lie in the boundary image");
        let t = self.space.quotient_rank();
        let mut v = vec![BigInt::zero(); t];
        for (j, coeff) in x.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            for (c, entry) in u.row(j).iter().enumerate() {
                v[c] += coeff * entry;
            }
        }
        v
    }

    /// Boundary divisor of `(op - shift)·lift`.
    pub fn twisted_boundary(
        &self,
        lift: &[BigInt],
        op: &IntMatrix,
        shift: i64,
    ) -> Vec<BigInt> {
        let moved = op.apply_row(lift);
        let shifted: Vec<BigInt> = moved
            .iter()
            .zip(lift.iter())
            .map(|(a, b)| a - BigInt::from(shift) * b)
            .collect();
        self.space.boundary.apply_row(&shifted)
    }

    /// Class order of the boundary of `(op - shift)·lift(divisor)` is prime
    /// to `ell` (with `ell = 0` demanding exact principality).
    pub fn annihilates(
        &self,
        divisor: &[BigInt],
        op: &IntMatrix,
        shift: i64,
        ell: u64,
    ) -> Result<bool> {
        let lift = self.lift_divisor(divisor);
        let delta = self.twisted_boundary(&lift, op, shift);
        let order = self.eta.class_order(&delta)?;
        if ell == 0 {
            Ok(order.is_one())
        } else {
            Ok(!(&order % ell).is_zero())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::quotient_prime_operator;
    use crate::modsym::ManinSpace;
    use num_traits::FromPrimitive;

    #[test]
    fn m_alpha_beta_examples() {
        let v = m_alpha_beta(3, 5, 2);
        assert_eq!(
            (v.m_p.clone(), v.m_q.clone(), v.alpha, v.beta),
            (BigUint::from(16u32), BigUint::from(32u32), 4, 5)
        );
        let v = m_alpha_beta(3, 5, 7);
        assert_eq!((v.alpha, v.beta), (0, 0));
        let v = m_alpha_beta(5, 7, 2);
        assert_eq!(v.m_p, BigUint::from(64u32));
        assert_eq!(v.m_q, BigUint::from(48u32));
    }

    #[test]
    fn num_reexports() {
        use num_rational::BigRational;
        assert_eq!(num(&BigRational::from_u64(5).unwrap()), BigInt::from(5));
        assert_eq!(num_frac(BigInt::from(6), BigInt::from(4)), BigInt::from(3));
    }

    #[test]
    fn eta_rows_have_equal_weighted_degree() {
        let eta = eta_lattice(15).unwrap();
        let sums: Vec<BigInt> = (0..eta.valuation_matrix.rows())
            .map(|r| eta.valuation_matrix.row(r).iter().sum())
            .collect();
        for s in &sums {
            assert_eq!(s, &sums[0]);
        }
    }

    #[test]
    fn eta_matrix_shape_and_principal_rank_at_15() {
        let eta = eta_lattice(15).unwrap();
        assert_eq!(eta.valuation_matrix.rows(), 4);
        assert_eq!(eta.valuation_matrix.cols(), 4);
        // The eta components are multiplicatively independent, so the raw
        // valuation matrix is nonsingular; the degree-zero constraint lives
        // in the principal lattice, which has corank one.
        assert!(!eta.valuation_matrix.det().unwrap().is_zero());
        let (_, rank) = crate::linalg::snf_diagonal(&eta.principal);
        assert_eq!(rank, 3);
    }

    #[test]
    fn level_11_classical_order_five() {
        let eta = eta_lattice(11).unwrap();
        let s = eta.group_structure().unwrap();
        assert_eq!(s.divisors, vec![BigUint::from(5u32)]);
        let c = eta.difference_divisor(11);
        assert_eq!(eta.class_order(&c).unwrap(), BigUint::from(5u32));
    }

    #[test]
    fn zero_divisor_is_principal() {
        let eta = eta_lattice(15).unwrap();
        let zero = vec![BigInt::zero(); 4];
        assert_eq!(eta.class_order(&zero).unwrap(), BigUint::one());
    }

    #[test]
    fn rejects_nonzero_degree() {
        let eta = eta_lattice(15).unwrap();
        let mut v = vec![BigInt::zero(); 4];
        v[0] = BigInt::one();
        assert!(eta.class_order(&v).is_err());
    }

    #[test]
    fn level_15_cuspidal_group() {
        // The odd parts of the orders of C_3 and C_5 must divide the group
        // order; recompute rather than assume.
        let eta = eta_lattice(15).unwrap();
        let s = eta.group_structure().unwrap();
        let order = s.order().unwrap();
        let c3 = eta.class_order(&eta.difference_divisor(3)).unwrap();
        let c5 = eta.class_order(&eta.difference_divisor(5)).unwrap();
        assert!((&order % &c3).is_zero());
        assert!((&order % &c5).is_zero());
        assert!(!order.is_one());
    }

    #[test]
    fn nonsquarefree_rejected() {
        assert!(matches!(eta_lattice(12), Err(Error::NotSquarefree(12))));
    }

    #[test]
    fn five_part_structure_at_22() {
        // α = β = 1 at ℓ = 5 for (11, 2); the 5-part of the class group is
        // Z/5 + Z/5.
        let s = cuspidal_group_structure(22).unwrap();
        let five = s.ell_part(5);
        assert_eq!(
            five,
            AbGroupStructure::from_orders(&[BigUint::from(5u32), BigUint::from(5u32)])
        );
    }

    #[test]
    fn eisenstein_annihilates_cuspidal_classes_exactly() {
        // (T_r - r - 1) kills every cuspidal class, integrally.
        for &n in &[11u64, 15, 22] {
            let space = ManinSpace::build(n).unwrap();
            let eta = eta_lattice(n).unwrap();
            let check = AnnihilationCheck::new(&space, &eta);
            for r in [2u64, 3, 7] {
                if n % r == 0 {
                    continue;
                }
                let op = quotient_prime_operator(&space, r);
                for d in arith::divisors(n).into_iter().skip(1) {
                    let divisor = eta.difference_divisor(d);
                    assert!(
                        check
                            .annihilates(&divisor, &op, r as i64 + 1, 0)
                            .unwrap(),
                        "N = {n}, r = {r}, divisor P_1 - P_{d}"
                    );
                }
            }
        }
    }

    #[test]
    fn u_p_minus_one_kills_dp_at_ell() {
        // I2 = (U_p - 1, U_q - q, I0) annihilates D_p in the ℓ-primary part.
        let (p, q) = (11u64, 2u64);
        let space = ManinSpace::build(p * q).unwrap();
        let eta = eta_lattice(p * q).unwrap();
        let check = AnnihilationCheck::new(&space, &eta);
        let ell = 5u64;
        let mab = m_alpha_beta(p, q, ell);
        let x = BigInt::from(&mab.m_p / BigUint::from(ell).pow(mab.alpha));
        let dp: Vec<BigInt> = eta
            .difference_divisor(p)
            .iter()
            .map(|c| c * &x)
            .collect();
        let u_p = quotient_prime_operator(&space, p);
        let u_q = quotient_prime_operator(&space, q);
        assert!(check.annihilates(&dp, &u_p, 1, ell).unwrap());
        assert!(check.annihilates(&dp, &u_q, q as i64, ell).unwrap());
    }
}
