//! Eisenstein ideals of the Hecke algebra at squarefree semiprime level and
//! the structural statements about their quotients.
//!
//! Everything is computed in lattice coordinates: the algebra is `Z^g` via
//! its HNF basis, an ideal is the row lattice spanned by its generators
//! multiplied through by `T_1..T_B`, and a quotient ring is the cokernel of
//! that lattice. Localization at `ℓ` is realized as the `ℓ`-primary part of
//! the finite quotient; all quotients here are finite, which the code
//! asserts rather than assumes silently.

use crate::arith;
use crate::hecke::HeckeAlgebra;
use crate::linalg::{
    cokernel_of_row_lattice, order_in_cokernel, AbGroupStructure, Echelon, IntMatrix,
};
use crate::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use std::fmt;

/// The four Eisenstein ideals: with `(p, q)` the oriented pair of primes,
/// `I0 = (T_r - r - 1)`, `I1 = (U_p - 1, U_q - 1, I0)`,
/// `I2 = (U_p - 1, U_q - q, I0)`, `I3 = (U_p - p, U_q - 1, I0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum IdealKind {
    I0,
    I1,
    I2,
    I3,
}

impl fmt::Display for IdealKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            IdealKind::I0 => "I0",
            IdealKind::I1 => "I1",
            IdealKind::I2 => "I2",
            IdealKind::I3 => "I3",
        };
        write!(f, "{s}")
    }
}

/// An Eisenstein ideal realized as a sublattice of the Hecke algebra.
pub struct EisensteinIdeal {
    pub kind: IdealKind,
    /// Oriented prime pair; `p` is the one whose `U_p - 1` enters `I2`.
    pub p: u64,
    pub q: u64,
    /// Generators in algebra-lattice coordinates.
    pub generators: Vec<Vec<BigInt>>,
    /// HNF basis of the ideal as an abelian subgroup of the algebra lattice
    /// (rows, in algebra coordinates).
    pub lattice: IntMatrix,
}

/// Generators of `I0` in coordinates: `T_r - (r + 1)` for primes
/// `r` not dividing the level, `r <= r_max <= B`.
fn i0_generators(alg: &HeckeAlgebra, r_max: u64) -> Vec<Vec<BigInt>> {
    debug_assert!(r_max <= alg.sturm_bound);
    arith::primes_up_to(r_max)
        .into_iter()
        .filter(|&r| alg.level % r != 0)
        .map(|r| alg.coords_shifted(r, r as i64 + 1))
        .collect()
}

/// Extended `I0` generator list allowing primes beyond the Sturm bound;
/// used by the stability check. Needs the space to compute the extra
/// operator matrices.
pub fn i0_generators_up_to(
    space: &crate::modsym::ManinSpace,
    alg: &HeckeAlgebra,
    r_max: u64,
    cache: &dyn crate::hecke::HeckeCache,
) -> Result<Vec<Vec<BigInt>>> {
    let mut gens = Vec::new();
    for r in arith::primes_up_to(r_max) {
        if alg.level % r == 0 {
            continue;
        }
        if r <= alg.sturm_bound {
            gens.push(alg.coords_shifted(r, r as i64 + 1));
        } else {
            let m = alg.matrix_for(space, r, cache);
            let mut c = alg.coords_of_matrix(&m)?;
            for (a, b) in c.iter_mut().zip(alg.one_coords()) {
                *a -= BigInt::from(r as i64 + 1) * b;
            }
            gens.push(c);
        }
    }
    Ok(gens)
}

/// Closes a generator list into an ideal lattice: multiply every generator
/// by `T_1..T_B`, HNF-reduce, then verify the result is stable under all
/// the multiplication maps.
fn close_into_ideal(alg: &HeckeAlgebra, generators: &[Vec<BigInt>]) -> Result<IntMatrix> {
    let g = alg.rank();
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(generators.len() * alg.sturm_bound as usize);
    for gen in generators {
        for n in 1..=alg.sturm_bound {
            rows.push(alg.mult_map(n).apply_row(gen));
        }
    }
    if rows.is_empty() {
        rows.push(vec![BigInt::zero(); g]);
    }
    let lattice = {
        let m = IntMatrix::from_rows(rows).hnf();
        m.take_rows(m.nonzero_row_count())
    };
    // Closure: each basis row times each T_n stays inside.
    let ech = Echelon::new(lattice.clone());
    for r in 0..lattice.rows() {
        for n in 1..=alg.sturm_bound {
            let image = alg.mult_map(n).apply_row(lattice.row(r));
            if ech.solve(&image).is_none() {
                return Err(Error::ClosureViolation {
                    level: alg.level,
                    detail: format!("ideal lattice not stable under T_{n}"),
                });
            }
        }
    }
    Ok(lattice)
}

/// Builds one of the four Eisenstein ideals for the oriented pair `(p, q)`.
/// `I0` uses the generator primes up to the Sturm bound; this cutoff is an
/// assumption re-validated by `i0_stability_check`.
pub fn build_ideal(alg: &HeckeAlgebra, kind: IdealKind, p: u64, q: u64) -> Result<EisensteinIdeal> {
    let (lo, hi) = alg.primes;
    if !(p == lo && q == hi || p == hi && q == lo) {
        return Err(Error::HypothesisViolated(format!(
            "({p}, {q}) does not factor the level {}",
            alg.level
        )));
    }
    let mut generators = i0_generators(alg, alg.sturm_bound);
    match kind {
        IdealKind::I0 => {}
        IdealKind::I1 => {
            generators.push(alg.u_coords_shifted(p, 1));
            generators.push(alg.u_coords_shifted(q, 1));
        }
        IdealKind::I2 => {
            generators.push(alg.u_coords_shifted(p, 1));
            generators.push(alg.u_coords_shifted(q, q as i64));
        }
        IdealKind::I3 => {
            generators.push(alg.u_coords_shifted(p, p as i64));
            generators.push(alg.u_coords_shifted(q, 1));
        }
    }
    let lattice = close_into_ideal(alg, &generators)?;
    Ok(EisensteinIdeal {
        kind,
        p,
        q,
        generators,
        lattice,
    })
}

/// Ideal from an explicit generator list (used for `(U_p - 1, I0)` and for
/// the unit ideal in tests). Labeled with the nearest `kind` for reporting.
pub fn ideal_from_generators(
    alg: &HeckeAlgebra,
    kind: IdealKind,
    p: u64,
    q: u64,
    generators: Vec<Vec<BigInt>>,
) -> Result<EisensteinIdeal> {
    let lattice = close_into_ideal(alg, &generators)?;
    Ok(EisensteinIdeal {
        kind,
        p,
        q,
        generators,
        lattice,
    })
}

impl EisensteinIdeal {
    /// Lattice containment test against another ideal of the same algebra.
    pub fn contains(&self, other: &EisensteinIdeal) -> bool {
        let ech = Echelon::new(self.lattice.clone());
        (0..other.lattice.rows()).all(|r| ech.contains(other.lattice.row(r)))
    }

    pub fn contains_vector(&self, v: &[BigInt]) -> bool {
        Echelon::new(self.lattice.clone()).contains(v)
    }

    /// HNF lattice of the maximal-ideal candidate `(ℓ, ideal)`.
    pub fn with_ell(&self, ell: u64, alg: &HeckeAlgebra) -> IntMatrix {
        let g = alg.rank();
        let scaled = IntMatrix::identity(g).scale(&BigInt::from(ell));
        let stacked = self.lattice.vstack(&scaled);
        let h = stacked.hnf();
        h.take_rows(h.nonzero_row_count())
    }
}

/// Quotient data of the algebra by an ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientReport {
    pub kind: IdealKind,
    pub structure: AbGroupStructure,
    /// Order of the quotient; `None` marks the distinguished infinite case.
    pub index: Option<BigUint>,
    pub is_cyclic: bool,
}

impl QuotientReport {
    pub fn ell_part(&self, ell: u64) -> AbGroupStructure {
        self.structure.ell_part(ell)
    }

    /// `ℓ`-part of the index (finite quotients only).
    pub fn ell_index(&self, ell: u64) -> Option<BigUint> {
        self.index.as_ref().map(|n| {
            if n.is_one() {
                BigUint::one()
            } else {
                arith::ell_part(n, ell)
            }
        })
    }
}

/// Structure of `T / ideal`.
pub fn quotient(alg: &HeckeAlgebra, ideal: &EisensteinIdeal) -> QuotientReport {
    let g = alg.rank();
    let structure = if ideal.lattice.rows() == 0 {
        AbGroupStructure {
            divisors: Vec::new(),
            free_rank: g,
        }
    } else {
        cokernel_of_row_lattice(&ideal.lattice)
    };
    let index = structure.order();
    let is_cyclic = structure.is_cyclic();
    QuotientReport {
        kind: ideal.kind,
        structure,
        index,
        is_cyclic,
    }
}

/// Which of the candidate maximal ideals `m_i = (ℓ, I_i)` are proper (hence
/// maximal): exactly when `ℓ` divides the index of `I_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MaximalIdeals {
    pub m1: bool,
    pub m2: bool,
    pub m3: bool,
}

pub fn maximal_ideals(alg: &HeckeAlgebra, p: u64, q: u64, ell: u64) -> Result<MaximalIdeals> {
    let flag = |kind| -> Result<bool> {
        let ideal = build_ideal(alg, kind, p, q)?;
        let rep = quotient(alg, &ideal);
        Ok(match rep.index {
            None => true,
            Some(n) => (&n % ell).is_zero(),
        })
    };
    Ok(MaximalIdeals {
        m1: flag(IdealKind::I1)?,
        m2: flag(IdealKind::I2)?,
        m3: flag(IdealKind::I3)?,
    })
}

/// Outcome of comparing the `ℓ`-primary quotient of `I0` against the
/// product of the `I2` and `I3` quotients.
#[derive(Clone, Debug)]
pub struct DecompositionReport {
    pub p: u64,
    pub q: u64,
    pub ell: u64,
    pub lhs: AbGroupStructure,
    pub i2_part: AbGroupStructure,
    pub i3_part: AbGroupStructure,
    pub equal: bool,
    pub i2_cyclic: bool,
    pub i3_cyclic: bool,
}

fn check_standing_hypothesis(p: u64, q: u64, ell: u64) -> Result<()> {
    if !arith::is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    let modulus = 2 * p * q * (q - 1);
    if modulus % ell == 0 {
        return Err(Error::HypothesisViolated(format!(
            "ℓ = {ell} divides 2pq(q-1) = {modulus}"
        )));
    }
    Ok(())
}

/// Everything about one oriented pair `(p, q)` that does not depend on `ℓ`:
/// the four quotient reports and the orders of the two lemma elements.
/// Scanning many `ℓ` against one orientation then costs only valuations.
pub struct OrientationQuotients {
    pub p: u64,
    pub q: u64,
    pub q0: QuotientReport,
    pub q1: QuotientReport,
    pub q2: QuotientReport,
    pub q3: QuotientReport,
    /// Order of `(U_p - 1)(U_p + 1)` in `T/I0`.
    pub up_element_order: BigUint,
    /// Order of `(U_q - 1)(U_q - q)` in `T/(U_p - 1, I0)`.
    pub uq_element_order: BigUint,
}

pub fn orientation_quotients(alg: &HeckeAlgebra, p: u64, q: u64) -> Result<OrientationQuotients> {
    let i0 = build_ideal(alg, IdealKind::I0, p, q)?;
    let q0 = quotient(alg, &i0);
    if q0.index.is_none() {
        return Err(Error::HypothesisViolated(format!(
            "T/I0 is infinite at level {}",
            alg.level
        )));
    }
    let q1 = quotient(alg, &build_ideal(alg, IdealKind::I1, p, q)?);
    let q2 = quotient(alg, &build_ideal(alg, IdealKind::I2, p, q)?);
    let q3 = quotient(alg, &build_ideal(alg, IdealKind::I3, p, q)?);

    let up_element_order = if alg.rank() == 0 {
        BigUint::one()
    } else {
        // (U_p - 1)(U_p + 1) = U_p² - 1.
        let u = alg.u_matrix(p);
        let u2 = u.mul(u);
        let mut elt = alg.coords_of_matrix(&u2)?;
        for (a, b) in elt.iter_mut().zip(alg.one_coords()) {
            *a -= b;
        }
        order_in_cokernel(&i0.lattice, &elt).ok_or_else(infinite_order_error)?
    };

    let uq_element_order = if alg.rank() == 0 {
        BigUint::one()
    } else {
        let mut gens = i0_generators(alg, alg.sturm_bound);
        gens.push(alg.u_coords_shifted(p, 1));
        let ideal = ideal_from_generators(alg, IdealKind::I0, p, q, gens)?;
        // (U_q - 1)(U_q - q) = U_q² - (q+1) U_q + q.
        let u = alg.u_matrix(q);
        let u2 = u.mul(u);
        let mut elt = alg.coords_of_matrix(&u2)?;
        let uq = alg.u_coords(q);
        let one = alg.one_coords();
        for i in 0..elt.len() {
            elt[i] -= BigInt::from(q as i64 + 1) * &uq[i] - BigInt::from(q as i64) * &one[i];
        }
        order_in_cokernel(&ideal.lattice, &elt).ok_or_else(infinite_order_error)?
    };

    Ok(OrientationQuotients {
        p,
        q,
        q0,
        q1,
        q2,
        q3,
        up_element_order,
        uq_element_order,
    })
}

fn infinite_order_error() -> Error {
    Error::HypothesisViolated("element has infinite order in the quotient".into())
}

impl OrientationQuotients {
    pub fn decomposition_at(&self, ell: u64) -> Result<DecompositionReport> {
        check_standing_hypothesis(self.p, self.q, ell)?;
        let lhs = self.q0.ell_part(ell);
        let i2_part = self.q2.ell_part(ell);
        let i3_part = self.q3.ell_part(ell);
        let rhs = i2_part.direct_sum(&i3_part);
        let equal = lhs == rhs;
        Ok(DecompositionReport {
            p: self.p,
            q: self.q,
            ell,
            equal,
            i2_cyclic: i2_part.is_cyclic(),
            i3_cyclic: i3_part.is_cyclic(),
            lhs,
            i2_part,
            i3_part,
        })
    }

    pub fn lemma_up_at(&self, ell: u64) -> Result<bool> {
        check_standing_hypothesis(self.p, self.q, ell)?;
        Ok(!(&self.up_element_order % ell).is_zero())
    }

    pub fn lemma_uq_at(&self, ell: u64) -> Result<bool> {
        check_standing_hypothesis(self.p, self.q, ell)?;
        Ok(!(&self.uq_element_order % ell).is_zero())
    }
}

/// Compares the `ℓ`-parts of `T/I0` and `T/I2 × T/I3` under the standing
/// hypothesis `ℓ ∤ 2pq(q-1)`.
pub fn verify_decomposition(
    alg: &HeckeAlgebra,
    p: u64,
    q: u64,
    ell: u64,
) -> Result<DecompositionReport> {
    check_standing_hypothesis(p, q, ell)?;
    orientation_quotients(alg, p, q)?.decomposition_at(ell)
}

/// Order of the image of `(U_p - 1)(U_p + 1) = U_p² - 1` in `T/I0` is prime
/// to `ℓ`, the finite-level form of the membership in `I0 · T_ℓ`.
pub fn check_lemma_up(alg: &HeckeAlgebra, p: u64, q: u64, ell: u64) -> Result<bool> {
    check_standing_hypothesis(p, q, ell)?;
    orientation_quotients(alg, p, q)?.lemma_up_at(ell)
}

/// Order of the image of `(U_q - 1)(U_q - q)` in `T/(U_p - 1, I0)` is prime
/// to `ℓ`.
pub fn check_lemma_uq(alg: &HeckeAlgebra, p: u64, q: u64, ell: u64) -> Result<bool> {
    check_standing_hypothesis(p, q, ell)?;
    orientation_quotients(alg, p, q)?.lemma_uq_at(ell)
}

/// Exploratory comparison of `T/I0` against the fiber product of `T/I1`,
/// `T/I2`, `T/I3` glued along the congruences modulo `p - 1` and `q - 1`.
/// Runs for any odd `ℓ` not dividing `pq`; reports, never asserts.
#[derive(Clone, Debug)]
pub struct ProbeReport {
    pub p: u64,
    pub q: u64,
    pub ell: u64,
    pub lhs: AbGroupStructure,
    pub fiber: AbGroupStructure,
    pub equal: bool,
    /// Whether the standing hypothesis of the proven decomposition also
    /// holds, in which case `equal` is expected.
    pub within_standing_hypothesis: bool,
}

pub fn probe_expected_structure(
    alg: &HeckeAlgebra,
    p: u64,
    q: u64,
    ell: u64,
) -> Result<ProbeReport> {
    if !arith::is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    if ell == 2 || ell == p || ell == q {
        return Err(Error::HypothesisViolated(format!(
            "probe requires ℓ odd and prime to pq, got ℓ = {ell}"
        )));
    }
    let lhs = {
        let i0 = build_ideal(alg, IdealKind::I0, p, q)?;
        let rep = quotient(alg, &i0);
        if rep.index.is_none() {
            return Err(Error::HypothesisViolated(format!(
                "T/I0 is infinite at level {}",
                alg.level
            )));
        }
        rep.ell_part(ell)
    };

    // Each T/I_i is cyclic: every named generator of the algebra maps to an
    // integer, so the quotient ring is generated by 1. The congruences glue
    // the canonical residues, so at ℓ the fiber only sees the exponents.
    let mut exps = [0u32; 3];
    for (slot, kind) in [IdealKind::I1, IdealKind::I2, IdealKind::I3]
        .into_iter()
        .enumerate()
    {
        let rep = quotient(alg, &build_ideal(alg, kind, p, q)?);
        let idx = rep.index.clone().ok_or_else(|| {
            Error::HypothesisViolated(format!("T/{kind} is infinite at level {}", alg.level))
        })?;
        debug_assert!(rep.structure.is_cyclic(), "T/{kind} must be cyclic");
        exps[slot] = if idx.is_one() {
            0
        } else {
            arith::valuation(&idx, ell)
        };
    }
    let [v1, v2, v3] = exps;
    let g_p = v1.min(v2).min(arith::valuation_u64(p - 1, ell));
    let g_q = v1.min(v3).min(arith::valuation_u64(q - 1, ell));

    // Triples (x, y, z) in Z/ℓ^v1 x Z/ℓ^v2 x Z/ℓ^v3 with x ≡ y (mod ℓ^g_p)
    // and x ≡ z (mod ℓ^g_q): the congruence lattice has basis (1, 1, 1),
    // (0, ℓ^g_p, 0), (0, 0, ℓ^g_q), and the component moduli sit inside it
    // with the coordinates below.
    let ell_big = BigInt::from(ell);
    let pw = |e: u32| ell_big.clone().pow(e);
    let relations = IntMatrix::from_rows(vec![
        vec![pw(v1), -pw(v1 - g_p), -pw(v1 - g_q)],
        vec![BigInt::zero(), pw(v2 - g_p), BigInt::zero()],
        vec![BigInt::zero(), BigInt::zero(), pw(v3 - g_q)],
    ]);
    let fiber = cokernel_of_row_lattice(&relations);
    let within = 2 * p * q * (q - 1) % ell != 0;
    Ok(ProbeReport {
        p,
        q,
        ell,
        equal: lhs == fiber,
        lhs,
        fiber,
        within_standing_hypothesis: within,
    })
}

/// Rebuilds `I0` with generator primes up to `2B` and checks the quotient
/// structure is unchanged; this validates the recorded cutoff assumption.
pub fn i0_stability_check(
    space: &crate::modsym::ManinSpace,
    alg: &HeckeAlgebra,
    cache: &dyn crate::hecke::HeckeCache,
) -> Result<bool> {
    let (p, q) = alg.primes;
    let base = build_ideal(alg, IdealKind::I0, p, q)?;
    let gens = i0_generators_up_to(space, alg, 2 * alg.sturm_bound, cache)?;
    let extended = ideal_from_generators(alg, IdealKind::I0, p, q, gens)?;
    Ok(quotient(alg, &base).structure == quotient(alg, &extended).structure)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::{HeckeAlgebra, NoCache};
    use crate::modsym::ManinSpace;

    fn algebra(n: u64) -> (ManinSpace, HeckeAlgebra) {
        let space = ManinSpace::build(n).unwrap();
        let alg = HeckeAlgebra::build(&space, &NoCache).unwrap();
        (space, alg)
    }

    #[test]
    fn i0_generators_present_in_ideal() {
        let (_s, alg) = algebra(15);
        let i0 = build_ideal(&alg, IdealKind::I0, 3, 5).unwrap();
        for r in arith::primes_up_to(alg.sturm_bound) {
            if 15 % r == 0 {
                continue;
            }
            let gen = alg.coords_shifted(r, r as i64 + 1);
            assert!(i0.contains_vector(&gen), "T_{r} - {} missing", r + 1);
        }
    }

    #[test]
    fn i2_contains_its_unit_generators() {
        let (_s, alg) = algebra(15);
        let i2 = build_ideal(&alg, IdealKind::I2, 3, 5).unwrap();
        assert!(i2.contains_vector(&alg.u_coords_shifted(3, 1)));
        assert!(i2.contains_vector(&alg.u_coords_shifted(5, 5)));
    }

    #[test]
    fn i0_contained_in_all_others() {
        let (_s, alg) = algebra(15);
        let i0 = build_ideal(&alg, IdealKind::I0, 3, 5).unwrap();
        for kind in [IdealKind::I1, IdealKind::I2, IdealKind::I3] {
            let ideal = build_ideal(&alg, kind, 3, 5).unwrap();
            assert!(ideal.contains(&i0), "I0 not inside {kind}");
        }
    }

    #[test]
    fn unit_ideal_quotient_is_trivial() {
        let (_s, alg) = algebra(15);
        let one = alg.one_coords().to_vec();
        let unit = ideal_from_generators(&alg, IdealKind::I0, 3, 5, vec![one]).unwrap();
        let rep = quotient(&alg, &unit);
        assert_eq!(rep.index, Some(BigUint::one()));
        assert!(rep.structure.is_trivial());
    }

    #[test]
    fn index_of_i2_at_15_has_trivial_odd_part_above_5() {
        // M_p(3,5) = 16, so for ℓ not dividing 2·15·4 the ℓ-part must be 1.
        let (_s, alg) = algebra(15);
        let i2 = build_ideal(&alg, IdealKind::I2, 3, 5).unwrap();
        let rep = quotient(&alg, &i2);
        let idx = rep.index.clone().expect("finite");
        for ell in [7u64, 11, 13] {
            assert_eq!(rep.ell_index(ell), Some(BigUint::one()), "ℓ = {ell}");
        }
        // And the index itself is a power of 2 here.
        assert_eq!(arith::odd_part(&idx), BigUint::one());
    }

    #[test]
    fn i1_index_odd_part_matches_formula_at_15() {
        let (_s, alg) = algebra(15);
        let i1 = build_ideal(&alg, IdealKind::I1, 3, 5).unwrap();
        let rep = quotient(&alg, &i1);
        let idx = rep.index.expect("finite");
        let expected = arith::num_frac(BigInt::from((3 - 1) * (5 - 1)), BigInt::from(3));
        assert_eq!(
            arith::odd_part(&idx),
            arith::odd_part(expected.magnitude())
        );
    }

    #[test]
    fn no_maximal_ideals_at_15_ell_7() {
        let (_s, alg) = algebra(15);
        let flags = maximal_ideals(&alg, 3, 5, 7).unwrap();
        assert!(!flags.m1 && !flags.m2 && !flags.m3);
    }

    #[test]
    fn decomposition_trivially_equal_at_15_ell_7() {
        let (_s, alg) = algebra(15);
        let rep = verify_decomposition(&alg, 3, 5, 7).unwrap();
        assert!(rep.equal);
        assert!(rep.lhs.is_trivial());
    }

    #[test]
    fn decomposition_rejects_bad_ell() {
        // (5, 7): ℓ = 3 divides q - 1 = 6.
        let (_s, alg) = algebra(35);
        assert!(matches!(
            verify_decomposition(&alg, 5, 7, 3),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn lemma_checks_hold_at_15() {
        let (_s, alg) = algebra(15);
        for ell in [7u64, 11] {
            assert!(check_lemma_up(&alg, 3, 5, ell).unwrap());
            assert!(check_lemma_uq(&alg, 3, 5, ell).unwrap());
        }
    }

    #[test]
    fn nontrivial_five_part_at_22() {
        // (p, q) = (11, 2): M_p = num(10·3/3) = 10, so the 5-part of the
        // index of I2 must be exactly 5; similarly M_q = num(120/3) = 40.
        let (_s, alg) = algebra(22);
        let i2 = build_ideal(&alg, IdealKind::I2, 11, 2).unwrap();
        let rep2 = quotient(&alg, &i2);
        assert_eq!(rep2.ell_index(5), Some(BigUint::from(5u32)));
        let i3 = build_ideal(&alg, IdealKind::I3, 11, 2).unwrap();
        let rep3 = quotient(&alg, &i3);
        assert_eq!(rep3.ell_index(5), Some(BigUint::from(5u32)));
        // Theorem: T_5/I0 decomposes as the product of the two.
        let rep = verify_decomposition(&alg, 11, 2, 5).unwrap();
        assert!(rep.equal);
        assert_eq!(
            rep.lhs,
            AbGroupStructure::from_orders(&[BigUint::from(5u32), BigUint::from(5u32)])
        );
    }

    #[test]
    fn probe_consistent_under_standing_hypothesis() {
        let (_s, alg) = algebra(22);
        let probe = probe_expected_structure(&alg, 11, 2, 5).unwrap();
        assert!(probe.within_standing_hypothesis);
        let dec = verify_decomposition(&alg, 11, 2, 5).unwrap();
        assert_eq!(probe.equal, dec.equal);
        assert_eq!(probe.lhs, dec.lhs);
    }

    #[test]
    fn i0_stability_small_levels() {
        for n in [15u64, 22, 33] {
            let (space, alg) = algebra(n);
            assert!(i0_stability_check(&space, &alg, &NoCache).unwrap(), "N = {n}");
        }
    }

    #[test]
    fn m1_equals_m3_when_p_is_1_mod_ell() {
        // (p, q) = (11, 7), ℓ = 5: odd part of index(I1) is 5, p ≡ 1 mod 5.
        let (_s, alg) = algebra(77);
        let i1 = build_ideal(&alg, IdealKind::I1, 11, 7).unwrap();
        let rep1 = quotient(&alg, &i1);
        let idx = rep1.index.clone().expect("finite");
        assert!((&idx % 5u32).is_zero(), "expected m1 maximal at ℓ = 5");
        let flags = maximal_ideals(&alg, 11, 7, 5).unwrap();
        assert!(flags.m1);
        let i3 = build_ideal(&alg, IdealKind::I3, 11, 7).unwrap();
        let m1 = i1.with_ell(5, &alg);
        let m3 = i3.with_ell(5, &alg);
        assert_eq!(m1, m3);
    }
}
