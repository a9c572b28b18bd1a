//! Exact verification toolkit for the arithmetic of Jacobians `J_0(pq)` of
//! modular curves of squarefree semiprime level.
//!
//! The pipeline is built from the bottom up:
//!
//! * [`linalg`]: exact integer linear algebra (Hermite/Smith normal forms,
//!   kernels, characteristic polynomials, lattice indices),
//! * [`modsym`]: weight-2 modular symbols for `Γ0(N)` presented on the
//!   projective line over `Z/NZ`, with boundary map and cuspidal subspace,
//! * [`hecke`]: Hecke operator matrices on the cuspidal subspace and the
//!   integral Hecke algebra they span,
//! * [`eisenstein`]: Eisenstein ideals, their quotient structures and
//!   indices, maximal ideal detection, and structural comparisons,
//! * [`cuspidal`]: the cuspidal divisor class group computed through eta
//!   quotient valuations,
//! * [`torsion`]: point counts over finite fields, rational torsion upper
//!   bounds, and per-`(p, q, ℓ)` verdicts.
//!
//! Everything is computed over arbitrary-precision integers; there is no
//! floating point anywhere in the crate.

pub mod arith;
pub mod cuspidal;
pub mod eisenstein;
mod error;
pub mod hecke;
pub mod linalg;
pub mod modsym;
pub mod torsion;

pub use error::{Error, Result};

use hecke::{HeckeAlgebra, HeckeCache, NoCache};
use modsym::ManinSpace;

/// All per-level data shared by the verification passes: the modular symbol
/// presentation and the Hecke algebra on its cuspidal subspace.
pub struct Level {
    pub space: ManinSpace,
    pub algebra: HeckeAlgebra,
}

impl Level {
    /// Build the full level pipeline for squarefree semiprime `n`.
    pub fn compute(n: u64, cache: &dyn HeckeCache) -> Result<Level> {
        let space = ManinSpace::build(n)?;
        let algebra = HeckeAlgebra::build(&space, cache)?;
        Ok(Level { space, algebra })
    }

    /// Convenience entry point without an operator cache.
    pub fn compute_uncached(n: u64) -> Result<Level> {
        Self::compute(n, &NoCache)
    }
}
