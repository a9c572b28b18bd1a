use std::fmt;

pub type Result<T> = std::result::Result<T, Error>;

/// Error type shared by the whole pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Operation requires a square matrix.
    NonSquare { rows: usize, cols: usize },
    /// Matrix dimensions incompatible with the requested operation.
    DimensionMismatch(String),
    /// A vector expected to lie in a lattice does not.
    NotInLattice(String),
    /// Level rejected: not a product of two distinct primes.
    NotSemiprime(u64),
    /// Level rejected: not squarefree.
    NotSquarefree(u64),
    /// Argument expected to be prime.
    NotPrime(u64),
    /// The span assumption behind the Hecke lattice failed: an ideal is not
    /// closed under multiplication by the listed operators.
    ClosureViolation { level: u64, detail: String },
    /// A determinant expected to be a perfect square is not; this signals a
    /// defect in the Hecke matrices, not in the input.
    NonPerfectSquare { level: u64, prime: u64 },
    /// A standing hypothesis of the statement under test is violated.
    HypothesisViolated(String),
    /// Empty list of auxiliary primes.
    EmptyPrimeList,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonSquare { rows, cols } => {
                write!(f, "matrix is not square: {rows}x{cols}")
            }
            Error::DimensionMismatch(s) => write!(f, "dimension mismatch: {s}"),
            Error::NotInLattice(s) => write!(f, "vector not in lattice: {s}"),
            Error::NotSemiprime(n) => {
                write!(f, "{n} is not a product of two distinct primes")
            }
            Error::NotSquarefree(n) => write!(f, "{n} is not squarefree"),
            Error::NotPrime(n) => write!(f, "{n} is not prime"),
            Error::ClosureViolation { level, detail } => {
                write!(f, "ideal closure violation at level {level}: {detail}")
            }
            Error::NonPerfectSquare { level, prime } => write!(
                f,
                "point count at level {level}, prime {prime}: determinant is not a perfect square"
            ),
            Error::HypothesisViolated(s) => write!(f, "hypothesis violated: {s}"),
            Error::EmptyPrimeList => write!(f, "empty list of auxiliary primes"),
        }
    }
}

impl std::error::Error for Error {}
