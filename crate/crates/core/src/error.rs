use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("not a poset: {0}")]
    NotAPoset(String),
    #[error("not a lattice: elements {a} and {b} have no unique {which}")]
    NotALattice {
        a: usize,
        b: usize,
        which: &'static str,
    },
    #[error("redundant cover: ({0}, {1}) is not a covering pair")]
    RedundantCover(usize, usize),
    #[error("budget exceeded: {what} = {value} exceeds limit {limit}")]
    BudgetExceeded {
        what: &'static str,
        value: usize,
        limit: usize,
    },
    #[error("element {element} out of range for universe of size {n}")]
    OutOfRange { element: usize, n: usize },
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("({0}, {1}) is not a prime interval")]
    NotPrime(usize, usize),
    #[error("partition is not a congruence of the host")]
    NotACongruence,
    #[error("partition is not an atom of the congruence lattice")]
    NotAnAtom,
    #[error("congruence lattice is not distributive")]
    NotDistributive,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("eigensolver did not converge within {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },
}

impl Error {
    /// Short stable identifier, used by the CLI on stderr.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotAPoset(_) => "not-a-poset",
            Error::NotALattice { .. } => "not-a-lattice",
            Error::RedundantCover(..) => "redundant-cover",
            Error::BudgetExceeded { .. } => "budget-exceeded",
            Error::OutOfRange { .. } => "out-of-range",
            Error::SizeMismatch { .. } => "size-mismatch",
            Error::InvalidPartition(_) => "invalid-partition",
            Error::NotPrime(..) => "not-prime",
            Error::NotACongruence => "not-a-congruence",
            Error::NotAnAtom => "not-an-atom",
            Error::NotDistributive => "not-distributive",
            Error::Domain(_) => "domain-error",
            Error::InvalidAlgebra(_) => "invalid-algebra",
            Error::NoConvergence { .. } => "no-convergence",
        }
    }
}
