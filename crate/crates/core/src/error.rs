use thiserror::Error;

use crate::partitions::Partition;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("construction needs {required} points/orbits, limit is {limit}")]
    SizeLimitExceeded { required: u128, limit: u128 },

    #[error("orbit of type {0} is not available in the ambient set")]
    OrbitNotInOmega(Partition),

    #[error("partition {0} is not in the support")]
    NotInSupport(Partition),

    #[error("lattice is not contained in the ambient lattice")]
    NotASublattice,

    #[error("rank mismatch at {label}: expected {expected}, found {found}")]
    RankMismatch { label: String, expected: usize, found: usize },

    #[error("set is not cosaturated: {0} is missing")]
    NotCosaturated(Partition),

    #[error("torsion in quotient at {label}: elementary divisors {divisors:?}")]
    Torsion { label: String, divisors: Vec<String> },

    #[error("unknown strategy `{0}`")]
    UnknownStrategy(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
