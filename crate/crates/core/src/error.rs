use alloc::string::String;

use crate::field::ScalarDomain;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("modulus {0} is not a prime")]
    NotPrime(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("domain mismatch: {0} vs {1}")]
    DomainMismatch(ScalarDomain, ScalarDomain),
    #[error("value {0} is not a canonical element of {1}")]
    NotCanonical(String, ScalarDomain),
    #[error("matrix size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("matrix unit index ({i}, {j}) out of range for size {n}")]
    IndexOutOfRange { i: usize, j: usize, n: usize },
    #[error("matrix side length must be positive")]
    ZeroSize,
    #[error("{spec} takes {want_x} x-arguments and {want_y} y-arguments, got {got_x} and {got_y}")]
    Arity {
        spec: String,
        want_x: usize,
        want_y: usize,
        got_x: usize,
        got_y: usize,
    },
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("expansion has {count} terms, above the limit of {limit}")]
    TooManyTerms { count: u128, limit: u128 },
    #[error("enumeration cost {cost} exceeds the feasibility cap {cap}")]
    Infeasible { cost: u128, cap: u128 },
    #[error("{0} does not support uniform sampling")]
    NotSampleable(ScalarDomain),
    #[error("field of order {p} is too small for a degree-{degree} test (need p > {need})")]
    FieldTooSmall { p: u64, degree: usize, need: u64 },
    #[error("trial count must be at least 1")]
    ZeroTrials,
    #[error("matrix is not an element of {0}")]
    NotInAlgebra(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}
