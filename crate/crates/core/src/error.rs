use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is not unimodular (determinant {det})")]
    NonUnimodular { det: String },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("degree {n} is not supported for {kind}")]
    InvalidDegree { kind: &'static str, n: usize },
    #[error("generator {index} does not lie in the ambient group")]
    NotInAmbient { index: usize },
    #[error("element is not a transvection")]
    NotATransvection,
    #[error("word refers to generator {index} but only {count} generators exist")]
    WordNotInGroup { index: i64, count: usize },
    #[error("density testing in SL(n,Z) needs odd n (got n = {n})")]
    UnsupportedDegreeParity { n: usize },
    #[error("orbit of size > {budget} mod {prime} exceeds the orbit budget")]
    OrbitBudgetExceeded { prime: u64, budget: u64 },
    #[error("generator is not invertible modulo {modulus}")]
    NonInvertibleGenerator { modulus: u64 },
    #[error("modulus mismatch: chain is mod {expected}, element is mod {got}")]
    ModulusMismatch { expected: u64, got: u64 },
    #[error("modulus {modulus} is out of range")]
    InvalidModulus { modulus: u64 },
    #[error("Gram matrix of the algebra basis is singular")]
    SingularGram,
    #[error("could not factor {remaining} within the configured effort")]
    FactorizationTooHard { remaining: String },
    #[error("surjectivity modulo {prime} cannot be decided")]
    Undecided { prime: u64 },
    #[error("group is not Zariski dense")]
    NotDense,
    #[error("no transvection found")]
    NoTransvectionFound,
    #[error("{d2} does not divide {d1}")]
    NonDivisor { d1: u64, d2: u64 },
    #[error("modular arithmetic overflow for modulus {modulus}")]
    ModulusTooLarge { modulus: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
