use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("minimal polynomial is reducible over Q")]
    ReducibleMinpoly,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("distinguished embedding is not real")]
    NotReal,
    #[error("refinement budget exhausted before the comparison was decided")]
    PrecisionExhausted,
    #[error("point lies on the divisor")]
    PointOnDivisor,
    #[error("division by zero")]
    DivisionByZero,
    #[error("gram matrix is singular or not positive definite")]
    SingularGram,
    #[error("matrix is injective over Q")]
    TrivialKernel,
    #[error("vector is not in the kernel")]
    NotInKernel,
    #[error("vanishing system has trivial kernel ({conditions} conditions, {unknowns} unknowns)")]
    EmptyKernel { conditions: usize, unknowns: usize },
    #[error("quadrature error bound {achieved} exceeds tolerance {requested}")]
    QuadratureBudgetExceeded { achieved: f64, requested: f64 },
    #[error("point is not isolated in the index locus")]
    NotIsolated,
    #[error("index {index} exceeds {epsilon}")]
    IndexTooLarge { index: String, epsilon: String },
    #[error("polynomial is not in the staircase ideal")]
    NotInIdeal,
    #[error("the two coordinates do not generate a supported field: {0}")]
    UnsupportedField(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
