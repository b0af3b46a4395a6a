use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid substitution: {0}")]
    InvalidSubstitution(String),
    #[error("substitution matrix is not primitive")]
    NotPrimitive,
    #[error("word length {len} exceeds cap {cap}")]
    LengthCap { len: u128, cap: usize },
    #[error("classification inconclusive: {0}")]
    Inconclusive(String),
    #[error("minimal polynomial not found: {0}")]
    MinPolyNotFound(String),
    #[error("division by zero in number field")]
    DivisionByZero,
    #[error("minimal polynomial is not reciprocal")]
    NotReciprocal,
    #[error("not a Salem number: {0}")]
    NotSalem(String),
    #[error("cannot parse field element {0:?}: {1}")]
    ParseElement(String, String),
    #[error("field element has {got} coefficients, field degree is {want}")]
    DegreeMismatch { got: usize, want: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("no period found within {0} states")]
    PeriodNotFound(u128),
    #[error("quadrature did not converge: estimated error {0:e}")]
    QuadratureNotConverged(f64),
    #[error("sandwich violated by {0:e} at z = {1}")]
    SandwichViolation(f64, f64),
    #[error("window [{start}, {end}] outside tiling of length {total}")]
    WindowOutOfRange { start: f64, end: f64, total: f64 },
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    #[error("inconsistent case parameters: {0}")]
    InvalidCase(String),
    #[error("continued fraction terminated: input is rational to working precision")]
    RationalInput,
}
