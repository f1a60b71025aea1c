use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("divisor polynomial vanishes at t = {0}")]
    ZeroDivisorAt(i64),
    #[error("no quasi-polynomial fit: {0}")]
    FitFailed(String),
    #[error("recursion depth {0} exceeded while computing a parametric gcd")]
    NonterminationGuard(usize),
    #[error("point {0:?} is not covered by any piece")]
    NotCovered(Vec<i64>),
    #[error("point {point:?} is covered by pieces {pieces:?}")]
    Ambiguous { point: Vec<i64>, pieces: Vec<usize> },
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("undeclared variable `{0}`")]
    UndeclaredVariable(String),
    #[error("nonlinear term: {0}")]
    NonlinearTerm(String),
    #[error("variable `{0}` has a parameter-dependent coefficient")]
    NonconstantCoefficient(String),
    #[error("box holds {points} points, budget is {budget}")]
    BoxTooLarge { points: u128, budget: u128 },
    #[error("cannot decide finiteness: variable `{0}` is unbounded and the probe was inconclusive")]
    CannotDecideFiniteness(String),
    #[error("polyhedron is unbounded at t = {0}")]
    UnboundedPolyhedron(i64),
    #[error("vertex {0} is not integral")]
    NonIntegralVertex(String),
    #[error("non-rational input: {0}")]
    NonRationalInput(String),
    #[error("the set has no lattice points")]
    EmptySet,
    #[error("hull vertex count unstable for residue {residue} mod {period}")]
    VertexCountUnstable { period: usize, residue: usize },
    #[error("generators {0:?} are not coprime")]
    NotCoprime(Vec<i64>),
    #[error("generators are never coprime")]
    NeverCoprime,
    #[error("machine integer overflow in {0}")]
    Overflow(&'static str),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZeroPoly => "DIVISION_BY_ZERO_POLY",
            Error::ZeroDivisorAt(_) => "ZERO_DIVISOR_AT",
            Error::FitFailed(_) => "FIT_FAILED",
            Error::NonterminationGuard(_) => "NONTERMINATION_GUARD",
            Error::NotCovered(_) => "NOT_COVERED",
            Error::Ambiguous { .. } => "AMBIGUOUS",
            Error::Parse { .. } => "PARSE_ERROR",
            Error::UndeclaredVariable(_) => "UNDECLARED_VARIABLE",
            Error::NonlinearTerm(_) => "NONLINEAR_TERM",
            Error::NonconstantCoefficient(_) => "NONCONSTANT_COEFFICIENT",
            Error::BoxTooLarge { .. } => "BOX_TOO_LARGE",
            Error::CannotDecideFiniteness(_) => "CANNOT_DECIDE_FINITENESS",
            Error::UnboundedPolyhedron(_) => "UNBOUNDED_POLYHEDRON",
            Error::NonIntegralVertex(_) => "NON_INTEGRAL_VERTEX",
            Error::NonRationalInput(_) => "NON_RATIONAL_INPUT",
            Error::EmptySet => "EMPTY_SET",
            Error::VertexCountUnstable { .. } => "VERTEX_COUNT_UNSTABLE",
            Error::NotCoprime(_) => "NOT_COPRIME",
            Error::NeverCoprime => "NEVER_COPRIME",
            Error::Overflow(_) => "OVERFLOW",
            Error::InvalidInput(_) => "INVALID_INPUT",
            Error::Internal(_) => "INTERNAL",
        }
    }
}
