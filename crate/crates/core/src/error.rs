use thiserror::Error;

/// Failures raised by the arithmetic kernel and the reconstruction pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero polynomial has no square-free decomposition")]
    ZeroPolynomial,
    #[error("gcd of two zero polynomials is undefined")]
    GcdOfZeros,
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero divisor encountered: defining polynomial is reducible")]
    ReducibleExtension,
    #[error("leading coefficient is not a unit")]
    NonUnitLeadingCoefficient,
    #[error("invalid number field: {0}")]
    InvalidField(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("insufficient precision: need {needed}, have {available}")]
    InsufficientPrecision { needed: i64, available: i64 },
    #[error("rows are linearly dependent")]
    RankDeficient,
    #[error("twist mismatch: {0} vs {1}")]
    TwistMismatch(i32, i32),
    #[error("operation requires an untwisted series (twist {0})")]
    TwistedSeries(i32),
    #[error("initial root does not square to the constant term")]
    BadInitialRoot,
    #[error("inconsistent input: {0}")]
    InconsistentInput(String),
    #[error("kernel has dimension {0}, expected 1")]
    KernelDimension(usize),
    #[error("conic is singular")]
    SingularConic,
    #[error("no kernel vector gives a denominator outside (Q)")]
    NoValidSolution,
    #[error("space of sections has dimension {0}, expected 2")]
    SectionDimension(usize),
    #[error("parity decomposition failed: {0}")]
    ParityFailure(String),
    #[error("point does not lie on the conic")]
    PointNotOnConic,
    #[error("degenerate parametrization")]
    DegenerateParametrization,
    #[error("curve is singular at the chosen point")]
    SingularAtPoint,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit status: 2 for unparseable input, 3 for too little
    /// precision, 4 for input that is not what it claims to be, 5 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::InvalidInput(_) | Self::InvalidField(_) => 2,
            Self::InsufficientPrecision { .. } | Self::PrecisionExhausted(_) => 3,
            Self::InconsistentInput(_)
            | Self::KernelDimension(_)
            | Self::SingularConic
            | Self::NoValidSolution
            | Self::SectionDimension(_)
            | Self::ParityFailure(_)
            | Self::PointNotOnConic
            | Self::RankDeficient
            | Self::SingularAtPoint
            | Self::DegenerateParametrization
            | Self::ReducibleExtension
            | Self::NonUnitLeadingCoefficient
            | Self::BadInitialRoot => 4,
            _ => 5,
        }
    }
}
