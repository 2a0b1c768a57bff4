use thiserror::Error;

/// Every failure the toolkit can report.
///
/// Each variant maps to a stable numeric code (see [`Error::code`]) shared by
/// the CLI JSON output and the C ABI.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("not an exact {n}-th power over Gaussian-rational polynomials")]
    NotAPower { n: u32 },
    #[error("evaluation point within pole tolerance (|den| = {magnitude:e})")]
    PoleProximity { magnitude: f64 },
    #[error("exponent has nonzero constant term: {exponent}")]
    NonzeroConstantExponent { exponent: String },
    #[error("exponent is not a polynomial in z")]
    NonPolynomialExponent,
    #[error("floating-point overflow: {context}")]
    Overflow { context: String },
    #[error("polynomial is constant; a degree >= 1 polynomial is required")]
    ConstantPolynomial,
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("leading coefficients are equal")]
    EqualLeadingCoefficients,
    #[error("tolerance not met after {subdivisions} subdivisions (error estimate {estimate:e})")]
    ToleranceNotMet { subdivisions: usize, estimate: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("alpha must be real and rational, got {0}")]
    NonRealAlpha(String),
    #[error("p2 is not alpha * p1 (required when m >= 1)")]
    P2NotProportional,
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("kappa has a repeated root")]
    KappaNotSquarefree,
    #[error("relation does not produce a polynomial {which}")]
    NonPolynomialRelation { which: &'static str },
    #[error("parameter c must be nonzero")]
    ZeroParameter,
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("pole on or near the circle |z| = {radius}")]
    PoleOnCircle { radius: f64 },
    #[error("function has poles; the characteristic needs an entire input")]
    NotEntire,
    #[error("pole within {distance} of the integration ray")]
    PoleOnRay { distance: f64 },
    #[error("step size collapsed at r = {r}")]
    StepCollapse { r: f64 },
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
}

impl Error {
    /// Stable error code; never renumber existing entries.
    pub fn code(&self) -> i32 {
        match self {
            Error::DivisionByZero => 10,
            Error::NotAPower { .. } => 11,
            Error::PoleProximity { .. } => 12,
            Error::NonzeroConstantExponent { .. } => 13,
            Error::NonPolynomialExponent => 14,
            Error::Overflow { .. } => 15,
            Error::ConstantPolynomial => 16,
            Error::DegreeMismatch { .. } => 17,
            Error::EqualLeadingCoefficients => 18,
            Error::ToleranceNotMet { .. } => 19,
            Error::InvalidInput(_) => 20,
            Error::NonRealAlpha(_) => 21,
            Error::P2NotProportional => 22,
            Error::VerificationFailed(_) => 23,
            Error::KappaNotSquarefree => 24,
            Error::NonPolynomialRelation { .. } => 25,
            Error::ZeroParameter => 26,
            Error::InsufficientData(_) => 27,
            Error::PoleOnCircle { .. } => 28,
            Error::NotEntire => 29,
            Error::PoleOnRay { .. } => 30,
            Error::StepCollapse { .. } => 31,
            Error::Syntax { .. } => 32,
        }
    }

    /// Short machine-readable name, used as the `error.kind` JSON field.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::NotAPower { .. } => "NotAPower",
            Error::PoleProximity { .. } => "PoleProximity",
            Error::NonzeroConstantExponent { .. } => "NonzeroConstantExponent",
            Error::NonPolynomialExponent => "NonPolynomialExponent",
            Error::Overflow { .. } => "Overflow",
            Error::ConstantPolynomial => "ConstantPolynomial",
            Error::DegreeMismatch { .. } => "DegreeMismatch",
            Error::EqualLeadingCoefficients => "EqualLeadingCoefficients",
            Error::ToleranceNotMet { .. } => "ToleranceNotMet",
            Error::InvalidInput(_) => "InvalidInput",
            Error::NonRealAlpha(_) => "NonRealAlpha",
            Error::P2NotProportional => "P2NotProportional",
            Error::VerificationFailed(_) => "VerificationFailed",
            Error::KappaNotSquarefree => "KappaNotSquarefree",
            Error::NonPolynomialRelation { .. } => "NonPolynomialRelation",
            Error::ZeroParameter => "ZeroParameter",
            Error::InsufficientData(_) => "InsufficientData",
            Error::PoleOnCircle { .. } => "PoleOnCircle",
            Error::NotEntire => "NotEntire",
            Error::PoleOnRay { .. } => "PoleOnRay",
            Error::StepCollapse { .. } => "StepCollapse",
            Error::Syntax { .. } => "SyntaxError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
