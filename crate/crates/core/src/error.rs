use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("symbol entry is zero")]
    ZeroEntry,
    #[error("form has a nonzero t^0 component, so it is not relative")]
    NotRelative,
    #[error("element is not a unit: constant term is zero")]
    NotAUnit,
    #[error("bad constant term: expected {expected}")]
    BadConstantTerm { expected: &'static str },
    #[error("relative symbol has no principal entry in 1 + tF_m")]
    NoPrincipalEntry,
    #[error("symbol identity needs a non-unit entry: {0}")]
    NoUnitEntry(String),
    #[error("valuation has residue field larger than the base field")]
    NonRationalPoint,
    #[error("support is not rational over the base field: {0}")]
    NonRationalSupport(String),
    #[error("degenerate branch: 1 + (1 + b tau) a s = 0")]
    DegenerateBranch,
    #[error("filtration hypothesis violated: ord-sum {got} < {need}")]
    HypothesisViolated { got: i64, need: i64 },
    #[error("cycle generator is not admissible: {0}")]
    NotAdmissible(String),
    #[error("boundary point is not rational over the base field: {0}")]
    NonRationalBoundary(String),
    #[error("curve meets a face degenerately at {0}")]
    FaceDegenerate(String),
    #[error("incompatible operands: {0}")]
    Mismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("bad json: {0}")]
    Json(String),
}

impl Error {
    /// Stable machine-readable identifier, used in CLI error objects.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "division_by_zero",
            Error::Parse(_) => "parse",
            Error::ZeroArgument => "zero_argument",
            Error::ZeroEntry => "zero_entry",
            Error::NotRelative => "not_relative",
            Error::NotAUnit => "not_a_unit",
            Error::BadConstantTerm { .. } => "bad_constant_term",
            Error::NoPrincipalEntry => "no_principal_entry",
            Error::NoUnitEntry(_) => "no_unit_entry",
            Error::NonRationalPoint => "non_rational_point",
            Error::NonRationalSupport(_) => "non_rational_support",
            Error::DegenerateBranch => "degenerate_branch",
            Error::HypothesisViolated { .. } => "hypothesis_violated",
            Error::NotAdmissible(_) => "not_admissible",
            Error::NonRationalBoundary(_) => "non_rational_boundary",
            Error::FaceDegenerate(_) => "face_degenerate",
            Error::Mismatch(_) => "mismatch",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Json(_) => "json",
        }
    }
}
