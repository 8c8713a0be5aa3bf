//! Error type shared across the crate.
//!
//! Every variant carries a stable machine-readable kind tag so that reports
//! can embed structured diagnostics.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("exponent overflow at byte {pos}: exponent {value} exceeds 65535")]
    ExponentOverflow { pos: usize, value: u64 },

    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,

    #[error("polynomial has a nonzero constant term")]
    NonzeroConstantTerm,

    #[error("truncation order mismatch: {msg}")]
    TruncationMismatch { msg: String },

    #[error("unbounded cone region for variable subset mask {mask:#b}")]
    UnboundedRegion { mask: u8 },

    #[error("germ is degenerate on the face with points {face}")]
    DegenerateGerm { face: String },

    #[error("non-degeneracy is indeterminate on the face with points {face}")]
    IndeterminateNondegeneracy { face: String },

    #[error("tangent cone is not reduced")]
    NonReducedTangentCone,

    #[error("singular locus has non-rational coordinates; offending factor: {factor}")]
    NonRationalSingularLocus { factor: String },

    #[error("germ is smooth (order < 2); not a singularity")]
    SmoothPoint,

    #[error("no pure x1 power found up to order {max_order}: {hint}")]
    BlowOrderExceeded { max_order: u32, hint: String },

    #[error("strict transform has a non-isolated singularity (critical line through the point)")]
    NonIsolatedSingularity,

    #[error("Newton principal part is not of the shape h + c*x1^m; offending boundary terms: {terms}")]
    NotBlowAdeShape { terms: String },

    #[error("mu* unavailable: {msg}")]
    DegenerateForMuStar { msg: String },

    #[error("report is not certified; {msg}")]
    UncertifiedReport { msg: String },

    #[error("zeta function has fewer than {level} distinct factors")]
    NoSuchFactor { level: usize },

    #[error("type is indeterminate at truncation order {order}")]
    IndeterminateType { order: u32 },

    #[error("invalid input: {msg}")]
    InvalidInput { msg: String },
}

impl Error {
    /// Stable kind tag for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "syntax",
            Error::ExponentOverflow { .. } => "exponent-overflow",
            Error::ZeroPolynomial => "zero-polynomial",
            Error::NonzeroConstantTerm => "nonzero-constant-term",
            Error::TruncationMismatch { .. } => "truncation-mismatch",
            Error::UnboundedRegion { .. } => "unbounded-region",
            Error::DegenerateGerm { .. } => "degenerate-germ",
            Error::IndeterminateNondegeneracy { .. } => "indeterminate-nondegeneracy",
            Error::NonReducedTangentCone => "non-reduced-tangent-cone",
            Error::NonRationalSingularLocus { .. } => "non-rational-singular-locus",
            Error::SmoothPoint => "smooth-point",
            Error::BlowOrderExceeded { .. } => "blow-order-exceeded",
            Error::NonIsolatedSingularity => "non-isolated-singularity",
            Error::NotBlowAdeShape { .. } => "not-blow-ade-shape",
            Error::DegenerateForMuStar { .. } => "degenerate-for-mu-star",
            Error::UncertifiedReport { .. } => "uncertified-report",
            Error::NoSuchFactor { .. } => "no-such-factor",
            Error::IndeterminateType { .. } => "indeterminate-type",
            Error::InvalidInput { .. } => "invalid-input",
        }
    }
}
