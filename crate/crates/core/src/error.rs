use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("relation violated: {0}")]
    RelationViolated(String),
    #[error("presentations differ")]
    PresentationMismatch,
    #[error("not orthogonal points: {0}")]
    NotOrthogonal(String),
    #[error("condition (*) fails at vertices {0:?}")]
    StarFails(Vec<usize>),
    #[error("characteristic {char} too small for a trace-form radical in dimension {dim}")]
    Characteristic { char: u64, dim: usize },
    #[error("radical generators unavailable for presentation '{0}'")]
    NoRadical(String),
    #[error("not action-stable: {0}")]
    NotStable(String),
    #[error("not exact: {0}")]
    NotExact(String),
    #[error("invalid cofiltration: {0}")]
    InvalidCofiltration(String),
    #[error("invalid lifting: {0}")]
    InvalidLifting(String),
    #[error("action not radical-triangular: {0}")]
    NotTriangular(String),
    #[error("not a pointed morphism: {0}")]
    NotPointed(String),
    #[error("slot mismatch: {0}")]
    SlotMismatch(String),
    #[error("obstructed: {0}")]
    Obstructed(String),
    #[error("zero tau at level {0}")]
    ZeroTau(usize),
    #[error("hypotheses unmet: {0}")]
    Hypotheses(String),
    #[error("not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable descriptor for structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::Shape(_) => "shape",
            Error::RelationViolated(_) => "relation_violated",
            Error::PresentationMismatch => "presentation_mismatch",
            Error::NotOrthogonal(_) => "not_orthogonal",
            Error::StarFails(_) => "star_fails",
            Error::Characteristic { .. } => "characteristic",
            Error::NoRadical(_) => "no_radical",
            Error::NotStable(_) => "not_stable",
            Error::NotExact(_) => "not_exact",
            Error::InvalidCofiltration(_) => "invalid_cofiltration",
            Error::InvalidLifting(_) => "invalid_lifting",
            Error::NotTriangular(_) => "not_triangular",
            Error::NotPointed(_) => "not_pointed",
            Error::SlotMismatch(_) => "slot_mismatch",
            Error::Obstructed(_) => "obstructed",
            Error::ZeroTau(_) => "zero_tau",
            Error::Hypotheses(_) => "hypotheses",
            Error::NotHomogeneous(_) => "not_homogeneous",
            Error::WindowTooSmall(_) => "window_too_small",
            Error::Invalid(_) => "invalid",
        }
    }
}
