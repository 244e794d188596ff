use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("k = {k} lies in the resonance set (mode {m}); request per-mode quantities instead")]
    ResonantInput { k: f64, m: u32 },
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),
    #[error("k must be positive, got {0}")]
    NonpositiveK(f64),
    #[error("quadrature did not converge: {0}")]
    QuadratureFailure(String),
    #[error("unsupported evaluation: {0}")]
    UnsupportedEvaluation(String),
    #[error("argument outside the domain: {0}")]
    DomainError(String),
    #[error("bound not applicable: {0}")]
    NotApplicable(String),
    #[error("no lemma applies to mode {m}: {reason}")]
    NoApplicableBound { m: u32, reason: String },
    #[error("unsupported dimension d = {0}")]
    UnsupportedDimension(usize),
    #[error("kernel singularity cannot be integrated: {0}")]
    SingularityError(String),
    #[error("rearrangement requires nonnegative real values")]
    NegativeValues,
    #[error("invalid patch boundary data: {0}")]
    InvalidBoundary(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("construction failed: {0}")]
    ConstructionFailure(String),
    #[error("size constraint violated: {0}")]
    SizeViolation(String),
    #[error("samples do not reach radius {0}")]
    InsufficientExtent(f64),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
