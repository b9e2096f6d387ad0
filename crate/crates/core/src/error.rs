use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("place not in model: {0}")]
    UnknownPlace(String),
    #[error("invalid character model: {0}")]
    InvalidModel(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("odd symplectic multiplicity for constituent '{0}'")]
    OddSymplecticMultiplicity(String),
    #[error("determinant/discriminant mismatch: {0}")]
    DeterminantMismatch(String),
    #[error("invalid constituent '{label}': {reason}")]
    InvalidConstituent { label: String, reason: String },
    #[error("already discrete: the parameter has no proper Levi support")]
    AlreadyDiscrete,
    #[error("theta0 requires a special even orthogonal target")]
    ThetaOnSymplectic,
    #[error("element is not in the requested component: {0}")]
    WrongComponent(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("Weyl group of order {order} exceeds the bound {bound}")]
    WeylBound { order: u128, bound: u128 },
    #[error("unsupported case: {0}")]
    Unsupported(String),
    #[error("invalid profile at place '{place}' for constituent '{label}': {reason}")]
    InvalidProfile {
        place: String,
        label: String,
        reason: String,
    },
    #[error("subgroup containment violated: {0}")]
    Containment(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("line {line}: {message}")]
    Spec { line: usize, message: String },
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::UnknownPlace(_) => "unknown_place",
            Error::InvalidModel(_) => "invalid_model",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::OddSymplecticMultiplicity(_) => "odd_symplectic_multiplicity",
            Error::DeterminantMismatch(_) => "determinant_mismatch",
            Error::InvalidConstituent { .. } => "invalid_constituent",
            Error::AlreadyDiscrete => "already_discrete",
            Error::ThetaOnSymplectic => "theta_on_symplectic",
            Error::WrongComponent(_) => "wrong_component",
            Error::Precondition(_) => "precondition",
            Error::WeylBound { .. } => "weyl_bound",
            Error::Unsupported(_) => "unsupported",
            Error::InvalidProfile { .. } => "invalid_profile",
            Error::Containment(_) => "containment",
            Error::Consistency(_) => "consistency",
            Error::Parse(_) => "parse",
            Error::Spec { .. } => "spec",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
