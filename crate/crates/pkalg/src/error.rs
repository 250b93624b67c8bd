use thiserror::Error;

/// Failure to read a scalar or structure from text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("not a rational number: {0:?}")]
    Scalar(String),
    #[error("not a Gaussian rational: {0:?}")]
    Gauss(String),
    #[error("{0}")]
    Schema(String),
}

/// Errors raised by the computational routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic polynomial does not split over the Gaussian rationals")]
    NonGaussianSpectrum,
    #[error("{0} is not an eigenvalue")]
    NotAnEigenvalue(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("structure constants violate the Jacobi identity")]
    NotLieAlgebra,
    #[error("endomorphism is not skew-Hermitian for the given form")]
    NotSkewHermitian,
    #[error("form is degenerate or not Hermitian")]
    DegenerateForm,
    #[error("invalid nilpotent-block assignment: {0}")]
    InvalidAssignment(String),
    #[error("invalid family parameters: {0}")]
    InvalidFamilyParams(String),
    #[error("basis is not adapted: {0}")]
    NotStandardBasis(String),
    #[error("derivation does not have the expected shape: {0}")]
    ShapeViolation(String),
    #[error("metric is degenerate")]
    DegenerateMetric,
    #[error("connection is not flat")]
    NotFlat,
    #[error("algebra is not nilpotent")]
    NotNilpotent,
    #[error("structure does not come from a family instance: {0}")]
    NotFamilyInstance(String),
    #[error("invalid extension derivation: {0}")]
    InvalidDerivation(String),
    #[error("normal form needs an irrational rescaling: {0}")]
    Irrational(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonGaussianSpectrum => "NonGaussianSpectrum",
            Error::NotAnEigenvalue(_) => "NotAnEigenvalue",
            Error::Dimension(_) => "Dimension",
            Error::NotLieAlgebra => "NotLieAlgebra",
            Error::NotSkewHermitian => "NotSkewHermitian",
            Error::DegenerateForm => "DegenerateForm",
            Error::InvalidAssignment(_) => "InvalidAssignment",
            Error::InvalidFamilyParams(_) => "InvalidFamilyParams",
            Error::NotStandardBasis(_) => "NotStandardBasis",
            Error::ShapeViolation(_) => "ShapeViolation",
            Error::DegenerateMetric => "DegenerateMetric",
            Error::NotFlat => "NotFlat",
            Error::NotNilpotent => "NotNilpotent",
            Error::NotFamilyInstance(_) => "NotFamilyInstance",
            Error::InvalidDerivation(_) => "InvalidDerivation",
            Error::Irrational(_) => "Irrational",
            Error::Unsupported(_) => "Unsupported",
        }
    }
}
