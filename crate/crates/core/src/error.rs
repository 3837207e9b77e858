use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Structural check that an algebra description can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum ValidationKind {
    Antisymmetry,
    Jacobi,
    Integrability,
    Reality,
    Metric,
}

impl std::fmt::Display for ValidationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ValidationKind::Antisymmetry => "antisymmetry",
            ValidationKind::Jacobi => "jacobi",
            ValidationKind::Integrability => "integrability",
            ValidationKind::Reality => "reality",
            ValidationKind::Metric => "metric",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{kind} check failed at {witness} (residual {residual:.3e})")]
    Validation {
        kind: ValidationKind,
        witness: String,
        residual: f64,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown catalog entry `{0}`")]
    UnknownCatalog(String),
    #[error("bidegree ({p},{q}) out of range for n = {n}")]
    BidegreeOutOfRange { p: usize, q: usize, n: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("module is not closed under conjugation")]
    ModuleNotSelfConjugate,
    #[error("algebra has no reality structure")]
    RealityUnavailable,
    #[error("metric Gram matrix is not positive definite")]
    MetricNotPositive,
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("non-finite value encountered in {0}")]
    NonFinite(String),
    #[error("input is not Maurer-Cartan (residual {0:.3e})")]
    NotMaurerCartan(f64),
    #[error("input is too large for the small-ball iteration (norm {0:.3e})")]
    OutsideSmallBall(f64),
    #[error("iteration did not converge (residual {0:.3e})")]
    NoConvergence(f64),
    #[error("class is not closed (residual {0:.3e})")]
    NotClosed(f64),
    #[error("sample `{label}` lies outside the Kuranishi base (obstruction {value:.3e})")]
    SampleOutsideBase { label: String, value: f64 },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation { .. } | Error::MetricNotPositive => 1,
            Error::Parse(_)
            | Error::UnknownCatalog(_)
            | Error::BidegreeOutOfRange { .. }
            | Error::ShapeMismatch(_)
            | Error::ModuleNotSelfConjugate
            | Error::RealityUnavailable
            | Error::Io(_) => 2,
            _ => 3,
        }
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Validation { .. } => "ValidationError",
            Error::Parse(_) => "ParseError",
            Error::UnknownCatalog(_) => "UnknownCatalog",
            Error::BidegreeOutOfRange { .. } => "BidegreeOutOfRange",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::ModuleNotSelfConjugate => "ModuleNotSelfConjugate",
            Error::RealityUnavailable => "RealityUnavailable",
            Error::MetricNotPositive => "MetricNotPositive",
            Error::Numerical(_) => "NumericalError",
            Error::NonFinite(_) => "NonFinite",
            Error::NotMaurerCartan(_) => "NotMaurerCartan",
            Error::OutsideSmallBall(_) => "OutsideSmallBall",
            Error::NoConvergence(_) => "NoConvergence",
            Error::NotClosed(_) => "NotClosed",
            Error::SampleOutsideBase { .. } => "SampleOutsideBase",
            Error::Io(_) => "IoError",
        }
    }
}
