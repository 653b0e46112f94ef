use thiserror::Error;

/// Errors raised by the numerical operators and solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("symbol evaluation failed: {0}")]
    Symbol(String),
    #[error("argument outside domain: {0}")]
    Domain(String),
    #[error("unsupported dimension d = {0} (strip solvers are implemented for d = 1)")]
    UnsupportedDimension(usize),
    #[error("harmonic coordinates lost bijectivity: min det(DPhi) = {min_jacobian:.3e} < {threshold}")]
    BijectivityLoss { min_jacobian: f64, threshold: f64 },
    #[error("singular configuration: {0}")]
    Gauge(String),
    #[error("incompatible data: {0}")]
    IncompatibleData(String),
    #[error("linear solver did not converge: residual {residual:.3e} after {iterations} iterations")]
    NoConvergence { residual: f64, iterations: usize },
    #[error("invalid state: {0}")]
    State(String),
    #[error("incomplete state: missing {0}")]
    IncompleteState(String),
    #[error("unsupported compatibility order {0} (at most 2)")]
    UnsupportedOrder(usize),
    #[error("CFL violation: dt * max|u| / dx = {cfl:.3} exceeds {limit}")]
    Cfl { cfl: f64, limit: f64 },
    #[error("loss of hyperbolicity: Taylor sign min = {min_taylor:.3e}")]
    HyperbolicityLoss { min_taylor: f64 },
    #[error("interface left the strip: min f = {min:.4}, max f = {max:.4}")]
    InterfaceExit { min: f64, max: f64 },
    #[error("amplitude {amplitude:.3e} exceeds model limit {limit:.3e}")]
    AmplitudeGuard { amplitude: f64, limit: f64 },
    #[error("i/o: {0}")]
    Io(String),
    #[error("format: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
