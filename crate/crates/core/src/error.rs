use thiserror::Error;

/// Errors raised by the time-frequency operations in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("signal must have at least one sample")]
    EmptySignal,
    #[error("sample {index} is not finite")]
    NonFinite { index: usize },
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("grid is {found_rows}x{found_cols}, expected {rows}x{cols}")]
    GridShape {
        rows: usize,
        cols: usize,
        found_rows: usize,
        found_cols: usize,
    },
    #[error("operator is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("window has zero norm")]
    ZeroWindow,
    #[error("step {step} does not divide signal length {len}")]
    NotADivisor { step: usize, len: usize },
    #[error("not a frame: C1 = {}", bound_display(*lower))]
    NotAFrame { lower: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("gamma mismatch: {left} vs {right}")]
    GammaMismatch { left: f64, right: f64 },
    #[error("singular at this truncation: smallest singular value {sigma_min:e} at radius {radius}")]
    SingularAtTruncation { sigma_min: f64, radius: usize },
    #[error("lower spectral bound unresolved: m = {lower:e} still moving at truncation radius {radius}")]
    UnresolvedSpectrum { lower: f64, radius: usize },
    #[error("inconclusive: Neumann series not converged after {terms} terms (last term l1 norm {last_term:e})")]
    NotConverged { terms: usize, last_term: f64 },
    #[error("extent violation: {0}")]
    Extent(String),
    #[error("degenerate lattice generators")]
    DegenerateLattice,
    #[error("point ({omega}, {x}) does not lie on the sampling grid")]
    OffGrid { omega: f64, x: f64 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Frame bounds below the frame tolerance are reported as exactly zero.
fn bound_display(v: f64) -> String {
    if v.abs() <= crate::gabor::FRAME_TOLERANCE {
        "0".to_string()
    } else {
        format!("{v:e}")
    }
}
