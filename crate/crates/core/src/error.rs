use thiserror::Error;

/// Errors raised by the grid, transport and field layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("index {index} out of range for axis with {len} cells")]
    Index { index: usize, len: usize },

    #[error("spline needs at least 4 points, got {0}")]
    TooFewPoints(usize),

    #[error("singular tridiagonal system (pivot {pivot:e} at row {row})")]
    Singular { row: usize, pivot: f64 },

    #[error("CFL violated: displacement {displacement:e} exceeds cell size {limit:e}")]
    Cfl { displacement: f64, limit: f64 },

    #[error("characteristic feet cross between faces {face} and {next}")]
    FeetCrossing { face: usize, next: usize },

    #[error("characteristic foot iteration did not converge after {0} iterations")]
    NoConvergence(usize),

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of the numerical method itself (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Singular { .. }
                | Error::Cfl { .. }
                | Error::FeetCrossing { .. }
                | Error::NoConvergence(_)
                | Error::NonFinite(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
