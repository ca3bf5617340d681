use thiserror::Error;

/// Errors raised by basis construction, operator builders, solvers and runs.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("resource guard `{guard}` exceeded: requested {requested}, limit {limit} (raise with PXP2_MAX_DIM)")]
    Resource {
        guard: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("operator does not commute with the lattice symmetry (deviation {deviation:.3e})")]
    SymmetryViolation { deviation: f64 },

    #[error("no convergence after {iterations} iterations (best residual {residual:.3e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("step size underflow at t = {time}: dt = {dt:.3e}")]
    Stiffness { time: f64, dt: f64 },

    #[error("domain error: {message} (chi = {chi}, lambda = {lambda})")]
    Domain {
        message: String,
        chi: f64,
        lambda: f64,
    },

    #[error("linear algebra backend: {0}")]
    Linalg(#[from] ndarray_linalg::error::LinalgError),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn argument<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
