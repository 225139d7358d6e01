use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("series evaluation limited to degree {max}, got {n}")]
    DegreeTooLarge { n: usize, max: usize },

    #[error("division by zero: {0}")]
    DivisionByZero(String),

    #[error("degenerate denominator: {0}")]
    DegenerateDenominator(String),

    #[error("energy-dependent potential requires an energy")]
    MissingEnergy,

    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),

    #[error("contour crosses a singularity or branch cut: {0}")]
    BranchCut(String),

    #[error("norm diverges: {0}")]
    DivergentNorm(String),

    #[error("potential is singular on the contour at z = {re}{im:+}i (|V| = {magnitude:e})")]
    Singularity { re: f64, im: f64, magnitude: f64 },

    #[error("fixed-point iteration did not converge after {iterations} iterations (last energy {last_energy})")]
    NonConvergence { iterations: usize, last_energy: f64 },

    #[error("degenerate convergence study: {0}")]
    DegenerateStudy(String),

    #[error("eigensolver failure: {0}")]
    Solver(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
