use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain violation: {0}")]
    Domain(String),

    #[error("nonfinite input: {0}")]
    NonFinite(String),

    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("divergent integral: {0}")]
    Divergent(String),

    #[error("degenerate interval: a = {a} must be < b = {b}")]
    DegenerateInterval { a: f64, b: f64 },

    #[error("ratio undefined: mean of psi vanishes on ({a}, {b})")]
    ZeroMean { a: f64, b: f64 },

    #[error("search failed: {0}")]
    SearchFailed(String),

    #[error("resolution too coarse: {0}")]
    Resolution(String),

    /// The volume and boundary evaluations of the same energy disagree
    /// beyond quadrature tolerance. Signals a numerical-quality failure,
    /// not a violation of the inequality under test.
    #[error("route disagreement: volume = {volume}, boundary = {boundary}")]
    RouteDisagreement { volume: f64, boundary: f64 },

    #[error("quadrature failure: {0}")]
    Quadrature(String),

    #[error("extrapolation failed: {0}")]
    Extrapolation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
