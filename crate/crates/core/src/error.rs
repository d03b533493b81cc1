use thiserror::Error;

/// Errors produced by the laboratory.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("slope {slope} outside the range of f' on [-R, R]; admissible interval is [{lo}, {hi}]")]
    SlopeOutOfRange { slope: f64, lo: f64, hi: f64 },

    #[error("degenerate chord at a = b = {0}; use f'(a) for the characteristic speed")]
    DegenerateChord(f64),

    #[error("state {value} outside the admissible interval [-{radius}, {radius}]")]
    StateOutOfRange { value: f64, radius: f64 },

    #[error("invalid flux: {0}")]
    InvalidFlux(String),

    #[error("unknown flux '{0}', expected one of burgers | cosh | poly4")]
    UnknownFlux(String),

    #[error("fan ordering violated: {0}")]
    FanOrdering(String),

    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("invalid front state: {0}")]
    InvalidState(String),

    #[error("{count} fronts collide simultaneously at x = {x}, t = {t} (limit is 64)")]
    CollisionOverflow { count: usize, x: f64, t: f64 },

    #[error("front with speed {speed} is tangent to the slanted boundary (slope {slope}); choose a smaller lambda_hat")]
    Tangency { speed: f64, slope: f64 },

    #[error("invalid trapezoid domain: {0}")]
    InvalidDomain(String),

    #[error("window outside the trajectory span: {0}")]
    WindowOutsideSpan(String),

    #[error("incompatible entropy pair: {0}")]
    IncompatiblePair(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("CFL condition violated: {0}")]
    Cfl(String),
}

pub type Result<T> = std::result::Result<T, Error>;
