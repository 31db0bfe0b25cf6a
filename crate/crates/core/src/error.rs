use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("alpha = 0 is the unweighted minimal-surface case and is excluded")]
    AlphaZero,

    #[error("non-finite parameter: {0}")]
    NonFinite(&'static str),

    #[error("point at the origin: the stationary equation is undefined at p = 0")]
    OriginPoint,

    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("matrix is not orthogonal (max deviation {deviation:e})")]
    NotOrthogonal { deviation: f64 },

    #[error("degenerate parameters: {0}")]
    Degenerate(String),

    #[error("regularity failure: W = x^2 + h^2 cos^2(psi) = {w:e} at s = {s}")]
    Regularity { s: f64, w: f64 },

    #[error("profile leaves the right half-plane: x = {x} at s = {s}")]
    NonPositiveRadius { s: f64, x: f64 },

    #[error("epsilon = {epsilon} must lie in (0, min(1, u0)) with u0 = {u0}")]
    EpsilonOutOfRange { epsilon: f64, u0: f64 },

    #[error("argument of the inverse of f(y) = y/sqrt(1+y^2) left (-1, 1): {value} at r = {r}; the solve radius is too large")]
    InverseDomain { r: f64, value: f64 },

    #[error("fixed-point iteration did not converge in {iterations} iterations (defect {defect:e})")]
    NoConvergence { iterations: usize, defect: f64 },

    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },

    #[error("step budget of {0} exhausted")]
    TooManySteps(usize),

    #[error("inconsistent handoff from the axis profile: {0}")]
    Handoff(String),

    #[error("equation singular at x = {x}")]
    Singular { x: f64 },

    #[error("({psi}, {theta}) is not an equilibrium of the phase system")]
    NotEquilibrium { psi: f64, theta: f64 },

    #[error("wrong initial-data mode: {0}")]
    WrongMode(&'static str),

    #[error("not enough samples: need {needed}, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("samples are collinear; no circle fits")]
    Collinear,

    #[error("cut s = {s} outside the trajectory range [{lo}, {hi}]")]
    OutOfRange { s: f64, lo: f64, hi: f64 },

    #[error("missing derivative data: {0}")]
    MissingDerivative(&'static str),

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
