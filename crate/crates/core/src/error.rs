use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("function `{name}` takes 1 argument but {got} were supplied (byte {offset})")]
    Arity { name: String, got: usize, offset: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("s = {s} is outside the covered interval [{lo}, {hi}]")]
    OutOfRange { s: f64, lo: f64, hi: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("curve is not regular: speed {speed:e} at t = {t}")]
    NotRegular { t: f64, speed: f64 },

    #[error("curve self-intersects: segments {first} and {second} cross")]
    SelfIntersection { first: usize, second: usize },

    #[error("curvature is not even about L/2: sup |k(L-s) - k(s)| = {0:e}")]
    NotEven(f64),

    #[error("Jacobian is nonpositive: minimum {min} at s = {s}")]
    JacobianNonPositive { s: f64, min: f64 },

    #[error("domain boundary self-intersects between edges {first} and {second}")]
    BoundarySelfIntersection { first: usize, second: usize },

    #[error("degenerate polygon: {0}")]
    DegeneratePolygon(String),

    #[error("inadmissible delta {delta}: min(1 + delta k) = {min_factor}")]
    InadmissibleDelta { delta: f64, min_factor: f64 },

    #[error("Cholesky factorization broke down at row {0}")]
    Factorization(usize),

    #[error("eigensolver did not converge after {iterations} iterations (best residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("coefficient {name} = {value} is not positive at x = {x}")]
    NonPositiveCoefficient { name: &'static str, x: f64, value: f64 },

    #[error("unknown closed form `{0}`")]
    UnknownClosedForm(String),

    #[error("no sign change of Q found on ({lo}, {hi})")]
    NoSignChange { lo: f64, hi: f64 },
}
