use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },

    #[error("unbound name `{0}`")]
    UnboundName(String),

    #[error("period must be positive, got {0}")]
    NonPositivePeriod(f64),

    #[error("signal `{source_text}` is not periodic with period {period} (deviation {deviation:e})")]
    NotPeriodic {
        source_text: String,
        period: f64,
        deviation: f64,
    },

    #[error("invalid signal: {0}")]
    InvalidSignal(String),

    #[error("invalid step {0}: must be positive")]
    InvalidStep(f64),

    #[error("step {dt} violates explicit stability bound (dt * L = {product} > 0.5)")]
    StepTooLarge { dt: f64, product: f64 },

    #[error("invalid friction law: {0}")]
    InvalidLaw(String),

    #[error("law {0} is custom and declares no tail bounds")]
    MissingTailBounds(usize),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("material point {xi} lies outside [{a}, {b}]")]
    OutsideDomain { xi: f64, a: f64, b: f64 },

    #[error("dissipativity check failed: I+ = {i_plus}, I- = {i_minus}")]
    Dissipativity { i_plus: f64, i_minus: f64 },

    #[error("numerical failure at t = {t}, v = {v}: {message}")]
    NumericalFailure { t: f64, v: f64, message: String },

    #[error("iterates lost monotonicity at step {step}: {previous} -> {next}")]
    NonMonotoneIterates { step: usize, previous: f64, next: f64 },

    #[error("{v} is not a fixed point of the period map (|residual| = {residual:e} > {tol:e})")]
    NotFixedPoint { v: f64, residual: f64, tol: f64 },

    #[error("configuration error at {pointer}: {message}")]
    Config { pointer: String, message: String },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn syntax(pos: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            pos,
            message: message.into(),
        }
    }

    pub(crate) fn config(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            pointer: pointer.into(),
            message: message.into(),
        }
    }
}
