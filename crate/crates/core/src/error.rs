use thiserror::Error;

/// Errors produced by the simulator, the receivers and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error(
        "singular normal equations: the Gram matrix is not positive definite (gamma = {gamma})"
    )]
    SingularNormalEquations { gamma: f64 },

    #[error("rank-deficient channel matrix: H^H H is not invertible")]
    RankDeficient,

    #[error(
        "numerical blow-up in recursive least squares at step {step}: {what} is not finite \
         (forgetting factor too small or hidden layer too large for the data)"
    )]
    NumericalBlowUp { step: u64, what: &'static str },

    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("bit stream length {0} is not a multiple of 4")]
    MalformedBitLength(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("ADC calibration needs non-zero samples")]
    AllZeroSamples,

    #[error("ADC calibration needs at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("invalid config field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("config parse error: {0}")]
    ConfigParse(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}
